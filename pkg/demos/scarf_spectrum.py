"""Bound states of the complex Scarf II potential, closed form against finite differences.

Run: python demos/scarf_spectrum.py
"""
import math

from ptdirac import nu, oracle
from ptdirac.model import ScarfModel, magnetic_field, scarf2_potentials

GRID = oracle.Grid(15.0, 1501)  # the acceptance grid is n=3001; this one runs in a few seconds

# U = A1 sech^2 + A2 sech tanh, coefficients in units of mu^2
CASES = {
    "U = -sech^2 - i sech tanh": (-1.0, -1j),
    "U = -3 sech^2 + 3i sech tanh": (-3.0, 3j),
    "U = -sech^2 (real limit)": (-1.0, 0.0),
}

m = ScarfModel(a=1.0, mu=1.0)
print("magnetic field B(1) =", round(float(magnetic_field(m, 1.0)), 7))
print("partner potentials at x=1:", scarf2_potentials(m, 1.0))
print()

for label, (a1, a2) in CASES.items():
    prob = nu.NUProblem(a1, a2)
    print(label)
    closed = []
    for tag in nu.BRANCHES:
        br = nu.nu_branch(prob, tag)
        if not br.accepted:
            print(f"  {tag}: rejected (tau' = {br.tau_prime:.3g})")
            continue
        levels = nu.normalizable_levels(prob, tag)
        for n in range(levels):
            e = nu.nu_energy(prob, tag, n)
            closed.append(e)
            plus, _ = nu.dirac_energy(e, imaginary_vf=True)
            print(f"  {tag} n={n}: E = {e.real:+.6f}{e.imag:+.1e}j  Dirac (v_F -> i v_F) = {plus.real:+.6f}")
        if levels == 0:
            print(f"  {tag}: no normalizable level ({nu.level_status(prob, tag, 0)})")

    numeric = oracle.bound_spectrum(prob.potential, GRID)
    rep = oracle.match_spectra(closed, numeric, tol=2e-3, grid=GRID)
    for e in rep.entries:
        print(f"  oracle: {e.closed_form.real:+.6f} -> {e.numeric:.6f}  |err| = {e.abs_err:.1e}")
    print()

# the reduced ground-state exponent decides normalizability
prob = nu.NUProblem(-1.0, 0.0)
print("Poschl-Teller check:", nu.nu_energy(prob, "k2", 0), "vs", -((math.sqrt(5) - 1) / 2) ** 2)
