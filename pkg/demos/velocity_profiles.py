"""Effective potentials for a position-dependent Fermi velocity.

Run: python demos/velocity_profiles.py
"""
import numpy as np

from ptdirac import pdfv
from ptdirac.errors import SingularVelocityError, TranscriptionFlagError

x = np.linspace(-5, 5, 1001)

for kind in pdfv.KINDS:
    for alpha, beta, mu in [(1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (2.0, 1.0, 0.5)]:
        ans = pdfv.PdfvAnsatz(kind, alpha, beta, mu).with_constraints("first")
        full = pdfv.eff_potential_full(ans, x)
        simp = pdfv.eff_potential_simplified(ans, 2, x)
        print(f"{kind:7s} alpha={alpha} beta={beta} mu={mu}: "
              f"|full - simplified| = {np.max(np.abs(full - simp)):.1e}, "
              f"V(0) = {complex(pdfv.eff_potential_simplified(ans, 2, 0.0)):.4f}")

# the long expansion as typeset, without corrections, does not survive the check
ans = pdfv.PdfvAnsatz("real", 1.0, 1.0, a0=0.3, a1c=0.2)
try:
    pdfv.eff_potential_full(ans, x, errata=False)
except TranscriptionFlagError as exc:
    print("\nuncorrected expansion refused:", exc)
    print("  printed", exc.printed, "definitional", exc.definitional)

# gauge transformation psi = sqrt(v) phi, checked at two resolutions
ans = pdfv.PdfvAnsatz("complex", 1.0, 1.0).with_constraints("first")
for n in (401, 801):
    xs = np.linspace(-4, 4, n)
    r = pdfv.gauge_route_residual(ans, 2, np.exp(-2 * xs**2), xs)
    print(f"gauge route residual n={n}: {r:.2e}")

try:
    pdfv.gauge_factor(pdfv.PdfvAnsatz("real", 1.0, 1.0), x)
except SingularVelocityError as exc:
    print("real-kind velocity vanishes at", exc.zero_crossings)
