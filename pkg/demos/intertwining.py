"""The (B1, S) family of intertwined Scarf II potentials and the spectral shift.

Run: python demos/intertwining.py
"""
from ptdirac import intertwine as itw
from ptdirac import nu, oracle
from ptdirac.model import ScarfModel, scarf2_potentials

a, mu = 1.0, 1.0
partner = lambda x: scarf2_potentials(ScarfModel(a, mu), x)[1]

print("solutions of the constraint system at a=1, mu=1")
for c in itw.solve_bs_constraints(a, mu):
    m = itw.u_member(c, a, mu)
    print(f"  {c.label}: B1={c.b1.real:+.2f} S={c.s.real:+.2f}  "
          f"U = ({m.a1_coeff.real:+.2f}) sech^2 + ({m.a2_coeff:+.2f}) sech tanh")

# the degenerate field strength where two roots coincide
print("a=0.5 degenerate flags:", [c.degenerate for c in itw.solve_bs_constraints(0.5, mu)])
print()

base = oracle.Grid(12.0, 301)
grids = [base, base.refined(), base.refined().refined()]
for c in itw.solve_bs_constraints(a, mu)[:2]:
    u = itw.u_member(c, a, mu)
    eta = itw.EtaOperator.eta1(c.b1, c.s, mu)
    res = oracle.convergence_study(lambda g: itw.intertwining_residual(u, partner, eta, g), grids)
    print(f"{c.label}: eta1 H - H2 eta1 residuals {[f'{e:.2e}' for e in res.errors]}, "
          f"ratios {[round(r, 3) for r in res.ratios]}")

res = oracle.convergence_study(
    lambda g: itw.pseudo_hermiticity_residual(partner, itw.EtaOperator.eta2(a, mu), g), grids)
print(f"eta2 pseudo-Hermiticity ratios {[round(r, 3) for r in res.ratios]}")
print()

grid = oracle.Grid(15.0, 1201)
for c in itw.solve_bs_constraints(a, mu)[:2]:
    u = itw.u_member(c, a, mu)
    rep = itw.spectral_shift_check(u, partner, grid=grid, op=itw.EtaOperator.eta1(c.b1, c.s, mu))
    prob = nu.NUProblem.from_potential(u.a1_coeff, u.a2_coeff, mu)
    closed = [round(nu.nu_energy(prob, t, n).real, 6) for t in nu.BRANCHES
              for n in range(nu.normalizable_levels(prob, t))]
    print(f"{c.label}: closed form {closed}")
    print(f"  H levels {[round(v.real, 5) for v in rep.values_h]}, "
          f"H2 levels {[round(v.real, 5) for v in rep.values_h2]}")
    print(f"  unpaired level owned by {rep.extra_level_owner}, "
          f"eigenvector collinearity {rep.max_collinearity():.1e}")
