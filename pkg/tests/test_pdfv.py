import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ptdirac import _numerics as num
from ptdirac import oracle
from ptdirac import pdfv
from ptdirac.errors import (
    InvalidModelError,
    PreconditionError,
    SingularVelocityError,
    TranscriptionFlagError,
)
from ptdirac.model import sech

TRIPLES = [(1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (2.0, 1.0, 0.5)]
X = np.linspace(-5, 5, 401)


def constrained(kind, alpha, beta, mu, which="first", **kw):
    return pdfv.PdfvAnsatz(kind, alpha, beta, mu, **kw).with_constraints(which)


class TestAnsatz:
    def test_velocity_profiles(self):
        x = np.linspace(-2, 2, 5)
        r = pdfv.PdfvAnsatz("real", 2.0, 0.5, 1.5)
        c = pdfv.PdfvAnsatz("complex", 2.0, 0.5, 1.5)
        assert np.allclose(r.v(x), 0.5 + 2 * np.sinh(1.5 * x))
        assert np.allclose(c.v(x), 0.5j + 2 * np.sinh(1.5 * x))

    def test_derivatives(self):
        x, h = num.symmetric_points(3, 601)
        a = pdfv.PdfvAnsatz("complex", 1.3, 0.4, 0.9, a0=0.2 + 0.1j, a1c=-0.3, a2c=0.5, k=0.7)
        assert np.max(np.abs(num.d1(a.v(x), h) - a.dv(x))) <= 1e-7
        assert np.max(np.abs(num.d1(a.dv(x), h) - a.d2v(x))) <= 1e-7
        assert np.max(np.abs(num.d1(a.a_y(x), h) - a.da_y(x))) <= 1e-7
        assert np.max(np.abs(num.d1(a.f(x), h) - a.df(x))) <= 1e-7

    @pytest.mark.parametrize("kw", [dict(alpha=0.0), dict(mu=0.0), dict(mu=-2.0)])
    def test_invalid(self, kw):
        params = dict(kind="real", alpha=1.0, beta=1.0, mu=1.0) | kw
        with pytest.raises(InvalidModelError):
            pdfv.PdfvAnsatz(**params)

    def test_bad_kind(self):
        with pytest.raises(PreconditionError):
            pdfv.PdfvAnsatz("imaginary", 1.0, 1.0)

    @pytest.mark.parametrize("kind", pdfv.KINDS)
    def test_wavenumber_cancels(self, kind):
        base = pdfv.PdfvAnsatz(kind, 1.0, 1.0, a0=0.3, a1c=0.2, a2c=-0.4)
        moved = pdfv.PdfvAnsatz(kind, 1.0, 1.0, a0=0.3, a1c=0.2, a2c=-0.4, k=2.5)
        assert np.max(np.abs(base.f(X) - moved.f(X))) <= 1e-14


class TestConstraintSets:
    def test_real_first(self):
        c = pdfv.constraint_sets("real", 1, 1, 1)
        assert (c[0].a0, c[0].a1) == (0.5j, -0.5)
        assert c[0].status == "solvable-verified"

    def test_complex_first(self):
        c = pdfv.constraint_sets("complex", 1, 2, 1)
        assert (c[0].a0, c[0].a1) == (0.5, -1)

    def test_real_second(self):
        c = pdfv.constraint_sets("real", 1, 1, 1)[1]
        assert c.a0 == -1.5j and c.a1 == pytest.approx(5 / 6)
        assert c.status == "experimental"

    def test_alpha_zero(self):
        with pytest.raises(InvalidModelError):
            pdfv.constraint_sets("real", 0, 1, 1)


class TestSuperpotentialAndPseudo:
    def test_superpotential_zero_velocity(self):
        a = pdfv.PdfvAnsatz("real", 1.0, 0.0, k=1.0)
        assert pdfv.pdfv_superpotential(a, 0.0) == 0

    def test_superpotential_constrained_origin(self):
        a = constrained("real", 1.0, 1.0, 1.0)
        # v(0) = 1 and f(0) = i A0 tanh 0 - A1 sech 0 = -A1
        assert pdfv.pdfv_superpotential(a, 0.0) == pytest.approx(0.5)

    def test_superpotential_structure_symbolic(self):
        x, a0, a1 = sp.symbols("x A0 A1")
        al, be, mu = 1.5, 0.5, 0.8
        v = be + al * sp.sinh(mu * x)
        f = sp.I * a0 * sp.tanh(mu * x) - a1 * sp.sech(mu * x)
        w_sym = sp.lambdify((x, a0, a1), v * f)
        for av0, av1 in [(0.2, 0.3), (0.1 + 0.4j, -0.7)]:
            ans = pdfv.PdfvAnsatz("real", al, be, mu, a0=av0, a1c=av1, a2c=0.3, k=1.1)
            for xv in (-1.2, 0.0, 0.9):
                assert pdfv.pdfv_superpotential(ans, xv) == pytest.approx(complex(w_sym(xv, av0, av1)))

    @pytest.mark.parametrize("kind", pdfv.KINDS)
    def test_pseudo_origin(self, kind):
        assert pdfv.pseudo_potential(pdfv.PdfvAnsatz(kind, 1.0, 1.0), 0.0) == pytest.approx(-0.25)

    def test_pseudo_origin_scaling(self):
        a = pdfv.PdfvAnsatz("real", 2.0, 3.0, 0.5)
        assert pdfv.pseudo_potential(a, 0.0) == pytest.approx(-(2.0**2) * 0.25 / 4)


class TestEffectivePotentials:
    @pytest.mark.parametrize("kind", pdfv.KINDS)
    @pytest.mark.parametrize("triple", TRIPLES)
    def test_full_matches_definition(self, kind, triple):
        a = constrained(kind, *triple)
        full = pdfv.eff_potential_full(a, X)
        assert np.max(np.abs(full - pdfv.eff_potential(a, 2, X))) <= 1e-10

    @pytest.mark.parametrize("kind", pdfv.KINDS)
    @pytest.mark.parametrize("triple", TRIPLES)
    def test_full_reduces_to_simplified(self, kind, triple):
        a = constrained(kind, *triple)
        gap = pdfv.eff_potential_full(a, X) - pdfv.eff_potential_simplified(a, 2, X)
        assert np.max(np.abs(gap)) <= 1e-10

    @pytest.mark.parametrize("kind", pdfv.KINDS)
    @pytest.mark.parametrize("triple", TRIPLES)
    def test_first_simplified_matches_definition(self, kind, triple):
        a = constrained(kind, *triple)
        gap = pdfv.eff_potential_simplified(a, 1, X) - pdfv.eff_potential(a, 1, X)
        assert np.max(np.abs(gap)) <= 1e-9 * max(1, np.max(np.abs(pdfv.eff_potential(a, 1, X))))

    @settings(max_examples=30, deadline=None)
    @given(st.sampled_from(pdfv.KINDS), st.floats(0.3, 2), st.floats(-2, 2),
           st.floats(0.3, 2), st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
    def test_generic_constants(self, kind, al, be, mu, a0, a1):
        a = pdfv.PdfvAnsatz(kind, al, be, mu, a0=a0, a1c=a1)
        x = np.linspace(-3, 3, 61)
        ref = np.asarray(pdfv.eff_potential(a, 2, x))
        got = np.asarray(pdfv.printed_expansion(a, x))
        assert np.max(np.abs(got - ref)) <= 1e-9 * max(1, np.max(np.abs(ref)))

    def test_uncorrected_is_flagged(self):
        a = pdfv.PdfvAnsatz("real", 1.0, 1.0, a0=0.3, a1c=0.2)
        with pytest.raises(TranscriptionFlagError) as exc:
            pdfv.eff_potential_full(a, X, errata=False)
        assert exc.value.printed != exc.value.definitional

    def test_generic_example(self):
        a = pdfv.PdfvAnsatz("real", 1.0, 1.0, a0=0.3, a1c=0.2)
        assert pdfv.eff_potential_full(a, 0.5) == pytest.approx(pdfv.eff_potential(a, 2, 0.5), abs=1e-12)

    def test_origin_parity(self):
        a = pdfv.PdfvAnsatz("complex", 1.7, 0.6, 1.2, a0=0.4j, a1c=0.9)
        v0 = pdfv.eff_potential_full(a, 0.0)
        x, a1 = 0.0, a.a1c
        # only constants survive at x = 0: W = v f = i beta (-i A1), v' = alpha mu
        w = 1j * 0.6 * (-1j * a1)
        dw = a.dv(x) * a.f(x) + a.v(x) * a.df(x)
        assert v0 == pytest.approx(w * w - a.v(x) * dw + pdfv.pseudo_potential(a, x))

    def test_which_one_has_no_full_form(self):
        with pytest.raises(PreconditionError):
            pdfv.eff_potential_full(constrained("real", 1, 1, 1), X, which=1)

    def test_simplified_requires_first_set(self):
        with pytest.raises(PreconditionError):
            pdfv.eff_potential_simplified(constrained("real", 1, 1, 1, "second"), 2, X)
        with pytest.raises(PreconditionError):
            pdfv.eff_potential_simplified(pdfv.PdfvAnsatz("real", 1, 1), 2, X)


class TestSimplifiedExamples:
    def test_real_unit(self):
        v = pdfv.eff_potential_simplified(constrained("real", 1, 1, 1), 2, X)
        assert np.max(np.abs(v - sech(X) * np.tanh(X))) <= 1e-15

    def test_complex_unit_vanishes(self):
        v = pdfv.eff_potential_simplified(constrained("complex", 1, 1, 1), 2, X)
        assert np.max(np.abs(v)) == 0

    def test_complex_beta_two(self):
        v = pdfv.eff_potential_simplified(constrained("complex", 1, 2, 1), 2, X)
        assert np.max(np.abs(v - (3.75 * sech(X) ** 2 - 3j * sech(X) * np.tanh(X)))) <= 1e-14

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.2, 3), st.floats(-3, 3), st.floats(0.2, 3))
    def test_real_kind_is_real(self, al, be, mu):
        v = pdfv.eff_potential_simplified(constrained("real", al, be, mu), 2, X)
        assert np.all(v.imag == 0)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.2, 3), st.floats(-3, 3), st.floats(0.2, 3))
    def test_complex_kind_structure(self, al, be, mu):
        a = constrained("complex", al, be, mu)
        v = pdfv.eff_potential_simplified(a, 2, X)
        sq = pdfv.eff_potential_simplified(a, 2, 0.0)
        # the sech^2 coefficient is real, the sech tanh coefficient imaginary
        assert sq.imag == 0
        odd = (v - v[::-1]) / 2
        assert np.all(np.abs(odd.real) <= 1e-12 * max(1, np.max(np.abs(v))))

    def test_complex_kind_real_when_beta_zero(self):
        v = pdfv.eff_potential_simplified(constrained("complex", 1.4, 0.0, 0.8), 2, X)
        assert np.all(v.imag == 0)


class TestRecords:
    def test_simplified_needs_first_set(self):
        with pytest.raises(PreconditionError):
            pdfv.EffectivePotentialRecord("real", 2, "simplified", "second", X, X)

    def test_forms(self):
        a = constrained("real", 1, 2, 1)
        recs = [pdfv.effective_potential_record(a, 2, f, X) for f in ("full", "simplified", "definitional")]
        assert all(np.allclose(r.values, recs[0].values, atol=1e-10) for r in recs)
        with pytest.raises(PreconditionError):
            pdfv.effective_potential_record(a, 2, "printed", X)


class TestOperators:
    def test_zero_phi(self):
        a = constrained("complex", 1, 1, 1)
        assert np.all(pdfv.pdfv_hamiltonian_apply(a, 2, np.zeros_like(X), X) == 0)

    def test_constant_velocity_matches_oracle(self):
        g = oracle.Grid(6.0, 601)
        x = g.points
        u = lambda t: -sech(t) ** 2 + 0.3j * sech(t) * np.tanh(t)
        phi = np.exp(-x**2).astype(complex)
        got = pdfv.velocity_operator_apply(np.ones_like(x), np.zeros_like(x), u(x), phi, x)
        ref = oracle.discretize_schrodinger(u, g, order=4).matrix @ phi[1:-1]
        assert np.max(np.abs(got[1:-1] - ref)[4:-4]) <= 1e-10

    def test_zero_crossings(self):
        a = pdfv.PdfvAnsatz("real", 1.0, 1.0)
        x = np.linspace(-5, 5, 101)
        zeros = pdfv.velocity_zero_crossings(a, x)
        assert zeros == [pytest.approx(np.arcsinh(-1.0))]
        with pytest.raises(SingularVelocityError) as exc:
            pdfv.gauge_route_residual(a, 2, np.exp(-x**2), x)
        assert exc.value.zero_crossings == zeros

    def test_complex_velocity_never_vanishes(self):
        assert pdfv.velocity_zero_crossings(pdfv.PdfvAnsatz("complex", 1, 1), X) == []

    def test_gauge_factor_squares_to_velocity(self):
        a = pdfv.PdfvAnsatz("complex", 1.0, 1.0)
        g = pdfv.gauge_factor(a, X)
        assert np.max(np.abs(g * g - a.v(X))) <= 1e-12

    @pytest.mark.parametrize("which", [1, 2])
    def test_gauge_route_fourth_order(self, which):
        a = constrained("complex", 1.0, 1.0, 1.0)
        errs = []
        for n in (201, 401, 801):
            x = num.symmetric_points(4, n)[0]
            phi = np.exp(-2 * x**2)
            errs.append(pdfv.gauge_route_residual(a, which, phi, x))
        ratios = [errs[i] / errs[i + 1] for i in range(2)]
        assert all(12 <= r <= 20 for r in ratios), ratios

    def test_real_kind_gauge_route_away_from_zero(self):
        # beta large enough that v > 0 on the whole grid
        a = constrained("real", 1.0, 20.0, 1.0)
        x = num.symmetric_points(3, 801)[0]
        assert pdfv.gauge_route_residual(a, 2, np.exp(-2 * x**2), x) <= 1e-6
