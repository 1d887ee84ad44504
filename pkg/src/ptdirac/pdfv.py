"""Effective potentials for a position-dependent Fermi velocity.

With velocity profile ``v(x)`` and ``f = k + i A_y`` the gauge-transformed
second-order operators are

    h_j = -v^2 d^2/dx^2 - 2 v v' d/dx + Veff_j,
    Veff_j = W^2 + s_j v W' + rho(v),   W = v f,   rho = -v v''/2 - v'^2/4,

with ``s_1 = +1`` and ``s_2 = -1``. Two ansatz families are supported:

* ``real``: ``v = beta + alpha sinh(mu x)``,
* ``complex``: ``v = i beta + alpha sinh(mu x)``, with ``A_y -> i A_y``,

both with ``A_y = A0 tanh + i A1 sech + A2 + i A3``. ``A3`` is fixed by
``A2`` and ``k`` so that the constant part of ``f`` vanishes, which leaves

* real: ``f = i A0 tanh(mu x) - A1 sech(mu x)``,
* complex: ``f = -A0 tanh(mu x) - i A1 sech(mu x)``.

The long term-by-term expansions of ``Veff_2`` are kept as independent
transcriptions and are always cross-checked against the definition above.
"""
from dataclasses import dataclass, field, replace

import numpy as np

from . import _numerics as num
from .errors import (
    InvalidModelError,
    PreconditionError,
    SingularVelocityError,
    TranscriptionFlagError,
)
from .model import sech

KINDS = ("real", "complex")
TRANSCRIPTION_TOL = 1e-8


@dataclass(frozen=True)
class ConstraintSet:
    a0: complex
    a1: complex
    label: str  # first | second
    status: str  # solvable-verified | experimental


def constraint_sets(kind, alpha, beta, mu=1.0):
    """The two ``(A0, A1)`` choices for each ansatz kind (natural units)."""
    if kind not in KINDS:
        raise PreconditionError(f"kind must be one of {KINDS}")
    if alpha == 0:
        raise InvalidModelError("alpha must be non-zero")
    if not mu > 0:
        raise InvalidModelError("mu must be positive")
    unit = 1j if kind == "real" else 1.0
    return [
        ConstraintSet(complex(unit * mu / 2), complex(-beta * mu / (2 * alpha)),
                      "first", "solvable-verified"),
        ConstraintSet(complex(-3 * unit * mu / 2), complex(5 * beta * mu / (6 * alpha)),
                      "second", "experimental"),
    ]


@dataclass(frozen=True)
class PdfvAnsatz:
    kind: str
    alpha: float
    beta: float
    mu: float = 1.0
    a0: complex = 0.0
    a1c: complex = 0.0
    a2c: complex = 0.0
    k: float = 0.0
    constraint_set: str = None  # first | second | None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.alpha == 0:
            raise InvalidModelError("alpha must be non-zero")
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise InvalidModelError("mu must be positive")

    @property
    def a3(self):
        if self.kind == "real":
            return 1j * self.a2c + self.k
        return 1j * (self.a2c - self.k)

    def with_constraints(self, which="first"):
        sets = {c.label: c for c in constraint_sets(self.kind, self.alpha, self.beta, self.mu)}
        c = sets[which]
        return replace(self, a0=c.a0, a1c=c.a1, constraint_set=which)

    def _t(self, x):
        return self.mu * np.asarray(x, dtype=float)

    def v(self, x):
        offset = self.beta if self.kind == "real" else 1j * self.beta
        return offset + self.alpha * np.sinh(self._t(x)) + 0j

    def dv(self, x):
        return self.alpha * self.mu * np.cosh(self._t(x)) + 0j

    def d2v(self, x):
        return self.alpha * self.mu**2 * np.sinh(self._t(x)) + 0j

    def a_y(self, x):
        t = self._t(x)
        return self.a0 * np.tanh(t) + 1j * self.a1c * sech(t) + self.a2c + 1j * self.a3

    def da_y(self, x):
        t = self._t(x)
        return self.mu * (self.a0 * sech(t) ** 2 - 1j * self.a1c * sech(t) * np.tanh(t))

    def f(self, x):
        """``k + i A_y`` (real kind) or ``k + i (i A_y)`` (complex kind)."""
        if self.kind == "real":
            return self.k + 1j * self.a_y(x)
        return self.k - self.a_y(x)

    def df(self, x):
        return 1j * self.da_y(x) if self.kind == "real" else -self.da_y(x)


def _sign(which):
    if which not in (1, 2):
        raise PreconditionError("which must be 1 or 2")
    return 1 if which == 1 else -1


def _out(v, x):
    return complex(v) if np.ndim(x) == 0 else v


def pdfv_superpotential(ans, x):
    return _out(ans.v(x) * ans.f(x), x)


def pseudo_potential(ans, x):
    v = ans.v(x)
    return _out(-v * ans.d2v(x) / 2 - ans.dv(x) ** 2 / 4, x)


def eff_potential(ans, which, x):
    """Definitional ``W^2 + s v W' + rho``."""
    s = _sign(which)
    v, dv, f, df = ans.v(x), ans.dv(x), ans.f(x), ans.df(x)
    w = v * f
    dw = dv * f + v * df
    rho = -v * ans.d2v(x) / 2 - dv**2 / 4
    return _out(w * w + s * v * dw + rho, x)


def printed_expansion(ans, x, errata=True):
    """Term-by-term expansion of ``Veff_2`` for either ansatz kind.

    Without ``errata`` the coefficients are taken as tabulated. With it, two
    corrections are applied per kind: the sign of the quadratic ``A0, A1``
    block inside the ``tanh^2`` coefficient, plus a misplaced factor ``i`` in
    the ``sinh tanh^2`` term (real kind) or the ``sinh`` term (complex kind).
    """
    al, be, mu = ans.alpha, ans.beta, ans.mu
    a0, a1 = ans.a0, ans.a1c
    t = ans._t(x)
    sh, th, se = np.sinh(t), np.tanh(t), sech(t)
    flip = -1 if errata else 1
    if ans.kind == "real":
        block = (a1 * al - 1j * a0 * be) ** 2 - 2j * a0 * a1 * al * be
        shth2 = (-a0 * a1 * al**2 - a0**2 * al * be / 1j
                 - a1 * al**2 * mu / (2j if errata else 2))
        terms = [
            a1 * al * be * mu - al**2 * mu**2 / 4,
            (a1**2 * be**2 - 1j * a0 * be**2 * mu) * se**2,
            (a1 * al**2 * mu - 1j * a0 * al * be * mu - al * be * mu**2 / 2) * sh,
            -(1j * a0 * al**2 * mu + 3 * al**2 * mu**2 / 4) * sh**2,
            2j * (a1**2 * al * be / 1j - a1 * a0 * be**2 - a0 * al * be * mu
                  - a1 * be**2 * mu / 2j) * se * th,
            (-flip * block - 1j * a0 * al**2 * mu - 2 * a1 * al * be * mu) * th**2,
            2j * shth2 * sh * th**2,
            -a0**2 * al**2 * sh**2 * th**2,
        ]
    else:
        block = -(a1 * al + a0 * be) ** 2 - 2 * a0 * a1 * al * be
        sinh_coef = (1j * (a1 * al**2 * mu + a0 * al * be * mu - al * be * mu**2 / 2)
                     if errata else
                     1j * a1 * al**2 * mu + a0 * al * be * mu - al * be * mu**2 / 2)
        terms = [
            -a1 * al * be * mu - al**2 * mu**2 / 4,
            (a1**2 * be**2 - a0 * be**2 * mu) * se**2,
            sinh_coef * sh,
            (a0 * al**2 * mu - 3 * al**2 * mu**2 / 4) * sh**2,
            2j * (-a1**2 * al * be - a1 * a0 * be**2 + a0 * al * be * mu
                  + a1 * be**2 * mu / 2) * se * th,
            (-flip * block + a0 * al**2 * mu + 2 * a1 * al * be * mu) * th**2,
            2j * (a0 * a1 * al**2 + a0**2 * al * be - a1 * al**2 * mu / 2) * sh * th**2,
            a0**2 * al**2 * sh**2 * th**2,
        ]
    return _out(sum(terms), x)


def eff_potential_full(ans, x, which=2, errata=True, tol=TRANSCRIPTION_TOL):
    """Expanded ``Veff_2``, refused if it strays from the definition."""
    if which != 2:
        raise PreconditionError("the full expansion exists only for which=2")
    printed = np.asarray(printed_expansion(ans, x, errata))
    definitional = np.asarray(eff_potential(ans, 2, x))
    gap = np.abs(printed - definitional)
    if np.max(gap) > tol:
        scale = max(1.0, float(np.max(np.abs(definitional))))
        if np.max(gap) > tol * scale:
            i = int(np.argmax(gap))
            raise TranscriptionFlagError(
                f"expanded form differs from the definition by {np.max(gap):.3g}",
                printed=complex(printed.flat[i]), definitional=complex(definitional.flat[i]))
    return _out(printed, x)


def eff_potential_simplified(ans, which, x):
    """Closed forms valid under the first constraint set.

    The constant and ``sinh`` terms of the ``which=1`` forms carry ``mu^2``
    (a bare ``mu`` there is dimensionally inconsistent).
    """
    _sign(which)
    if ans.constraint_set != "first":
        raise PreconditionError("simplified forms require the first constraint set")
    al, be, mu = ans.alpha, ans.beta, ans.mu
    t = ans._t(x)
    sh, th, se = np.sinh(t), np.tanh(t), sech(t)
    m2 = mu**2
    if ans.kind == "real":
        if which == 2:
            v = (-al**2 / 4 + be**4 / (4 * al**2)) * m2 * se**2 \
                + be * m2 / 2 * (al + be**2 / al) * se * th
        else:
            v = (-(be**2 + al**2) * m2
                 + (3 * al**2 / 4 + be**2 + be**4 / (4 * al**2)) * m2 * se**2
                 - al**2 * m2 * sh**2
                 - al * be / 2 * m2 * sh * (1 + th**2)
                 - be * (al + be**2 / (2 * al)) * m2 * se * th)
    else:
        if which == 2:
            v = m2 / 4 * (be**4 / al**2 - al**2) * se**2 \
                + 1j * be * m2 / 2 * (al - be**2 / al) * se * th
        else:
            v = ((be**2 - al**2) * m2
                 + (3 * al**2 / 4 - be**2 + be**4 / (4 * al**2)) * m2 * se**2
                 - al**2 * m2 * sh**2
                 - 1j * al * be / 2 * m2 * sh * (1 + th**2)
                 + 1j * be * (-al + be**2 / (2 * al)) * m2 * se * th)
    return _out(v + 0j, x)


@dataclass
class EffectivePotentialRecord:
    kind: str
    which: int
    form: str  # full | simplified | definitional
    constraint_set: str
    x: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.form == "simplified" and self.constraint_set != "first":
            raise PreconditionError("simplified forms require the first constraint set")


def effective_potential_record(ans, which, form, x):
    x = np.asarray(x, dtype=float)
    if form == "full":
        values = eff_potential_full(ans, x, which)
    elif form == "simplified":
        values = eff_potential_simplified(ans, which, x)
    elif form == "definitional":
        values = eff_potential(ans, which, x)
    else:
        raise PreconditionError(f"unknown form {form!r}")
    return EffectivePotentialRecord(ans.kind, which, form, ans.constraint_set, x,
                                    np.asarray(values))


def velocity_zero_crossings(ans, x):
    """Points of ``x`` next to which ``v`` vanishes."""
    x = np.asarray(x, dtype=float)
    v = ans.v(x)
    if ans.kind == "complex" and ans.beta != 0:
        return []
    re = v.real
    hits = list(x[re == 0])
    flips = np.flatnonzero(np.sign(re[:-1]) * np.sign(re[1:]) < 0)
    if flips.size:
        x0 = np.arcsinh(-ans.beta / ans.alpha) / ans.mu
        hits.append(float(x0))
    return sorted(set(float(h) for h in hits))


def velocity_operator_apply(v, dv, veff, phi, x):
    """``-v^2 phi'' - 2 v v' phi' + Veff phi`` with O(h^4) differences."""
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=complex)
    h = num.spacing(x)
    return -v * v * num.d2(phi, h) - 2 * v * dv * num.d1(phi, h) + veff * phi


def pdfv_hamiltonian_apply(ans, which, phi, x):
    """Apply the gauge-transformed ``h_j`` to samples ``phi`` on ``x``."""
    x = np.asarray(x, dtype=float)
    return velocity_operator_apply(ans.v(x), ans.dv(x), np.asarray(eff_potential(ans, which, x)),
                                   phi, x)


def original_hamiltonian_apply(ans, which, psi, x):
    """``-v^2 psi'' - v v' psi' + s v v' f + v^2 f^2 + s v^2 f'`` applied to ``psi``."""
    s = _sign(which)
    x = np.asarray(x, dtype=float)
    psi = np.asarray(psi, dtype=complex)
    h = num.spacing(x)
    v, dv, f, df = ans.v(x), ans.dv(x), ans.f(x), ans.df(x)
    pot = s * v * dv * f + v * v * f * f + s * v * v * df
    return -v * v * num.d2(psi, h) - v * dv * num.d1(psi, h) + pot * psi


def gauge_factor(ans, x):
    """``exp(int v'/(2 v)) = sqrt(v)`` on a continuous branch."""
    x = np.asarray(x, dtype=float)
    zeros = velocity_zero_crossings(ans, x)
    if zeros:
        raise SingularVelocityError(zeros)
    v = ans.v(x)
    return np.sqrt(np.abs(v)) * np.exp(0.5j * np.unwrap(np.angle(v)))


def gauge_route_residual(ans, which, phi, x):
    """Relative mismatch between ``H_j (g phi)`` and ``g (h_j phi)``."""
    x = np.asarray(x, dtype=float)
    phi = np.asarray(phi, dtype=complex)
    g = gauge_factor(ans, x)
    lhs = original_hamiltonian_apply(ans, which, g * phi, x)
    rhs = g * pdfv_hamiltonian_apply(ans, which, phi, x)
    return float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), 1e-300))
