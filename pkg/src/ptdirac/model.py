"""Superpotentials, partner potentials and symmetry predicates.

Everything is in natural units (hbar = c = e = 1): the electron charge and
the Fermi velocity never appear except as an overall scale of the Dirac
energy, and the Scarf coupling ``a`` stands for the dimensionless product
``A1 e / (c hbar)``. Lengths are measured in ``1/mu`` and energies in
``mu**2``.

For a vector potential profile ``A_y(x)`` and transverse wavenumber ``k``
the first-order Dirac system has the superpotential ``W = k + i A_y`` and the
partner potentials ``V1 = W**2 + W'`` and ``V2 = W**2 - W'``.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sps
from scipy.interpolate import CubicSpline

from . import _numerics as num
from .errors import (
    EvaluationError,
    InvalidModelError,
    PreconditionError,
    UnsupportedProfileError,
    ZeroModeError,
)

UNITS = "natural units hbar=c=e=1; lengths in 1/mu; energies in mu^2"

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)
GAMMA0 = SIGMA3
GAMMA1 = 1j * SIGMA1
GAMMA5 = 1j * GAMMA0 @ GAMMA1


def sech(x):
    return 1.0 / np.cosh(x)


@dataclass(frozen=True)
class SuperpotentialSpec:
    """``W(x) = k + i a_y(x)``; ``da_y`` is the analytic derivative of ``a_y``."""

    k: float
    a_y: Callable
    da_y: Optional[Callable] = None
    name: str = "custom"

    def w(self, x):
        return self.k + 1j * num.sample(self.a_y, x, f"A_y profile '{self.name}'")

    def dw(self, x):
        if self.da_y is None:
            raise UnsupportedProfileError(
                f"profile '{self.name}' has no analytic derivative")
        return 1j * num.sample(self.da_y, x, f"A_y' profile '{self.name}'")


def _scalar_or_array(v, x):
    return complex(v) if np.ndim(x) == 0 else v


def superpotential_eval(spec, x):
    if not np.all(np.isfinite(x)):
        raise EvaluationError("position must be finite", x=x)
    return _scalar_or_array(spec.w(x), x)


def partner_potentials(spec, x):
    """``(W**2 + W', W**2 - W')`` with the analytic derivative of the profile."""
    w = spec.w(x)
    dw = spec.dw(x)
    return _scalar_or_array(w * w + dw, x), _scalar_or_array(w * w - dw, x)


@dataclass(frozen=True)
class ScarfModel:
    """Even hyperbolic profile ``A_y = a sech(mu x) + const``.

    With ``k_absorbed`` the gauge constant cancels ``k`` exactly and
    ``W = i a sech(mu x)``. Without it the constant is taken literally as
    ``A_2 = k``, which leaves ``W = k (1 + i) + i a sech(mu x)``.
    """

    a: float
    mu: float = 1.0
    k: float = 0.0
    k_absorbed: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise InvalidModelError(f"mu must be positive, got {self.mu}")
        if not np.isfinite(self.a):
            raise InvalidModelError(f"coupling a must be finite, got {self.a}")

    def superpotential(self):
        a, mu = self.a, self.mu
        offset = 0.0 if self.k_absorbed else self.k
        return SuperpotentialSpec(
            k=0.0 if self.k_absorbed else self.k,
            a_y=lambda x: a * sech(mu * x) + offset,
            da_y=lambda x: -a * mu * sech(mu * x) * np.tanh(mu * x),
            name="scarf2",
        )


def scarf2_potentials(m, x):
    if not isinstance(m, ScarfModel):
        raise InvalidModelError("expected a ScarfModel")
    if not m.k_absorbed:
        return partner_potentials(m.superpotential(), x)
    t = m.mu * np.asarray(x, dtype=float)
    even = -m.a**2 * sech(t) ** 2
    odd = m.a * m.mu * sech(t) * np.tanh(t)
    return _scalar_or_array(even - 1j * odd, x), _scalar_or_array(even + 1j * odd, x)


def magnetic_field(m, x):
    """Perpendicular field ``B_z = dA_y/dx = -a mu sech(mu x) tanh(mu x)``."""
    t = m.mu * np.asarray(x, dtype=float)
    b = -m.a * m.mu * sech(t) * np.tanh(t)
    return float(b) if np.ndim(x) == 0 else b


def profile(name, **params):
    """Look up a vector-potential profile by catalog name.

    ``scarf2`` (a, mu), ``tanh`` (a, mu), ``constant`` (value) and
    ``custom-table`` (path or array with columns x, Re A_y[, Im A_y]).
    Every entry accepts ``k``. Table profiles are interpolated with a cubic
    spline whose derivative serves as the analytic derivative.
    """
    k = float(params.pop("k", 0.0))
    if name == "scarf2":
        a, mu = params.pop("a", 1.0), params.pop("mu", 1.0)
        spec = SuperpotentialSpec(
            k, lambda x: a * sech(mu * x),
            lambda x: -a * mu * sech(mu * x) * np.tanh(mu * x), name)
    elif name == "tanh":
        a, mu = params.pop("a", 1.0), params.pop("mu", 1.0)
        spec = SuperpotentialSpec(
            k, lambda x: a * np.tanh(mu * x),
            lambda x: a * mu * sech(mu * x) ** 2, name)
    elif name == "constant":
        c = params.pop("value", 0.0)
        spec = SuperpotentialSpec(
            k, lambda x: np.full(np.shape(x), c, dtype=complex),
            lambda x: np.zeros(np.shape(x), dtype=complex), name)
    elif name == "custom-table":
        table = params.pop("table", None)
        if table is None:
            table = np.loadtxt(params.pop("path"), ndmin=2)
        table = np.asarray(table, dtype=float)
        if table.ndim != 2 or table.shape[1] not in (2, 3):
            raise PreconditionError("table needs 2 or 3 columns: x, Re A_y[, Im A_y]")
        re = CubicSpline(table[:, 0], table[:, 1])
        im = CubicSpline(table[:, 0], table[:, 2] if table.shape[1] == 3
                         else np.zeros(len(table)))
        dre, dim = re.derivative(), im.derivative()
        spec = SuperpotentialSpec(
            k, lambda x: re(x, extrapolate=False) + 1j * im(x, extrapolate=False),
            lambda x: dre(x, extrapolate=False) + 1j * dim(x, extrapolate=False), name)
    else:
        raise UnsupportedProfileError(f"unknown profile '{name}'")
    if params:
        raise PreconditionError(f"unused profile parameters: {sorted(params)}")
    return spec


@dataclass(frozen=True)
class ComplexPotentialSample:
    x: float
    v: complex
    label: str  # V1 | V2 | U | Veff

    def __post_init__(self):
        if not np.isfinite(self.v):
            raise EvaluationError(f"{self.label} is not finite at x = {self.x!r}", x=self.x)


def _check_symmetric(grid):
    x = np.asarray(grid, dtype=float)
    scale = max(1.0, float(np.max(np.abs(x)))) if x.size else 1.0
    if x.size == 0 or not np.allclose(x, -x[::-1], rtol=0.0, atol=1e-12 * scale):
        raise PreconditionError("grid must be symmetric about x = 0")
    return x


def pt_symmetry_residual(potential, grid):
    """``max |V(x) - conj(V(-x))|`` over a grid symmetric about the origin."""
    x = _check_symmetric(grid)
    v = num.sample(potential, x, "potential")
    vr = num.sample(potential, -x, "potential")
    return float(np.max(np.abs(v - np.conj(vr))))


@dataclass(frozen=True)
class FirstOrderDiracOp:
    """``[[0, d/dx + W], [-d/dx + W, 0]]`` (the overall ``hbar v_F`` dropped).

    ``w_flipped`` is the superpotential after the charge flip ``e -> -e``.
    For ``W = k + i A_y`` with real ``k`` and ``A_y`` this is ``conj(W)``,
    which is the default.
    """

    w: Callable
    w_flipped: Optional[Callable] = None

    @classmethod
    def from_spec(cls, spec):
        return cls(w=spec.w, w_flipped=lambda x: spec.k - 1j * num.sample(spec.a_y, x))

    def flipped(self):
        if self.w_flipped is not None:
            return FirstOrderDiracOp(self.w_flipped)
        w = self.w
        return FirstOrderDiracOp(lambda x: np.conj(num.sample(w, x)))

    def matrix(self, x, order=2):
        """Sparse ``2N x 2N`` discretization on the sample points ``x``."""
        x = np.asarray(x, dtype=float)
        n, h = x.size, num.spacing(x)
        d = num.first_derivative_matrix(n, h, order)
        wd = sps.diags(num.sample(self.w, x, "superpotential"))
        return sps.bmat([[None, d + wd], [-d + wd, None]], format="csr")


def c_anti_symmetry_residual(op, grid):
    """Residual of ``C H C^-1 + H(-e)`` with ``C = gamma5 R K``.

    ``R`` reflects the grid and ``K`` conjugates; ``H(-e)`` is the operator
    rebuilt from the charge-flipped superpotential. The residual is the
    induced infinity norm of the difference, and vanishes exactly when
    ``W(-x) = W(x)``.
    """
    x = _check_symmetric(grid)
    n = x.size
    h = op.matrix(x)
    refl = sps.csr_matrix(np.fliplr(np.eye(n)))
    c = sps.kron(sps.csr_matrix(GAMMA5), refl, format="csr")
    c_inv = sps.kron(sps.csr_matrix(np.linalg.inv(GAMMA5)), refl, format="csr")
    transformed = c @ h.conj() @ c_inv
    diff = transformed + op.flipped().matrix(x)
    return float(abs(diff).sum(axis=1).max()) if diff.nnz else 0.0


@dataclass
class SpinorSolution:
    """Components of the 1D spinor on a uniform grid.

    The full fields are ``phi1 = exp(i k y) psi1`` and
    ``phi2 = i exp(i k y) psi2``; only the x-dependence is stored.
    """

    x: np.ndarray
    eps: complex
    psi1: np.ndarray
    psi2: np.ndarray
    spec: SuperpotentialSpec = field(repr=False)

    def __post_init__(self):
        if len(self.psi1) != len(self.psi2) or len(self.psi1) != len(self.x):
            raise PreconditionError("spinor components must share the grid")
        if not (np.any(self.psi1) or np.any(self.psi2)):
            raise PreconditionError("both spinor components vanish identically")

    def residuals(self):
        """Relative residuals of ``(d + W) psi2 = eps psi1`` and ``(-d + W) psi1 = eps psi2``."""
        h = num.spacing(self.x)
        w = self.spec.w(self.x)
        r1 = num.d1(self.psi2, h) + w * self.psi2 - self.eps * self.psi1
        r2 = -num.d1(self.psi1, h) + w * self.psi1 - self.eps * self.psi2
        scale = max(np.linalg.norm(self.psi1), np.linalg.norm(self.psi2))
        return float(np.linalg.norm(r1) / scale), float(np.linalg.norm(r2) / scale)


def spinor_reconstruct(psi, eps, spec, x, component=2):
    """Build the partner spinor component from one sampled component.

    Given ``psi2``: ``psi1 = (d/dx + W) psi2 / eps``.
    Given ``psi1``: ``psi2 = (-d/dx + W) psi1 / eps``.
    """
    if eps == 0:
        raise ZeroModeError("eps = 0: the partner component is undefined for the zero mode")
    x = np.asarray(x, dtype=float)
    h = num.spacing(x)
    psi = np.asarray(psi, dtype=complex)
    w = spec.w(x)
    if component == 2:
        other = (num.d1(psi, h) + w * psi) / eps
        return SpinorSolution(x, complex(eps), other, psi, spec)
    if component == 1:
        other = (-num.d1(psi, h) + w * psi) / eps
        return SpinorSolution(x, complex(eps), psi, other, spec)
    raise PreconditionError("component must be 1 or 2")
