"""Nikiforov-Uvarov solution of ``-chi'' + U chi = E chi`` for the complex
Scarf II form ``U = A1 sech^2(mu x) + A2 sech(mu x) tanh(mu x)``.

With ``z = sinh(mu x)`` the equation becomes
``chi_zz + z/(1+z^2) chi_z + sigma_tilde/(1+z^2)^2 chi = 0`` where
``sigma = 1 + z^2``, ``tau_tilde = z`` and
``sigma_tilde = e (1+z^2) - a1 - a2 z`` in the reduced variables
``a1 = A1/mu^2``, ``a2 = A2/mu^2``, ``e = E/mu^2``.

Both quantities that depend on the energy, ``k`` and ``lambda``, are kept
as affine functions of ``e`` so quantization is a single linear solve.
Complex square roots always take the principal branch.
"""
import cmath
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    BranchRejectedError,
    PreconditionError,
    SingularQuantizationError,
    UnsupportedDegreeError,
)

BRANCHES = ("k1", "k2")
MAX_DEGREE = 12
# levels with |Re(1/2 + alpha) + n| below this are reported as marginal
MARGINAL_TOL = 1e-12


@dataclass(frozen=True)
class Affine:
    """``slope * e + offset``."""

    slope: complex
    offset: complex

    def __call__(self, e):
        return self.slope * e + self.offset

    def solve(self, target):
        if self.slope == 0:
            raise SingularQuantizationError("affine relation has no energy dependence")
        return (target - self.offset) / self.slope


@dataclass(frozen=True)
class NUProblem:
    a1: complex
    a2: complex
    mu: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.mu) and self.mu > 0):
            raise PreconditionError(f"mu must be positive, got {self.mu}")
        for v in (self.a1, self.a2):
            if not np.isfinite(complex(v)):
                raise PreconditionError("NU couplings must be finite")
        object.__setattr__(self, "a1", complex(self.a1))
        object.__setattr__(self, "a2", complex(self.a2))

    @classmethod
    def from_potential(cls, big_a1, big_a2, mu=1.0):
        """From the dimensional coefficients of ``sech^2`` and ``sech tanh``."""
        return cls(big_a1 / mu**2, big_a2 / mu**2, mu)

    @property
    def inner_root(self):
        return cmath.sqrt((4 * self.a1 - 1) ** 2 + 16 * self.a2**2)

    def potential(self, x):
        t = self.mu * np.asarray(x, dtype=float)
        s = 1.0 / np.cosh(t)
        return self.mu**2 * (self.a1 * s * s + self.a2 * s * np.tanh(t))


SIGMA = Polynomial([1.0, 0.0, 1.0])
TAU_TILDE = Polynomial([0.0, 1.0])


def nu_reduce(problem, e_bar):
    """``(sigma, tau_tilde, sigma_tilde)`` at reduced energy ``e_bar``."""
    e = complex(e_bar)
    st = Polynomial([e - problem.a1, -problem.a2, e])
    return SIGMA, TAU_TILDE, st


def _check_tag(tag):
    if tag not in BRANCHES:
        raise PreconditionError(f"branch must be one of {BRANCHES}, got {tag!r}")
    return -1 if tag == "k1" else 1


def nu_k_roots(problem):
    """Both roots ``k(e) = e + q`` of the zero-discriminant condition."""
    base = -1 - 4 * problem.a1
    root = problem.inner_root
    return Affine(1, (base - root) / 8), Affine(1, (base + root) / 8)


@dataclass(frozen=True)
class NUBranch:
    tag: str
    k_affine: Affine
    c: complex
    d: complex
    pi_coeffs: tuple  # (p1, p0): pi(z) = p1 z + p0
    lambda_affine: Affine
    tau_prime: complex
    discriminant_residual: float

    @property
    def accepted(self):
        """A branch is kept when it can carry a decaying or threshold level."""
        return self.tau_prime.real <= 1.0

    @property
    def pi(self):
        p1, p0 = self.pi_coeffs
        return Polynomial([p0, p1])

    @property
    def tau(self):
        return TAU_TILDE + 2 * self.pi


# below this ratio of the smaller to the larger square, the smaller one is
# recomputed from their product
_CANCEL_RATIO = 1e-3


def _square_roots(problem, sign):
    """``(c, d)`` with ``c^2 = 1/4 + q``, ``d^2 = a1 + q`` and ``2 c d = a2``.

    The squares are ``(+-(1 - 4 a1) + r)/8`` and multiply to ``a2^2/4``; when one
    is much smaller it has cancelled, so it is taken from the product instead.
    """
    r = sign * problem.inner_root
    c_sq = (1 - 4 * problem.a1 + r) / 8
    d_sq = (4 * problem.a1 - 1 + r) / 8
    if abs(c_sq) < _CANCEL_RATIO * abs(d_sq):
        c_sq = problem.a2**2 / (4 * d_sq)
    elif abs(d_sq) < _CANCEL_RATIO * abs(c_sq):
        d_sq = problem.a2**2 / (4 * c_sq)
    # adding 0.0 turns a signed zero into +0 so the principal root is stable
    c = cmath.sqrt(complex(c_sq.real + 0.0, c_sq.imag + 0.0))
    if abs(c) ** 2 >= abs(d_sq) and c != 0:
        return c, problem.a2 / (2 * c)
    d = cmath.sqrt(d_sq)
    if abs(2 * c * d - problem.a2) > abs(2 * c * d + problem.a2):
        d = -d
    return c, d


def nu_branch(problem, tag):
    """Assemble ``k``, ``pi``, ``tau`` and ``lambda`` for one branch.

    Of the two signs in front of the square root the one minimizing
    ``Re tau'`` is taken; with principal roots this is always the minus sign,
    giving ``pi = z/2 - (c z + d)``.
    """
    sign = _check_tag(tag)
    k = nu_k_roots(problem)[0 if sign < 0 else 1]
    q = k.offset
    c, d = _square_roots(problem, sign)
    # the radicand (1/4 + q) z^2 + a2 z + (a1 + q) must be a perfect square
    disc = problem.a2**2 - 4 * (0.25 + q) * (problem.a1 + q)
    p1, p0 = 0.5 - c, -d
    return NUBranch(
        tag=tag,
        k_affine=k,
        c=c,
        d=d,
        pi_coeffs=(p1, p0),
        lambda_affine=Affine(1, q + p1),
        tau_prime=1 + 2 * p1,
        discriminant_residual=abs(disc),
    )


def _accepted_branch(problem, tag):
    br = nu_branch(problem, tag)
    if not br.accepted:
        raise BranchRejectedError(tag, br.tau_prime)
    return br


def nu_pi(problem, tag):
    return _accepted_branch(problem, tag).pi


def nu_energy(problem, tag, n):
    """Energy ``E_n`` from ``lambda(e) = -n tau' - n (n-1) sigma''/2``."""
    if n < 0:
        raise PreconditionError("level index must be non-negative")
    br = nu_branch(problem, tag)
    target = -n * br.tau_prime - n * (n - 1)
    return problem.mu**2 * br.lambda_affine.solve(target)


def closed_form_energy(problem, tag, n):
    """``-mu^2 (n + 1/2 - sqrt(1 - 4 a1 -+ D) / (2 sqrt 2))^2``."""
    # sqrt(1 - 4 a1 -+ D) / (2 sqrt 2) is c, taken without cancellation
    c, _ = _square_roots(problem, _check_tag(tag))
    return -problem.mu**2 * (n + 0.5 - c) ** 2


def dirac_energy(e, v_f=1.0, imaginary_vf=False):
    """``(+v_F sqrt(E), -v_F sqrt(E))``; ``imaginary_vf`` substitutes ``v_F -> i v_F``."""
    if not v_f > 0:
        raise PreconditionError("v_f must be positive")
    scale = 1j * v_f if imaginary_vf else v_f
    r = scale * cmath.sqrt(complex(e))
    return r, -r


@dataclass(frozen=True)
class WeightFunction:
    """``rho(z) = (1+z^2)^p exp(q arctan z)``."""

    p: complex
    q: complex

    @classmethod
    def from_tau(cls, t1, t0):
        """Solve ``(sigma rho)' = tau rho`` for ``tau = t1 z + t0``."""
        return cls(t1 / 2 - 1, t0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (1 + z * z) ** self.p * np.exp(self.q * np.arctan(z))

    def identity_residual(self, tau, z):
        """``|(sigma rho)' - tau rho|`` using the analytic derivative."""
        z = np.asarray(z, dtype=complex)
        rho = self(z)
        d_sigma_rho = rho * (2 * (self.p + 1) * z + self.q)
        return np.abs(d_sigma_rho - tau(z) * rho)


def nu_weight(problem, tag):
    br = _accepted_branch(problem, tag)
    p1, p0 = br.pi_coeffs
    return WeightFunction.from_tau(1 + 2 * p1, 2 * p0)


def rodrigues_polynomial(weight, n):
    """``rho^-1 d^n/dz^n [sigma^n rho]`` as a polynomial in ``z``.

    Each derivative of ``(1+z^2)^m exp(q arctan z) P`` equals
    ``(1+z^2)^(m-1) exp(q arctan z) [2 m z P + q P + (1+z^2) P']``, so only
    the polynomial factor has to be carried along.
    """
    poly = Polynomial([1.0 + 0j])
    m = n + weight.p
    z = Polynomial([0.0, 1.0])
    for _ in range(n):
        poly = (2 * m * z + weight.q) * poly + SIGMA * poly.deriv()
        m -= 1
    return poly


@dataclass(frozen=True)
class EigenfunctionSpec:
    """Unnormalized ``chi_n = cosh^(1/2 + alpha) exp(-beta arctan sinh) y_n(sinh)``."""

    n: int
    branch: str
    alpha: complex
    beta: complex
    mu: float
    polynomial: Polynomial = field(repr=False)
    normalization: float = 1.0

    def _parts(self, x):
        z = np.sinh(self.mu * np.asarray(x, dtype=float)).astype(complex)
        phi = (1 + z * z) ** ((0.5 + self.alpha) / 2) * np.exp(-self.beta * np.arctan(z))
        return z, phi

    def __call__(self, x):
        z, phi = self._parts(x)
        return self.normalization * phi * self.polynomial(z)

    def _f_derivatives(self, z, phi):
        y = self.polynomial(z)
        dy = self.polynomial.deriv()(z)
        d2y = self.polynomial.deriv(2)(z)
        s = 1 + z * z
        r = ((0.5 + self.alpha) * z - self.beta) / s
        dr = ((0.5 + self.alpha) * s - 2 * z * ((0.5 + self.alpha) * z - self.beta)) / s**2
        f1 = phi * (r * y + dy)
        f2 = phi * ((dr + r * r) * y + 2 * r * dy + d2y)
        return f1, f2

    def derivative(self, x):
        z, phi = self._parts(x)
        f1, _ = self._f_derivatives(z, phi)
        return self.normalization * self.mu * np.sqrt(1 + z * z) * f1

    def second_derivative(self, x):
        z, phi = self._parts(x)
        f1, f2 = self._f_derivatives(z, phi)
        return self.normalization * self.mu**2 * ((1 + z * z) * f2 + z * f1)


def nu_eigenfunction(problem, tag, n, cap=MAX_DEGREE):
    if n < 0:
        raise PreconditionError("level index must be non-negative")
    if n > cap:
        raise UnsupportedDegreeError(f"degree {n} exceeds the Rodrigues cap {cap}")
    br = _accepted_branch(problem, tag)
    p1, p0 = br.pi_coeffs
    poly = rodrigues_polynomial(nu_weight(problem, tag), n)
    return EigenfunctionSpec(n, tag, alpha=p1 - 0.5, beta=-p0, mu=problem.mu, polynomial=poly)


def schrodinger_residual(problem, eig, x):
    """``||-chi'' + U chi - E chi|| / ||chi||`` with analytic derivatives."""
    chi = eig(x)
    e = nu_energy(problem, eig.branch, eig.n)
    r = -eig.second_derivative(x) + (problem.potential(x) - e) * chi
    return float(np.linalg.norm(r) / np.linalg.norm(chi))


def level_status(problem, tag, n):
    """``'normalizable'``, ``'marginal'`` or ``'non-normalizable'``."""
    br = nu_branch(problem, tag)
    if not br.accepted:
        return "non-normalizable"
    growth = br.pi_coeffs[0].real + n
    if abs(growth) <= MARGINAL_TOL:
        return "marginal"
    return "normalizable" if growth < 0 else "non-normalizable"


def normalizable_levels(problem, tag):
    br = nu_branch(problem, tag)
    if not br.accepted:
        return 0
    count = 0
    while level_status(problem, tag, count) == "normalizable":
        count += 1
    return count


def spectrum_records(problem, tag, n_max, v_f=1.0, imaginary_vf=False):
    """Export rows for levels ``0..n_max`` of one branch."""
    rows = []
    for n in range(n_max + 1):
        e = nu_energy(problem, tag, n)
        big_e, _ = dirac_energy(e, v_f, imaginary_vf)
        status = level_status(problem, tag, n)
        rows.append({
            "branch": tag, "n": n,
            "re_e": e.real, "im_e": e.imag,
            "re_dirac": big_e.real, "im_dirac": big_e.imag,
            "normalizable": status == "normalizable",
            "marginal": status == "marginal",
        })
    return rows


def scarf_couplings_from_intertwiner(b1, s, a, mu=1.0):
    """``(A1, A2)`` of ``U`` for intertwiner coefficients ``(B1, S)``."""
    if not mu > 0:
        raise PreconditionError("mu must be positive")
    v2 = a * mu
    return complex(-(v2**2 / mu**2 + 2 * b1 * mu)), complex(1j * (v2 + 2 * s * mu))


def jacobi_parameters(eig):
    """Jacobi pair ``(a, b)`` with ``y_n(z) ~ P_n^(a, b)(i z)``."""
    return eig.alpha - 1j * eig.beta, eig.alpha + 1j * eig.beta


def jacobi_polynomial(n, a, b, t):
    """``P_n^(a, b)(t)`` for complex parameters, by the terminating sum."""
    t = np.asarray(t, dtype=complex)
    total = np.zeros_like(t)
    for s in range(n + 1):
        coef = 1.0 + 0j
        for j in range(1, n - s + 1):
            coef *= (a + s + j) / j
        for j in range(1, s + 1):
            coef *= (b + n - s + j) / j
        total = total + coef * ((t - 1) / 2) ** s * ((t + 1) / 2) ** (n - s)
    return total
