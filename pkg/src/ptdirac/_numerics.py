"""Finite-difference kernels used by the residual checks.

Two families live here: fourth-order stencils acting on sampled arrays
(one-sided near the ends, so every sample gets a derivative) and sparse
central-difference matrices with Dirichlet truncation, used where an
operator identity is checked at the matrix level.
"""
import numpy as np
import scipy.sparse as sps

from .errors import PreconditionError


def symmetric_points(l, n):
    """``n`` (odd) equispaced points on [-l, l], exactly mirror-symmetric."""
    if n % 2 == 0 or n < 3:
        raise PreconditionError(f"need an odd point count >= 3, got {n}")
    m = (n - 1) // 2
    h = l / m
    return h * np.arange(-m, m + 1, dtype=float), h


def spacing(x):
    x = np.asarray(x, dtype=float)
    h = np.diff(x)
    if h.size == 0 or not np.allclose(h, h[0], rtol=1e-9, atol=0.0):
        raise PreconditionError("grid must be uniform")
    return float(h[0])


def d1(f, h):
    """First derivative, O(h^4) everywhere (5-point stencils)."""
    f = np.asarray(f)
    if f.shape[0] < 7:
        raise PreconditionError("fourth-order stencils need at least 7 samples")
    out = np.empty_like(f, dtype=np.result_type(f, float))
    out[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    out[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    out[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    out[-1] = -(-25 * f[-1] + 48 * f[-2] - 36 * f[-3] + 16 * f[-4] - 3 * f[-5]) / (12 * h)
    out[-2] = -(-3 * f[-1] - 10 * f[-2] + 18 * f[-3] - 6 * f[-4] + f[-5]) / (12 * h)
    return out


def d2(f, h):
    """Second derivative, O(h^4) everywhere (6-point one-sided at the ends)."""
    f = np.asarray(f)
    if f.shape[0] < 7:
        raise PreconditionError("fourth-order stencils need at least 7 samples")
    out = np.empty_like(f, dtype=np.result_type(f, float))
    hh = 12 * h * h
    out[2:-2] = (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / hh
    out[0] = (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / hh
    out[1] = (10 * f[0] - 15 * f[1] - 4 * f[2] + 14 * f[3] - 6 * f[4] + f[5]) / hh
    out[-1] = (45 * f[-1] - 154 * f[-2] + 214 * f[-3] - 156 * f[-4] + 61 * f[-5] - 10 * f[-6]) / hh
    out[-2] = (10 * f[-1] - 15 * f[-2] - 4 * f[-3] + 14 * f[-4] - 6 * f[-5] + f[-6]) / hh
    return out


# central stencils, Dirichlet truncation (values outside the grid are zero)
_D1 = {2: ([-1, 1], [-1 / 2, 1 / 2]),
       4: ([-2, -1, 1, 2], [1 / 12, -8 / 12, 8 / 12, -1 / 12])}
_D2 = {2: ([-1, 0, 1], [1.0, -2.0, 1.0]),
       4: ([-2, -1, 0, 1, 2], [-1 / 12, 16 / 12, -30 / 12, 16 / 12, -1 / 12])}


def first_derivative_matrix(n, h, order=2):
    offsets, coeffs = _D1[order]
    return sps.diags([np.full(n - abs(o), c / h) for o, c in zip(offsets, coeffs)],
                     offsets, shape=(n, n), format="csr")


def second_derivative_matrix(n, h, order=2):
    offsets, coeffs = _D2[order]
    return sps.diags([np.full(n - abs(o), c / h**2) for o, c in zip(offsets, coeffs)],
                     offsets, shape=(n, n), format="csr")


def sample(fn, x, what="function"):
    """Evaluate ``fn`` on ``x`` as a complex array, broadcasting scalars."""
    from .errors import EvaluationError

    x = np.asarray(x, dtype=float)
    v = np.asarray(fn(x), dtype=complex)
    if v.shape != x.shape:
        v = np.broadcast_to(v, x.shape).copy()
    bad = ~np.isfinite(v)
    if bad.any():
        xb = float(np.atleast_1d(x)[np.argmax(np.atleast_1d(bad))])
        raise EvaluationError(f"{what} is not finite at x = {xb!r}", x=xb)
    return v
