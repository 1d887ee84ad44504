"""Finite-difference reference solver for ``-d^2/dx^2 + U(x)``.

Spectra come from a dense LAPACK eigendecomposition of the Dirichlet
discretization on ``[-l, l]``. Bound-state candidates are the eigenvalues
with clearly negative real part whose eigenvectors have decayed at the box
walls; their vectors are recovered by inverse iteration on the banded
matrix, which is much cheaper than a full eigenvector decomposition.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from . import _numerics as num
from .errors import DomainTooSmallError, NumericFailure, PreconditionError

DEFAULT_L = 15.0
DEFAULT_N = 3001
DIMENSION_CAP = 4096
EIG_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True)
class Grid:
    """``n`` points on ``[-l, l]`` including both walls; ``n`` odd so 0 is a node."""

    l: float = DEFAULT_L
    n: int = DEFAULT_N

    def __post_init__(self):
        if not (np.isfinite(self.l) and self.l > 0):
            raise PreconditionError(f"grid half-width must be positive, got {self.l}")
        if self.n < 5 or self.n % 2 == 0:
            raise PreconditionError(f"grid point count must be odd and >= 5, got {self.n}")

    @property
    def h(self):
        return 2 * self.l / (self.n - 1)

    @property
    def points(self):
        return num.symmetric_points(self.l, self.n)[0]

    @property
    def interior(self):
        return self.points[1:-1]

    def refined(self):
        """Same box, half the spacing."""
        return Grid(self.l, 2 * self.n - 1)

    def describe(self):
        return {"l": self.l, "n": self.n, "h": self.h}


@dataclass(frozen=True)
class OperatorMatrix:
    matrix: np.ndarray = field(repr=False)
    grid: Grid
    order: int
    boundary: str = "dirichlet"

    @property
    def size(self):
        return self.matrix.shape[0]


def discretize_schrodinger(u, grid, order=2):
    if order not in (2, 4):
        raise PreconditionError(f"stencil order must be 2 or 4, got {order}")
    x = grid.interior
    lap = num.second_derivative_matrix(x.size, grid.h, order)
    m = (-lap).toarray().astype(complex)
    m[np.diag_indices_from(m)] += num.sample(u, x, "potential")
    return OperatorMatrix(m, grid, order)


def _as_array(m):
    return m.matrix if isinstance(m, OperatorMatrix) else np.asarray(m, dtype=complex)


def _sort_order(values):
    return np.lexsort((values.imag, values.real))


def eig_complex_dense(m, vectors=True, cap=DIMENSION_CAP):
    """Eigenvalues (sorted by real, then imaginary part) and optionally vectors.

    With ``vectors`` every pair is checked against
    ``||M v - lam v|| <= 1e-8 ||M|| ||v||``.
    """
    a = _as_array(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise PreconditionError("matrix must be square")
    if a.shape[0] > cap:
        raise PreconditionError(f"dimension {a.shape[0]} exceeds the dense cap {cap}")
    try:
        if not vectors:
            w = sla.eigvals(a, check_finite=True)
            return w[_sort_order(w)]
        w, v = sla.eig(a, check_finite=True)
    except (sla.LinAlgError, ValueError) as exc:
        raise NumericFailure(f"dense eigensolver failed: {exc}") from exc
    idx = _sort_order(w)
    w, v = w[idx], v[:, idx]
    scale = np.linalg.norm(a, 2) if a.shape[0] <= 512 else np.linalg.norm(a, "fro")
    res = np.linalg.norm(a @ v - v * w, axis=0) / (np.linalg.norm(v, axis=0) * max(scale, 1e-300))
    bad = np.flatnonzero(~(res <= EIG_RESIDUAL_TOL))
    if bad.size:
        raise NumericFailure(
            f"eigenpair residual {res[bad[0]]:.3g} above tolerance", index=int(bad[0]))
    return w, v


def _banded(a, bw):
    n = a.shape[0]
    ab = np.zeros((2 * bw + 1, n), dtype=complex)
    for k in range(-bw, bw + 1):
        diag = np.diagonal(a, k)
        if k >= 0:
            ab[bw - k, k:] = diag
        else:
            ab[bw - k, :n + k] = diag
    return ab


def inverse_iteration(m, shift, iters=6):
    """Eigenvector of the banded operator ``m`` nearest to ``shift``."""
    a = _as_array(m)
    bw = 1 if not isinstance(m, OperatorMatrix) or m.order == 2 else 2
    n = a.shape[0]
    # nudge the shift so the shifted matrix stays invertible
    sigma = shift + 1e-10 * max(1.0, abs(shift)) * (1 + 1j)
    ab = _banded(a - sigma * np.eye(n), bw)
    v = np.ones(n, dtype=complex) / np.sqrt(n)
    for _ in range(iters):
        v = sla.solve_banded((bw, bw), ab, v)
        v /= np.linalg.norm(v)
    lam = np.vdot(v, a @ v)
    return lam, v


@dataclass(frozen=True)
class BoundState:
    value: complex
    vector: np.ndarray = field(repr=False)
    residual: float
    boundary_ratio: float


def boundary_check(u, grid, tol=1e-6):
    """Require ``|U|`` at the outermost interior nodes below ``tol * max(1, max|U|)``."""
    x = grid.interior
    values = np.abs(num.sample(u, x, "potential"))
    worst = float(max(values[0], values[-1]))
    if worst > tol * max(1.0, float(values.max())):
        raise DomainTooSmallError(
            f"|U| = {worst:.3g} at the box edge (l = {grid.l}); increase l")
    return worst


def bound_states(u, grid=None, order=2, delta=1e-3, decay=1e-4, boundary_tol=1e-6):
    """Decaying eigenpairs with ``Re lam < -delta``, sorted by real part."""
    grid = grid or Grid()
    boundary_check(u, grid, boundary_tol)
    op = discretize_schrodinger(u, grid, order)
    values = eig_complex_dense(op, vectors=False)
    out = []
    norm_m = np.linalg.norm(op.matrix, 1)
    for lam in values[values.real < -delta]:
        refined, v = inverse_iteration(op, lam)
        amp = np.abs(v)
        ratio = float(max(amp[0], amp[-1]) / amp.max())
        if ratio >= decay:
            continue
        res = float(np.linalg.norm(op.matrix @ v - refined * v) / norm_m)
        out.append(BoundState(complex(refined), v, res, ratio))
    return out


def bound_spectrum(u, grid=None, order=2, delta=1e-3, decay=1e-4, boundary_tol=1e-6):
    return [s.value for s in bound_states(u, grid, order, delta, decay, boundary_tol)]


@dataclass(frozen=True)
class MatchEntry:
    closed_form: complex
    numeric: Optional[complex]
    abs_err: Optional[float]
    matched: bool


@dataclass(frozen=True)
class SpectrumReport:
    entries: tuple
    unmatched_numeric: tuple
    grid: Optional[dict] = None
    tol: float = 0.0

    @property
    def all_matched(self):
        return all(e.matched for e in self.entries)

    def as_dict(self):
        return {
            "grid": self.grid,
            "tol": self.tol,
            "entries": [
                {"closed_form": e.closed_form, "numeric": e.numeric,
                 "abs_err": e.abs_err, "matched": e.matched}
                for e in self.entries
            ],
            "unmatched_numeric": list(self.unmatched_numeric),
        }


def match_spectra(closed, numeric, tol, grid=None):
    """Greedy nearest-neighbour pairing; closed values visited by ascending modulus."""
    closed = [complex(c) for c in closed]
    pool = [complex(v) for v in numeric]
    free = list(range(len(pool)))
    entries = []
    for c in sorted(closed, key=abs):
        if free:
            j = min(free, key=lambda i: (abs(pool[i] - c), i))
            err = abs(pool[j] - c)
            if err <= tol:
                free.remove(j)
                entries.append(MatchEntry(c, pool[j], float(err), True))
                continue
        entries.append(MatchEntry(c, None, None, False))
    leftover = tuple(pool[i] for i in free)
    meta = grid.describe() if isinstance(grid, Grid) else grid
    return SpectrumReport(tuple(entries), leftover, meta, tol)


@dataclass(frozen=True)
class ConvergenceResult:
    errors: tuple
    ratios: tuple
    inconclusive: bool

    def within(self, lo, hi):
        return not self.inconclusive and all(lo <= r <= hi for r in self.ratios)


def convergence_study(quantity: Callable, grids: Sequence[Grid]):
    """Evaluate ``quantity(grid)`` on successively halved grids.

    Returns the error ratios ``e_i / e_{i+1}``. Non-decreasing errors or
    ratios indistinguishable from 1 are flagged inconclusive.
    """
    grids = list(grids)
    if len(grids) < 3:
        raise PreconditionError("need at least three grids")
    for g0, g1 in zip(grids, grids[1:]):
        if not np.isclose(g0.h, 2 * g1.h, rtol=1e-9):
            raise PreconditionError("successive grids must halve the spacing")
    errors = tuple(float(abs(quantity(g))) for g in grids)
    ratios = tuple(e0 / e1 if e1 > 0 else np.inf for e0, e1 in zip(errors, errors[1:]))
    monotone = all(e1 < e0 for e0, e1 in zip(errors, errors[1:]))
    flat = all(abs(r - 1) < 0.1 for r in ratios)
    return ConvergenceResult(errors, ratios, not monotone or flat)
