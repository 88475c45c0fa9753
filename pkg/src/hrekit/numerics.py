"""Dense kernels: Perron root by power iteration, pivoted elimination, Gershgorin test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import matrix_balance
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, NonNegativityViolated

SPECTRAL_TOL = 1e-12
SPECTRAL_MAX_ITER = 100_000
SINGULAR_TOL = 1e-10

# Iterations without a shrinking Collatz-Wielandt gap before the gap is
# treated as a rounding floor.
_STALL_LIMIT = 500


@dataclass(frozen=True)
class SpectralResult:
    """Perron root estimate with Collatz-Wielandt bracket ``lower <= radius <= upper``.

    ``vector`` is the normalized Perron vector (sum 1); it is only computed
    for irreducible input.
    """

    radius: float
    lower: float
    upper: float
    vector: np.ndarray | None
    iterations: int
    converged: bool


@dataclass(frozen=True)
class SolveResult:
    solution: np.ndarray | None
    pivot_floor: float
    singular_tol: float = SINGULAR_TOL

    @property
    def singular(self) -> bool:
        return self.solution is None


def _as_square(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite")
    return a


def _perron_block(block: np.ndarray, tol: float, max_iter: int):
    # A positive diagonal shift makes an irreducible nonnegative block
    # primitive, so rho + shift strictly dominates every other eigenvalue
    # modulus.  After balancing (an exact power-of-2 similarity) the mean row
    # sum is a shift on the scale of rho, which keeps the convergence ratio
    # away from 1 for badly scaled input.
    k = block.shape[0]
    balanced, (scaling, _) = matrix_balance(block, permute=False, separate=True)
    shift = float(balanced.sum(axis=1).mean())
    shifted = balanced + shift * np.eye(k)
    x = np.full(k, 1.0 / k)
    best_gap = math.inf
    stall = 0
    est = lo = hi = math.nan
    converged = False
    it = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        for it in range(1, max_iter + 1):
            y = shifted @ x
            ratios = y / x
            lo, hi = float(ratios.min()), float(ratios.max())
            est = float(y.sum())
            x = y / est
            gap = hi - lo
            if gap <= tol * (hi - shift) and not converged:
                # Keep polishing while the bracket still shrinks.
                converged = True
                polish_until = it + _STALL_LIMIT
            if converged:
                if gap < best_gap * (1 - 1e-3) and it < polish_until:
                    best_gap = gap
                    continue
                break
            if gap < best_gap * (1 - 1e-3):
                best_gap, stall = gap, 0
            else:
                stall += 1
                if stall >= _STALL_LIMIT and gap <= math.sqrt(tol) * (hi - shift):
                    converged = True
                    break
    vector = scaling * x
    return est - shift, lo - shift, hi - shift, vector / vector.sum(), it, converged


def spectral_radius(m, tol: float = SPECTRAL_TOL, max_iter: int = SPECTRAL_MAX_ITER) -> SpectralResult:
    """Spectral radius of a nonnegative matrix.

    The matrix is split into strongly connected blocks (its Frobenius normal
    form); the radius is the largest Perron root among the diagonal blocks,
    each found by shifted power iteration.  ``tol`` bounds the relative width
    of the Collatz-Wielandt bracket at convergence.
    """
    a = _as_square(m)
    if (a < 0).any():
        i, j = np.argwhere(a < 0)[0]
        raise NonNegativityViolated(f"entry ({i}, {j}) = {a[i, j]!r} is negative")
    k = a.shape[0]
    if k == 0:
        return SpectralResult(0.0, 0.0, 0.0, np.empty(0), 0, True)
    pattern = a.copy()
    np.fill_diagonal(pattern, 0.0)
    n_comp, labels = connected_components(csr_matrix(pattern != 0), directed=True, connection="strong")

    best = (-math.inf, -math.inf, -math.inf)
    vector = None
    iterations = 0
    converged = True
    for comp in range(n_comp):
        idx = np.flatnonzero(labels == comp)
        block = a[np.ix_(idx, idx)]
        if len(idx) == 1:
            r = lo = hi = float(block[0, 0])
            vec = np.ones(1)
        else:
            r, lo, hi, vec, its, ok = _perron_block(block, tol, max_iter)
            iterations += its
            converged = converged and ok
        if r > best[0]:
            best = (r, lo, hi)
        if n_comp == 1:
            vector = vec
    radius, lower, upper = best
    return SpectralResult(radius, max(lower, 0.0), upper, vector, iterations, converged)


def scaled_shift_radius(c, alpha: float) -> float:
    """``rho(alpha * (C - I))`` for a complete PC matrix, as ``alpha * (rho(C) - 1)``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    values = getattr(c, "values", c)
    return alpha * (spectral_radius(values).radius - 1.0)


def solve(a, b, singular_tol: float = SINGULAR_TOL) -> SolveResult:
    """Gaussian elimination with partial pivoting.

    A pivot counts as zero when it is below ``singular_tol`` times the largest
    absolute coefficient of its original row; the system is then reported
    singular (``solution is None``).
    """
    a = _as_square(a)
    b = np.array(b, dtype=float).reshape(-1)
    k = a.shape[0]
    if b.shape != (k,):
        raise DimensionMismatch(f"{k}x{k} matrix with right-hand side of length {b.size}")
    scale = np.abs(a).max(axis=1) if k else np.empty(0)

    if k == 1:
        floor = abs(a[0, 0]) / scale[0] if scale[0] > 0 else 0.0
        if floor < singular_tol:
            return SolveResult(None, floor, singular_tol)
        return SolveResult(b / a[0, 0], floor, singular_tol)

    perm = np.arange(k)
    floor = math.inf
    for col in range(k):
        p = col + int(np.argmax(np.abs(a[col:, col])))
        if p != col:
            a[[col, p]] = a[[p, col]]
            b[[col, p]] = b[[p, col]]
            perm[[col, p]] = perm[[p, col]]
        s = scale[perm[col]]
        ratio = abs(a[col, col]) / s if s > 0 else 0.0
        floor = min(floor, ratio)
        if ratio < singular_tol:
            return SolveResult(None, floor, singular_tol)
        factors = a[col + 1:, col] / a[col, col]
        a[col + 1:, col:] -= np.outer(factors, a[col, col:])
        b[col + 1:] -= factors * b[col]

    x = np.empty(k)
    for i in range(k - 1, -1, -1):
        x[i] = (b[i] - a[i, i + 1:] @ x[i + 1:]) / a[i, i]
    return SolveResult(x, floor, singular_tol)


def gershgorin_excludes_zero(m) -> bool:
    """True iff every Gershgorin disc misses the origin (strict row dominance)."""
    a = np.abs(_as_square(m))
    diag = np.diag(a).copy()
    np.fill_diagonal(a, 0.0)
    radii = a.sum(axis=1)
    return bool((diag > radii).all())
