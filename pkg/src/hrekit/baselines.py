"""Classic prioritization methods for side-by-side comparison with HRE.

All four return priority vectors normalized to sum 1.
"""

from __future__ import annotations

import numpy as np

from .consistency import harker_matrix
from .errors import MatrixIncomplete, NotIrreducible
from .hre import PriorityVector
from .numerics import solve, spectral_radius
from .pcm import PCMatrix, comparison_graph, is_irreducible


def _vector(c: PCMatrix, w: np.ndarray) -> PriorityVector:
    return PriorityVector(w / w.sum(), (True,) * c.n, c.labels)


def _require_complete(c: PCMatrix):
    if not c.is_complete:
        raise MatrixIncomplete("method needs a complete matrix")


def _require_irreducible(c: PCMatrix):
    if not is_irreducible(comparison_graph(c)):
        raise NotIrreducible("the comparison graph is not strongly connected")


def evm(c: PCMatrix) -> PriorityVector:
    """Principal eigenvector method."""
    _require_complete(c)
    return _vector(c, spectral_radius(c.values).vector)


def gmm(c: PCMatrix) -> PriorityVector:
    """Row geometric means."""
    _require_complete(c)
    return _vector(c, np.exp(np.log(c.values).mean(axis=1)))


def harker_evm(c: PCMatrix) -> PriorityVector:
    """Eigenvector of Harker's auxiliary matrix; equals :func:`evm` on complete input."""
    _require_irreducible(c)
    return _vector(c, spectral_radius(harker_matrix(c)).vector)


def incomplete_gmm(c: PCMatrix) -> PriorityVector:
    """Logarithmic least squares over the known comparisons.

    The normal equations form a graph-Laplacian system, singular by one; the
    first log-weight is pinned to 0 and normalization removes the anchor.
    """
    _require_irreducible(c)
    known = c.known.copy()
    np.fill_diagonal(known, False)
    logc = np.where(known, np.log(np.where(known, c.values, 1.0)), 0.0)
    laplacian = np.diag(known.sum(axis=1).astype(float)) - known
    r = logc.sum(axis=1)
    x = np.zeros(c.n)
    if c.n > 1:
        x[1:] = solve(laplacian[1:, 1:], r[1:]).solution
    return _vector(c, np.exp(x - x.max()))
