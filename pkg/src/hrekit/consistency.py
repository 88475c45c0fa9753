"""Saaty and Harker consistency indices, and the consistent completion."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import HasAllMissingRow, HasMissingEntries, NotConsistent, NotIrreducible
from .numerics import SpectralResult, spectral_radius
from .pcm import PCMatrix, comparison_graph, is_irreducible

CONSISTENCY_TOL = 1e-8


@dataclass(frozen=True)
class ConsistencyReport:
    index_value: float
    kind: str  # "saaty" | "harker"
    dimension: int
    radius_used: float
    spectral: SpectralResult | None = None

    @property
    def index_upper(self) -> float:
        """Index computed from the upper Collatz-Wielandt bound on the radius."""
        if self.spectral is None:
            return self.index_value
        return (self.spectral.upper - self.dimension) / (self.dimension - 1)


def _index(matrix: np.ndarray, n: int, kind: str) -> ConsistencyReport:
    res = spectral_radius(matrix)
    return ConsistencyReport((res.radius - n) / (n - 1), kind, n, res.radius, res)


def saaty_ci(c: PCMatrix) -> ConsistencyReport:
    """``(rho(C) - n) / (n - 1)`` for a complete matrix."""
    if not c.is_complete:
        raise HasMissingEntries("Saaty's CI needs a complete matrix; use harker_ci")
    if c.n < 2:
        raise ValueError("consistency index needs n >= 2")
    return _index(harker_matrix(c), c.n, "saaty")


def harker_matrix(c: PCMatrix) -> np.ndarray:
    """Missing cells become 0 and each diagonal cell becomes 1 + (Missing count of its row)."""
    values = c.values
    missing = np.isnan(values)
    h = np.where(missing, 0.0, values)
    np.fill_diagonal(h, 1.0 + missing.sum(axis=1))
    return h


def harker_ci(c: PCMatrix, require_irreducible: bool = True) -> ConsistencyReport:
    """Harker's index ``(rho(H) - n) / (n - 1)``; equals Saaty's CI on complete input.

    With ``require_irreducible=False`` the index is still computed for a
    reducible matrix (the spectral radius remains well defined), which the
    applicability checks rely on for sub-blocks.
    """
    if c.n < 2:
        raise ValueError("consistency index needs n >= 2")
    if require_irreducible:
        missing = np.isnan(c.values).sum(axis=1)
        full = np.flatnonzero(missing == c.n - 1)
        if full.size:
            raise HasAllMissingRow(f"row {c.labels[full[0]]} has no known comparisons")
        if not is_irreducible(comparison_graph(c)):
            raise NotIrreducible("Harker's index needs an irreducible matrix")
    kind = "saaty" if c.is_complete else "harker"
    return _index(harker_matrix(c), c.n, kind)


def _tree_weights(c: PCMatrix, root: int) -> np.ndarray:
    values = c.values
    known = c.known
    w = np.full(c.n, math.nan)
    w[root] = 1.0
    queue = deque([root])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(known[i]):
            if math.isnan(w[j]):
                # c_ij = w_i / w_j
                w[j] = w[i] / values[i, j]
                queue.append(j)
    return w


def consistent_completion(c: PCMatrix, root: int = 0, tol: float = CONSISTENCY_TOL) -> PCMatrix:
    """Fill every Missing cell with the product of known entries along a path.

    Paths follow a breadth-first spanning tree from ``root``; every known
    entry is then checked against the ratio the tree implies.
    """
    if not is_irreducible(comparison_graph(c)):
        raise NotIrreducible("only an irreducible matrix has a unique consistent completion")
    w = _tree_weights(c, root)
    implied = w[:, None] / w[None, :]
    known = c.known
    observed = np.where(known, c.values, implied)
    bad = np.argwhere(np.abs(observed - implied) > tol * implied)
    if bad.size:
        i, j = bad[0]
        raise NotConsistent(
            f"comparison ({c.labels[i]},{c.labels[j]}) = {c.values[i, j]!r} "
            f"contradicts the path product {implied[i, j]!r}")
    completed = np.where(known, c.values, implied)
    return PCMatrix(completed, c.labels)
