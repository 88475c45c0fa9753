"""Pairwise-comparison matrices, their comparison graphs and HRE problems.

Missing comparisons are stored as ``nan`` in a read-only float array; on input
``None`` and ``"?"`` both mean Missing.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidMatrix, ProblemError

RECIPROCITY_TOL = 1e-9


def _cell_value(x) -> float:
    if x is None or (isinstance(x, str) and x.strip() == "?"):
        return math.nan
    return float(x)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PCMatrix:
    """An n x n comparison matrix; ``nan`` marks a Missing comparison.

    Construction never checks the pairwise-comparison invariants, so that
    :func:`validate` can report every violation as data.  Use
    :meth:`checked` to raise instead.
    """

    values: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        rows = self.values
        if not isinstance(rows, np.ndarray):
            rows = [[_cell_value(x) for x in row] for row in rows]
        values = np.array(rows, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"comparison matrix must be square, got shape {values.shape}")
        n = values.shape[0]
        labels = tuple(self.labels) if self.labels else tuple(f"a{i + 1}" for i in range(n))
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for a {n}x{n} matrix")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_upper_triangle(cls, rows, labels: Sequence[str] = ()) -> "PCMatrix":
        """Build a reciprocal matrix from the cells above the diagonal.

        Cells on and below the diagonal are ignored; the lower triangle is
        filled with exact reciprocals and the diagonal with ones.
        """
        n = len(rows)
        values = np.ones((n, n))
        for i in range(n):
            if len(rows[i]) != n:
                raise ValueError("comparison matrix must be square")
            for j in range(i + 1, n):
                v = _cell_value(rows[i][j])
                values[i, j] = v
                values[j, i] = 1.0 / v
        return cls(values, tuple(labels))

    @classmethod
    def from_weights(cls, weights, labels: Sequence[str] = ()) -> "PCMatrix":
        """The consistent matrix ``c_ij = w_i / w_j``."""
        w = np.asarray(weights, dtype=float)
        return cls(w[:, None] / w[None, :], tuple(labels))

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def known(self) -> np.ndarray:
        return ~np.isnan(self.values)

    @property
    def is_complete(self) -> bool:
        return bool(self.known.all())

    def cell(self, i: int, j: int) -> float | None:
        v = self.values[i, j]
        return None if math.isnan(v) else float(v)

    def submatrix(self, indices: Sequence[int]) -> "PCMatrix":
        idx = list(indices)
        return PCMatrix(self.values[np.ix_(idx, idx)], tuple(self.labels[i] for i in idx))

    def permuted(self, order: Sequence[int]) -> "PCMatrix":
        return self.submatrix(order)

    def without(self, pairs: Iterable[tuple[int, int]]) -> "PCMatrix":
        """Copy with the given pairs (and their mirrors) set to Missing."""
        values = self.values.copy()
        for i, j in pairs:
            values[i, j] = values[j, i] = math.nan
        return PCMatrix(values, self.labels)

    def to_rows(self) -> list[list[float | None]]:
        return [[self.cell(i, j) for j in range(self.n)] for i in range(self.n)]

    def checked(self) -> "PCMatrix":
        violations = validate(self)
        if violations:
            raise InvalidMatrix(violations)
        return self


@dataclass(frozen=True)
class Violation:
    kind: str  # diagonal | nonpositive | nonfinite | asymmetric_missing | reciprocity
    cells: tuple[tuple[int, int], ...]
    message: str


def validate(matrix: PCMatrix) -> list[Violation]:
    """Return every broken PC-matrix invariant; an empty list means valid."""
    c = matrix.values
    lab = matrix.labels
    found = []
    for i in range(matrix.n):
        if c[i, i] != 1.0:
            what = "Missing" if math.isnan(c[i, i]) else repr(float(c[i, i]))
            found.append(Violation("diagonal", ((i, i),), f"diagonal cell ({lab[i]},{lab[i]}) is {what}, expected 1"))
    for i in range(matrix.n):
        for j in range(matrix.n):
            if i == j or math.isnan(c[i, j]):
                continue
            if math.isinf(c[i, j]):
                found.append(Violation("nonfinite", ((i, j),), f"cell ({lab[i]},{lab[j]}) is not finite"))
            elif c[i, j] <= 0:
                found.append(Violation("nonpositive", ((i, j),), f"cell ({lab[i]},{lab[j]}) = {c[i, j]!r} is not positive"))
    for i in range(matrix.n):
        for j in range(i + 1, matrix.n):
            a, b = float(c[i, j]), float(c[j, i])
            if math.isnan(a) != math.isnan(b):
                found.append(Violation(
                    "asymmetric_missing", ((i, j), (j, i)),
                    f"({lab[i]},{lab[j]}) and ({lab[j]},{lab[i]}) must be both known or both Missing"))
            elif not math.isnan(a) and math.isfinite(a * b) and a > 0 and b > 0:
                prod = a * b
                if abs(prod - 1.0) > RECIPROCITY_TOL * max(1.0, prod):
                    found.append(Violation(
                        "reciprocity", ((i, j), (j, i)),
                        f"({lab[i]},{lab[j]}) * ({lab[j]},{lab[i]}) = {prod!r}, expected 1"))
    return found


@dataclass(frozen=True)
class ComparisonGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def successors(self) -> list[list[int]]:
        out = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            out[i].append(j)
        return out


def comparison_graph(matrix: PCMatrix) -> ComparisonGraph:
    rows, cols = np.nonzero(matrix.known)
    edges = frozenset((int(i), int(j)) for i, j in zip(rows, cols) if i != j)
    return ComparisonGraph(matrix.n, edges)


def _reaches_all(adj: list[list[int]], start: int) -> bool:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(adj)


def is_irreducible(graph: ComparisonGraph) -> bool:
    """Strong connectivity: vertex 0 reaches everything, forwards and backwards."""
    if graph.n <= 1:
        return True
    forward = graph.successors()
    backward = [[] for _ in range(graph.n)]
    for i, j in graph.edges:
        backward[j].append(i)
    return _reaches_all(forward, 0) and _reaches_all(backward, 0)


@dataclass(frozen=True)
class MissingCounts:
    rows: tuple[int, ...]
    counts: tuple[int, ...]

    @property
    def s_max(self) -> int:
        return max(self.counts)

    @property
    def s_min(self) -> int:
        return min(self.counts)


def missing_counts(matrix: PCMatrix, rows: Sequence[int] | None = None,
                   columns: Sequence[int] | None = None) -> MissingCounts:
    """Count Missing off-diagonal cells of each requested row.

    ``columns`` is the scope of the count: all n columns by default (the
    count used by the HRE coefficient matrices), or e.g. ``columns=rows`` for
    the count inside a square sub-block.
    """
    rows = tuple(range(matrix.n)) if rows is None else tuple(rows)
    cols = range(matrix.n) if columns is None else columns
    cols = list(cols)
    missing = np.isnan(matrix.values)
    counts = tuple(int(sum(missing[i, j] for j in cols if j != i)) for i in rows)
    return MissingCounts(rows, counts)


@dataclass(frozen=True, eq=False)
class HreProblem:
    """A comparison matrix split into unknown and reference alternatives.

    ``unknowns`` keeps the caller's order; it decides the order of the
    assembled linear systems.  ``references`` maps matrix index to weight.
    """

    matrix: PCMatrix
    unknowns: tuple[int, ...]
    references: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        self.matrix.checked()
        n = self.matrix.n
        unknowns = tuple(int(i) for i in self.unknowns)
        refs = {int(i): float(w) for i, w in dict(self.references).items()}
        object.__setattr__(self, "unknowns", unknowns)
        object.__setattr__(self, "references", refs)
        if len(set(unknowns)) != len(unknowns):
            raise ProblemError("duplicate unknown alternative")
        if not unknowns:
            raise ProblemError("at least one unknown alternative is required")
        if not refs:
            raise ProblemError("at least one reference alternative is required")
        if set(unknowns) & set(refs):
            raise ProblemError("an alternative cannot be both unknown and reference")
        if set(unknowns) | set(refs) != set(range(n)):
            raise ProblemError("unknowns and references must cover every alternative exactly once")
        for i, w in refs.items():
            if not (math.isfinite(w) and w > 0):
                raise ProblemError(f"reference weight of {self.matrix.labels[i]} must be positive, got {w!r}")

    @classmethod
    def from_labels(cls, matrix: PCMatrix, reference: Mapping[str, float],
                    unknowns: Sequence[str] | None = None) -> "HreProblem":
        index = {name: i for i, name in enumerate(matrix.labels)}
        for name in list(reference) + list(unknowns or ()):
            if name not in index:
                raise ProblemError(f"unknown alternative name {name!r}")
        refs = {index[name]: w for name, w in reference.items()}
        if unknowns is None:
            order = [i for i in range(matrix.n) if i not in refs]
        else:
            order = [index[name] for name in unknowns]
        return cls(matrix, tuple(order), refs)

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def k(self) -> int:
        return len(self.unknowns)

    @property
    def reference_indices(self) -> tuple[int, ...]:
        return tuple(sorted(self.references))

    @property
    def order(self) -> tuple[int, ...]:
        """Unknowns first (caller order), then references by index."""
        return self.unknowns + self.reference_indices

    def canonical(self) -> tuple[np.ndarray, np.ndarray]:
        """Matrix permuted to unknowns-first order, and the reference weights."""
        order = list(self.order)
        c = self.matrix.values[np.ix_(order, order)]
        w = np.array([self.references[i] for i in self.reference_indices])
        return c, w
