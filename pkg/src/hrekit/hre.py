"""Heuristic Rating Estimation: system assembly, solvability certificates, ranking.

Every assembler works on the problem permuted to unknowns-first order; the
rows and columns of the returned system follow ``problem.unknowns``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .consistency import harker_ci, saaty_ci
from .errors import (IsolatedRow, MatrixIncomplete, NonpositiveEntry,
                     NonpositiveSolution, NotIrreducible, SingularSystem)
from .numerics import SINGULAR_TOL, SolveResult, gershgorin_excludes_zero, solve
from .pcm import HreProblem, comparison_graph, is_irreducible, missing_counts

# Verdicts need the index to clear the threshold by this relative margin;
# both known singular examples sit exactly on their threshold.
DECISION_MARGIN = 1e-9
REFERENCE_TOL = 1e-8

GUARANTEED = "Guaranteed"
NOT_GUARANTEED = "NotGuaranteed"


class Variant(str, Enum):
    ARITHMETIC_COMPLETE = "arithmetic-complete"
    ARITHMETIC_INCOMPLETE = "arithmetic-incomplete"
    GEOMETRIC_COMPLETE = "geometric-complete"
    GEOMETRIC_INCOMPLETE = "geometric-incomplete"

    @property
    def geometric(self) -> bool:
        return self.value.startswith("geometric")


class Theorem(str, Enum):
    COMPLETE_ARITHMETIC = "complete-arithmetic"
    INCOMPLETE_ARITHMETIC = "incomplete-arithmetic"
    COROLLARY_EQUAL_MISSING = "corollary-equal-missing"
    COROLLARY_HALF_N = "corollary-half-n"
    GEOMETRIC_ALWAYS = "geometric-always"


@dataclass(frozen=True, eq=False)
class LinearSystem:
    coefficients: np.ndarray
    rhs: np.ndarray
    variant: Variant
    unknowns: tuple[int, ...]


@dataclass(frozen=True)
class ApplicabilityReport:
    theorem: Theorem
    verdict: str
    n: int
    k: int
    ci_value: float | None = None
    threshold: float | None = None
    margin: float = DECISION_MARGIN
    s_max: int | None = None
    s_min: int | None = None
    candidates: tuple[tuple[Theorem, float], ...] = ()
    note: str = ""

    @property
    def guaranteed(self) -> bool:
        return self.verdict == GUARANTEED

    @property
    def slack(self) -> float | None:
        if self.ci_value is None or self.threshold is None:
            return None
        return self.threshold - self.ci_value


@dataclass(frozen=True, eq=False)
class PriorityVector:
    weights: np.ndarray
    computed: tuple[bool, ...]
    labels: tuple[str, ...]

    def normalized(self) -> np.ndarray:
        return self.weights / self.weights.sum()

    def as_dict(self) -> dict[str, float]:
        return {name: float(w) for name, w in zip(self.labels, self.weights)}


@dataclass(frozen=True, eq=False)
class RankResult:
    priorities: PriorityVector
    report: ApplicabilityReport
    system: LinearSystem
    solve: SolveResult
    nonpositive: bool = False
    warnings: tuple[str, ...] = field(default=())


def _canonical(p: HreProblem):
    c, wref = p.canonical()
    return c, wref, p.k, p.n


def _require_complete(p: HreProblem):
    if not p.matrix.is_complete:
        raise MatrixIncomplete("the complete-case assembler needs every comparison; "
                               "use the incomplete variant")


def _row_denominators(p: HreProblem) -> np.ndarray:
    """``n - s_i - 1`` per unknown row, s_i counted over all n columns."""
    if not is_irreducible(comparison_graph(p.matrix)):
        raise NotIrreducible("the comparison graph is not strongly connected; "
                             "no ranking can be derived")
    s = np.array(missing_counts(p.matrix, p.unknowns).counts)
    den = p.n - s - 1.0
    if (den < 1).any():
        i = p.unknowns[int(np.argmin(den))]
        raise IsolatedRow(f"alternative {p.matrix.labels[i]} has no known comparisons")
    return den


def _arithmetic(c, wref, k, den, variant, p) -> LinearSystem:
    d = np.where(np.isnan(c), 0.0, c)
    a = -(d[:k, :k] / den[:, None])
    np.fill_diagonal(a, 1.0)
    b = (d[:k, k:] @ wref) / den
    return LinearSystem(a, b, variant, p.unknowns)


def _geometric(c, wref, k, den, variant, p) -> LinearSystem:
    known = ~np.isnan(c)
    a = -known[:k, :k].astype(float)
    np.fill_diagonal(a, den)
    logc = np.log(np.where(known, c, 1.0))
    b = logc[:k].sum(axis=1) + known[:k, k:] @ np.log(wref)
    return LinearSystem(a, b, variant, p.unknowns)


def assemble_arithmetic_complete(p: HreProblem) -> LinearSystem:
    _require_complete(p)
    c, wref, k, n = _canonical(p)
    return _arithmetic(c, wref, k, np.full(k, n - 1.0), Variant.ARITHMETIC_COMPLETE, p)


def assemble_arithmetic_incomplete(p: HreProblem) -> LinearSystem:
    den = _row_denominators(p)
    c, wref, k, n = _canonical(p)
    return _arithmetic(c, wref, k, den, Variant.ARITHMETIC_INCOMPLETE, p)


def assemble_geometric_complete(p: HreProblem) -> LinearSystem:
    _require_complete(p)
    c, wref, k, n = _canonical(p)
    if (c <= 0).any():
        raise NonpositiveEntry("logarithm of a nonpositive comparison")
    return _geometric(c, wref, k, np.full(k, n - 1.0), Variant.GEOMETRIC_COMPLETE, p)


def assemble_geometric_incomplete(p: HreProblem) -> LinearSystem:
    den = _row_denominators(p)
    c, wref, k, n = _canonical(p)
    return _geometric(c, wref, k, den, Variant.GEOMETRIC_INCOMPLETE, p)


def select_variant(p: HreProblem, method: str = "arithmetic") -> Variant:
    if method not in ("arithmetic", "geometric"):
        raise ValueError(f"method must be 'arithmetic' or 'geometric', got {method!r}")
    suffix = "complete" if p.matrix.is_complete else "incomplete"
    return Variant(f"{method}-{suffix}")


def assemble(p: HreProblem, variant: Variant | str = "arithmetic") -> LinearSystem:
    if not isinstance(variant, Variant):
        variant = Variant(variant) if "-" in variant else select_variant(p, variant)
    return {
        Variant.ARITHMETIC_COMPLETE: assemble_arithmetic_complete,
        Variant.ARITHMETIC_INCOMPLETE: assemble_arithmetic_incomplete,
        Variant.GEOMETRIC_COMPLETE: assemble_geometric_complete,
        Variant.GEOMETRIC_INCOMPLETE: assemble_geometric_incomplete,
    }[variant](p)


def _clears(ci_upper: float, threshold: float, margin: float) -> bool:
    return ci_upper < threshold - margin * max(1.0, abs(threshold))


def check_applicability(p: HreProblem, variant: Variant | str = "arithmetic",
                        margin: float = DECISION_MARGIN) -> ApplicabilityReport:
    """Evaluate the sufficient conditions for a unique HRE solution.

    For the incomplete arithmetic variant the threshold is
    ``(n - k - s_max + s_min) / (k - 1)`` where ``s_min`` counts Missing
    cells inside the unknown block and ``s_max`` counts them over full rows
    (the count that scales the coefficient matrix).  The two counts agree
    whenever every unknown/reference comparison is known.
    """
    if not isinstance(variant, Variant):
        variant = Variant(variant) if "-" in variant else select_variant(p, variant)
    n, k = p.n, p.k

    if variant.geometric:
        note = "the geometric system is always uniquely solvable"
        if variant is Variant.GEOMETRIC_INCOMPLETE:
            a = assemble_geometric_incomplete(p).coefficients
            if not gershgorin_excludes_zero(a):
                note += ("; some unknown has no reference comparison, so its Gershgorin "
                         "disc touches 0 (invertibility then rests on irreducibility)")
        return ApplicabilityReport(Theorem.GEOMETRIC_ALWAYS, GUARANTEED, n, k, note=note)

    complete = variant is Variant.ARITHMETIC_COMPLETE
    main = Theorem.COMPLETE_ARITHMETIC if complete else Theorem.INCOMPLETE_ARITHMETIC
    if k == 1:
        return ApplicabilityReport(main, GUARANTEED, n, k, note="a single unknown always gives a unique solution")

    block = p.matrix.submatrix(p.unknowns)
    if complete:
        ci = saaty_ci(block)
        candidates = ((main, (n - k) / (k - 1)),)
        s_max = s_min = None
        note = ""
    else:
        ci = harker_ci(block, require_irreducible=False)
        s_min = missing_counts(p.matrix, p.unknowns, columns=p.unknowns).s_min
        s_max = missing_counts(p.matrix, p.unknowns).s_max
        candidates = [(main, (n - k - s_max + s_min) / (k - 1))]
        if s_max == s_min:
            candidates.append((Theorem.COROLLARY_EQUAL_MISSING, (n - k) / (k - 1)))
        if 2 * k <= n + 1 and s_max - s_min <= k - 2:
            candidates.append((Theorem.COROLLARY_HALF_N, (n - 2 * k + 2) / (k - 1)))
        candidates = tuple(candidates)
        note = "" if is_irreducible(comparison_graph(block)) else "the unknown block is reducible"

    theorem, threshold = max(candidates, key=lambda t: t[1])
    verdict = GUARANTEED if _clears(ci.index_upper, threshold, margin) else NOT_GUARANTEED
    if verdict == NOT_GUARANTEED and abs(ci.index_value - threshold) <= margin * max(1.0, abs(threshold)):
        note = "; ".join(filter(None, [note, "index attains the threshold"]))
    return ApplicabilityReport(theorem, verdict, n, k, ci.index_value, threshold, margin,
                               s_max, s_min, candidates, note)


def reference_warnings(p: HreProblem, tol: float = REFERENCE_TOL) -> tuple[str, ...]:
    """Known comparisons between references that disagree with their weight ratio."""
    out = []
    refs = p.reference_indices
    lab = p.matrix.labels
    for a in refs:
        for b in refs:
            c = p.matrix.cell(a, b)
            if a < b and c is not None:
                ratio = p.references[a] / p.references[b]
                if abs(c - ratio) > tol * ratio:
                    out.append(f"reference comparison ({lab[a]},{lab[b]}) = {c:.6g} differs "
                               f"from the weight ratio {ratio:.6g}")
    return tuple(out)


def rank(p: HreProblem, method: str = "arithmetic", strict: bool = False,
         singular_tol: float = SINGULAR_TOL) -> RankResult:
    """Assemble, certify and solve; return weights for all n alternatives."""
    variant = select_variant(p, method)
    system = assemble(p, variant)
    report = check_applicability(p, variant)
    res = solve(system.coefficients, system.rhs, singular_tol)
    if res.singular:
        detail = ""
        if report.ci_value is not None:
            detail = f"; CI {report.ci_value:.6g} vs threshold {report.threshold:.6g} ({report.verdict})"
        raise SingularSystem(
            f"SingularSystem: the {variant.value} system is numerically singular "
            f"(smallest scaled pivot {res.pivot_floor:.3g} < {singular_tol:.3g}){detail}",
            report=report, pivot_floor=res.pivot_floor)

    x = np.exp(res.solution) if variant.geometric else res.solution
    weights = np.empty(p.n)
    weights[list(p.unknowns)] = x
    for i, w in p.references.items():
        weights[i] = w
    nonpositive = bool((x <= 0).any() or not np.isfinite(x).all())
    if nonpositive and strict:
        bad = [p.matrix.labels[i] for i, v in zip(p.unknowns, x) if not v > 0]
        raise NonpositiveSolution(f"NonpositiveSolution: non-positive weight for {', '.join(bad)}")
    computed = tuple(i in set(p.unknowns) for i in range(p.n))
    priorities = PriorityVector(weights, computed, p.matrix.labels)
    return RankResult(priorities, report, system, res, nonpositive, reference_warnings(p))
