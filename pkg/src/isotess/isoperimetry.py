"""Brute-force oracles and certified bound assembly for isoperimetric constants.

The metric isoperimetric constant is the infimum of
deg(boundary S) / mes(S) over finite connected subgraphs S; the
combinatorial one replaces subgraphs by finite vertex sets.  Both are
approached from above by canonical enumeration and from below by the
curvature estimates.  Enumeration uses an ESU-style canonical-augmentation
scheme: every connected subset is visited exactly once in a fixed order,
so partitioning the stream over workers can neither duplicate nor skip,
and all reductions are schedule-independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .curvature import CurvatureReport, global_constants
from .errors import (
    BudgetExceeded,
    FrontierContact,
    NonPositiveEllMin,
    OutOfRange,
)
from .graphcore import (
    MetricGraph,
    SubgraphSelection,
    complete_closure,
    subgraph_stats,
)
from .rational import INF


@dataclass(frozen=True)
class Budget:
    """Enumeration limits: subgraph edge count, generator vertices, hard cap."""

    max_edges: int = 6
    max_generators: int = 4
    max_yield: int = 2_000_000

    def __post_init__(self):
        if self.max_edges < 1 or self.max_generators < 1 or self.max_yield < 1:
            raise ValueError("budget fields must be positive")


@dataclass(frozen=True)
class Bound:
    """One bound on an isoperimetric constant, with provenance.

    ``target`` is "alpha" or "alpha_S" (the star-like-complete restricted
    constant); a lower bound on alpha is also one on alpha_S, not vice
    versa.  ``certified`` marks bounds valid for the underlying infinite
    graph; observed/empirical bounds carry certified=False.
    """

    value: Fraction | float
    provenance: str
    side: str  # "lower" | "upper"
    certified: bool
    target: str = "alpha"
    witness: tuple[int, ...] | None = None
    note: str = ""


# ---------------------------------------------------------------------------
# canonical enumeration of connected edge subsets
# ---------------------------------------------------------------------------

class _EdgeScanner:
    """Visits every connected subset of the eligible edges exactly once.

    The visitor receives (stack, boundary_degree, measure, index) where
    ``stack`` is the current edge-index list (do not mutate / keep).
    """

    def __init__(self, g: MetricGraph, eligible: Sequence[int]):
        self.g = g
        self.edge_ids = sorted(eligible)
        self.m = len(self.edge_ids)
        vid: dict[int, int] = {}
        ends = []
        for e in self.edge_ids:
            a, b = g.edge_ends[e]
            for v in (a, b):
                if v not in vid:
                    vid[v] = len(vid)
            ends.append((vid[a], vid[b]))
        self.ends = ends
        self.lengths = [g.length[e] for e in self.edge_ids]
        self.truedeg = [0] * len(vid)
        for v, i in vid.items():
            td = g.true_degree[v]
            if td is None:
                raise FrontierContact(f"vertex {v} has unknown true degree")
            self.truedeg[i] = td
        nbrs: list[list[int]] = [[] for _ in range(self.m)]
        at_vertex: dict[int, list[int]] = {}
        for i, (a, b) in enumerate(ends):
            at_vertex.setdefault(a, []).append(i)
            at_vertex.setdefault(b, []).append(i)
        for i, (a, b) in enumerate(ends):
            seen = {i}
            for j in at_vertex[a] + at_vertex[b]:
                if j not in seen:
                    seen.add(j)
                    nbrs[i].append(j)
            nbrs[i].sort()
        self.nbrs = nbrs

    def scan(self, max_edges: int, visit: Callable, max_yield: int) -> int:
        m = self.m
        ends = self.ends
        lengths = self.lengths
        truedeg = self.truedeg
        nbrs = self.nbrs
        deg = [0] * len(self.truedeg)
        stack: list[int] = []
        touched = bytearray(m)
        state = {"bd": 0, "mes": Fraction(0), "count": 0}

        def push(i: int) -> None:
            for w in ends[i]:
                d = deg[w]
                td = truedeg[w]
                bd = state["bd"]
                if 0 < d < td:
                    bd -= d
                if d + 1 < td:
                    bd += d + 1
                state["bd"] = bd
                deg[w] = d + 1
            state["mes"] += lengths[i]
            stack.append(i)

        def pop(i: int) -> None:
            for w in ends[i]:
                d = deg[w]
                td = truedeg[w]
                bd = state["bd"]
                if d < td:
                    bd -= d
                if 0 < d - 1 < td:
                    bd += d - 1
                state["bd"] = bd
                deg[w] = d - 1
            state["mes"] -= lengths[i]
            stack.pop()

        def emit() -> None:
            state["count"] += 1
            if state["count"] > max_yield:
                raise BudgetExceeded(
                    f"enumeration exceeded max_yield={max_yield}", state["count"])
            visit(stack, state["bd"], state["mes"], state["count"] - 1)

        def rec(ext: list[int]) -> None:
            emit()
            if len(stack) == max_edges:
                return
            for k, i in enumerate(ext):
                fresh = [j for j in nbrs[i] if not touched[j]]
                for j in fresh:
                    touched[j] = 1
                push(i)
                rec(ext[k + 1:] + fresh)
                pop(i)
                for j in fresh:
                    touched[j] = 0

        for r in range(m):
            touched[r] = 1
            fresh = [j for j in nbrs[r] if not touched[j]]
            for j in fresh:
                touched[j] = 1
            push(r)
            rec(fresh)
            pop(r)
            for j in fresh:
                touched[j] = 0
            # r stays touched: later roots never revisit it
        return state["count"]


def default_eligible_edges(g: MetricGraph) -> list[int]:
    """Frontier-free region: edges with both endpoints away from the frontier."""
    return g.frontier_free_edges()


def scan_connected_edge_subsets(g: MetricGraph, max_edges: int, visit: Callable,
                                eligible_edges: Iterable[int] | None = None,
                                max_yield: int = 2_000_000) -> int:
    """Visitor-style scan for callers that cannot afford materialized sets.

    ``visit(stack, boundary_degree, measure, index)`` runs once per
    connected subset, where ``stack`` holds indices into the sorted
    eligible edge list (translate via its order when edge ids are needed).
    Returns the number of subsets visited.
    """
    eligible = list(eligible_edges) if eligible_edges is not None \
        else default_eligible_edges(g)
    return _EdgeScanner(g, eligible).scan(max_edges, visit, max_yield)


def enumerate_connected_subgraphs(g: MetricGraph, max_edges: int,
                                  max_yield: int = 2_000_000,
                                  eligible_edges: Iterable[int] | None = None):
    """Yield every connected edge subset of size <= max_edges exactly once.

    Subsets are yielded as sorted tuples of edge ids in a canonical,
    partition-stable order.
    """
    eligible = list(eligible_edges) if eligible_edges is not None \
        else default_eligible_edges(g)
    scanner = _EdgeScanner(g, eligible)
    out: list[tuple[int, ...]] = []

    def visit(stack, bd, mes, idx):
        out.append(tuple(sorted(scanner.edge_ids[i] for i in stack)))

    scanner.scan(max_edges, visit, max_yield)
    return out


# ---------------------------------------------------------------------------
# canonical enumeration of connected vertex subsets
# ---------------------------------------------------------------------------

class _VertexScanner:
    """Same canonical-augmentation scheme on vertices."""

    def __init__(self, g: MetricGraph, eligible: Sequence[int]):
        self.g = g
        self.vertex_ids = sorted(eligible)
        allowed = set(self.vertex_ids)
        vidx = {v: i for i, v in enumerate(self.vertex_ids)}
        self.truedeg = []
        for v in self.vertex_ids:
            td = g.true_degree[v]
            if td is None:
                raise FrontierContact(f"vertex {v} has unknown true degree")
            self.truedeg.append(td)
        nbrs: list[list[int]] = []
        for v in self.vertex_ids:
            row = sorted(vidx[g.other_end(e, v)] for e in g.rotation[v]
                         if g.other_end(e, v) in allowed)
            nbrs.append(row)
        self.nbrs = nbrs

    def scan(self, max_size: int, visit: Callable, max_yield: int) -> int:
        n = len(self.vertex_ids)
        nbrs = self.nbrs
        truedeg = self.truedeg
        stack: list[int] = []
        in_set = bytearray(n)
        touched = bytearray(n)
        state = {"sumdeg": 0, "internal": 0, "count": 0}

        def push(i: int) -> None:
            state["sumdeg"] += truedeg[i]
            state["internal"] += sum(in_set[j] for j in nbrs[i])
            in_set[i] = 1
            stack.append(i)

        def pop(i: int) -> None:
            in_set[i] = 0
            state["sumdeg"] -= truedeg[i]
            state["internal"] -= sum(in_set[j] for j in nbrs[i])
            stack.pop()

        def emit() -> None:
            state["count"] += 1
            if state["count"] > max_yield:
                raise BudgetExceeded(
                    f"enumeration exceeded max_yield={max_yield}", state["count"])
            visit(stack, state["sumdeg"], state["internal"], state["count"] - 1)

        def rec(ext: list[int]) -> None:
            emit()
            if len(stack) == max_size:
                return
            for k, i in enumerate(ext):
                fresh = [j for j in nbrs[i] if not touched[j]]
                for j in fresh:
                    touched[j] = 1
                push(i)
                rec(ext[k + 1:] + fresh)
                pop(i)
                for j in fresh:
                    touched[j] = 0

        for r in range(n):
            touched[r] = 1
            fresh = [j for j in nbrs[r] if not touched[j]]
            for j in fresh:
                touched[j] = 1
            push(r)
            rec(fresh)
            pop(r)
            for j in fresh:
                touched[j] = 0
        return state["count"]


# ---------------------------------------------------------------------------
# star-like complete enumeration
# ---------------------------------------------------------------------------

def enumerate_starlike_complete(g: MetricGraph, max_generators: int,
                                generators_from: Iterable[int] | None = None,
                                max_yield: int = 2_000_000
                                ) -> tuple[list[SubgraphSelection], int]:
    """All star-like complete subgraphs from <= max_generators generators.

    Connected generator sets U are enumerated over the frontier-free region
    (or ``generators_from``); each union of stars is closed up and
    deduplicated by edge set.  Candidates whose closure escapes the safe
    region are skipped and counted; returns (selections, skipped).
    """
    eligible = list(generators_from) if generators_from is not None \
        else g.frontier_free_vertices()
    scanner = _VertexScanner(g, eligible)
    vertex_sets: list[tuple[int, ...]] = []

    def visit(stack, sumdeg, internal, idx):
        vertex_sets.append(tuple(scanner.vertex_ids[i] for i in stack))

    scanner.scan(max_generators, visit, max_yield)

    seen: set[frozenset[int]] = set()
    out: list[SubgraphSelection] = []
    skipped = 0
    for U in vertex_sets:
        edges: set[int] = set()
        for v in U:
            edges.update(g.rotation[v])
        try:
            sel = complete_closure(g, subgraph_stats(g, edges))
        except FrontierContact:
            skipped += 1
            continue
        if sel.edges in seen:
            continue
        seen.add(sel.edges)
        out.append(sel)
    return out, skipped


# ---------------------------------------------------------------------------
# brute-force upper bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BruteForceResult:
    bound: Bound
    enumerated: int


def alpha_upper_bruteforce(g: MetricGraph, budget: Budget,
                           eligible_edges: Iterable[int] | None = None,
                           workers: int = 1,
                           proper_only: bool = False) -> BruteForceResult:
    """min deg(bd S)/mes(S) over enumerated connected subgraphs.

    A certified upper bound on alpha whenever the true-degree data is
    honest.  The witness is the lexicographically smallest sorted edge-id
    sequence among the minimizers, independent of the worker partition.
    ``proper_only`` skips subgraphs with empty boundary (the whole graph).
    """
    eligible = list(eligible_edges) if eligible_edges is not None \
        else default_eligible_edges(g)
    scanner = _EdgeScanner(g, eligible)
    # one accumulator per worker; stream routed by canonical index
    best: list[tuple[Fraction, tuple[int, ...]] | None] = [None] * workers

    def visit(stack, bd, mes, idx):
        if proper_only and bd == 0:
            return
        w = idx % workers
        ratio = Fraction(bd) / mes
        cur = best[w]
        if cur is None or ratio < cur[0]:
            best[w] = (ratio, tuple(sorted(scanner.edge_ids[i] for i in stack)))
        elif ratio == cur[0]:
            witness = tuple(sorted(scanner.edge_ids[i] for i in stack))
            if witness < cur[1]:
                best[w] = (ratio, witness)

    count = scanner.scan(budget.max_edges, visit, budget.max_yield)
    merged = None
    for item in best:
        if item is None:
            continue
        if merged is None or item[0] < merged[0] or \
                (item[0] == merged[0] and item[1] < merged[1]):
            merged = item
    if merged is None:
        raise BudgetExceeded("no subgraph enumerated", 0)
    bound = Bound(value=merged[0], provenance="bruteforce_upper", side="upper",
                  certified=True, witness=merged[1],
                  note=f"min over {count} connected subgraphs "
                       f"(<= {budget.max_edges} edges)")
    return BruteForceResult(bound=bound, enumerated=count)


@dataclass(frozen=True)
class CombUpperResult:
    value: Fraction
    witness_vertices: tuple[int, ...]
    enumerated: int


def alpha_comb_upper_bruteforce(g: MetricGraph, budget: Budget,
                                eligible_vertices: Iterable[int] | None = None
                                ) -> CombUpperResult:
    """min (#boundary edges of U) / (sum of degrees in U) over vertex sets."""
    eligible = list(eligible_vertices) if eligible_vertices is not None \
        else g.frontier_free_vertices()
    scanner = _VertexScanner(g, eligible)
    best: list[tuple[Fraction, tuple[int, ...]]] = []

    def visit(stack, sumdeg, internal, idx):
        ratio = Fraction(sumdeg - 2 * internal, sumdeg)
        witness = tuple(sorted(scanner.vertex_ids[i] for i in stack))
        if not best or ratio < best[0][0] or \
                (ratio == best[0][0] and witness < best[0][1]):
            best[:] = [(ratio, witness)]

    count = scanner.scan(budget.max_generators, visit, budget.max_yield)
    if not best:
        raise BudgetExceeded("no vertex set enumerated", 0)
    return CombUpperResult(value=best[0][0], witness_vertices=best[0][1],
                           enumerated=count)


# ---------------------------------------------------------------------------
# lower bounds and bracket assembly
# ---------------------------------------------------------------------------

def lower_bounds(g: MetricGraph, report: CurvatureReport | None = None,
                 budget: Budget | None = None,
                 total_measure: Fraction | None = None,
                 include_est01: bool = True) -> list[Bound]:
    """Observed lower bounds from the curvature constants.

    Emits c*/K and c* when positive, the empirical averaged-curvature
    statistic, and 2/mes(G) when a finite total measure is declared for an
    infinite graph.  Entries are certified only on data that determines
    the true constants; truncation values are observed.
    """
    if report is None:
        report = global_constants(g)
    certified = g.is_frontier_free  # finite graph: constants are exact
    out: list[Bound] = []

    if report.c_star is not None and report.c_star > 0 and report.K and report.K > 0:
        out.append(Bound(value=report.c_star / report.K, provenance="cK_lower",
                         side="lower", certified=certified,
                         note="alpha >= c_*/K (requires c_* > 0)"))
    if report.c_star is not None and report.c_star > 0:
        out.append(Bound(value=report.c_star, provenance="cstar_lower",
                         side="lower", certified=certified,
                         note="alpha >= c_*"))

    if include_est01:
        budget = budget or Budget()
        try:
            selections, _ = enumerate_starlike_complete(
                g, budget.max_generators, max_yield=budget.max_yield)
        except (FrontierContact, BudgetExceeded):
            selections = []
        averages = []
        for sel in selections:
            total = Fraction(0)
            ok = True
            for e in sel.edges:
                c = report.char_value[e]
                if c is None:
                    ok = False
                    break
                total += c * g.length[e]
            if ok:
                averages.append(total / sel.measure)
        if averages:
            value = min(Fraction(2) / report.ell_star, min(averages))
            out.append(Bound(value=value, provenance="est01_empirical",
                             side="lower", certified=False,
                             note=f"min(2/ell*, averaged curvature over "
                                  f"{len(averages)} star-like complete subgraphs)"))

    if total_measure is not None:
        out.append(Bound(value=Fraction(2) / total_measure,
                         provenance="estvol_lower", side="lower", certified=True,
                         note="alpha >= 2/mes(G) for infinite graphs of "
                              "finite total measure"))
    return out


@dataclass
class AlphaBracket:
    bounds: list[Bound] = field(default_factory=list)
    best_lower: Fraction | float | None = None
    best_upper: Fraction | float | None = None
    alpha_exact: Fraction | None = None
    restricted_alpha: dict | None = None
    cheeger: dict | None = None


def cheeger_interval(alpha: Fraction | float, ell_min: Fraction
                     ) -> tuple[Fraction | float, float]:
    """(alpha^2/4, pi^2 alpha / (2 ell_min)): the lambda_0 bracket."""
    if ell_min <= 0:
        raise NonPositiveEllMin(f"ell_min = {ell_min}")
    if alpha < 0:
        raise OutOfRange(f"alpha = {alpha} < 0")
    lower = alpha * alpha / 4
    upper = math.pi ** 2 * float(alpha) / (2 * float(ell_min))
    return lower, upper


def equilateral_transform(alpha_comb: Fraction | float) -> Fraction | float:
    """alpha = 2 a / (a + 1) for equilateral graphs, a = alpha_comb."""
    if not 0 <= alpha_comb <= 1:
        raise OutOfRange(f"alpha_comb = {alpha_comb} outside [0, 1]")
    return 2 * alpha_comb / (alpha_comb + 1)


def alpha_bracket(g: MetricGraph, budget: Budget | None = None,
                  family_bounds: Sequence[Bound] = (),
                  certified_ell_star: Fraction | None = None,
                  certified_ell_min: Fraction | None = None,
                  workers: int = 1,
                  report: CurvatureReport | None = None) -> AlphaBracket:
    """Assemble all lower/upper bounds on alpha.

    Always includes the universal upper bound 2/ell*.  If some certified
    lower bound on alpha_S (or alpha) reaches a certified 2/ell*, alpha
    equals 2/ell* exactly and the bracket collapses.  For genuinely finite
    graphs alpha is trivially 0 (the whole graph has empty boundary) and
    the infimum over proper subgraphs is reported separately.
    """
    budget = budget or Budget()
    if report is None:
        report = global_constants(g)
    bracket = AlphaBracket()
    bounds = bracket.bounds
    finite = g.is_frontier_free

    ell_star = certified_ell_star if certified_ell_star is not None else report.ell_star
    bounds.append(Bound(value=Fraction(2) / ell_star, provenance="ellstar_upper",
                        side="upper", certified=True,
                        note="alpha <= 2/ell*"
                             + ("" if certified_ell_star or finite
                                else " (observed ell*, still an upper bound)")))

    try:
        brute = alpha_upper_bruteforce(g, budget, workers=workers,
                                       proper_only=finite)
        bounds.append(brute.bound)
    except FrontierContact as exc:
        brute = None
        bounds.append(Bound(value=INF, provenance="bruteforce_upper", side="upper",
                            certified=False, note=f"not available: {exc}"))

    bounds.extend(lower_bounds(g, report=report, budget=budget))
    bounds.extend(family_bounds)

    if finite:
        bracket.alpha_exact = Fraction(0)
        bounds.append(Bound(value=Fraction(0), provenance="closed_form",
                            side="lower", certified=True,
                            note="finite graph: the whole graph has empty boundary"))
        bounds.append(Bound(value=Fraction(0), provenance="closed_form",
                            side="upper", certified=True,
                            note="finite graph: alpha = 0"))
        if brute is not None:
            exhaustive = budget.max_edges >= len(g.edges) - 1
            bracket.restricted_alpha = {
                "value": brute.bound.value,
                "witness": brute.bound.witness,
                "exhaustive": exhaustive,
            }
    else:
        # reduction rule: a certified lower bound on alpha_S at or above a
        # certified 2/ell* pins alpha = 2/ell* exactly
        if certified_ell_star is not None:
            two_over = Fraction(2) / certified_ell_star
            cert_lowers = [b.value for b in bounds
                           if b.side == "lower" and b.certified]
            if any(v >= two_over for v in cert_lowers):
                bracket.alpha_exact = two_over
                bounds.append(Bound(value=two_over, provenance="reduction_exact",
                                    side="lower", certified=True,
                                    note="alpha_S >= 2/ell* forces alpha = 2/ell*"))
                bounds.append(Bound(value=two_over, provenance="reduction_exact",
                                    side="upper", certified=True,
                                    note="alpha_S >= 2/ell* forces alpha = 2/ell*"))

    cert_lower = [b.value for b in bounds
                  if b.side == "lower" and b.certified and b.target == "alpha"]
    cert_upper = [b.value for b in bounds
                  if b.side == "upper" and b.certified and b.target == "alpha"]
    bracket.best_lower = max(cert_lower) if cert_lower else None
    bracket.best_upper = min(cert_upper) if cert_upper else None
    if bracket.alpha_exact is None and bracket.best_lower is not None \
            and bracket.best_lower == bracket.best_upper \
            and isinstance(bracket.best_lower, Fraction):
        bracket.alpha_exact = bracket.best_lower

    ell_min = certified_ell_min if certified_ell_min is not None else report.ell_min
    if bracket.best_upper is not None and bracket.best_lower is not None:
        lo, _ = cheeger_interval(bracket.best_lower, ell_min)
        _, hi = cheeger_interval(bracket.best_upper, ell_min)
        bracket.cheeger = {
            "lambda0_lower": lo,
            "lambda0_upper": hi,
            "ell_min": ell_min,
            "certified": bool(finite or (certified_ell_min is not None
                                         and certified_ell_star is not None)),
        }
    return bracket
