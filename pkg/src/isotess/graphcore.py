"""Immutable planar metric-graph model.

A graph is described by a rotation system: every vertex carries the cyclic
clockwise order of its incident edges.  Directed edges (darts) are pairs
``(edge_id, head_vertex)``; since graphs are simple this is unambiguous.
Faces are traced with the fixed convention

    successor of h  =  rotational successor of twin(h) at the head of h,

so each face is the orbit of a dart under that map and every dart lies on
exactly one face.  Truncations of infinite graphs mark the vertices with
incomplete stars as *frontier* vertices; any face whose cycle touches the
frontier is *indeterminate* unless the input explicitly declares it
unbounded.  Frontier vertices are assumed to lie on the outer rim of the
truncation (ball-like truncations); the generators in :mod:`isotess.families`
guarantee this.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    Disconnected,
    DisconnectedSelection,
    FrontierContact,
    IndeterminateFaces,
    InconsistentFrontier,
    InputFormatError,
    MalformedRotation,
    NonPositiveLength,
    NonSimple,
)
from .rational import INF, Extended, parse_rational

Dart = tuple[int, int]  # (edge id, head vertex id)

BOUNDED = "bounded"
UNBOUNDED = "unbounded"
INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Tile:
    """One face of the embedding.

    ``cycle`` is the dart orbit; ``edges`` the distinct edge ids on the
    boundary; ``degree`` counts distinct edges.  ``perimeter`` is the exact
    sum of the boundary lengths for bounded tiles, INF for unbounded ones
    and None when the face touches the frontier.
    """

    index: int
    cycle: tuple[Dart, ...]
    edges: frozenset[int]
    degree: int
    status: str
    perimeter: Extended | None
    touches_frontier: bool


@dataclass(frozen=True)
class EmbeddedGraph:
    rotation: Mapping[int, tuple[int, ...]]
    edge_ends: Mapping[int, tuple[int, int]]
    frontier_vertices: frozenset[int]
    true_degree: Mapping[int, int | None]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.rotation))

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edge_ends))

    def other_end(self, edge: int, v: int) -> int:
        a, b = self.edge_ends[edge]
        if v == a:
            return b
        if v == b:
            return a
        raise KeyError(f"vertex {v} not on edge {edge}")

    def degree(self, v: int) -> int:
        return len(self.rotation[v])


@dataclass(frozen=True)
class MetricGraph:
    embedding: EmbeddedGraph
    length: Mapping[int, Fraction]
    tiles: tuple[Tile, ...]
    dart_tile: Mapping[Dart, int]

    # --- delegation helpers ---------------------------------------------
    @property
    def vertices(self) -> tuple[int, ...]:
        return self.embedding.vertices

    @property
    def edges(self) -> tuple[int, ...]:
        return self.embedding.edges

    @property
    def rotation(self) -> Mapping[int, tuple[int, ...]]:
        return self.embedding.rotation

    @property
    def edge_ends(self) -> Mapping[int, tuple[int, int]]:
        return self.embedding.edge_ends

    @property
    def frontier_vertices(self) -> frozenset[int]:
        return self.embedding.frontier_vertices

    @property
    def true_degree(self) -> Mapping[int, int | None]:
        return self.embedding.true_degree

    @property
    def is_frontier_free(self) -> bool:
        return not self.embedding.frontier_vertices

    def other_end(self, edge: int, v: int) -> int:
        return self.embedding.other_end(edge, v)

    def darts_of(self, edge: int) -> tuple[Dart, Dart]:
        a, b = self.embedding.edge_ends[edge]
        return (edge, a), (edge, b)

    def tile_of(self, dart: Dart) -> Tile:
        return self.tiles[self.dart_tile[dart]]

    def frontier_free_edges(self) -> list[int]:
        """Edges with both endpoints outside the frontier."""
        fr = self.embedding.frontier_vertices
        return [e for e in self.edges
                if self.edge_ends[e][0] not in fr and self.edge_ends[e][1] not in fr]

    def frontier_free_vertices(self) -> list[int]:
        fr = self.embedding.frontier_vertices
        return [v for v in self.vertices if v not in fr]


@dataclass(frozen=True)
class SubgraphSelection:
    """A finite edge subset with its derived boundary bookkeeping."""

    edges: frozenset[int]
    vertices: frozenset[int]
    boundary: frozenset[int]
    boundary_degree: int
    measure: Fraction
    interior_vertices: frozenset[int]
    interior_edges: frozenset[int]

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.boundary_degree) / self.measure

    def canonical_edges(self) -> tuple[int, ...]:
        return tuple(sorted(self.edges))


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    mode: str
    violations: tuple[Violation, ...]

    @property
    def valid(self) -> bool:
        return not self.violations


# ---------------------------------------------------------------------------
# face tracing
# ---------------------------------------------------------------------------

def trace_faces(rotation: Mapping[int, tuple[int, ...]],
                edge_ends: Mapping[int, tuple[int, int]]) -> list[list[Dart]]:
    """Partition all darts into face cycles.

    Convention: the successor of dart ``h = (e, v)`` leaves ``v`` along the
    clockwise successor of ``e`` in the rotation at ``v``.
    """
    succ_edge: dict[Dart, int] = {}
    for v, rot in rotation.items():
        n = len(rot)
        for i, e in enumerate(rot):
            succ_edge[(e, v)] = rot[(i + 1) % n]

    def other(edge: int, v: int) -> int:
        a, b = edge_ends[edge]
        return b if v == a else a

    faces: list[list[Dart]] = []
    seen: set[Dart] = set()
    for e in sorted(edge_ends):
        for v in sorted(edge_ends[e]):
            start = (e, v)
            if start in seen:
                continue
            cycle = []
            d = start
            while True:
                cycle.append(d)
                seen.add(d)
                e2 = succ_edge[d]
                d = (e2, other(e2, d[1]))
                if d == start:
                    break
            faces.append(cycle)
    return faces


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------

def build_graph(record: Mapping) -> MetricGraph:
    """Validate an interchange record and construct the metric graph.

    See the module docstring of :mod:`isotess.interchange` for the record
    layout.  Construction is deterministic given the record.
    """
    try:
        vertex_items = list(record["vertices"])
        edge_items = list(record["edges"])
    except (KeyError, TypeError) as exc:
        raise InputFormatError(f"missing field: {exc}") from exc

    rotation: dict[int, tuple[int, ...]] = {}
    for item in vertex_items:
        vid = int(item["id"])
        if vid in rotation:
            raise InputFormatError(f"duplicate vertex id {vid}")
        rotation[vid] = tuple(int(e) for e in item["rotation"])

    edge_ends: dict[int, tuple[int, int]] = {}
    length: dict[int, Fraction] = {}
    pair_seen: set[tuple[int, int]] = set()
    for item in edge_items:
        eid = int(item["id"])
        if eid in edge_ends:
            raise InputFormatError(f"duplicate edge id {eid}")
        a, b = (int(x) for x in item["ends"])
        if a == b:
            raise NonSimple(f"edge {eid} is a loop at vertex {a}")
        if a not in rotation or b not in rotation:
            raise InputFormatError(f"edge {eid} references unknown vertex")
        pair = (min(a, b), max(a, b))
        if pair in pair_seen:
            raise NonSimple(f"parallel edge {eid} between {a} and {b}")
        pair_seen.add(pair)
        edge_ends[eid] = (a, b)
        try:
            ell = parse_rational(item["length"])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputFormatError(f"edge {eid}: bad length {item['length']!r}") from exc
        if ell <= 0:
            raise NonPositiveLength(f"edge {eid} has length {ell}")
        length[eid] = ell

    # rotation lists must be permutations of the incident edges
    incident: dict[int, set[int]] = {v: set() for v in rotation}
    for eid, (a, b) in edge_ends.items():
        incident[a].add(eid)
        incident[b].add(eid)
    for v, rot in rotation.items():
        if len(set(rot)) != len(rot):
            raise MalformedRotation(f"vertex {v}: repeated edge in rotation")
        if set(rot) != incident[v]:
            raise MalformedRotation(
                f"vertex {v}: rotation {sorted(rot)} != incident {sorted(incident[v])}")
        if not rot:
            raise MalformedRotation(f"vertex {v} is isolated")

    # connectivity
    verts = sorted(rotation)
    seen = {verts[0]}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for e in rotation[v]:
            w = edge_ends[e][0] if edge_ends[e][1] == v else edge_ends[e][1]
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(verts):
        raise Disconnected(f"{len(verts) - len(seen)} vertices unreachable")

    frontier = frozenset(int(v) for v in record.get("frontier_vertices", ()))
    if not frontier <= set(rotation):
        raise InputFormatError("frontier lists unknown vertex")
    declared = {int(k): int(v) for k, v in record.get("true_degree", {}).items()}
    true_degree: dict[int, int | None] = {}
    for v in rotation:
        visible = len(rotation[v])
        if v in declared:
            td = declared[v]
            if td < 1:
                raise InconsistentFrontier(f"vertex {v}: true degree {td} < 1")
            if v in frontier:
                if td < visible:
                    raise InconsistentFrontier(
                        f"frontier vertex {v}: true degree {td} < visible {visible}")
            elif td != visible:
                raise InconsistentFrontier(
                    f"vertex {v}: true degree {td} != visible degree {visible}")
            true_degree[v] = td
        else:
            true_degree[v] = visible if v not in frontier else None

    embedding = EmbeddedGraph(
        rotation=rotation,
        edge_ends=edge_ends,
        frontier_vertices=frontier,
        true_degree=true_degree,
    )

    cycles = trace_faces(rotation, edge_ends)
    dart_tile: dict[Dart, int] = {}
    for idx, cycle in enumerate(cycles):
        for d in cycle:
            dart_tile[d] = idx

    unbounded_faces: set[int] = set()
    for rep in record.get("unbounded_face_reps", ()):
        eid, head = int(rep[0]), int(rep[1])
        if eid not in edge_ends or head not in edge_ends[eid]:
            raise InputFormatError(f"bad unbounded face rep {rep!r}")
        unbounded_faces.add(dart_tile[(eid, head)])

    tiles = []
    for idx, cycle in enumerate(cycles):
        edges = frozenset(d[0] for d in cycle)
        touches = any(d[1] in frontier for d in cycle)
        if idx in unbounded_faces:
            status: str = UNBOUNDED
            perimeter: Extended | None = INF
        elif touches:
            status = INDETERMINATE
            perimeter = None
        else:
            status = BOUNDED
            perimeter = sum((length[e] for e in edges), Fraction(0))
        tiles.append(Tile(index=idx, cycle=tuple(cycle), edges=edges,
                          degree=len(edges), status=status, perimeter=perimeter,
                          touches_frontier=touches))

    return MetricGraph(embedding=embedding, length=length,
                       tiles=tuple(tiles), dart_tile=dart_tile)


# ---------------------------------------------------------------------------
# tessellation validation
# ---------------------------------------------------------------------------

def validate_tessellation(g: MetricGraph, mode: str = "finite") -> ValidationReport:
    """Check the tessellation axioms; violations are report entries.

    mode="finite": the graph is taken as a complete finite plane graph and
    conditions (ii), (iv), (v) are checked everywhere (the half-plane
    condition on unbounded faces is exempted).  Exactly one face must be
    declared unbounded, the outer one.

    mode="truncation": the same conditions restricted to vertices, edges
    and tiles that carry no frontier taint.
    """
    if mode not in ("finite", "truncation"):
        raise ValueError(f"unknown mode {mode!r}")
    violations: list[Violation] = []
    fr = g.frontier_vertices

    if mode == "finite":
        if fr:
            violations.append(Violation(
                "finite", f"vertices {sorted(fr)[:4]}",
                "frontier vertices present in finite mode"))
        n_unbounded = sum(1 for t in g.tiles if t.status == UNBOUNDED)
        if n_unbounded != 1:
            violations.append(Violation(
                "outer-face", f"{n_unbounded} unbounded marks",
                "a finite plane graph has exactly one unbounded face"))

    # (v): vertex degrees >= 3
    for v in g.vertices:
        if mode == "truncation" and v in fr:
            continue
        if g.embedding.degree(v) < 3:
            violations.append(Violation(
                "v", f"vertex {v}", f"degree {g.embedding.degree(v)} < 3"))

    # (ii): bounded tiles are simple cycles of >= 3 edges
    for t in g.tiles:
        if t.status != BOUNDED:
            continue
        heads = [d[1] for d in t.cycle]
        if len(t.cycle) < 3 or len(set(heads)) != len(heads) or len(t.edges) != len(t.cycle):
            violations.append(Violation(
                "ii", f"tile {t.index}",
                f"bounded face cycle {heads} is not a simple >=3 cycle"))

    # (iv): every edge borders two different tiles
    for e in g.edges:
        d1, d2 = g.darts_of(e)
        t1, t2 = g.dart_tile[d1], g.dart_tile[d2]
        if mode == "truncation":
            s1, s2 = g.tiles[t1].status, g.tiles[t2].status
            if s1 != BOUNDED or s2 != BOUNDED:
                continue
        if t1 == t2:
            violations.append(Violation(
                "iv", f"edge {e}", "both sides lie on the same face"))

    return ValidationReport(mode=mode, violations=tuple(violations))


# ---------------------------------------------------------------------------
# subgraph bookkeeping
# ---------------------------------------------------------------------------

def subgraph_stats(g: MetricGraph, edge_ids: Iterable[int]) -> SubgraphSelection:
    """Boundary, boundary degree, measure and interior of an edge subset."""
    edges = frozenset(int(e) for e in edge_ids)
    if not edges:
        raise DisconnectedSelection("empty selection")
    for e in edges:
        if e not in g.edge_ends:
            raise KeyError(f"unknown edge {e}")

    deg: dict[int, int] = {}
    for e in edges:
        a, b = g.edge_ends[e]
        deg[a] = deg.get(a, 0) + 1
        deg[b] = deg.get(b, 0) + 1
    vertices = frozenset(deg)

    # connectivity of the selection
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for e in edges:
        a, b = g.edge_ends[e]
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(vertices))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != len(vertices):
        raise DisconnectedSelection("selection does not induce a connected subgraph")

    boundary = set()
    boundary_degree = 0
    for v, d in deg.items():
        td = g.true_degree[v]
        if td is None:
            raise FrontierContact(f"vertex {v} has unknown true degree")
        if d > td:
            raise InconsistentFrontier(f"vertex {v}: selection degree {d} > true degree {td}")
        if d < td:
            boundary.add(v)
            boundary_degree += d
    interior_vertices = vertices - boundary
    interior_edges = frozenset(
        e for e in edges
        if g.edge_ends[e][0] in interior_vertices and g.edge_ends[e][1] in interior_vertices)
    measure = sum((g.length[e] for e in edges), Fraction(0))
    return SubgraphSelection(
        edges=edges, vertices=vertices, boundary=frozenset(boundary),
        boundary_degree=boundary_degree, measure=measure,
        interior_vertices=interior_vertices, interior_edges=interior_edges)


def _face_components(g: MetricGraph,
                     interior_edges: frozenset[int],
                     interior_vertices: frozenset[int]):
    """Faces of the interior graph, as merged components of ambient tiles.

    Two tiles belong to the same face of the interior graph when they share
    an edge not in the interior graph, or meet at a vertex outside it.
    Returns ``(components, bounded_components, ambiguous)`` where each
    component is a sorted tuple of tile indices, ``bounded_components``
    contains only fully determinate bounded faces, and ``ambiguous`` is set
    when more than one component touches indeterminate data (so the outer
    face cannot be identified).
    """
    n = len(g.tiles)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for e in g.edges:
        if e in interior_edges:
            continue
        d1, d2 = g.darts_of(e)
        union(g.dart_tile[d1], g.dart_tile[d2])
    for v in g.vertices:
        if v in interior_vertices:
            continue
        rot = g.rotation[v]
        first = g.dart_tile[(rot[0], v)]
        for e in rot[1:]:
            union(first, g.dart_tile[(e, v)])

    groups: dict[int, list[int]] = {}
    for t in range(n):
        groups.setdefault(find(t), []).append(t)
    components = [tuple(sorted(ts)) for ts in groups.values()]
    components.sort()

    indeterminate_comps = 0
    bounded_components = []
    for comp in components:
        statuses = {g.tiles[t].status for t in comp}
        if INDETERMINATE in statuses:
            indeterminate_comps += 1
            continue
        if UNBOUNDED in statuses:
            continue
        bounded_components.append(comp)
    return components, bounded_components, indeterminate_comps > 1


def classify_subgraph(g: MetricGraph, sel: SubgraphSelection) -> tuple[bool, bool]:
    """(star_like, complete) flags for a selection.

    star_like: the edge set is the union of the full stars of some
    connected vertex set.  complete: every bounded face of the interior
    graph consists of exactly one ambient tile.
    """
    # full-star vertices: every true incident edge lies in the selection
    full = set()
    for v in sel.vertices:
        td = g.true_degree[v]
        if td is not None and sum(1 for e in g.rotation[v] if e in sel.edges) == td:
            full.add(v)
    star_like = False
    if full:
        # the generating set must be one connected component of the
        # full-star vertices whose stars cover the whole selection
        comp_seen: set[int] = set()
        for v0 in sorted(full):
            if v0 in comp_seen:
                continue
            comp = {v0}
            queue = deque([v0])
            while queue:
                v = queue.popleft()
                for e in g.rotation[v]:
                    w = g.other_end(e, v)
                    if w in full and w not in comp:
                        comp.add(w)
                        queue.append(w)
            comp_seen |= comp
            covered = set()
            for v in comp:
                covered.update(g.rotation[v])
            if covered == set(sel.edges):
                star_like = True
                break

    _, bounded_comps, ambiguous = _face_components(
        g, sel.interior_edges, sel.interior_vertices)
    if ambiguous:
        raise IndeterminateFaces(
            "interior-graph face structure touches the frontier in more than one region")
    complete = all(len(comp) == 1 for comp in bounded_comps)
    return star_like, complete


def complete_closure(g: MetricGraph, sel: SubgraphSelection) -> SubgraphSelection:
    """Close a star-like selection by absorbing bounded interior-graph faces.

    Repeatedly adds the full stars of every vertex lying strictly inside a
    bounded face of the interior graph.  The result is star-like and
    complete, and its boundary degree never exceeds the input's.
    """
    edges = set(sel.edges)
    current = sel
    while True:
        comps, bounded_comps, ambiguous = _face_components(
            g, current.interior_edges, current.interior_vertices)
        if ambiguous:
            raise FrontierContact("closure cannot resolve faces near the frontier")
        comp_of_tile: dict[int, tuple[int, ...]] = {}
        for comp in bounded_comps:
            for t in comp:
                comp_of_tile[t] = comp

        to_add: set[int] = set()
        for v in g.vertices:
            if v in current.interior_vertices:
                continue
            t = g.dart_tile[(g.rotation[v][0], v)]
            # v lies strictly inside the face formed by its surrounding
            # tiles; absorb its star when that face is bounded.  Tiles have
            # no vertices strictly inside, so single-tile faces never
            # produce additions.
            if comp_of_tile.get(t) is None:
                continue
            if v in g.frontier_vertices:
                raise FrontierContact(
                    f"closure needs the full star of frontier vertex {v}")
            to_add.add(v)
        if not to_add:
            break
        for v in to_add:
            edges.update(g.rotation[v])
        current = subgraph_stats(g, edges)
    return current
