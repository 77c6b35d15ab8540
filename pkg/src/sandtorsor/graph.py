"""Multigraphs, rotation systems, face tracing and genus.

Vertex and edge ids are opaque strings.  Every deterministic order in the
package is plain lexicographic order on those strings.  Because loops are
forbidden, a half-edge at ``v`` is identified by its edge id alone, so a
cyclic order at ``v`` is stored as a tuple of edge ids, pinned so that the
smallest id comes first.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import (
    DisconnectedRestriction,
    Disconnected,
    DuplicateId,
    GraphError,
    InvalidRotation,
    LoopEdge,
    ParityViolation,
    UnknownHalfEdge,
    UnknownVertex,
)

__all__ = [
    "Multigraph",
    "HalfEdge",
    "RibbonGraph",
    "FaceDecomposition",
    "validate",
    "next_half_edge",
    "trace_faces",
    "genus",
    "v_components",
    "restrict",
    "count_rotation_systems",
    "enumerate_rotation_systems",
    "relabel",
    "pin",
]


@dataclass(frozen=True)
class Multigraph:
    """A finite multigraph given by vertex ids and ``(edge_id, u, v)`` triples.

    Construction only normalises ordering; call :func:`validate` to enforce
    the loopless/connected/unique-id invariants.
    """

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        edges = tuple(sorted((str(e), str(u), str(v)) for e, u, v in self.edges))
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[str]], vertices: Iterable[str] = ()):
        """Build and validate a graph; vertices default to the edge endpoints."""
        edges = [tuple(e) for e in edges]
        vs = set(vertices)
        for _, u, v in edges:
            vs.update((u, v))
        graph = cls(tuple(vs), tuple(edges))
        validate(graph)
        return graph

    @cached_property
    def edge_ids(self) -> tuple:
        return tuple(e for e, _, _ in self.edges)

    @cached_property
    def endpoints(self) -> dict:
        return {e: (u, v) for e, u, v in self.edges}

    @cached_property
    def incident(self) -> dict:
        inc = {v: [] for v in self.vertices}
        for e, u, v in self.edges:
            inc[u].append(e)
            if v != u:
                inc[v].append(e)
        return {v: tuple(sorted(es)) for v, es in inc.items()}

    @cached_property
    def multiplicity(self) -> dict:
        """``{(u, w): number of u-w edges}`` for both orientations."""
        mult = {}
        for _, u, v in self.edges:
            mult[u, v] = mult.get((u, v), 0) + 1
            mult[v, u] = mult.get((v, u), 0) + 1
        return mult

    @cached_property
    def neighbors(self) -> dict:
        nb = {v: set() for v in self.vertices}
        for _, u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return {v: tuple(sorted(ws)) for v, ws in nb.items()}

    def degree(self, v: str) -> int:
        try:
            return len(self.incident[v])
        except KeyError:
            raise UnknownVertex(v) from None

    def other_end(self, edge: str, v: str) -> str:
        u, w = self.endpoints[edge]
        if v == u:
            return w
        if v == w:
            return u
        raise UnknownHalfEdge((edge, v))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def cycle_rank(self) -> int:
        """|E| - |V| + 1, the degree of a break divisor."""
        return len(self.edges) - len(self.vertices) + 1

    def subgraph(self, edge_ids: Iterable[str]) -> "Multigraph":
        """Subgraph spanned by ``edge_ids`` (vertices = their endpoints)."""
        keep = set(edge_ids)
        edges = [t for t in self.edges if t[0] in keep]
        vs = {x for _, u, v in edges for x in (u, v)}
        return Multigraph(tuple(vs), tuple(edges))


def _components(vertices, edges, skip=None):
    adj = {v: [] for v in vertices if v != skip}
    for _, u, v in edges:
        if u == skip or v == skip:
            continue
        adj[u].append(v)
        adj[v].append(u)
    seen = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    queue.append(y)
        comps.append(comp)
    return comps


def validate(graph: Multigraph) -> None:
    """Raise unless ``graph`` is a connected loopless multigraph with >= 2 vertices."""
    if len(set(graph.vertices)) != len(graph.vertices):
        raise DuplicateId("duplicate vertex id")
    ids = [e for e, _, _ in graph.edges]
    if len(set(ids)) != len(ids):
        dup = sorted(e for e in set(ids) if ids.count(e) > 1)[0]
        raise DuplicateId(f"duplicate edge id {dup!r}")
    vs = set(graph.vertices)
    for e, u, v in graph.edges:
        for x in (u, v):
            if x not in vs:
                raise UnknownVertex(f"edge {e!r} uses unknown vertex {x!r}")
        if u == v:
            raise LoopEdge(f"edge {e!r} is a loop at {u!r}")
    if len(graph.vertices) < 2:
        raise GraphError("need at least two vertices")
    if len(_components(graph.vertices, graph.edges)) != 1:
        raise Disconnected("graph is not connected")


class HalfEdge(NamedTuple):
    edge: str
    end: str


def pin(order: Sequence[str]) -> tuple:
    """Rotate a cyclic sequence so its smallest element comes first."""
    order = tuple(order)
    if not order:
        return order
    i = order.index(min(order))
    return order[i:] + order[:i]


@dataclass(frozen=True)
class RibbonGraph:
    """A multigraph together with a cyclic order of edges at every vertex."""

    graph: Multigraph
    rotation: tuple  # ((vertex, pinned order), ...) sorted by vertex

    def __post_init__(self):
        rot = dict(self.rotation)
        pinned = []
        for v in self.graph.vertices:
            if v not in rot:
                raise InvalidRotation(f"no cyclic order given at {v!r}")
            order = tuple(rot[v])
            if sorted(order) != list(self.graph.incident[v]):
                raise InvalidRotation(
                    f"order at {v!r} must list each incident edge exactly once"
                )
            pinned.append((v, pin(order)))
        extra = set(rot) - set(self.graph.vertices)
        if extra:
            raise UnknownVertex(f"rotation given for unknown vertex {min(extra)!r}")
        object.__setattr__(self, "rotation", tuple(pinned))

    @classmethod
    def from_orders(cls, graph: Multigraph, orders: Mapping[str, Sequence[str]]):
        return cls(graph, tuple((v, tuple(o)) for v, o in orders.items()))

    @cached_property
    def orders(self) -> dict:
        return dict(self.rotation)

    @cached_property
    def _successor(self) -> dict:
        nxt = {}
        for v, order in self.rotation:
            for i, e in enumerate(order):
                nxt[v, e] = order[(i + 1) % len(order)]
        return nxt

    def next_edge(self, v: str, e: str) -> str:
        """The edge after ``e`` in the cyclic order at ``v``."""
        try:
            return self._successor[v, e]
        except KeyError:
            raise UnknownHalfEdge((e, v)) from None

    @property
    def vertices(self):
        return self.graph.vertices

    @property
    def edges(self):
        return self.graph.edges


def next_half_edge(rg: RibbonGraph, h: HalfEdge) -> HalfEdge:
    edge, end = h
    return HalfEdge(rg.next_edge(end, edge), end)


@dataclass(frozen=True)
class FaceDecomposition:
    """Faces as tuples of darts ``(edge, tail, head)``."""

    faces: tuple

    @property
    def count(self) -> int:
        return len(self.faces)


def trace_faces(rg: RibbonGraph) -> FaceDecomposition:
    """Orbits of the dart successor: enter ``w`` along ``e``, leave along next(e) at ``w``."""
    g = rg.graph
    darts = sorted((e, u, v) for e, u, v in g.edges)
    darts += sorted((e, v, u) for e, u, v in g.edges)
    darts.sort()
    seen = set()
    faces = []
    for start in darts:
        if start in seen:
            continue
        face = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            face.append(dart)
            e, _, head = dart
            nxt = rg.next_edge(head, e)
            dart = (nxt, head, g.other_end(nxt, head))
        if dart != start:
            raise AssertionError("dart successor is not a permutation")
        faces.append(tuple(face))
    return FaceDecomposition(tuple(faces))


def genus(rg: RibbonGraph) -> int:
    g = rg.graph
    numerator = 2 - g.num_vertices + g.num_edges - trace_faces(rg).count
    if numerator % 2 or numerator < 0:
        raise ParityViolation(f"2g = {numerator} is not a nonnegative even number")
    return numerator // 2


def v_components(graph: Multigraph, v: str) -> list:
    """The v-components: each connected piece of G minus v, with v added back.

    Returned sorted by smallest edge id.
    """
    if v not in graph.incident:
        raise UnknownVertex(v)
    pieces = _components(graph.vertices, graph.edges, skip=v)
    result = []
    for piece in pieces:
        members = piece | {v}
        edges = [t for t in graph.edges if t[1] in members and t[2] in members]
        result.append(Multigraph(tuple(members), tuple(edges)))
    result.sort(key=lambda c: c.edge_ids[0] if c.edges else "")
    return result


def restrict(rg: RibbonGraph, edges: Iterable[str]) -> RibbonGraph:
    """Ribbon subgraph on ``edges``; orders keep their relative positions."""
    keep = set(edges)
    unknown = keep - set(rg.graph.edge_ids)
    if unknown:
        raise UnknownHalfEdge(min(unknown))
    sub = rg.graph.subgraph(keep)
    if not sub.edges or len(_components(sub.vertices, sub.edges)) != 1:
        raise DisconnectedRestriction("edge set does not induce a connected subgraph")
    orders = {
        v: tuple(e for e in rg.orders[v] if e in keep) for v in sub.vertices
    }
    return RibbonGraph.from_orders(sub, orders)


def _local_orders(graph: Multigraph, v: str) -> list:
    es = graph.incident[v]
    if not es:
        return [()]
    first, rest = es[0], es[1:]
    return [(first,) + p for p in itertools.permutations(rest)]


def count_rotation_systems(graph: Multigraph) -> int:
    return math.prod(
        math.factorial(max(graph.degree(v) - 1, 0)) for v in graph.vertices
    )


def enumerate_rotation_systems(
    graph: Multigraph, start: int = 0, stop: int | None = None
) -> Iterator[RibbonGraph]:
    """Yield every rotation system once, in a fixed mixed-radix order.

    ``start``/``stop`` select a slice of the index space so that disjoint
    slices can be swept independently.
    """
    per_vertex = [_local_orders(graph, v) for v in graph.vertices]
    combos = itertools.product(*per_vertex)
    for orders in itertools.islice(combos, start, stop):
        yield RibbonGraph(graph, tuple(zip(graph.vertices, orders)))


def relabel(
    rg: RibbonGraph,
    vertex_map: Mapping[str, str] | None = None,
    edge_map: Mapping[str, str] | None = None,
) -> RibbonGraph:
    vm = dict(vertex_map or {})
    em = dict(edge_map or {})
    fv = lambda x: vm.get(x, x)  # noqa: E731
    fe = lambda x: em.get(x, x)  # noqa: E731
    graph = Multigraph(
        tuple(fv(v) for v in rg.graph.vertices),
        tuple((fe(e), fv(u), fv(w)) for e, u, w in rg.graph.edges),
    )
    orders = {fv(v): tuple(fe(e) for e in o) for v, o in rg.rotation}
    return RibbonGraph.from_orders(graph, orders)
