"""Spanning trees: enumeration, tree paths, rotor orientation, special trees.

A spanning tree is a ``frozenset`` of edge ids.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import NotSameComponent, SameEdge, TreeError, UnknownVertex
from .graph import Multigraph, _components

__all__ = [
    "RotorAssignment",
    "tree_literal",
    "parse_tree",
    "is_spanning_tree",
    "enumerate_spanning_trees",
    "path_in_tree",
    "orient_toward",
    "tree_satisfying_lemma_tree",
]


def tree_literal(tree) -> str:
    return ",".join(sorted(tree))


def parse_tree(text: str) -> frozenset:
    return frozenset(t.strip() for t in text.split(",") if t.strip())


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[max(ra, rb)] = min(ra, rb)
        return True


def is_spanning_tree(graph: Multigraph, tree) -> bool:
    tree = set(tree)
    if not tree <= set(graph.edge_ids) or len(tree) != graph.num_vertices - 1:
        return False
    uf = _UnionFind(graph.vertices)
    return all(uf.union(*graph.endpoints[e]) for e in tree)


@lru_cache(maxsize=1024)
def _trees(graph: Multigraph) -> tuple:
    edges = graph.edges
    need = graph.num_vertices - 1
    found = []

    def connected_with(chosen, rest_from):
        pool = list(chosen) + list(edges[rest_from:])
        return len(_components(graph.vertices, pool)) == 1

    def rec(i, chosen, uf_parent):
        if len(chosen) == need:
            found.append(frozenset(e for e, _, _ in chosen))
            return
        if i == len(edges) or len(edges) - i < need - len(chosen):
            return
        e, u, v = edges[i]
        uf = _UnionFind(())
        uf.parent = dict(uf_parent)
        if uf.union(u, v):
            rec(i + 1, chosen + [edges[i]], uf.parent)
        if connected_with(chosen, i + 1):
            rec(i + 1, chosen, uf_parent)

    rec(0, [], {v: v for v in graph.vertices})
    found.sort(key=lambda t: sorted(t))
    return tuple(found)


def enumerate_spanning_trees(graph: Multigraph) -> list:
    """Every spanning tree once, ordered by sorted edge-id list."""
    return list(_trees(graph))


def _tree_adjacency(graph, tree):
    adj = {v: [] for v in graph.vertices}
    for e in sorted(tree):
        u, w = graph.endpoints[e]
        adj[u].append((e, w))
        adj[w].append((e, u))
    return adj


def path_in_tree(graph: Multigraph, tree, a: str, b: str) -> tuple:
    """Edge sequence of the unique ``a``-``b`` path in ``tree``."""
    for x in (a, b):
        if x not in graph.incident:
            raise UnknownVertex(x)
    adj = _tree_adjacency(graph, tree)
    back = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for e, y in adj[x]:
            if y not in back:
                back[y] = (e, x)
                queue.append(y)
    if b not in back:
        raise TreeError(f"{a!r} and {b!r} are not joined by the tree")
    path = []
    x = b
    while back[x] is not None:
        e, x = back[x]
        path.append(e)
    return tuple(reversed(path))


@dataclass(frozen=True)
class RotorAssignment:
    basepoint: str
    rotor: dict  # non-basepoint vertex -> edge id pointing towards basepoint

    def __hash__(self):
        return hash((self.basepoint, tuple(sorted(self.rotor.items()))))


def orient_toward(graph: Multigraph, tree, basepoint: str) -> RotorAssignment:
    """Direct tree edges towards ``basepoint``; rotor(w) is w's outgoing edge."""
    if basepoint not in graph.incident:
        raise UnknownVertex(basepoint)
    adj = _tree_adjacency(graph, tree)
    rotor = {}
    seen = {basepoint}
    queue = deque([basepoint])
    while queue:
        x = queue.popleft()
        for e, y in adj[x]:
            if y not in seen:
                seen.add(y)
                rotor[y] = e
                queue.append(y)
    if len(seen) != graph.num_vertices:
        raise TreeError("edge set does not span the graph")
    return RotorAssignment(basepoint, rotor)


def tree_satisfying_lemma_tree(graph: Multigraph, v: str, e1: str, e2: str) -> frozenset:
    """Spanning tree containing ``e1``, avoiding ``e2``, with the tree path
    from ``e2``'s far end to ``v`` running through ``e1``'s far end.

    Built from the lexicographically first shortest far-end path avoiding
    ``v``, plus ``e1``, then extended greedily in edge-id order.
    """
    if e1 == e2:
        raise SameEdge(e1)
    inc = graph.incident.get(v)
    if inc is None:
        raise UnknownVertex(v)
    if e1 not in inc or e2 not in inc:
        raise TreeError("both edges must be incident to v")
    w1, w2 = graph.other_end(e1, v), graph.other_end(e2, v)

    # BFS from w1 in G - v, neighbours explored in edge-id order
    back = {w1: None}
    queue = deque([w1])
    while queue and w2 not in back:
        x = queue.popleft()
        for e in graph.incident[x]:
            y = graph.other_end(e, x)
            if y != v and y not in back:
                back[y] = (e, x)
                queue.append(y)
    if w2 not in back:
        raise NotSameComponent(f"{e1!r} and {e2!r} lie in different {v!r}-components")
    chosen = [e1]
    x = w2
    while back[x] is not None:
        e, x = back[x]
        chosen.append(e)

    uf = _UnionFind(graph.vertices)
    for e in chosen:
        uf.union(*graph.endpoints[e])
    for e in graph.edge_ids:
        if e not in chosen and uf.union(*graph.endpoints[e]):
            chosen.append(e)
    tree = frozenset(chosen)
    assert e1 in tree and e2 not in tree
    assert w1 in _path_vertices(graph, tree, w2, v)
    return tree


def _path_vertices(graph, tree, a, b):
    verts = [a]
    x = a
    for e in path_in_tree(graph, tree, a, b):
        x = graph.other_end(e, x)
        verts.append(x)
    return verts
