"""Rotor-routing and Bernardi sandpile torsors, and full torsor tables."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import (
    BreakDivisorCollision,
    LookupMiss,
    NonCanonicalDivisor,
    NonTermination,
    NonzeroDegree,
    StartNotIncident,
    UnknownVertex,
)
from .graph import HalfEdge, RibbonGraph
from .sandpile import (
    Divisor,
    _as_divisor,
    add_keys,
    canonical_form,
    class_key,
    enumerate_group,
    group_order,
)
from .trees import enumerate_spanning_trees, orient_toward, tree_literal

__all__ = [
    "ROTOR",
    "BERNARDI",
    "KINDS",
    "BreakDivisorClass",
    "TorsorTable",
    "rotor_route",
    "bernardi_tour",
    "break_divisor",
    "bernardi_act",
    "act",
    "torsor_table",
    "verify_action",
    "same_action",
]

ROTOR = "rotor"
BERNARDI = "bernardi"
KINDS = (ROTOR, BERNARDI)


def _check_basepoint(rg: RibbonGraph, v: str):
    if v not in rg.graph.incident:
        raise UnknownVertex(v)


def rotor_route(
    rg: RibbonGraph,
    basepoint: str,
    s,
    tree,
    rng: random.Random | None = None,
) -> frozenset:
    """Act on ``tree`` by the class of ``s`` with rotor routing at ``basepoint``.

    ``s`` must have degree zero and no negative chips away from the
    basepoint; its reduced form always qualifies.  Chips are moved one at a
    time from the smallest positive vertex, or from a random positive vertex
    when ``rng`` is given.
    """
    g = rg.graph
    _check_basepoint(rg, basepoint)
    s = _as_divisor(g, s)
    if s.degree != 0:
        raise NonzeroDegree(f"divisor has degree {s.degree}")
    chips = dict(zip(s.vertices, s.values))
    if any(c < 0 for v, c in chips.items() if v != basepoint):
        raise NonCanonicalDivisor(
            f"{s.literal()} has negative chips away from {basepoint!r}"
        )
    rotor = dict(orient_toward(g, tree, basepoint).rotor)
    active = {v for v, c in chips.items() if c > 0 and v != basepoint}
    total = sum(chips[v] for v in active)
    max_deg = max(g.degree(v) for v in g.vertices)
    budget = (total + 1) * 2 * g.num_edges * (g.num_vertices + 1) * max_deg
    steps = 0
    while active:
        w = min(active) if rng is None else rng.choice(sorted(active))
        e = rg.next_edge(w, rotor[w])
        rotor[w] = e
        u = g.other_end(e, w)
        chips[w] -= 1
        if chips[w] == 0:
            active.discard(w)
        chips[u] += 1
        if u != basepoint and chips[u] > 0:
            active.add(u)
        steps += 1
        if steps > budget:
            raise NonTermination(f"rotor routing exceeded {budget} steps")
    return frozenset(rotor.values())


@dataclass(frozen=True)
class BreakDivisorClass:
    """A degree |E|-|V|+1 divisor standing for its class in Pic^g."""

    rep: Divisor

    @property
    def degree(self) -> int:
        return self.rep.degree


def _first_edge(rg: RibbonGraph, v: str) -> str:
    return rg.graph.incident[v][0]


def bernardi_tour(rg: RibbonGraph, basepoint: str, start_edge: str, tree):
    """Trace the Bernardi tour of ``tree`` from half-edge ``(start_edge, basepoint)``.

    Returns the half-edges in visiting order and the chip divisor, which
    gets one chip per non-tree edge at the end whose half-edge is reached
    first.
    """
    g = rg.graph
    _check_basepoint(rg, basepoint)
    if start_edge not in g.incident[basepoint]:
        raise StartNotIncident(f"{start_edge!r} is not incident to {basepoint!r}")
    tree = frozenset(tree)
    chips = dict.fromkeys(g.vertices, 0)
    start = HalfEdge(start_edge, basepoint)
    cur = start
    tour = []
    visited = set()
    while True:
        tour.append(cur)
        visited.add(cur)
        e, x = cur
        y = g.other_end(e, x)
        if e in tree:
            cur = HalfEdge(rg.next_edge(y, e), y)
        else:
            if (e, y) not in visited:
                chips[x] += 1
            cur = HalfEdge(rg.next_edge(x, e), x)
        if cur == start:
            break
        if len(tour) > 2 * g.num_edges:
            raise AssertionError("Bernardi tour failed to close")
    return tour, Divisor(chips, g.vertices)


def break_divisor(rg: RibbonGraph, v: str, tree, start_edge: str | None = None):
    start_edge = start_edge or _first_edge(rg, v)
    _, chips = bernardi_tour(rg, v, start_edge, tree)
    return BreakDivisorClass(chips)


@lru_cache(maxsize=256)
def _break_index(rg: RibbonGraph, v: str, start_edge: str) -> dict:
    g = rg.graph
    index = {}
    for t in enumerate_spanning_trees(g):
        key = class_key(g, break_divisor(rg, v, t, start_edge).rep)
        if key in index:
            raise BreakDivisorCollision(
                f"trees {tree_literal(index[key])} and {tree_literal(t)} share a break divisor class"
            )
        index[key] = t
    return index


def bernardi_act(rg: RibbonGraph, basepoint: str, s, tree, start_edge: str | None = None):
    """The tree whose break divisor is equivalent to break_divisor(tree) + s."""
    g = rg.graph
    _check_basepoint(rg, basepoint)
    s = _as_divisor(g, s)
    if s.degree != 0:
        raise NonzeroDegree(f"divisor has degree {s.degree}")
    start_edge = start_edge or _first_edge(rg, basepoint)
    if start_edge not in g.incident[basepoint]:
        raise StartNotIncident(f"{start_edge!r} is not incident to {basepoint!r}")
    index = _break_index(rg, basepoint, start_edge)
    target = break_divisor(rg, basepoint, tree, start_edge).rep + s
    try:
        return index[class_key(g, target)]
    except KeyError:
        raise LookupMiss(f"no tree has break divisor class of {target.literal()}") from None


def act(rg: RibbonGraph, kind: str, basepoint: str, s, tree) -> frozenset:
    if kind == ROTOR:
        s = canonical_form(rg.graph, s, basepoint)
        return rotor_route(rg, basepoint, s, tree)
    if kind == BERNARDI:
        return bernardi_act(rg, basepoint, s, tree)
    raise ValueError(f"unknown torsor kind {kind!r}")


@dataclass(frozen=True, eq=False)
class TorsorTable:
    """The full action map (group element, tree) -> tree at one basepoint.

    ``elements`` are basepoint-reduced representatives; ``entries`` maps
    ``(rep, tree)`` to the image tree.  The rotation system is not part of
    the table; genus recovery receives only the graph and tables.
    """

    kind: str
    basepoint: str
    graph: object
    elements: tuple
    trees: tuple
    entries: Mapping = field(repr=False)

    def __call__(self, s, tree) -> frozenset:
        rep = canonical_form(self.graph, s, self.basepoint)
        try:
            return self.entries[rep, frozenset(tree)]
        except KeyError:
            raise LookupMiss(f"({rep.literal()}, {tree_literal(tree)}) not in table") from None

    def row(self, s) -> dict:
        rep = canonical_form(self.graph, s, self.basepoint)
        return {t: self.entries[rep, t] for t in self.trees}

    def __eq__(self, other):
        if not isinstance(other, TorsorTable):
            return NotImplemented
        return (
            self.kind == other.kind
            and self.basepoint == other.basepoint
            and self.graph == other.graph
            and dict(self.entries) == dict(other.entries)
        )

    __hash__ = None

    def lines(self) -> list:
        rows = sorted(
            (rep.literal(), tree_literal(t), tree_literal(img))
            for (rep, t), img in self.entries.items()
        )
        return [f"table {self.kind} {self.basepoint}"] + [
            f"act {d} {t} -> {img}" for d, t, img in rows
        ]

    def replace(self, rep, tree, image) -> "TorsorTable":
        """Copy with one entry overwritten (used for fault injection)."""
        entries = dict(self.entries)
        entries[rep, frozenset(tree)] = frozenset(image)
        return TorsorTable(self.kind, self.basepoint, self.graph, self.elements, self.trees, entries)


def torsor_table(rg: RibbonGraph, kind: str, basepoint: str) -> TorsorTable:
    g = rg.graph
    _check_basepoint(rg, basepoint)
    elements = tuple(s.rep for s in enumerate_group(g, basepoint))
    trees = tuple(enumerate_spanning_trees(g))
    entries = {}
    if kind == ROTOR:
        for s in elements:
            for t in trees:
                entries[s, t] = rotor_route(rg, basepoint, s, t)
    elif kind == BERNARDI:
        start = _first_edge(rg, basepoint)
        index = _break_index(rg, basepoint, start)
        bd = {t: break_divisor(rg, basepoint, t, start).rep for t in trees}
        bd_keys = {t: class_key(g, d) for t, d in bd.items()}
        for s in elements:
            ks = class_key(g, s)
            for t in trees:
                key = add_keys(g, bd_keys[t], ks)
                try:
                    entries[s, t] = index[key]
                except KeyError:
                    raise LookupMiss(f"no tree for {(bd[t] + s).literal()}") from None
    else:
        raise ValueError(f"unknown torsor kind {kind!r}")
    return TorsorTable(kind, basepoint, g, elements, trees, entries)


def _arrays(table: TorsorTable):
    """Integer arrays: action[s, t] and the group addition table add[s, s']."""
    g = table.graph
    tree_index = {t: i for i, t in enumerate(table.trees)}
    keys = [class_key(g, s) for s in table.elements]
    key_index = {k: i for i, k in enumerate(keys)}
    n, m = len(table.elements), len(table.trees)
    action = np.full((n, m), -1, dtype=np.int64)
    for i, s in enumerate(table.elements):
        for j, t in enumerate(table.trees):
            img = table.entries.get((s, t))
            action[i, j] = tree_index.get(img, -1)
    add = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            add[i, j] = key_index[add_keys(g, keys[i], keys[j])]
    zero = key_index[class_key(g, Divisor.zero(g.vertices))]
    return action, add, zero


def verify_action(table: TorsorTable) -> bool:
    """True iff the table is a free transitive group action.

    Checks totality, identity row, that every row permutes the trees, the
    composition law for all pairs of group elements, and that each column
    ``s -> table(s, t)`` is a bijection onto the trees.
    """
    g = table.graph
    if len(table.elements) != group_order(g) or len(table.trees) != group_order(g):
        return False
    if len(table.entries) != len(table.elements) * len(table.trees):
        return False
    action, add, zero = _arrays(table)
    if (action < 0).any():
        return False
    m = len(table.trees)
    if not (action[zero] == np.arange(m)).all():
        return False
    full = np.arange(m)
    if not (np.sort(action, axis=1) == full).all():
        return False
    if not (np.sort(action, axis=0) == full[:, None]).all():
        return False
    # action[add[s, s'], t] == action[s, action[s', t]]
    lhs = action[add]  # (s, s', t)
    rhs = action[np.arange(len(action))[:, None, None], action[None, :, :]]
    return bool((lhs == rhs).all())


def same_action(a: TorsorTable, b: TorsorTable) -> bool:
    """Whether two tables on the same graph define the same action, matching
    group elements by class rather than by representative."""
    if a.graph != b.graph or set(a.trees) != set(b.trees):
        return False
    for s in a.elements:
        rep = canonical_form(b.graph, s, b.basepoint)
        for t in a.trees:
            if a.entries[s, t] != b.entries.get((rep, t)):
                return False
    return True
