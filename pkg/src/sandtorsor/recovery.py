"""Recover a rotation system (up to harmless choices) and its genus from rotor tables.

The recovery side sees only the multigraph and one complete rotor-routing
table per basepoint.  At each vertex ``v`` it rebuilds the cyclic order of
every v-component from single-chip probes, then works out how components
interleave by probing with chips sent along arcs of one component into the
gaps of another.  Components that never interleave with anything are
placed as blocks and logged; such placements do not change the genus.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .errors import (
    InconsistentConstraints,
    MultipleCandidates,
    MultipleProperMatches,
    NoCandidate,
    NoMatch,
    PrematureCycle,
    RecoveryError,
    UnknownVertex,
)
from .graph import Multigraph, RibbonGraph, genus, pin, v_components
from .sandpile import Divisor
from .torsor import ROTOR, TorsorTable, torsor_table
from .trees import tree_satisfying_lemma_tree

__all__ = [
    "AMBIGUOUS",
    "Alternatives",
    "TorsorTableSet",
    "RecoveredRotation",
    "successor_in_component",
    "component_order",
    "gap_contents",
    "assemble_rotation",
    "consistent_orders",
    "recover_rotation",
    "recover_genus",
]


class _Ambiguous:
    def __repr__(self):
        return "AMBIGUOUS"


AMBIGUOUS = _Ambiguous()


@dataclass(frozen=True)
class Alternatives:
    """Several proper arcs that send chips to the same far endpoints.

    Parallel edges from ``v`` make their arcs indistinguishable to a probe,
    so the gap is only known up to this set.
    """

    arcs: tuple


@dataclass(frozen=True)
class TorsorTableSet:
    """One rotor table per vertex of ``graph``."""

    graph: Multigraph
    tables: Mapping = field(repr=False)

    def __post_init__(self):
        missing = set(self.graph.vertices) - set(self.tables)
        if missing:
            raise RecoveryError(f"no table for basepoint {min(missing)!r}")
        for v, t in self.tables.items():
            if t.kind != ROTOR or t.basepoint != v or t.graph != self.graph:
                raise RecoveryError(f"table for {v!r} is not a rotor table of this graph at {v!r}")

    @classmethod
    def from_ribbon(cls, rg: RibbonGraph) -> "TorsorTableSet":
        return cls(rg.graph, {v: torsor_table(rg, ROTOR, v) for v in rg.vertices})

    def __getitem__(self, v) -> TorsorTable:
        return self.tables[v]


@dataclass(frozen=True)
class RecoveredRotation:
    orders: dict
    ambiguities: tuple  # ((vertex, edges of the union placed arbitrarily), ...)

    def ribbon(self, graph: Multigraph) -> RibbonGraph:
        return RibbonGraph.from_orders(graph, self.orders)


def _component_of(graph: Multigraph, v: str, e: str) -> Multigraph:
    for comp in v_components(graph, v):
        if e in comp.endpoints:
            return comp
    raise UnknownVertex(f"{e!r} is not incident to {v!r}")


def _probe(graph, tables, v, e1, e2):
    """Probe tree T for the pair (e1, e2) and the image of T under v - w2 at w2."""
    w2 = graph.other_end(e2, v)
    tree = tree_satisfying_lemma_tree(graph, v, e1, e2)
    s = Divisor({v: 1, w2: -1}, graph.vertices)
    return tree, tables[w2](s, tree)


def successor_in_component(graph: Multigraph, tables, v: str, e1: str) -> str:
    """The edge right after ``e1`` in the order at ``v`` restricted to e1's v-component."""
    if e1 not in graph.incident.get(v, ()):
        raise UnknownVertex(f"{e1!r} is not incident to {v!r}")
    comp = _component_of(graph, v, e1)
    cands = [e for e in comp.incident[v] if e != e1]
    if not cands:
        raise NoCandidate(f"{e1!r} is the only edge of its component at {v!r}")
    edges = set(comp.edge_ids)
    found = []
    for e2 in cands:
        tree, image = _probe(graph, tables, v, e1, e2)
        expected = ((tree & edges) - {e1}) | {e2}
        if image & edges == expected:
            found.append(e2)
    if not found:
        raise NoCandidate(f"no successor of {e1!r} at {v!r}")
    if len(found) > 1:
        raise MultipleCandidates(f"several successors of {e1!r} at {v!r}: {found}")
    return found[0]


def component_order(graph: Multigraph, tables, v: str, component: Multigraph) -> tuple:
    """Cyclic order at ``v`` of the component's edges, starting from the smallest."""
    edges = component.incident[v]
    order = [edges[0]]
    if len(edges) == 1:
        return tuple(order)
    while True:
        nxt = successor_in_component(graph, tables, v, order[-1])
        if nxt == order[0]:
            break
        if nxt in order or len(order) == len(edges):
            raise PrematureCycle(f"successor chain at {v!r} revisits {nxt!r}")
        order.append(nxt)
    if len(order) != len(edges):
        raise PrematureCycle(
            f"successor chain at {v!r} closed after {len(order)} of {len(edges)} edges"
        )
    return tuple(order)


def _arcs(order: tuple):
    """Every contiguous arc of a cyclic order, including the empty and full arcs."""
    n = len(order)
    yield ()
    for k in range(1, n):
        for i in range(n):
            yield tuple(order[(i + j) % n] for j in range(k))
    yield tuple(order)


def gap_contents(
    graph: Multigraph,
    tables,
    v: str,
    pair: tuple,
    other: Multigraph,
    other_order: tuple | None = None,
):
    """Edges of ``other`` lying strictly between the sequential pair ``(e1, e2)``.

    Returns the arc in traversal order, or :data:`AMBIGUOUS` when the probe
    cannot tell the empty arc from the full one.
    """
    e1, e2 = pair
    if other_order is None:
        other_order = component_order(graph, tables, v, other)
    tree, image = _probe(graph, tables, v, e1, e2)
    d_edges = set(other.edge_ids)
    target = image & d_edges
    matches = []
    for arc in _arcs(other_order):
        chips = {v: -len(arc)}
        for e in arc:
            x = graph.other_end(e, v)
            chips[x] = chips.get(x, 0) + 1
        s = Divisor(chips, graph.vertices)
        if tables[v](s, tree) & d_edges == target:
            matches.append(arc)
    if not matches:
        raise NoMatch(f"no arc of the component fits between {e1!r} and {e2!r} at {v!r}")
    proper = [a for a in matches if 0 < len(a) < len(other_order)]
    if proper:
        if len(proper) < len(matches):
            raise MultipleProperMatches(f"arc and trivial arc both fit at {v!r}")
        ends = {tuple(sorted(graph.other_end(e, v) for e in a)) for a in proper}
        if len(ends) > 1:
            raise MultipleProperMatches(f"several arcs fit between {e1!r} and {e2!r} at {v!r}")
        return proper[0] if len(proper) == 1 else Alternatives(tuple(proper))
    if len(matches) == 2:
        return AMBIGUOUS
    raise NoMatch(f"only one of the trivial arcs fits between {e1!r} and {e2!r} at {v!r}")


class _Constraints:
    """Gap constraints at one vertex: (C index, e1, e2, D index) -> arc or AMBIGUOUS."""

    def __init__(self, graph, tables, v):
        self.v = v
        self.comps = v_components(graph, v)
        self.orders = [component_order(graph, tables, v, c) for c in self.comps]
        self.sets = [set(o) for o in self.orders]
        self.rules = []
        for ci, co in enumerate(self.orders):
            if len(co) < 2:
                continue
            for i, e1 in enumerate(co):
                e2 = co[(i + 1) % len(co)]
                for di, dc in enumerate(self.comps):
                    if di == ci:
                        continue
                    res = gap_contents(graph, tables, v, (e1, e2), dc, self.orders[di])
                    self.rules.append((ci, e1, e2, di, res))

    def linked_groups(self) -> list:
        n = len(self.comps)
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                a = parent[a]
            return a

        for ci, _, _, di, res in self.rules:
            if res is not AMBIGUOUS:
                a, b = find(ci), find(di)
                parent[max(a, b)] = min(a, b)
        groups = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def satisfied(self, order: tuple, members) -> bool:
        """Check every rule whose two components are both in ``members``."""
        pos = {e: i for i, e in enumerate(order)}
        n = len(order)
        for ci, e1, e2, di, res in self.rules:
            if ci not in members or di not in members:
                continue
            i, j = pos[e1], pos[e2]
            between = [order[(i + k) % n] for k in range(1, (j - i) % n)]
            arc = tuple(e for e in between if e in self.sets[di])
            if res is AMBIGUOUS:
                if 0 < len(arc) < len(self.orders[di]):
                    return False
            elif isinstance(res, Alternatives):
                if arc not in res.arcs:
                    return False
            elif arc != res:
                return False
        return True


def _merge(base: tuple, add: tuple):
    """All cyclic orders (pinned) interleaving two cyclic orders, keeping each intact."""
    seen = set()
    n, k = len(base), len(add)
    for r in range(k):
        rot = add[r:] + add[:r]
        # choose, for each element of rot, the base position it follows
        for slots in itertools.combinations_with_replacement(range(n), k):
            out = []
            it = 0
            for i, b in enumerate(base):
                out.append(b)
                while it < k and slots[it] == i:
                    out.append(rot[it])
                    it += 1
            key = pin(out)
            if key not in seen:
                seen.add(key)
                yield key


def _interleavings(cons: _Constraints, members: list) -> list:
    """Every consistent cyclic order of the given components' edges."""
    partial = [cons.orders[members[0]]]
    placed = {members[0]}
    for m in members[1:]:
        placed = placed | {m}
        nxt = []
        for base in partial:
            for cand in _merge(base, cons.orders[m]):
                if cons.satisfied(cand, placed):
                    nxt.append(cand)
        partial = sorted(set(nxt))
    return partial


def consistent_orders(graph: Multigraph, tables, v: str) -> list:
    """Every cyclic order at ``v`` agreeing with all probe results (pinned, sorted)."""
    cons = _Constraints(graph, tables, v)
    return _interleavings(cons, list(range(len(cons.comps))))


def assemble_rotation(graph: Multigraph, tables, v: str):
    """One cyclic order at ``v`` consistent with all probes, and the ambiguity log."""
    cons = _Constraints(graph, tables, v)
    log = []
    blocks = []
    for members in cons.linked_groups():
        options = _interleavings(cons, members)
        if not options:
            raise InconsistentConstraints(f"no order at {v!r} fits the probes")
        edges = tuple(sorted(e for m in members for e in cons.orders[m]))
        if len(options) > 1:
            log.append((v, edges))
        blocks.append(options[0])
    blocks.sort(key=lambda b: b[0])
    reference, rest = blocks[0], blocks[1:]
    order = list(reference[:1])
    for b in rest:
        order.extend(b)
        log.append((v, tuple(sorted(b))))
    order.extend(reference[1:])
    order = pin(order)
    if not cons.satisfied(order, set(range(len(cons.comps)))):
        raise InconsistentConstraints(f"assembled order at {v!r} violates a probe")
    return order, log


def recover_rotation(graph: Multigraph, tables) -> RecoveredRotation:
    orders = {}
    log = []
    for v in graph.vertices:
        orders[v], amb = assemble_rotation(graph, tables, v)
        log.extend(amb)
    return RecoveredRotation(orders, tuple(log))


def recover_genus(graph: Multigraph, tables) -> int:
    return genus(recover_rotation(graph, tables).ribbon(graph))
