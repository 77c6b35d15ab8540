"""Constructors for the small ribbon graphs used throughout the test suite.

``fig1`` .. ``fig4`` rebuild the worked examples: a 2-vertex 3-edge graph
with equal orders at both ends, a planar 6-vertex rotor-routing demo, the
5-edge pair with equal torsors but genera 1 and 2, and the 3-vertex family
parameterised by the number ``x`` of middle-to-right edges.
"""

from __future__ import annotations

import math

from .graph import Multigraph, RibbonGraph
from .sandpile import Divisor

__all__ = [
    "fig1",
    "fig2",
    "fig2_example",
    "fig3",
    "fig4",
    "fig4_tree",
    "fig4_parity_map",
    "two_vertex_graph",
    "clockwise_rotation",
    "FIG3_VERTEX_MAP",
    "FIG4_VERTEX_MAP",
]


def two_vertex_graph(n: int, v: str = "v", w: str = "w", prefix: str = "e") -> Multigraph:
    return Multigraph.from_edges([(f"{prefix}{i}", v, w) for i in range(1, n + 1)])


def clockwise_rotation(graph: Multigraph, coords: dict) -> RibbonGraph:
    """Rotation system read off a straight-line drawing, clockwise at each vertex."""
    orders = {}
    for v in graph.vertices:
        x0, y0 = coords[v]

        def angle(e, v=v, x0=x0, y0=y0):
            x1, y1 = coords[graph.other_end(e, v)]
            return -math.atan2(y1 - y0, x1 - x0)

        orders[v] = sorted(graph.incident[v], key=angle)
    return RibbonGraph.from_orders(graph, orders)


def fig1() -> RibbonGraph:
    g = two_vertex_graph(3)
    return RibbonGraph.from_orders(g, {"v": ("e1", "e2", "e3"), "w": ("e1", "e2", "e3")})


FIG2_COORDS = {
    "a": (3.0, 4.0),
    "b": (1.5, 4.0),
    "v": (2.0, 5.0),
    "d": (3.0, 5.5),
    "e": (4.5, 4.0),
    "f": (4.5, 5.5),
}


def fig2() -> RibbonGraph:
    pairs = ["ab", "av", "ad", "ae", "bv", "dv", "df", "ef"]
    g = Multigraph.from_edges([(p, p[0], p[1]) for p in pairs])
    return clockwise_rotation(g, FIG2_COORDS)


def fig2_example():
    """(ribbon graph, basepoint, divisor, starting tree, expected image tree)."""
    rg = fig2()
    s = Divisor({"e": 1, "v": -1}, rg.vertices)
    start = frozenset({"ab", "ae", "bv", "df", "ef"})
    image = frozenset({"av", "ad", "bv", "df", "ef"})
    return rg, "v", s, start, image


def fig3():
    """The pair (G, G') on vertices v1,w1 / v2,w2 with edges a1..a5 / b1..b5."""
    g = two_vertex_graph(5, "v1", "w1", "a")
    g2 = two_vertex_graph(5, "v2", "w2", "b")
    rg = RibbonGraph.from_orders(
        g, {"v1": ("a1", "a2", "a3", "a4", "a5"), "w1": ("a1", "a3", "a2", "a5", "a4")}
    )
    rg2 = RibbonGraph.from_orders(
        g2, {"v2": ("b1", "b4", "b2", "b5", "b3"), "w2": ("b1", "b5", "b3", "b4", "b2")}
    )
    return rg, rg2


def _q(x: int, j: int) -> str:
    return f"q{j:0{len(str(2 * x))}d}"


def fig4(x: int):
    """The pair (G, G') for parameter ``x``.

    G: v1 =2= z1 =x= w1, v-z edges p1, p2 and z-w edges q..; G': v2 -p- z2
    =2x= w2.  At z the left edges follow the right ones as a block, and
    the right edges run in the same order at both of their endpoints.
    """
    qs = [_q(x, j) for j in range(1, x + 1)]
    g = Multigraph.from_edges(
        [("p1", "v1", "z1"), ("p2", "v1", "z1")] + [(q, "z1", "w1") for q in qs]
    )
    rg = RibbonGraph.from_orders(
        g, {"v1": ("p1", "p2"), "z1": tuple(qs) + ("p1", "p2"), "w1": tuple(qs)}
    )
    qs2 = [_q(x, j) for j in range(1, 2 * x + 1)]
    g2 = Multigraph.from_edges([("p", "v2", "z2")] + [(q, "z2", "w2") for q in qs2])
    rg2 = RibbonGraph.from_orders(
        g2, {"v2": ("p",), "z2": tuple(qs2) + ("p",), "w2": tuple(qs2)}
    )
    return rg, rg2


def fig4_tree(x: int, a: int, b: int | None = None) -> frozenset:
    """Tree [a, b] of G (p_a and q_b), or tree [a] of G' when ``b`` is None."""
    if b is None:
        return frozenset({"p", _q(x, a)})
    return frozenset({f"p{a}", _q(x, b)})


def fig4_parity_map(x: int) -> dict:
    """[a,b] -> [b] when a, b share parity, else [b+x]."""
    return {
        fig4_tree(x, a, b): fig4_tree(x, b if (a - b) % 2 == 0 else b + x)
        for a in (1, 2)
        for b in range(1, x + 1)
    }


FIG4_VERTEX_MAP = {"v1": "v2", "z1": "z2", "w1": "w2"}
FIG3_VERTEX_MAP = {"v1": "v2", "w1": "w2"}
