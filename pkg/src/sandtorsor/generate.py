"""Seeded random ribbon graphs for round-trip and property harnesses."""

from __future__ import annotations

import random

from .graph import Multigraph, RibbonGraph

__all__ = ["random_multigraph", "random_ribbon_graph", "random_rotation"]


def random_multigraph(rng: random.Random, max_vertices: int = 5, max_edges: int = 8) -> Multigraph:
    """Connected loopless multigraph: a random tree plus random extra edges."""
    n = rng.randint(2, max_vertices)
    m = rng.randint(n - 1, max(n - 1, max_edges))
    names = [f"x{i}" for i in range(n)]
    pairs = []
    for i in range(1, n):
        pairs.append((names[rng.randrange(i)], names[i]))
    while len(pairs) < m:
        u, w = rng.sample(names, 2)
        pairs.append((u, w))
    rng.shuffle(pairs)
    return Multigraph.from_edges([(f"e{i}", u, w) for i, (u, w) in enumerate(pairs)])


def random_rotation(rng: random.Random, graph: Multigraph) -> RibbonGraph:
    orders = {}
    for v in graph.vertices:
        es = list(graph.incident[v])
        rng.shuffle(es)
        orders[v] = es
    return RibbonGraph.from_orders(graph, orders)


def random_ribbon_graph(rng: random.Random, max_vertices: int = 5, max_edges: int = 8) -> RibbonGraph:
    return random_rotation(rng, random_multigraph(rng, max_vertices, max_edges))
