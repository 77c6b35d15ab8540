import pytest
from hypothesis import given, settings

from oracles import brute_trees
from sandtorsor.errors import NotSameComponent, SameEdge, TreeError, UnknownVertex
from sandtorsor.figures import fig2, fig3, fig4
from sandtorsor.graph import Multigraph, v_components
from sandtorsor.trees import (
    enumerate_spanning_trees,
    is_spanning_tree,
    orient_toward,
    parse_tree,
    path_in_tree,
    tree_literal,
    tree_satisfying_lemma_tree,
)
from strategies import ribbon_graphs


def test_tree_literal_roundtrip():
    t = frozenset({"a3", "a1"})
    assert tree_literal(t) == "a1,a3"
    assert parse_tree("a3, a1") == t


def test_enumeration_matches_brute_force(catalog):
    for _, g in catalog:
        if g.num_edges > 10:
            continue
        trees = enumerate_spanning_trees(g)
        assert sorted(map(sorted, trees)) == sorted(map(sorted, brute_trees(g.vertices, g.edges)))
        assert trees == sorted(trees, key=sorted)


def test_single_tree_graph():
    g = Multigraph.from_edges([("e1", "a", "b"), ("e2", "b", "c")])
    assert enumerate_spanning_trees(g) == [frozenset({"e1", "e2"})]


def test_is_spanning_tree():
    g = fig2().graph
    assert is_spanning_tree(g, {"ab", "ae", "bv", "df", "ef"})
    assert not is_spanning_tree(g, {"ab", "av", "bv", "df", "ef"})
    assert not is_spanning_tree(g, {"ab", "ae", "bv", "df"})


def test_path_in_tree():
    g = fig2().graph
    t = {"ab", "ae", "bv", "df", "ef"}
    assert path_in_tree(g, t, "d", "v") == ("df", "ef", "ae", "ab", "bv")
    assert path_in_tree(g, t, "v", "v") == ()
    with pytest.raises(UnknownVertex):
        path_in_tree(g, t, "v", "nope")
    with pytest.raises(TreeError):
        path_in_tree(g, {"ab"}, "a", "f")


def test_orient_toward_basepoint():
    g = fig2().graph
    rot = orient_toward(g, {"ab", "ae", "bv", "df", "ef"}, "v")
    assert rot.rotor == {"b": "bv", "a": "ab", "e": "ae", "f": "ef", "d": "df"}
    with pytest.raises(TreeError):
        orient_toward(g, {"ab"}, "v")


def test_probe_tree_two_vertex():
    g = fig3()[0].graph
    t = tree_satisfying_lemma_tree(g, "v1", "a1", "a2")
    assert t == frozenset({"a1"})
    with pytest.raises(SameEdge):
        tree_satisfying_lemma_tree(g, "v1", "a1", "a1")


def test_probe_tree_needs_one_component():
    g = fig4(3)[0].graph
    with pytest.raises(NotSameComponent):
        tree_satisfying_lemma_tree(g, "z1", "p1", "q1")


@settings(max_examples=80, deadline=None)
@given(ribbon_graphs(max_vertices=5, max_edges=8))
def test_probe_tree_conditions(rg):
    g = rg.graph
    for v in g.vertices:
        for comp in v_components(g, v):
            es = comp.incident[v]
            for e1 in es:
                for e2 in es:
                    if e1 == e2:
                        continue
                    t = tree_satisfying_lemma_tree(g, v, e1, e2)
                    assert is_spanning_tree(g, t)
                    assert e1 in t and e2 not in t
                    w1, w2 = g.other_end(e1, v), g.other_end(e2, v)
                    path = path_in_tree(g, t, w2, v)
                    assert path[-1] == e1
                    x = w2
                    for e in path[:-1]:
                        x = g.other_end(e, x)
                    assert x == w1
