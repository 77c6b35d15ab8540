import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_trees, det, principal, reduced_laplacian
from sandtorsor.errors import DegreeMismatch, FormatError, NonzeroDegree, PropertyOneFails, PropertyTwoFails
from sandtorsor.figures import FIG4_VERTEX_MAP, fig2, fig3, fig4, two_vertex_graph
from sandtorsor.graph import Multigraph
from sandtorsor.sandpile import (
    Divisor,
    canonical_form,
    class_key,
    divisor,
    enumerate_group,
    equivalent,
    fire,
    group_order,
    induced_iso_vgen,
    invariant_factors,
    is_principal,
    is_reduced,
    laplacian,
)
from strategies import ribbon_graphs


def _random_divisor(rng, graph, degree=0, spread=4):
    vals = {v: rng.randint(-spread, spread) for v in graph.vertices}
    vals[graph.vertices[0]] += degree - sum(vals.values())
    return Divisor(vals, graph.vertices)


def test_divisor_literal_roundtrip():
    d = Divisor.parse("w1=-1,v1=1", ["v1", "w1"])
    assert d.literal() == "v1=1,w1=-1"
    assert Divisor.parse("v1=2", ["v1", "w1"]) == Divisor({"v1": 2, "w1": 0})
    assert Divisor.parse("", ["a", "b"]) == Divisor.zero(["a", "b"])
    for bad in ("v1", "v1=x", "v1=1,v1=2"):
        with pytest.raises(FormatError):
            Divisor.parse(bad, ["v1", "w1"])


def test_divisor_arithmetic():
    a = Divisor({"x": 1, "y": -1})
    b = Divisor({"x": 2, "y": 0})
    assert (a + b).literal() == "x=3,y=-1"
    assert (b - a)["y"] == 1
    assert (-a)["x"] == -1
    assert (a * 3).degree == 0
    assert hash(a) == hash(Divisor({"y": -1, "x": 1}))


def test_laplacian_sign_convention():
    g = fig3()[0].graph
    assert laplacian(g) == ((-5, 5), (5, -5))
    d = fire(g, divisor(g), "v1")
    assert d.literal() == "v1=-5,w1=5"


def test_fire_is_principal():
    g = fig2().graph
    d = divisor(g)
    for v in g.vertices:
        d = fire(g, d, v)
        assert is_principal(g, d)
    # firing every vertex changes nothing
    assert d == divisor(g)


def test_is_principal_rejects_nonzero_degree():
    g = fig3()[0].graph
    with pytest.raises(NonzeroDegree):
        is_principal(g, {"v1": 1})
    with pytest.raises(DegreeMismatch):
        equivalent(g, {"v1": 1}, {"v1": 0})


def test_fig3_group_elements():
    g = fig3()[0].graph
    reps = [s.rep.literal() for s in enumerate_group(g, "w1")]
    assert reps == [f"v1={k},w1={-k}" for k in range(5)]
    assert invariant_factors(g) == [5]


def test_fig4_invariant_factors():
    for x in (3, 5, 7):
        a, b = fig4(x)
        assert group_order(a.graph) == group_order(b.graph) == 2 * x
        assert invariant_factors(a.graph) == invariant_factors(b.graph) == [2 * x]
    for x in (4, 6):
        a, b = fig4(x)
        assert invariant_factors(a.graph) == [2, x]
        assert invariant_factors(b.graph) == [2 * x]


def test_group_order_is_tree_count(catalog):
    for _, g in catalog:
        n = len(brute_trees(g.vertices, g.edges)) if g.num_edges <= 10 else None
        m = abs(det(reduced_laplacian(list(g.vertices), g.edges)))
        assert group_order(g) == m
        if n is not None:
            assert n == m
        assert len(enumerate_group(g, g.vertices[-1])) == m


def test_canonical_form_examples():
    g = fig3()[0].graph
    assert canonical_form(g, {"v1": 1, "w1": -1}, "v1").literal() == "v1=-4,w1=4"
    assert canonical_form(g, {"v1": 7, "w1": -7}, "w1").literal() == "v1=2,w1=-2"
    assert is_reduced(g, {"v1": 2, "w1": -2}, "w1")
    assert not is_reduced(g, {"v1": 5, "w1": -5}, "w1")


def test_canonical_form_other_degrees():
    g = fig2().graph
    rng = random.Random(3)
    for deg in (-2, 0, 3):
        d = _random_divisor(rng, g, deg)
        c = canonical_form(g, d, "v")
        assert c.degree == deg
        assert all(c[x] >= 0 for x in g.vertices if x != "v")
        assert equivalent(g, c, d)


def test_canonical_agrees_with_principal_oracle():
    rng = random.Random(11)
    g = fig4(3)[0].graph
    for _ in range(200):
        a = _random_divisor(rng, g)
        b = _random_divisor(rng, g)
        oracle = principal(g.vertices, g.edges, dict(a - b))
        assert (canonical_form(g, a, "z1") == canonical_form(g, b, "z1")) == oracle
        assert is_principal(g, a - b) == oracle
        assert (class_key(g, a) == class_key(g, b)) == oracle


@settings(max_examples=80, deadline=None)
@given(ribbon_graphs(max_vertices=5, max_edges=8), st.integers(0, 10**6))
def test_reduced_form_properties(rg, seed):
    g = rg.graph
    rng = random.Random(seed)
    d = _random_divisor(rng, g)
    for q in g.vertices:
        c = canonical_form(g, d, q)
        assert is_principal(g, c - d)
        assert canonical_form(g, c, q) == c
        # an equivalent divisor reduces to the same thing
        moved = fire(g, d, rng.choice(g.vertices))
        assert canonical_form(g, moved, q) == c
    assert principal(g.vertices, g.edges, dict(d - canonical_form(g, d, g.vertices[0])))


def test_reduced_representatives_are_distinct_classes():
    g = fig2().graph
    keys = {class_key(g, s.rep) for s in enumerate_group(g, "a")}
    assert len(keys) == group_order(g)


def test_induced_iso_two_vertex_is_identity():
    g = two_vertex_graph(4)
    iso = induced_iso_vgen(g, g, ["v", "w"])
    assert all(a.rep == b.rep for a, b in iso.items())


def test_induced_iso_fig4():
    a, b = fig4(3)
    iso = induced_iso_vgen(a.graph, b.graph, ["v1", "w1"], FIG4_VERTEX_MAP)
    assert len(iso) == 6
    assert len({t.rep for t in iso.values()}) == 6
    # v1 - w1 goes to v2 - w2
    s = {k.rep.literal(): v for k, v in iso.items()}
    gen = canonical_form(a.graph, {"v1": 1, "w1": -1}, "v1").literal()
    assert s[gen].rep == canonical_form(b.graph, {"v2": 1, "w2": -1}, "v2")


def test_induced_iso_even_x_fails_with_witness():
    a, b = fig4(4)
    with pytest.raises(PropertyTwoFails) as info:
        induced_iso_vgen(a.graph, b.graph, ["v1", "w1"], FIG4_VERTEX_MAP)
    w = info.value.witness
    assert is_principal(a.graph, w)


def test_induced_iso_property_one_fails_on_noncyclic_group():
    # four parallel edges twice in a row: Z/4 x Z/4 is not generated by one element
    g = Multigraph.from_edges(
        [(f"p{i}", "a", "b") for i in range(4)] + [(f"q{i}", "b", "c") for i in range(4)]
    )
    with pytest.raises(PropertyOneFails) as info:
        induced_iso_vgen(g, g, ["a", "b"])
    assert info.value.witness.degree == 0
