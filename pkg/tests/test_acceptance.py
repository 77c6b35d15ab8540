"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import random
import time

import pytest

from oracles import det, face_count, principal, reduced_laplacian
from sandtorsor.figures import FIG3_VERTEX_MAP, FIG4_VERTEX_MAP, fig3, fig4, fig4_parity_map, fig4_tree
from sandtorsor.generate import random_ribbon_graph
from sandtorsor.graph import count_rotation_systems, enumerate_rotation_systems, genus, pin, trace_faces, v_components
from sandtorsor.recovery import TorsorTableSet, recover_rotation
from sandtorsor.sandpile import (
    Divisor,
    canonical_form,
    enumerate_group,
    fire,
    group_order,
    induced_iso_vgen,
    invariant_factors,
)
from sandtorsor.torsor import BERNARDI, KINDS, ROTOR, _break_index, break_divisor, bernardi_act, rotor_route, same_action, torsor_table, verify_action
from sandtorsor.trees import enumerate_spanning_trees, tree_literal
from sandtorsor.verify import DiagramSpec, MAX_SYSTEMS, check_basepoint_invariance, check_diagram, doubling_map

# runtime limits in seconds, one per criterion
LIMITS = {1: 1.0, 2: 1.0, 3: 10.0, 4: 300.0, 5: 600.0}


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail=""):
        line = f"ACCEPTANCE {number} {title}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f" ({detail})"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def _row(rg, kind, basepoint, chips, trees):
    s = Divisor(chips, rg.vertices)
    return [tree_literal(torsor_table(rg, kind, basepoint)(s, t)) for t in trees]


def test_criterion_1_fig3_reproduction(report):
    start = time.perf_counter()
    g, g2 = fig3()
    faces = (trace_faces(g).count, trace_faces(g2).count)
    genera = (genus(g), genus(g2))
    a = [frozenset({f"a{i}"}) for i in range(1, 6)]
    b = [frozenset({f"b{i}"}) for i in range(1, 6)]
    rows = {
        "r_w1": _row(g, ROTOR, "w1", {"v1": 1, "w1": -1}, a),
        "r_v1": _row(g, ROTOR, "v1", {"w1": 1, "v1": -1}, a),
        "r_w2": _row(g2, ROTOR, "w2", {"v2": 1, "w2": -1}, b),
        "r_v2": _row(g2, ROTOR, "v2", {"w2": 1, "v2": -1}, b),
    }
    expected = {
        "r_w1": ["a2", "a3", "a4", "a5", "a1"],
        "r_v1": ["a3", "a5", "a2", "a1", "a4"],
        "r_w2": ["b4", "b5", "b1", "b2", "b3"],
        "r_v2": ["b5", "b1", "b4", "b2", "b3"],
    }
    elapsed = time.perf_counter() - start
    ok = faces == (3, 1) and genera == (1, 2) and rows == expected and elapsed < LIMITS[1]
    report(1, "Fig3 faces/genus/rows", ok, f"faces={faces} genus={genera} {elapsed:.3f}s")


def test_criterion_2_counterexample_1_diagrams(report):
    start = time.perf_counter()
    g, g2 = fig3()
    phi = {frozenset({f"a{i}"}): frozenset({f"b{i}"}) for i in range(1, 6)}
    spec = DiagramSpec(g, g2, doubling_map(g, g2, FIG3_VERTEX_MAP), phi, FIG3_VERTEX_MAP)
    equalities = 0
    failures = 0
    for kind in KINDS:
        for v in ("v1", "w1"):
            src = torsor_table(g, kind, v)
            tgt = torsor_table(g2, kind, FIG3_VERTEX_MAP[v])
            for s in src.elements:
                for t in src.trees:
                    equalities += 1
                    if phi[src(s, t)] != tgt(spec.gamma_of(s), phi[t]):
                        failures += 1
    elapsed = time.perf_counter() - start
    ok = equalities == 100 and failures == 0 and elapsed < LIMITS[2]
    report(2, "counterexample-1 diagrams", ok, f"{equalities - failures}/{equalities} equal, {elapsed:.3f}s")


def test_criterion_3_family(report):
    start = time.perf_counter()
    problems = []
    for g in (1, 2, 3):
        x = 2 * g + 1
        a, b = fig4(x)
        if group_order(a.graph) != 2 * x or group_order(b.graph) != 2 * x:
            problems.append(f"x={x}: group orders")
        if invariant_factors(a.graph) != [2 * x] or invariant_factors(b.graph) != [2 * x]:
            problems.append(f"x={x}: invariant factors")
        c, c2 = fig4(x + 1)
        if invariant_factors(c.graph) != [2, x + 1] or invariant_factors(c2.graph) != [2 * x + 2]:
            problems.append(f"x={x + 1}: even control factors")
        for k in range(1, x + 1):
            one = break_divisor(a, "v1", fig4_tree(x, 1, k)).rep
            two = break_divisor(a, "v1", fig4_tree(x, 2, k)).rep
            if (one["v1"], one["z1"], one["w1"]) != (0, k, x - k):
                problems.append(f"x={x}: break divisor [1,{k}]")
            if (two["v1"], two["z1"], two["w1"]) != (1, k - 1, x - k):
                problems.append(f"x={x}: break divisor [2,{k}]")
        iso = induced_iso_vgen(a.graph, b.graph, ["v1", "w1"], FIG4_VERTEX_MAP)
        spec = DiagramSpec(a, b, tuple((s.rep, t.rep) for s, t in iso.items()), fig4_parity_map(x), FIG4_VERTEX_MAP)
        for kind in KINDS:
            for v in ("v1", "w1"):
                if not check_diagram(spec, kind, v).passed:
                    problems.append(f"x={x}: {kind} diagram at {v}")
        if (genus(a), genus(b)) != (g, 2 * g):
            problems.append(f"x={x}: genera")
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < LIMITS[3]
    report(3, "genus g vs 2g family", ok, "; ".join(problems) or f"g=1,2,3 in {elapsed:.2f}s")


def _sweep_graphs(catalog):
    out = []
    for name, g in catalog:
        if name.startswith("two-vertex-") and g.num_edges >= 2:
            out.append((name, g))
        elif name.startswith("three-vertex-"):
            out.append((name, g))
    return out


def test_criterion_4_bigone_sweep(report, catalog):
    start = time.perf_counter()
    graphs = _sweep_graphs(catalog)
    exceptions = []
    systems = 0
    for name, g in graphs:
        for rg in enumerate_rotation_systems(g):
            systems += 1
            planar = genus(rg) == 0
            for kind in KINDS:
                if check_basepoint_invariance(rg, kind) != planar:
                    exceptions.append(f"{name} {kind} {rg.rotation}")
    elapsed = time.perf_counter() - start
    ok = len(graphs) == 14 and not exceptions and elapsed < LIMITS[4]
    report(4, "basepoint invariance iff planar", ok,
           f"{len(graphs)} graphs, {systems} systems, {len(exceptions)} exceptions, {elapsed:.1f}s")


def test_criterion_5_genus_recovery(report):
    start = time.perf_counter()
    rng = random.Random(20240601)
    correct = exact = cut_free = with_cut = 0
    for _ in range(100):
        rg = random_ribbon_graph(rng, 5, 8)
        g = rg.graph
        rec = recover_rotation(g, TorsorTableSet.from_ribbon(rg))
        correct += genus(rec.ribbon(g)) == genus(rg)
        if all(len(v_components(g, v)) == 1 for v in g.vertices):
            cut_free += 1
            exact += all(pin(rec.orders[v]) == pin(rg.orders[v]) for v in g.vertices)
        else:
            with_cut += 1
    elapsed = time.perf_counter() - start
    ok = correct == 100 and exact == cut_free and with_cut > 0 and elapsed < LIMITS[5]
    report(5, "genus recovery round trip", ok,
           f"{correct}/100 genus, {exact}/{cut_free} cut-free exact, {with_cut} with cut vertices, {elapsed:.1f}s")


def _instances(catalog, sample=20):
    """Every rotation system of each catalog graph; a seeded sample for the huge one."""
    rng = random.Random(99)
    for name, g in catalog:
        total = count_rotation_systems(g)
        if total <= MAX_SYSTEMS:
            for rg in enumerate_rotation_systems(g):
                yield name, rg
        else:
            for i in sorted(rng.sample(range(total), sample)):
                yield name, next(enumerate_rotation_systems(g, i, i + 1))
    for i in range(20):
        yield f"random-{i}", random_ribbon_graph(rng, 5, 7)


def test_criterion_6_action_laws(report, catalog):
    failures = []
    tables = 0
    rng = random.Random(6)
    systems = 0
    for name, rg in _instances(catalog):
        systems += 1
        g = rg.graph
        trees = enumerate_spanning_trees(g)
        for v in g.vertices:
            for kind in KINDS:
                tables += 1
                if not verify_action(torsor_table(rg, kind, v)):
                    failures.append(f"{name} {kind} {v}: action law")
            for e in g.incident[v]:
                try:
                    _break_index(rg, v, e)
                except Exception as exc:  # collision means injectivity failed
                    failures.append(f"{name} {v} {e}: {exc}")
            group = enumerate_group(g, v)
            for s in rng.sample(group, min(2, len(group))):
                t = rng.choice(trees)
                want = rotor_route(rg, v, s.rep, t)
                for _ in range(5):
                    if rotor_route(rg, v, s.rep, t, rng=random.Random(rng.random())) != want:
                        failures.append(f"{name} {v}: schedule dependence")
                if len({bernardi_act(rg, v, s.rep, t, start_edge=e) for e in g.incident[v]}) != 1:
                    failures.append(f"{name} {v}: start-edge dependence")
    report(6, "action laws", not failures, f"{systems} systems, {tables} tables, {len(failures)} failures")


def test_criterion_7_cross_oracles(report, catalog):
    failures = []
    systems = 0
    for name, g in catalog:
        count = len(enumerate_spanning_trees(g))
        if count != abs(det(reduced_laplacian(list(g.vertices), g.edges))) or count != group_order(g):
            failures.append(f"{name}: tree count")
        for rg in enumerate_rotation_systems(g):
            systems += 1
            faces = trace_faces(rg).count
            if faces != face_count(g.edges, rg.orders):
                failures.append(f"{name}: face count")
            if g.num_vertices - g.num_edges + faces != 2 - 2 * genus(rg):
                failures.append(f"{name}: Euler relation")
    rng = random.Random(7)
    graphs = [g for _, g in catalog]
    pairs = 0
    for i in range(1000):
        g = rng.choice(graphs)
        a = Divisor({v: rng.randint(-3, 3) for v in g.vertices}, g.vertices)
        a = a + Divisor({g.vertices[0]: -a.degree}, g.vertices)
        if i % 2:
            b = a
            for _ in range(rng.randint(1, 4)):
                b = fire(g, b, rng.choice(g.vertices))
        else:
            b = Divisor({v: rng.randint(-3, 3) for v in g.vertices}, g.vertices)
            b = b + Divisor({g.vertices[0]: -b.degree}, g.vertices)
        q = rng.choice(g.vertices)
        same = canonical_form(g, a, q) == canonical_form(g, b, q)
        pairs += 1
        if same != principal(g.vertices, g.edges, dict(a - b)):
            failures.append(f"canonical form disagrees on {a.literal()} / {b.literal()}")
    report(7, "cross-oracle checks", not failures,
           f"{len(catalog)} graphs, {systems} systems, {pairs} divisor pairs, {len(failures)} failures")


def test_criterion_8_swap_and_planar_agreement(report, catalog):
    failures = []
    checked = 0
    for name, g in catalog:
        if count_rotation_systems(g) > MAX_SYSTEMS:
            continue
        for rg in enumerate_rotation_systems(g):
            if g.num_vertices == 2:
                v, w = g.vertices
                for b, r in ((v, w), (w, v)):
                    checked += 1
                    if not same_action(torsor_table(rg, BERNARDI, b), torsor_table(rg, ROTOR, r)):
                        failures.append(f"{name}: bernardi {b} != rotor {r}")
            if genus(rg) == 0:
                for v in g.vertices:
                    checked += 1
                    if dict(torsor_table(rg, ROTOR, v).entries) != dict(torsor_table(rg, BERNARDI, v).entries):
                        failures.append(f"{name}: planar tables differ at {v}")
    report(8, "two-vertex swap and planar agreement", not failures, f"{checked} comparisons, {len(failures)} failures")
