"""Line-oriented text formats for graphs, rotations, divisors, trees and tables.

A graph file holds ``vertex <id>`` and ``edge <id> <u> <v>`` lines; a
rotation file holds ``rho <vertex> <edge> ...`` lines.  Each parser skips
the other's lines, so one file may carry a whole ribbon graph.  ``#``
starts a comment.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .errors import DuplicateId, FormatError, GraphError, LoopEdge, SandtorsorError, UnknownVertex
from .graph import Multigraph, RibbonGraph, validate
from .sandpile import Divisor
from .torsor import KINDS, TorsorTable
from .trees import is_spanning_tree, parse_tree, tree_literal

__all__ = [
    "parse_graph_file",
    "serialize_graph",
    "parse_rotation_file",
    "serialize_rotation",
    "parse_ribbon_file",
    "serialize_ribbon",
    "parse_divisor",
    "serialize_divisor",
    "parse_tree_literal",
    "serialize_tree",
    "parse_table_file",
    "serialize_table",
    "parse_catalog",
    "load_catalog",
    "data_path",
]


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield n, line.split()


def _reraise(exc: SandtorsorError, n: int):
    return type(exc)(f"line {n}: {exc}")


def parse_graph_file(text: str) -> Multigraph:
    vertices = []
    seen_v = set()
    edges = []
    seen_e = set()
    for n, words in _lines(text):
        kw = words[0]
        if kw == "vertex":
            if len(words) != 2:
                raise FormatError("expected 'vertex <id>'", n)
            if words[1] in seen_v:
                raise DuplicateId(f"line {n}: duplicate vertex id {words[1]!r}")
            seen_v.add(words[1])
            vertices.append(words[1])
        elif kw == "edge":
            if len(words) != 4:
                raise FormatError("expected 'edge <id> <u> <v>'", n)
            e, u, v = words[1:]
            if e in seen_e:
                raise DuplicateId(f"line {n}: duplicate edge id {e!r}")
            if u == v:
                raise LoopEdge(f"line {n}: edge {e!r} is a loop at {u!r}")
            for x in (u, v):
                if x not in seen_v:
                    raise UnknownVertex(f"line {n}: edge {e!r} uses undeclared vertex {x!r}")
            seen_e.add(e)
            edges.append((e, u, v))
        elif kw == "rho":
            continue
        else:
            raise FormatError(f"unknown keyword {kw!r}", n)
    graph = Multigraph(tuple(vertices), tuple(edges))
    validate(graph)
    return graph


def serialize_graph(graph: Multigraph) -> str:
    out = [f"vertex {v}" for v in graph.vertices]
    out += [f"edge {e} {u} {v}" for e, u, v in graph.edges]
    return "\n".join(out) + "\n"


def parse_rotation_file(text: str, graph: Multigraph) -> RibbonGraph:
    orders = {}
    for n, words in _lines(text):
        kw = words[0]
        if kw in ("vertex", "edge"):
            continue
        if kw != "rho":
            raise FormatError(f"unknown keyword {kw!r}", n)
        if len(words) < 2:
            raise FormatError("expected 'rho <vertex> <edge> ...'", n)
        v = words[1]
        if v in orders:
            raise FormatError(f"second order given for {v!r}", n)
        orders[v] = tuple(words[2:])
        try:
            if v not in graph.incident:
                raise UnknownVertex(f"unknown vertex {v!r}")
            if sorted(orders[v]) != list(graph.incident[v]):
                raise GraphError(f"order at {v!r} must list each incident edge exactly once")
        except GraphError as exc:
            raise _reraise(exc, n) from None
    return RibbonGraph.from_orders(graph, orders)


def serialize_rotation(rg: RibbonGraph) -> str:
    return "\n".join(f"rho {v} {' '.join(o)}" for v, o in rg.rotation) + "\n"


def parse_ribbon_file(text: str) -> RibbonGraph:
    return parse_rotation_file(text, parse_graph_file(text))


def serialize_ribbon(rg: RibbonGraph) -> str:
    return serialize_graph(rg.graph) + serialize_rotation(rg)


def parse_divisor(text: str, graph: Multigraph) -> Divisor:
    return Divisor.parse(text, graph.vertices)


def serialize_divisor(d: Divisor) -> str:
    return d.literal()


def parse_tree_literal(text: str, graph: Multigraph | None = None) -> frozenset:
    tree = parse_tree(text)
    if graph is not None and not is_spanning_tree(graph, tree):
        raise GraphError(f"{text!r} is not a spanning tree")
    return tree


def serialize_tree(tree) -> str:
    return tree_literal(tree)


def parse_table_file(text: str, graph: Multigraph) -> TorsorTable:
    kind = basepoint = None
    entries = {}
    elements = []
    trees = set()
    for n, words in _lines(text):
        if words[0] == "table":
            if kind is not None or len(words) != 3:
                raise FormatError("expected a single 'table <kind> <basepoint>' header", n)
            kind, basepoint = words[1:]
            if kind not in KINDS:
                raise FormatError(f"unknown torsor kind {kind!r}", n)
            if basepoint not in graph.incident:
                raise FormatError(f"unknown basepoint {basepoint!r}", n)
        elif words[0] == "act":
            if kind is None:
                raise FormatError("'act' line before the header", n)
            if len(words) != 5 or words[3] != "->":
                raise FormatError("expected 'act <divisor> <tree> -> <tree>'", n)
            try:
                d = Divisor.parse(words[1], graph.vertices)
            except (ValueError, KeyError) as exc:
                raise FormatError(str(exc), n) from None
            t, img = parse_tree(words[2]), parse_tree(words[4])
            for x in (t, img):
                if not is_spanning_tree(graph, x):
                    raise FormatError(f"{tree_literal(x)!r} is not a spanning tree", n)
            if (d, t) in entries:
                raise FormatError("duplicate entry", n)
            if d not in elements:
                elements.append(d)
            trees.add(t)
            entries[d, t] = img
        else:
            raise FormatError(f"unknown keyword {words[0]!r}", n)
    if kind is None:
        raise FormatError("missing 'table' header", 1)
    return TorsorTable(
        kind,
        basepoint,
        graph,
        tuple(sorted(elements, key=lambda d: d.literal())),
        tuple(sorted(trees, key=sorted)),
        entries,
    )


def serialize_table(table: TorsorTable) -> str:
    return "\n".join(table.lines()) + "\n"


def parse_catalog(text: str) -> list:
    """``graph <name>`` blocks of graph-file lines; returns [(name, Multigraph)]."""
    blocks = []
    for n, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if words and words[0] == "graph":
            if len(words) != 2:
                raise FormatError("expected 'graph <name>'", n)
            blocks.append((words[1], n, []))
        elif words:
            if not blocks:
                raise FormatError("graph lines before the first 'graph' header", n)
            blocks[-1][2].append(raw)
    out = []
    for name, n, body in blocks:
        try:
            out.append((name, parse_graph_file("\n".join(body))))
        except SandtorsorError as exc:
            raise FormatError(f"in catalog entry {name!r}: {exc}", n) from None
    return out


def data_path(name: str) -> Path:
    """Path of a file shipped in the package's data directory."""
    return Path(str(resources.files("sandtorsor") / "data" / name))


def load_catalog(path=None) -> list:
    path = Path(path) if path else data_path("catalog.txt")
    return parse_catalog(path.read_text(encoding="utf-8"))
