"""Command-line front end: ``sandtorsor <command> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 on bad input.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .errors import SandtorsorError
from .graph import count_rotation_systems, genus, trace_faces
from .io import (
    load_catalog,
    parse_divisor,
    parse_graph_file,
    parse_rotation_file,
    parse_table_file,
    parse_tree_literal,
    serialize_table,
)
from .recovery import TorsorTableSet, recover_genus, recover_rotation
from .sandpile import enumerate_group, group_order, invariant_factors
from .torsor import KINDS, act, torsor_table
from .trees import enumerate_spanning_trees, tree_literal
from .verify import MAX_SYSTEMS, Verdict, run_suite, sweep_bigone

__all__ = ["main", "build_parser"]


class _InputError(Exception):
    pass


def _read(path) -> str:
    if path is None:
        raise _InputError("--graph is required")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc.strerror}") from None


def _graph(args):
    return parse_graph_file(_read(args.graph))


def _ribbon(args):
    graph = _graph(args)
    text = _read(args.rotation or args.graph)
    return parse_rotation_file(text, graph)


def _basepoint(args, graph):
    v = args.basepoint or graph.vertices[0]
    if v not in graph.incident:
        raise _InputError(f"unknown basepoint {v!r}")
    return v


def cmd_genus(args, out):
    out.append(str(genus(_ribbon(args))))
    return 0


def cmd_faces(args, out):
    faces = trace_faces(_ribbon(args)).faces
    out.append(str(len(faces)))
    for face in faces:
        out.append(" ".join(f"{t}-{e}->{h}" for e, t, h in face))
    return 0


def cmd_group(args, out):
    graph = _graph(args)
    q = _basepoint(args, graph)
    out.append(f"order {group_order(graph)}")
    out.append("invariant-factors " + " ".join(map(str, invariant_factors(graph))))
    out.extend(s.rep.literal() for s in enumerate_group(graph, q))
    return 0


def cmd_trees(args, out):
    out.extend(tree_literal(t) for t in enumerate_spanning_trees(_graph(args)))
    return 0


def cmd_act(args, out):
    rg = _ribbon(args)
    if args.basepoint_pos not in rg.graph.incident:
        raise _InputError(f"unknown basepoint {args.basepoint_pos!r}")
    s = parse_divisor(args.divisor, rg.graph)
    tree = parse_tree_literal(args.tree, rg.graph)
    out.append(tree_literal(act(rg, args.kind_pos, args.basepoint_pos, s, tree)))
    return 0


def cmd_table(args, out):
    rg = _ribbon(args)
    if args.out_dir:
        bases = [_basepoint(args, rg.graph)] if args.basepoint else list(rg.vertices)
        target = Path(args.out_dir)
        target.mkdir(parents=True, exist_ok=True)
        for v in bases:
            text = serialize_table(torsor_table(rg, args.kind, v))
            (target / f"{v}.table").write_text(text, encoding="utf-8")
            out.append(str(target / f"{v}.table"))
        return 0
    out.append(serialize_table(torsor_table(rg, args.kind, _basepoint(args, rg.graph))).rstrip("\n"))
    return 0


def _load_tables(args, graph):
    if not args.tables:
        raise _InputError("--tables is required")
    folder = Path(args.tables)
    if not folder.is_dir():
        raise _InputError(f"{folder} is not a directory")
    tables = {}
    for path in sorted(folder.glob("*.table")):
        try:
            t = parse_table_file(path.read_text(encoding="utf-8"), graph)
        except SandtorsorError as exc:
            raise _InputError(f"{path.name}: {exc}") from None
        if t.basepoint in tables:
            raise _InputError(f"{path.name}: second table for basepoint {t.basepoint!r}")
        tables[t.basepoint] = t
    return TorsorTableSet(graph, tables)


def cmd_recover(args, out):
    graph = _graph(args)
    tables = _load_tables(args, graph)
    if args.ambiguities:
        rec = recover_rotation(graph, tables)
        out.append(str(genus(rec.ribbon(graph))))
        out.extend(f"ambiguous {v} {' '.join(edges)}" for v, edges in rec.ambiguities)
    else:
        out.append(str(recover_genus(graph, tables)))
    return 0


def _roundtrip(seed: int, count: int) -> Verdict:
    from .generate import random_ribbon_graph

    rng = random.Random(seed)
    witnesses = []
    for i in range(count):
        rg = random_ribbon_graph(rng)
        got = recover_genus(rg.graph, TorsorTableSet.from_ribbon(rg))
        if got != genus(rg):
            witnesses.append(f"instance {i}: recovered {got}, actual {genus(rg)}")
    return Verdict(f"roundtrip-seed{seed}", not witnesses, tuple(witnesses))


def _emit(verdicts, out) -> int:
    for v in verdicts:
        out.append(v.line())
        out.extend(f"  {w}" for w in v.witnesses)
    return 0 if all(verdicts) else 1


def cmd_sweep(args, out):
    catalog = load_catalog(args.catalog)
    verdicts = []
    for name, graph in catalog:
        if count_rotation_systems(graph) <= MAX_SYSTEMS:
            verdicts.append(sweep_bigone(graph, name=f"bigone-{name}"))
    if args.seed is not None:
        verdicts.append(_roundtrip(args.seed, args.count))
    return _emit(verdicts, out)


def cmd_verify(args, out):
    catalog = load_catalog(args.catalog) if args.catalog else None
    verdicts = run_suite(catalog, sweep=not args.quick)
    if args.seed is not None:
        verdicts.append(_roundtrip(args.seed, args.count))
    return _emit(verdicts, out)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file (may also hold rho lines)")
    common.add_argument("--rotation", help="rotation file (defaults to the graph file)")
    common.add_argument("--kind", choices=KINDS, default="rotor")
    common.add_argument("--basepoint")
    common.add_argument("--tables", help="directory of <basepoint>.table files")
    common.add_argument("--seed", type=int, help="seed for the random round-trip harness")
    common.add_argument("--count", type=int, default=100, help="instances for the harness")
    common.add_argument("--catalog", help="catalog file (defaults to the shipped one)")

    parser = argparse.ArgumentParser(prog="sandtorsor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("genus", parents=[common]).set_defaults(func=cmd_genus)
    sub.add_parser("faces", parents=[common]).set_defaults(func=cmd_faces)
    sub.add_parser("group", parents=[common]).set_defaults(func=cmd_group)
    sub.add_parser("trees", parents=[common]).set_defaults(func=cmd_trees)
    p = sub.add_parser("act", parents=[common])
    p.add_argument("kind_pos", metavar="kind", choices=KINDS)
    p.add_argument("basepoint_pos", metavar="basepoint")
    p.add_argument("divisor")
    p.add_argument("tree")
    p.set_defaults(func=cmd_act)
    p = sub.add_parser("table", parents=[common])
    p.add_argument("--out-dir", help="write <basepoint>.table files here")
    p.set_defaults(func=cmd_table)
    p = sub.add_parser("recover-genus", parents=[common])
    p.add_argument("--ambiguities", action="store_true", help="also print the ambiguity log")
    p.set_defaults(func=cmd_recover)
    sub.add_parser("sweep", parents=[common]).set_defaults(func=cmd_sweep)
    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--quick", action="store_true", help="skip the catalog sweeps")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = []
    try:
        status = args.func(args, out)
    except (_InputError, SandtorsorError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=stderr)
        return 2
    if out:
        stdout.write("\n".join(out) + "\n")
    return status
