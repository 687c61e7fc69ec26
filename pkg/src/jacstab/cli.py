"""Command-line driver.

Every command prints one JSON report on stdout with keys ``command``,
``inputs_digest``, ``pass`` and ``details``; wall-clock time goes to stderr
so stdout is byte-identical across runs. Exit codes: 0 pass, 1 verified
failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

from . import chipfiring as cf
from . import io
from .assignments import (enumerate_assignments, expected_lift_size, verify_condition_one,
                          verify_condition_two, verify_lift_theorem)
from .graphs import GraphError, is_connected, spanning_subgraphs, subdivide
from .polarizations import break_divisors, ibd_assignment, is_nondegenerate, semistable_set
from .reports import Report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise io.DocumentError("$", f"{path} is not valid JSON ({exc.msg}, line {exc.lineno})") from None


def _graph_arg(args):
    doc = _load(args.graph)
    return io.parse_graph(doc), [doc]


# -- commands ------------------------------------------------------------------

def cmd_complexity(args):
    g, docs = _graph_arg(args)
    report = Report()
    mt, bf = cf.complexity_matrix_tree(g), cf.complexity_brute_force(g)
    if mt != bf:
        report.fail("complexity_mismatch", matrix_tree=mt, brute_force=bf)
    report.note("complexity", value=mt)
    return report, docs


def cmd_jacobian(args):
    g, docs = _graph_arg(args)
    report = Report()
    if not is_connected(g):
        raise GraphError("the Jacobian is defined here for connected graphs only")
    jac = cf.jacobian_group(g)
    c = cf.complexity(g)
    if jac.order != c:
        report.fail("order_mismatch", order=jac.order, complexity=c)
    report.note("jacobian", invariant_factors=list(jac.invariant_factors), order=jac.order)
    return report, docs


def cmd_stable(args):
    phi_doc = _load(args.phi)
    docs = [phi_doc]
    graph = None
    if args.graph:
        graph, gdocs = _graph_arg(args)
        docs += gdocs
    phi = io.parse_polarization(phi_doc, graph)
    g = phi.graph
    report = Report()
    nd = is_nondegenerate(g, phi)
    if not nd:
        kept, md, vs = nd.witness
        report.fail("degenerate", subgraph=list(kept), multidegree=list(md), vertex_set=list(vs))
    for sub in spanning_subgraphs(g, connected_only=True):
        report.note("semistable", subgraph=sorted(sub.kept_edges),
                    multidegrees=[list(md) for md in semistable_set(g, phi, sub.kept_edges)])
    return report, docs


def _assignment_arg(args):
    doc = _load(args.assignment)
    a, duplicates = io.parse_assignment(doc)
    return a, duplicates, [doc]


def cmd_check(args):
    a, duplicates, docs = _assignment_arg(args)
    report = Report()
    for dup in duplicates:
        report.fail("minimality", reason="entry listed more than once", **dup)
    report.extend(verify_condition_one(a))
    report.extend(verify_condition_two(a))
    return report, docs


def cmd_break_divisors(args):
    g, docs = _graph_arg(args)
    report = Report()
    for sub in spanning_subgraphs(g, connected_only=True):
        divs = break_divisors(g, sub.kept_edges)
        c = cf.complexity((g, sub.kept_edges))
        if len(divs) != c:
            report.fail("count", subgraph=sorted(sub.kept_edges), size=len(divs), complexity=c)
        report.note("break_divisors", subgraph=sorted(sub.kept_edges), multidegrees=[list(x) for x in divs])
    a = ibd_assignment(g)
    report.extend(verify_condition_one(a)).extend(verify_condition_two(a))
    return report, docs


def cmd_lift(args):
    a, duplicates, docs = _assignment_arg(args)
    m_doc = _load(args.m)
    docs.append(m_doc)
    sub = subdivide(a.graph, io.parse_m_map(m_doc, a.graph))
    report = Report()
    for dup in duplicates:
        report.fail("minimality", reason="entry listed more than once", **dup)
    report.extend(verify_lift_theorem(a, sub))
    report.note("lift", size=expected_lift_size(a, sub), complexity=cf.complexity(sub.result),
                vertices=len(sub.result.vertices))
    return report, docs


def cmd_enumerate(args):
    g, docs = _graph_arg(args)
    found = enumerate_assignments(g, args.degree, args.window)
    report = Report()
    report.note("window", window=args.window, complete_within_window=True)
    for a in found:
        report.note("assignment", entries=[{"kept": k, "multidegree": list(md)} for k, md in a.sorted_entries()])
    report.note("count", value=len(found))
    return report, docs


def cmd_universal(args):
    from .universal import enumerate_stable_graphs, gcd_obstruction, universal_search
    try:
        cat = enumerate_stable_graphs(args.genus, args.markings)
    except GraphError as exc:
        raise UsageError(str(exc)) from None
    results = universal_search(args.genus, args.markings, args.degree, args.window, cat=cat)
    report = Report()
    report.note("category", objects=len(cat.objects))
    if args.genus >= 2:
        obstructed = gcd_obstruction(args.genus, args.degree)
        if obstructed:
            report.note("obstruction", reason="gcd(d - g + 1, 2g - 2) != 1",
                        gcd=math.gcd(args.degree - args.genus + 1, 2 * args.genus - 2))
            if results:
                report.fail("obstruction_violated", found=len(results))
    report.note("results", window=args.window, count=len(results),
                assignments=io.universal_to_doc(results, args.window)["results"])
    return report, [{"genus": args.genus, "markings": args.markings}]


def cmd_corpus(args):
    from .acceptance import run_all
    report = Report()
    for res in run_all():
        entry = res.to_json()
        entry.pop("pass")
        (report.note if res.passed else report.fail)("criterion", **entry)
        print(res.line(), file=sys.stderr)
    return report, [{"corpus": "verify"}]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jacstab", description="Stability assignments on graphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, fn in (("complexity", cmd_complexity), ("jacobian", cmd_jacobian),
                     ("break-divisors", cmd_break_divisors)):
        s = sub.add_parser(name)
        s.add_argument("--graph", required=True)
        s.set_defaults(func=fn)

    s = sub.add_parser("stable")
    s.add_argument("--phi", required=True)
    s.add_argument("--graph")
    s.set_defaults(func=cmd_stable)

    s = sub.add_parser("check")
    s.add_argument("--assignment", required=True)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("lift")
    s.add_argument("--assignment", required=True)
    s.add_argument("--m", required=True)
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("enumerate")
    s.add_argument("--graph", required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--window", type=int, required=True)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("universal")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--markings", type=int, default=0)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--window", type=int, required=True)
    s.set_defaults(func=cmd_universal)

    s = sub.add_parser("corpus")
    s.add_argument("action", choices=["verify"])
    s.set_defaults(func=cmd_corpus)

    for s in sub.choices.values():
        s.add_argument("--out", help="also write the report to this file")
    return p


def run_command(argv) -> tuple[dict, int]:
    """Run one command; returns the report document and the exit code."""
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "window", 0) < 0:
            raise UsageError("--window must be non-negative")
        report, docs = args.func(args)
    except UsageError as exc:
        return {"command": argv[:1], "pass": False, "error": {"kind": "usage", "message": str(exc)}}, 2
    except io.DocumentError as exc:
        return {"command": argv[:1], "pass": False,
                "error": {"kind": "parse", "path": exc.path, "message": exc.message}}, 2
    except GraphError as exc:
        return {"command": argv[:1], "pass": False, "error": {"kind": "invalid", "message": str(exc)}}, 2
    doc = {"command": args.command, "argv": argv, "inputs_digest": io.digest(*docs), **report.to_json()}
    return doc, 0 if report.passed else 1


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    start = time.perf_counter()
    doc, code = run_command(argv)
    text = io.dumps(doc)
    sys.stdout.write(text)
    out = next((argv[i + 1] for i, a in enumerate(argv[:-1]) if a == "--out"), None)
    if out and code != 2:
        Path(out).write_text(text)
    print(f"runtime: {time.perf_counter() - start:.3f} s", file=sys.stderr)
    return code
