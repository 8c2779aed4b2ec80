"""Command line front end.

Exit codes: 0 success or a true verdict, 1 a false verdict for a yes/no
question, 2 a verification failure or structural violations, 64 bad usage or
input, 70 an internal consistency check failed.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import pipeline as pl
from .assignment import ell, format_lists, parse_lists
from .choosability import PreconditionError, is_f_choosable, is_gallai_tree
from .graph import Graph, GraphFormatError, block_decomposition, max_average_degree, read_graph, to_edge_list
from .partition import (SubgraphPartition, check_crossing_preconditions, is_strong_part, is_weak_part,
                        match_part_pattern, coarse_partition_bound, partition_bound, partition_sampler,
                        split_graph, square_labeling)
from .reducibility import find_weakly_reducible, is_reducible_subgraph, is_weakly_reductive, optimal_alpha
from .sampling import BudgetExceeded, fix_forb_stats
from .structure import (DEFAULT_PATH_CAP, XI, audit_counterexample, classify, detect_violations, discharge)

EXIT_OK, EXIT_FALSE, EXIT_VERIFY, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 64, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"expected integers, got {text!r}") from None


def _groups(text: str) -> list[list[int]]:
    """Parts inline (``"0,1;2"``) or from a file with one part per line."""
    if os.path.isfile(text):
        with open(text, encoding="ascii") as fh:
            return [_ints(line) for line in fh if line.strip() and not line.lstrip().startswith("#")]
    return [_ints(chunk) for chunk in text.split(";") if chunk.strip()]


def _load_graph(args) -> Graph:
    path = args.graph
    fmt = args.format
    if fmt == "auto":
        fmt = "g6" if path.endswith((".g6", ".graph6")) else "edges"
    return read_graph(path, fmt)


def parse_f(spec: str, g: Graph) -> tuple[int, ...]:
    """``deg``, ``deg+N``, ``deg-N``, ``k:N`` or a file of whitespace-separated integers."""
    deg = g.degrees()
    if spec == "deg":
        return deg
    if spec.startswith("deg+") or spec.startswith("deg-"):
        shift = int(spec[3:])
        return tuple(d + shift for d in deg)
    if spec.startswith("k:"):
        return (int(spec[2:]),) * g.n
    if os.path.exists(spec):
        with open(spec, encoding="ascii") as fh:
            vals = _ints(fh.read())
        if len(vals) != g.n:
            raise UsageError(f"{spec}: {len(vals)} values for {g.n} vertices")
        return tuple(vals)
    raise UsageError(f"cannot read f from {spec!r}")


def _load_lists(path: str | None, g: Graph, k: int, palette: int, seed: int):
    if path is None:
        return pl.random_lists(g.n, k, palette, random.Random(seed))
    with open(path, encoding="ascii") as fh:
        table = parse_lists(fh.read())
    if sorted(table) != list(range(g.n)):
        raise UsageError(f"{path}: lists must cover vertices 0..{g.n - 1}")
    return tuple(table[v] for v in range(g.n))


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


# subcommands

def cmd_mad(args) -> int:
    g = _load_graph(args)
    res = max_average_degree(g)
    _emit(args, {"mad": _frac(res.value), "witness": list(res.witness)}, _frac(res.value))
    return EXIT_OK


def cmd_choosable(args) -> int:
    g = _load_graph(args)
    f = parse_f(args.f, g)
    res = is_f_choosable(g, f)
    bad = [sorted(l) for l in res.bad_lists] if res.bad_lists is not None else None
    text = "choosable" if res.choosable else "not choosable\n" + format_lists(res.bad_lists).rstrip()
    _emit(args, {"choosable": res.choosable, "f": list(f), "bad_lists": bad}, text)
    return EXIT_OK if res.choosable else EXIT_FALSE


def cmd_gallai(args) -> int:
    g = _load_graph(args)
    if not g.is_connected():
        raise UsageError("Gallai trees are connected; the input is not")
    verdict = is_gallai_tree(g)
    blocks = [list(b) for b in block_decomposition(g).blocks]
    _emit(args, {"gallai_tree": verdict, "blocks": blocks}, f"gallai tree: {verdict}")
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_reducible(args) -> int:
    g = _load_graph(args)
    vs = sorted(set(_ints(args.vertices)))
    if not vs or any(v < 0 or v >= g.n for v in vs):
        raise UsageError("vertices must be a nonempty subset of the graph")
    f = ell(g, vs, args.k)
    h, _ = g.induced(vs)
    verdict = is_weakly_reductive(h, f, args.k)
    payload: dict[str, Any] = {"vertices": vs, "ell": list(f), "weakly_reducible": verdict.holds}
    if not verdict.holds and verdict.failures:
        fl = verdict.failures[0]
        payload["failure"] = {"property": fl.prop, "vertices": [vs[i] for i in fl.vertices],
                              "lists": [sorted(l) for l in fl.lists], "colour": fl.colour}
    ok = verdict.holds
    if args.alpha is not None:
        alpha = Fraction(args.alpha)
        ok = is_reducible_subgraph(g, vs, args.k, alpha)
        payload["alpha"] = _frac(alpha)
        payload["reducible"] = ok
    _emit(args, payload, f"ell = {list(f)}; weakly reducible: {verdict.holds}"
          + (f"; {args.alpha}-reducible: {ok}" if args.alpha is not None else ""))
    return EXIT_OK if ok else EXIT_FALSE


def cmd_find_reducible(args) -> int:
    g = _load_graph(args)
    w = find_weakly_reducible(g, args.k, args.max_size)
    if w is None:
        _emit(args, {"found": False}, "no weakly reducible subgraph")
        return EXIT_FALSE
    _emit(args, {"found": True, "vertices": list(w.vertices), "ell": list(w.ell)},
          f"vertices {list(w.vertices)} ell {list(w.ell)}")
    return EXIT_OK


def cmd_alpha(args) -> int:
    g = _load_graph(args)
    f = parse_f(args.f, g)
    res = optimal_alpha(g, f, args.k, args.budget)
    payload: dict[str, Any] = {"alpha": _frac(res.value), "assignments": res.assignments,
                               "weakly_reductive": res.weak.holds}
    if res.worst is not None:
        payload["worst_lists"] = [sorted(l) for l in res.worst.lists]
        payload["distribution"] = [[list(phi), _frac(p)] for phi, p in sorted(res.worst.distribution.items())]
    _emit(args, payload, f"alpha = {_frac(res.value)} over {res.assignments} assignments")
    return EXIT_OK


def cmd_partition_check(args) -> int:
    g = _load_graph(args)
    core = sorted(set(_ints(args.core))) if args.core else list(g.vertices)
    h, id_map = g.induced(core)
    where = {v: i for i, v in enumerate(id_map)}
    f = parse_f(args.f, h) if args.f else ell(g, core, 4)
    try:
        parts = [[where[v] for v in part] for part in _groups(args.parts)]
    except KeyError as exc:
        raise UsageError(f"part vertex {exc} is outside the core") from None
    p = SubgraphPartition.make(h, f, parts)
    weak = args.weak
    rows = []
    ok = True
    for i in range(len(p.parts)):
        verdict = is_weak_part(p, i) if i == weak else is_strong_part(p, i)
        ok = ok and verdict.holds
        rows.append({"part": [id_map[v] for v in p.parts[i]], "role": "weak" if i == weak else "strong",
                     "holds": verdict.holds, "reason": verdict.reason, "pattern": match_part_pattern(p, i)})
    lab = square_labeling(p, args.b, args.d)
    b = args.b or max(4, max(len(q) for q in p.parts))
    d = args.d or max(4, h.max_degree())
    payload: dict[str, Any] = {"parts": rows, "ell": list(f), "labels": list(lab.labels), "universe": lab.universe,
                               "bound": _frac(partition_bound(b, lab.universe)),
                               "coarse_bound": _frac(coarse_partition_bound(b, d))}
    if ok and args.expand:
        lists = pl.random_lists(h.n, 4, args.palette, random.Random(args.seed))
        lists = tuple(frozenset(sorted(l)[:f[v]]) for v, l in enumerate(lists))
        dist = partition_sampler(p, lists, weak, lab, seed=args.seed, check=False).distribution(args.budget)
        st = fix_forb_stats(dist, [sorted(l) for l in lists])
        payload["expanded"] = {"lists": [sorted(l) for l in lists], "min_fix": _frac(st.min_fix),
                               "min_forb": _frac(st.min_forb)}
        ok = min(st.min_fix, st.min_forb) >= partition_bound(b, lab.universe)
    text = "\n".join(f"{r['role']:6} {r['part']} {'ok' if r['holds'] else 'FAIL ' + r['reason']} ({r['pattern']})"
                     for r in rows)
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_split(args) -> int:
    g = _load_graph(args)
    f = parse_f(args.f, g)
    xs = _ints(args.x)
    blocks = _groups(args.blocks)
    spl = split_graph(g, xs, blocks, f)
    problems = check_crossing_preconditions(g, f, xs, blocks, args.q or len(xs), args.m or len(blocks))
    payload = {"edges": [list(e) for e in spl.graph.edges], "n": spl.graph.n,
               "origin": [[v, b] for v, b in spl.origin], "ell": list(spl.ell), "problems": problems}
    _emit(args, payload, to_edge_list(spl.graph).rstrip() + ("\n# " + "\n# ".join(problems) if problems else ""))
    return EXIT_VERIFY if problems else EXIT_OK


def cmd_classify(args) -> int:
    g = _load_graph(args)
    cl = classify(g)
    payload = {"vertices": list(cl.vertices), "special_k4s": [list(q) for q in cl.special_k4s],
               "insulated_edges": sorted(list(e) for e in cl.insulated_edges)}
    text = "\n".join(f"{v}: {c}" for v, c in enumerate(cl.vertices))
    _emit(args, payload, text)
    return EXIT_OK


def _violation_json(v) -> dict:
    return {"kind": v.kind, "witness": list(v.witness), "description": v.description}


def cmd_detect(args) -> int:
    g = _load_graph(args)
    rep = detect_violations(g, args.path_cap)
    payload = {"path_cap": rep.path_cap, "violations": [_violation_json(v) for v in rep.violations]}
    text = "\n".join(f"{v.kind}: {v.description}" for v in rep.violations) or "no violations"
    _emit(args, payload, text + f"\n(path cap {rep.path_cap})")
    return EXIT_VERIFY if rep.violations else EXIT_OK


def cmd_discharge(args) -> int:
    g = _load_graph(args)
    led = discharge(g)
    payload = {"initial": [_frac(x) for x in led.initial], "after_r2": [_frac(x) for x in led.after_r2],
               "final": [_frac(x) for x in led.final], "r3_assignment": {str(s): d for s, d in led.r3_assignment.items()},
               "unmatched": list(led.unmatched), "total": _frac(led.total)}
    text = "\n".join(f"{v}: {_frac(c)}" for v, c in enumerate(led.final)) + f"\ntotal {_frac(led.total)}"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_audit(args) -> int:
    g = _load_graph(args)
    rep = audit_counterexample(g, args.k, args.max_size, args.path_cap)
    payload: dict[str, Any] = {"mad": _frac(rep.mad), "in_scope": rep.applies, "findings": rep.findings(),
                               "nonvacuous": rep.nonvacuous, "xi": _frac(XI)}
    if rep.reducible is not None:
        payload["reducible"] = {"vertices": list(rep.reducible.vertices), "ell": list(rep.reducible.ell)}
    if rep.detection is not None:
        payload["violations"] = [_violation_json(v) for v in rep.detection.violations]
        payload["path_cap"] = rep.detection.path_cap
    if rep.ledger is not None:
        payload["charge_total"] = _frac(rep.ledger.total)
    text = f"mad {_frac(rep.mad)}; " + ("out of scope" if not rep.applies else "findings: " + ", ".join(rep.findings()))
    _emit(args, payload, text)
    return EXIT_OK if rep.nonvacuous else EXIT_VERIFY


def cmd_pipeline(args) -> int:
    g = _load_graph(args)
    lists = _load_lists(args.lists, g, args.k, args.palette, args.seed)
    try:
        pipe = pl.build_pipeline(g, lists, args.k, args.strategy, args.seed, args.max_size)
    except pl.NoReducibleSubgraph as exc:
        _emit(args, {"error": str(exc), "remainder": list(exc.remainder)}, str(exc))
        return EXIT_VERIFY
    report = None
    if args.verify != "none":
        report = pl.verify_pipeline(pipe, args.verify, args.budget, args.samples)
    text = pl.dumps(pl.certificate(pipe, report))
    if args.out:
        with open(args.out, "w", encoding="ascii") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_VERIFY if report is not None and not report.passed else EXIT_OK


def cmd_verify(args) -> int:
    with open(args.certificate, encoding="ascii") as fh:
        try:
            cert = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{args.certificate}: not JSON: {exc}") from None
    problems = pl.check_certificate(cert)
    payload: dict[str, Any] = {"problems": problems}
    if not problems and args.distribution != "none":
        g, lists, trace = pl.trace_from_certificate(cert)
        pipe = pl.Pipeline(g, lists, trace, pl.PipelineSampler(g, lists, trace, cert["seed"]),
                           cert["strategy"], cert["seed"])
        report = pl.verify_pipeline(pipe, args.distribution, args.budget, args.samples)
        payload["verification"] = pl.report_to_json(report)
        if not report.passed:
            problems.append("distribution misses its targets")
    _emit(args, payload, "\n".join(problems) or "certificate ok")
    return EXIT_VERIFY if problems else EXIT_OK


# parser

def build_parser() -> argparse.ArgumentParser:
    def globals_(p: argparse.ArgumentParser, top: bool) -> None:
        # subcommands repeat the flags with suppressed defaults so either position works
        d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
        p.add_argument("--format", choices=("auto", "g6", "edges"), default=d("auto"), help="graph file format")
        p.add_argument("--seed", type=int, default=d(0), help="64-bit seed for every random choice")
        p.add_argument("--budget", type=int, default=d(2 ** 22), help="limit on live states or assignments")
        p.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")

    parser = _Parser(prog="flexcolor", description="Flexible list colouring toolkit.")
    globals_(parser, True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text, graph=True):
        p = sub.add_parser(name, help=help_text)
        globals_(p, False)
        if graph:
            p.add_argument("--graph", required=True, help="graph file (graph6 or edge list)")
        p.set_defaults(func=func)
        return p

    add("mad", cmd_mad, "maximum average degree as an exact fraction")
    p = add("choosable", cmd_choosable, "decide f-choosability")
    p.add_argument("--f", required=True, help="deg, deg+N, deg-N, k:N, or a file of integers")
    add("gallai", cmd_gallai, "decide whether a connected graph is a Gallai tree")
    p = add("reducible", cmd_reducible, "check an induced subgraph for weak (or alpha-) reducibility")
    p.add_argument("--vertices", "--subset", dest="vertices", required=True, help="comma separated vertex ids")
    p.add_argument("--alpha", help="also require (k, alpha)-reducibility, e.g. 1/16")
    p.add_argument("--k", type=int, default=4)
    p = add("find-reducible", cmd_find_reducible, "smallest weakly reducible connected induced subgraph")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--max-size", type=int)
    p = add("alpha", cmd_alpha, "optimal reductivity constant by exact LP")
    p.add_argument("--f", required=True)
    p.add_argument("--k", type=int, default=4)
    p = add("partition-check", cmd_partition_check, "check strong and weak parts of a partition")
    p.add_argument("--core", help="vertices of the reducible subgraph (default: all)")
    p.add_argument("--f", help="list sizes on the core (default: ell with k=4)")
    p.add_argument("--parts", required=True, help="file with one part per line, or inline parts separated by ';'")
    p.add_argument("--weak", type=int, default=0, help="index of the weak part")
    p.add_argument("--b", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--expand", action="store_true", help="expand the sampler on random lists")
    p.add_argument("--palette", type=int, default=5)
    p = add("split", cmd_split, "build the split graph and check the crossing-over hypotheses")
    p.add_argument("--f", required=True)
    p.add_argument("--x", required=True, help="vertices to split")
    p.add_argument("--blocks", "--parts", dest="blocks", required=True,
                   help="file with one block per line, or inline blocks separated by ';'")
    p.add_argument("--q", type=int)
    p.add_argument("--m", type=int)
    add("classify", cmd_classify, "vertex and edge classes")
    p = add("detect", cmd_detect, "structural violations with witnesses")
    p.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP)
    add("discharge", cmd_discharge, "discharging ledger")
    p = add("audit", cmd_audit, "explain why a sparse graph is not a minimal counterexample")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--max-size", type=int, default=24)
    p.add_argument("--path-cap", type=int, default=DEFAULT_PATH_CAP)
    p = add("pipeline", cmd_pipeline, "peel reducible subgraphs and emit a certificate")
    p.add_argument("--lists", help="file of 'v: c1 c2 ...' lines (default: random)")
    p.add_argument("--palette", type=int, default=6, help="colours for random lists")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--strategy", choices=pl.STRATEGIES, default="smallest-weak")
    p.add_argument("--max-size", type=int)
    p.add_argument("--verify", choices=("none", "exact", "sampled", "auto"), default="none")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--out", help="also write the certificate here")
    p = add("verify", cmd_verify, "recheck a pipeline certificate", graph=False)
    p.add_argument("--certificate", required=True)
    p.add_argument("--distribution", choices=("none", "exact", "sampled", "auto"), default="none")
    p.add_argument("--samples", type=int, default=20000)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, PreconditionError, FileNotFoundError, ValueError) as exc:
        print(f"flexcolor: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"flexcolor: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except AssertionError as exc:
        print(f"flexcolor: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
