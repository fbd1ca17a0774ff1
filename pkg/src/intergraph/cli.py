"""Command-line front end.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage or configuration
error, 3 a cap was exceeded under ``--strict``.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__, arith, igraph, kernels, presets
from .gfq import FieldError, prime_power
from .permgrp import CapExceeded, all_subgroups, double_count_all, lattice_cap, lattice_invariants, maximals
from .report import FAIL, PASS, SKIPPED, Report
from .unitary3 import verify_proposition

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
DEFAULT_WITNESS_QS = (3, 4, 5, 7, 8, 9, 11, 13)
DEFAULT_PRESETS = ("a5", "a6", "a7", "psl2_7", "psl2_11", "psl2_13")
CHECKS = ("u3", "u5", "m23", "bm")


class UsageError(Exception):
    pass


def run_witness(q: int, mode: str = "e1", workers: int = 1) -> Report:
    if prime_power(q) is None:
        raise UsageError(f"q = {q} is not a prime power")
    if q <= 2:
        raise UsageError(f"q = {q} is outside the supported range: the witness construction needs q > 2")
    try:
        return verify_proposition(q, mode, workers)
    except FieldError as exc:
        raise UsageError(str(exc)) from exc


def run_graph(name: str, full_checks: bool = False, opt_in_large: bool = False, workers: int = 1) -> Report:
    try:
        preset = presets.load(name)
    except presets.PresetError as exc:
        raise UsageError(str(exc)) from exc
    rep = Report(f"graph {preset.name}")
    rep.data.update({"preset": preset.name, "group_order": preset.order, "simple": preset.simple})
    if preset.opt_in and not opt_in_large:
        rep.skip("lattice", "opt-in preset; pass --opt-in-large")
        return rep
    cap = lattice_cap()
    if preset.order > cap:
        rep.skip("lattice", "cap", cap=cap)
        return rep
    G = preset.group()
    try:
        L = all_subgroups(G, cap=cap)
    except CapExceeded as exc:
        rep.skip("lattice", "cap", detail=str(exc))
        return rep
    mx = maximals(L)
    rep.data.update({
        "subgroups": len(L),
        "subgroup_classes": len(L.classes),
        "order_counts": {str(k): v for k, v in L.order_counts().items()},
        "maximal_count": len(mx),
        "maximal_orders": sorted({M.order for M in mx}),
    })
    try:
        g = igraph.build(L)
    except igraph.GraphError as exc:
        rep.data["graph"] = None
        rep.skip("graph", "degenerate", detail=str(exc))
        return rep
    d = igraph.diameter(g, workers)
    band = igraph.check_theorem_band(g, preset.simple, preset.family == "alternating", mx, d)
    rep.data.update(band.data)
    rep.merge(band, "band")
    if "diameter" in preset.meta:
        expected = int(preset.meta["diameter"])
        rep.check("expected_diameter", d.value == expected, expected=expected, diameter=igraph._num(d.value))
    if not full_checks:
        return rep
    oracle = igraph.diameter_by_powers(g)
    rep.check("oracle_matrix_powers", oracle == d.value, bfs=igraph._num(d.value), oracle=igraph._num(oracle))
    if d.connected:
        path = igraph.shortest_path(g, *d.pair)
        rep.check("attaining_path_valid", path.validate(g) and len(path) == d.value, path=path.to_dict(g))
    if preset.simple:
        rep.merge(igraph.maximal_induced(g, mx), "maximal_induced")
        rep.merge(igraph.dihedral_connector_check(g, mx), "dihedral")
    if G.order <= 1_000:
        rep.merge(lattice_invariants(L), "lattice")
    rep.merge(double_count_all(L), "double_count")
    if preset.family == "psl2" and preset.q and preset.q % 4 == 3:
        rep.merge(igraph.l2q_pointstab_check(preset.q), "l2q_pointstab")
    return rep


def run_verify(check: str = "all", q_max: int = 10_000) -> Report:
    try:
        constants = arith.load_constants()
    except arith.ConstantsError as exc:
        raise UsageError(f"constants integrity failure: {exc}") from exc
    selected = CHECKS if check == "all" else (check,)
    rep = Report(f"verify {check}")
    for name in selected:
        if name == "u3":
            sub = arith.u3_ratio_check(3, q_max)
        elif name == "u5":
            sub = arith.u5_ratio_check(2, q_max)
        elif name == "m23":
            sub = arith.m23_check(constants)
        else:
            sub = arith.bm_check(constants)
        rep.data[name] = sub.data
        rep.merge(sub, name)
    return rep


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1, help="worker processes for parallel loops")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    common.add_argument("--strict", action="store_true", help="exit 3 when a check is skipped by a cap")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON")

    ap = argparse.ArgumentParser(prog="intergraph", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"intergraph {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    w = sub.add_parser("witness", parents=[common], help="check the SU_3(q) stabiliser witnesses")
    w.add_argument("--q", type=int, action="append", help="prime power > 2 (repeatable)")
    w.add_argument("--mode", choices=("e1", "all"), default="e1")

    g = sub.add_parser("graph", parents=[common], help="intersection-graph checks on a preset group")
    g.add_argument("--preset", action="append", help=f"preset name (repeatable); one of {', '.join(presets.available())}")
    g.add_argument("--full-checks", action="store_true")
    g.add_argument("--opt-in-large", action="store_true")

    v = sub.add_parser("verify", parents=[common], help="exact order and index inequalities")
    v.add_argument("--check", choices=CHECKS + ("all",), default="all")
    v.add_argument("--q-max", type=int, default=10_000)

    a = sub.add_parser("all", parents=[common], help="witness, graph and verify with defaults")
    a.add_argument("--full-checks", action="store_true")
    a.add_argument("--opt-in-large", action="store_true")
    a.add_argument("--q-max", type=int, default=10_000)
    return ap


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("json", "timings")}
    cfg["lattice_cap"] = lattice_cap()
    return cfg


def _positive(name: str, value: int):
    if value is not None and value < 1:
        raise UsageError(f"--{name} must be positive")


def execute(args) -> tuple[dict, int]:
    _positive("workers", args.workers)
    reports: list[tuple[Report, float]] = []

    def timed(fn, *a, **kw):
        t0 = time.perf_counter()
        r = fn(*a, **kw)
        reports.append((r, time.perf_counter() - t0))

    if args.command == "witness":
        for q in args.q or [3]:
            timed(run_witness, q, args.mode, args.workers)
    elif args.command == "graph":
        for name in args.preset or ["a5"]:
            timed(run_graph, name, args.full_checks, args.opt_in_large, args.workers)
    elif args.command == "verify":
        _positive("q-max", args.q_max)
        timed(run_verify, args.check, args.q_max)
    else:
        _positive("q-max", args.q_max)
        for q in DEFAULT_WITNESS_QS:
            timed(run_witness, q, "e1", args.workers)
        names = DEFAULT_PRESETS + (("u3_3",) if args.opt_in_large else ())
        for name in names:
            timed(run_graph, name, args.full_checks, args.opt_in_large, args.workers)
        timed(run_verify, "all", args.q_max)

    failed = any(not r.passed for r, _ in reports)
    skipped = any(c.verdict == SKIPPED for r, _ in reports for c in r.checks)
    verdict = FAIL if failed else PASS
    doc = {
        "toolkit": "intergraph",
        "version": __version__,
        "config": _config(args),
        "verdict": verdict,
        "reports": [r.to_dict() for r, _ in reports],
    }
    if args.timings:
        doc["timings"] = {r.title: round(t, 3) for r, t in reports}
    if failed:
        code = EXIT_FAIL
    elif skipped and args.strict:
        code = EXIT_CAP
    else:
        code = EXIT_PASS
    doc["_elapsed"] = [t for _, t in reports]
    return doc, code


def _print_table(doc: dict, out=sys.stdout):
    elapsed = doc.pop("_elapsed", [])
    print(f"intergraph {doc['version']}  (kernels: {kernels.BACKEND})", file=out)
    for rep, t in zip(doc["reports"], elapsed + [None] * len(doc["reports"])):
        tail = f"  [{t:.2f}s]" if t is not None else ""
        print(f"== {rep['title']}: {rep['verdict'].upper()}{tail}", file=out)
        for key in ("pairs_checked", "case_counts", "subgroups", "vertices", "edges", "diameter", "components"):
            if key in rep["data"]:
                print(f"   {key}: {rep['data'][key]}", file=out)
        for c in rep["checks"]:
            reason = f" ({c['detail']['reason']})" if c["verdict"] == SKIPPED else ""
            print(f"   {c['verdict']:>7}  {c['name']}{reason}", file=out)
    print(f"overall: {doc['verdict'].upper()}", file=out)


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        doc, code = execute(args)
    except UsageError as exc:
        print(f"intergraph: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    to_stdout = args.json == "-"
    _print_table(doc, out=sys.stderr if to_stdout else sys.stdout)
    if args.json:
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        if to_stdout:
            sys.stdout.write(text)
        else:
            with open(args.json, "w") as fh:
                fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
