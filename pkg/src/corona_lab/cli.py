"""Command line entry point: ``corona-lab run | gen | verify-identities``."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .corpus import CorpusParams, gen_corpus
from .errors import CoronaLabError, ParseError
from .scenario import identity_suite, run_scenario, tol_scale


def _scenario_paths(items):
    paths = []
    for item in items:
        p = Path(item)
        paths.extend(sorted(p.glob("*.json")) if p.is_dir() else [p])
    return paths


def _run_one(args):
    path, out = args
    try:
        report = run_scenario(path, out)
    except ParseError as exc:
        return str(path), None, f"ParseError: {exc}"
    return str(path), report.passed, None if out else report.dumps()


def cmd_run(ns):
    paths = _scenario_paths(ns.scenario)
    if not paths:
        print("no scenario files found", file=sys.stderr)
        return 2
    if len(paths) == 1:
        jobs = [(paths[0], ns.out)]
    else:
        out_dir = Path(ns.out) if ns.out else None
        if out_dir:
            out_dir.mkdir(parents=True, exist_ok=True)
        jobs = [(p, out_dir / f"{p.stem}.report.json" if out_dir else None) for p in paths]

    if ns.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(_run_one, jobs))
    else:
        results = [_run_one(j) for j in jobs]

    status = 0
    for path, passed, text in results:
        if passed is None:
            print(f"{path}: {text}", file=sys.stderr)
            status = 2
            continue
        if text is not None:
            print(text)
        if len(results) > 1 or ns.out:
            print(f"{'PASS' if passed else 'FAIL'} {path}", file=sys.stderr)
        if not passed and status == 0:
            status = 1
    return status


def cmd_gen(ns):
    params = CorpusParams(n_range=(ns.n_min, ns.n_max),
                          degree_range=(ns.deg_min, ns.deg_max),
                          ideal_size_range=(ns.ideal_min, ns.ideal_max))
    paths = gen_corpus(ns.out_dir, ns.count, ns.seed, params, kind=ns.kind)
    for p in paths:
        print(p)
    return 0


def cmd_verify_identities(ns):
    checks = identity_suite(ns.trials, 2, ns.n_max, ns.seed)
    print(json.dumps({"seed": ns.seed, "trials": ns.trials, "n_max": ns.n_max,
                      "checks": checks}, indent=1))
    return 0 if all(c["pass"] for c in checks) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="corona-lab")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run scenario file(s) and emit reports")
    run.add_argument("--scenario", action="append", required=True,
                     help="scenario JSON file or directory; may be repeated")
    run.add_argument("--out", help="report path (one scenario) or directory (several)")
    run.add_argument("--jobs", type=int, default=1)
    run.set_defaults(func=cmd_run)

    gen = sub.add_parser("gen", help="generate a seeded scenario corpus")
    gen.add_argument("--count", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out-dir", required=True)
    gen.add_argument("--kind", default="solve-corona",
                     choices=["solve-corona", "verify-lemma22"])
    gen.add_argument("--n-min", type=int, default=1)
    gen.add_argument("--n-max", type=int, default=8)
    gen.add_argument("--deg-min", type=int, default=1)
    gen.add_argument("--deg-max", type=int, default=6)
    gen.add_argument("--ideal-min", type=int, default=1)
    gen.add_argument("--ideal-max", type=int, default=3)
    gen.set_defaults(func=cmd_gen)

    ver = sub.add_parser("verify-identities", help="randomised kernel-matrix identity suite")
    ver.add_argument("--n-max", type=int, default=12)
    ver.add_argument("--trials", type=int, default=200)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(func=cmd_verify_identities)
    return parser


def main(argv=None):
    ns = build_parser().parse_args(argv)
    try:
        tol_scale()
        return ns.func(ns)
    except CoronaLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
