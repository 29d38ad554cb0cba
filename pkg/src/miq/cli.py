"""Command line front end: ``python -m miq {verify,search,replay,list}``.

Exit status: 0 when every expected inequality held, 1 when an expected-true
statement was violated (or a replay did not reproduce), 2 on usage errors and
3 when more than 0.1% of trials hit eigensolver non-convergence.

Functions are named by spec strings::

    spec   := name (":" item)*
    item   := key "=" number | "odd" | "even"

    brick:s=2        power:p=0.5       log1p        identity
    power:p=0.5:offset=1               mix:s=0.5,2:c=1,3    constant:c=2
    square           linear:beta=2     power:p=1.5  t2frac:s=1
    min1             power:q=3:odd     step:c=0.5   abs:even

``p > 1`` and the names ``square``, ``linear`` and ``t2frac`` are operator
convex.  A ``q`` parameter, a parity tag or the names ``min1``, ``step`` and
``abs`` give a plain nondecreasing function.  Everything else is operator
monotone.  ``--functions`` takes a comma-separated list of specs.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import numpy as np

from miq import __version__, functions as fn
from miq import suite
from miq.inequalities import STATEMENT_TAGS
from miq.linalg import from_json
from miq.search import save_witness, search_counterexample


def _dims(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*", text)
    if not m:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}")
    lo = int(m.group(1))
    hi = int(m.group(2) or lo)
    return lo, hi


def _statements(text: str) -> tuple[str, ...]:
    tags = tuple(t.strip() for t in text.split(",") if t.strip())
    unknown = [t for t in tags if t not in STATEMENT_TAGS]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown statement tags: {', '.join(unknown)}")
    return tags


def _functions(text: str) -> tuple[str, ...]:
    # commas inside mix parameter lists are followed by digits
    items = tuple(t.strip() for t in re.split(r",(?=\s*[A-Za-z])", text) if t.strip())
    for item in items:
        try:
            fn.parse_function(item)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    return items


def _default_seed() -> int:
    raw = os.environ.get("MIQ_DEFAULT_SEED")
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"MIQ_DEFAULT_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="miq", description="Randomized verification of matrix norm inequalities.")
    parser.add_argument("--version", action="version", version=f"miq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run inequality suites over random ensembles")
    v.add_argument("--statements", type=_statements, default=STATEMENT_TAGS,
                   help="comma-separated statement tags (default: all)")
    v.add_argument("--dims", type=_dims, default=(2, 6), help="dimension range LO..HI (default 2..6)")
    v.add_argument("--trials", type=int, default=10, help="trials per cell (default 10)")
    v.add_argument("--seed", type=int, default=None, help="master seed (fallback: $MIQ_DEFAULT_SEED, then 42)")
    v.add_argument("--tol-scale", type=float, default=1.0, help="multiplier on the default tolerance")
    v.add_argument("--functions", type=_functions, default=None,
                   help="restrict catalogues to these function specs, comma-separated")
    v.add_argument("--budget", type=int, default=suite.DEFAULT_SEARCH_BUDGET,
                   help="evaluation budget of each cx_search trial")
    v.add_argument("--out", help="write the report here instead of stdout")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--jobs", type=int, default=1, help="worker processes (report is identical for any value)")

    s = sub.add_parser("search", help="search for a counterexample to the norm inequality")
    s.add_argument("--function", default="min1", help="function spec (default min1)")
    s.add_argument("--norm", choices=("op", "trace"), default="op")
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--n", type=int, default=2, help="matrix size (default 2)")
    s.add_argument("--out", help="write the witness JSON here")

    r = sub.add_parser("replay", help="recompute a stored witness or report record")
    r.add_argument("witness", help="witness JSON file")

    sub.add_parser("list", help="list statement tags and function catalogues")
    return parser


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    config = suite.SuiteConfig(
        statements=args.statements,
        dims=args.dims,
        trials_per_cell=args.trials,
        master_seed=_default_seed() if args.seed is None else args.seed,
        tol_scale=args.tol_scale,
        function_filters=args.functions,
        search_budget=args.budget,
    )
    report = suite.run_suite(config, jobs=args.jobs)
    text = suite.report_json(report) + "\n" if args.format == "json" else suite.report_csv(report)
    _write(text, args.out)
    for tag, s in report["summary"].items():
        flag = "" if s["expected"] else " (counterexample search)"
        margin = "n/a" if s["min_margin"] is None else f"{s['min_margin']:.3e}"
        print(f"{tag:18s} trials={s['trials']:5d} passes={s['passes']:5d} violations={s['violations']:4d} "
              f"near_misses={s['near_misses']:3d} errors={s['errors']:3d} min_margin={margin}{flag}",
              file=sys.stderr)
    return report["status"]


def cmd_search(args) -> int:
    seed = _default_seed() if args.seed is None else args.seed
    f = fn.parse_function(args.function)
    res = search_counterexample(f, args.norm, budget=args.budget, seed=seed, n=args.n)
    witness = res.witness()
    if args.out:
        save_witness(res, args.out)
    print(json.dumps(witness, indent=1))
    verdict = "violation found" if res.found else "no violation found"
    print(f"{verdict}: {f.name} {args.norm} norm, violation {res.violation:.6e} "
          f"(margin {res.check.margin:.6e}, tol {res.check.tol:.1e}) after {res.evaluations} evaluations",
          file=sys.stderr)
    return 0


def cmd_replay(args) -> int:
    try:
        with open(args.witness) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("witness must be a JSON object")
        if "A" in data:
            data["A"] = from_json(data["A"])
            data["B"] = from_json(data["B"])
        res = suite.replay_witness(data)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"miq replay: cannot replay {args.witness}: {exc}", file=sys.stderr)
        return 2
    np.set_printoptions(precision=17)
    print(f"statement: {res.id}")
    if res.lhs is not None:
        print(f"lhs profile: {res.lhs}")
        print(f"rhs profile: {res.rhs}")
    print(f"margin: {res.margin!r} (tol {res.tol!r}, holds={res.holds})")
    stored = data.get("margin")
    if stored is not None:
        same = float(stored) == res.margin
        print(f"stored margin: {float(stored)!r} -> {'reproduced' if same else 'MISMATCH'}")
        return 0 if same else 1
    return 0


def cmd_list(args) -> int:
    print("statements:")
    for tag in STATEMENT_TAGS:
        expected = "expected to hold" if suite.STATEMENTS[tag].expected else "counterexample search"
        print(f"  {tag:18s} {expected}")
    print("functions:")
    for row in fn.catalogue_summary():
        growth = "" if row["growth"] is None else f"  int dmu/(1+s) = {row['growth']:.6g}"
        print(f"  {row['role']:9s} {row['name']}{growth}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return {"verify": cmd_verify, "search": cmd_search, "replay": cmd_replay, "list": cmd_list}[args.command](args)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"miq: error: {exc}", file=sys.stderr)
        return 2
