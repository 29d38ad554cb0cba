"""Randomized verification suites and their reports.

A suite runs ``trials_per_cell`` trials for every ``(statement, n)`` cell.
Trial ``t`` takes parameter set ``t mod m`` of the statement (its catalogue
functions, brick parameter, arity and so on, ``m`` of them in all) and draws
its pair from one of :data:`miq.generators.PAIR_KINDS`, rotating so that every
parameter set meets every ensemble.  Each trial draws everything from its own
seed::

    trial_seed = derive_seed(master_seed, statement, n, trial)

which makes records independent of execution order and of ``jobs``.
"""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import product
from typing import Callable

import numpy as np

from miq import __version__, functions as fn, generators
from miq import inequalities as ineq
from miq.linalg import ConvergenceError, from_json, matrix_abs
from miq.ncpoly import random_poly

REPORT_SCHEMA = "miq.report/1"
DEFAULT_SEARCH_BUDGET = 2000

STATUS_OK = 0
STATUS_VIOLATION = 1
STATUS_USAGE = 2
STATUS_NONCONVERGENCE = 3
NONCONVERGENCE_LIMIT = 0.001


@dataclass(frozen=True)
class SuiteConfig:
    statements: tuple[str, ...] = ineq.STATEMENT_TAGS
    dims: tuple[int, int] = (2, 6)
    trials_per_cell: int = 10
    master_seed: int = 42
    tol_scale: float = 1.0
    function_filters: tuple[str, ...] | None = None
    search_budget: int = DEFAULT_SEARCH_BUDGET

    def __post_init__(self):
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be at least 1")
        lo, hi = self.dims
        if not 1 <= lo <= hi <= 32:
            raise ValueError(f"dims must satisfy 1 <= lo <= hi <= 32, got {lo}..{hi}")
        unknown = set(self.statements) - set(ineq.STATEMENT_TAGS)
        if unknown:
            raise ValueError(f"unknown statements: {', '.join(sorted(unknown))}")
        if self.tol_scale <= 0:
            raise ValueError("tol_scale must be positive")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["statements"] = list(self.statements)
        d["dims"] = list(self.dims)
        d["function_filters"] = None if self.function_filters is None else list(self.function_filters)
        return d


class Catalogues:
    """Catalogue entries after applying ``function_filters``."""

    def __init__(self, filters=None):
        roles = {
            "monotone": list(fn.MONOTONE_CATALOGUE),
            "convex": list(fn.CONVEX_CATALOGUE),
            "plain": list(fn.PLAIN_CATALOGUE),
            "odd": list(fn.ODD_CATALOGUE),
            "even": list(fn.EVEN_CATALOGUE),
        }
        if filters:
            picked = {role: [] for role in roles}
            for text in filters:
                f = fn.parse_function(text)
                role = f.role
                if role == "plain" and getattr(f, "parity", "none") != "none":
                    role = f.parity
                if all(f.name != g.name for g in picked[role]):
                    picked[role].append(f)
            roles = {role: picked[role] or roles[role] for role in roles}
        self.monotone = roles["monotone"]
        self.convex = roles["convex"]
        self.plain = roles["plain"]
        self.odd = roles["odd"]
        self.even = roles["even"]

    def lookup(self, name: str, role: str):
        for f in getattr(self, role):
            if f.name == name:
                return f
        return fn.parse_function(name, role="plain" if role in ("odd", "even") else role)


@dataclass(frozen=True)
class Statement:
    tag: str
    expected: bool
    cells: Callable[[Catalogues], list[dict]]
    run: Callable[..., ineq.CheckResult]


# -- trial inputs ------------------------------------------------------------

def _aux_rng(seed):
    return generators.rng_for(generators.derive_seed(seed, "aux"))


def _pair_for(n, seed, kind):
    rng = _aux_rng(seed)
    delta = float(rng.uniform(0.0, 1.5))
    a, b = generators.random_pair(kind, n, delta=delta, seed=seed)
    return rng, a, b


def _congruent(x, n, seed):
    """``V* X V`` with a random contraction ``V``; majorized by ``X`` when ``X >= 0``."""
    v = generators.random_contraction(n, seed=seed)
    return v.conj().T @ x @ v


def _pick(rng, items, k):
    return [items[int(i)] for i in rng.integers(len(items), size=k)]


def _names(fs):
    return [f.name for f in fs]


# -- statement runners -------------------------------------------------------

def _run_ando(n, seed, kind, params, cat, tol_scale):
    _, a, b = _pair_for(n, seed, kind)
    f = cat.lookup(params["f"], "monotone")
    return ineq.check_ando(f, a, b, tol_scale), [f.name]


def _run_diff(n, seed, kind, params, cat, tol_scale):
    _, a, b = _pair_for(n, seed, kind)
    return ineq.check_diff_dominance(a, b, tol_scale), []


def _run_withd(n, seed, kind, params, cat, tol_scale):
    _, a, d = _pair_for(n, seed, kind)
    return ineq.check_withD(params["s"], a, d, tol_scale), [f"brick:s={params['s']}"]


def _run_fsll(n, seed, kind, params, cat, tol_scale):
    _, a, b = _pair_for(n, seed, kind)
    return ineq.check_fsll(params["s"], a, b, tol_scale), [f"brick:s={params['s']}"]


def _lemma_inputs(n, seed, kind, d, cat):
    rng, a, _ = _pair_for(n, seed, kind)
    gs = _pick(rng, cat.monotone + cat.plain, d)
    xs = [_congruent(g.matrix(a), n, generators.derive_seed(seed, "contraction", i)) for i, g in enumerate(gs)]
    return a, gs, xs


def _run_lemma_sum(n, seed, kind, params, cat, tol_scale):
    dmat, gs, xs = _lemma_inputs(n, seed, kind, params["d"], cat)
    return ineq.check_lemma_sum(dmat, gs, xs, tol_scale), _names(gs)


def _run_lemma_product(n, seed, kind, params, cat, tol_scale):
    dmat, gs, xs = _lemma_inputs(n, seed, kind, params["d"], cat)
    return ineq.check_lemma_product(dmat, gs, xs, tol_scale), _names(gs)


def _run_lemma_poly(n, seed, kind, params, cat, tol_scale):
    d = params["d"]
    dmat, gs, xs = _lemma_inputs(n, seed, kind, d, cat)
    p = random_poly(d, 3, 8, generators.derive_seed(seed, "poly"))
    return ineq.check_lemma_poly(dmat, gs, xs, p, tol_scale), _names(gs)


def _run_main(n, seed, kind, params, cat, tol_scale):
    rng, a, b = _pair_for(n, seed, kind)
    d = int(rng.integers(1, 3))
    e = int(rng.integers(0, 3))
    gs = _pick(rng, cat.monotone, d)
    hs = _pick(rng, cat.plain, e)
    dabs = matrix_abs(b - a)
    cs = [_congruent(h.matrix(dabs), n, generators.derive_seed(seed, "contraction", i)) for i, h in enumerate(hs)]
    signs = ineq.canonical_signs(d)
    if rng.uniform() < 0.5:
        signs = tuple(-s for s in signs)
    p = random_poly(d + e, 3, 8, generators.derive_seed(seed, "poly"))
    return ineq.check_main_theorem(p, gs, hs, a, b, cs, signs, tol_scale), _names(gs) + _names(hs)


def _corollary_runner(family):
    def run(n, seed, kind, params, cat, tol_scale):
        rng, a, b = _pair_for(n, seed, kind)
        d = int(rng.integers(1, 4)) if family in ("product", "weighted_sum") else 1
        gs = _pick(rng, cat.monotone, d)
        hs = _pick(rng, cat.plain, d) if family == "weighted_sum" else []
        return ineq.check_corollaries(family, a, b, gs, hs, tol_scale), _names(gs) + _names(hs)
    return run


def _run_convex(n, seed, kind, params, cat, tol_scale):
    _, a, b = _pair_for(n, seed, kind)
    f, h = cat.lookup(params["f"], "convex"), cat.lookup(params["h"], "plain")
    return ineq.check_convex_theorem(f, h, a, b, tol_scale), [f.name, h.name]


def _run_trace_monotone(n, seed, kind, params, cat, tol_scale):
    _, a, b = _pair_for(n, seed, kind)
    h = fn.parse_function(params["h"], role="plain")
    g = cat.lookup(params["g"], "monotone")
    return ineq.check_trace_monotone(h, g, a, b, tol_scale), [h.name, g.name]


def _run_trace_convex(n, seed, kind, params, cat, tol_scale):
    _, a, b = _pair_for(n, seed, kind)
    h = fn.parse_function(params["h"], role="plain")
    f = cat.lookup(params["f"], "convex")
    return ineq.check_trace_convex(h, f, a, b, tol_scale), [h.name, f.name]


def _run_cx_search(n, seed, kind, params, cat, tol_scale, budget=DEFAULT_SEARCH_BUDGET):
    from miq.search import search_counterexample

    f = fn.parse_function(params["f"], role="plain")
    res = search_counterexample(f, params["norm"], budget=budget, seed=seed, n=n)
    return res.check, [f.name]


def _fn_cells(key, fs):
    return [{key: f.name} for f in fs]


STATEMENTS: dict[str, Statement] = {
    s.tag: s for s in (
        Statement("ando", True, lambda c: _fn_cells("f", c.monotone), _run_ando),
        Statement("diff_dominance", True, lambda c: [{}], _run_diff),
        Statement("withD", True, lambda c: [{"s": s} for s in (0.0, 0.1, 1.0, 10.0)], _run_withd),
        Statement("fsll", True, lambda c: [{"s": s} for s in (0.0, 0.1, 1.0, 10.0)], _run_fsll),
        Statement("lemma_sum", True, lambda c: [{"d": d} for d in (1, 2, 3)], _run_lemma_sum),
        Statement("lemma_product", True, lambda c: [{"d": d} for d in (1, 2, 3)], _run_lemma_product),
        Statement("lemma_poly", True, lambda c: [{"d": d} for d in (1, 2, 3)], _run_lemma_poly),
        Statement("main_theorem", True, lambda c: [{}], _run_main),
        Statement("cor_product", True, lambda c: [{}], _corollary_runner("product")),
        Statement("cor_pair", True, lambda c: [{}], _corollary_runner("pair")),
        Statement("cor_weighted_sum", True, lambda c: [{}], _corollary_runner("weighted_sum")),
        Statement("cor_exp", True, lambda c: [{}], _corollary_runner("exp")),
        Statement("convex_theorem", True,
                  lambda c: [{"f": f.name, "h": h.name} for f, h in product(c.convex, c.plain)], _run_convex),
        Statement("trace_monotone", True,
                  lambda c: [{"h": h.name, "g": g.name} for h, g in product(c.odd + c.even, c.monotone)],
                  _run_trace_monotone),
        Statement("trace_convex", True,
                  lambda c: [{"h": h.name, "f": f.name} for h, f in product(c.odd, c.convex)], _run_trace_convex),
        Statement("cx_search", False,
                  lambda c: [{"f": "min1", "norm": norm} for norm in ("op", "trace")], _run_cx_search),
    )
}


# -- execution ---------------------------------------------------------------

@dataclass(frozen=True)
class Task:
    statement: str
    cell: int
    params: dict = field(hash=False)
    n: int = 1
    trial: int = 0
    seed: int = 0
    kind: str = "wishart"


def plan(config: SuiteConfig) -> list[Task]:
    cat = Catalogues(config.function_filters)
    tasks = []
    lo, hi = config.dims
    for tag in config.statements:
        cells = STATEMENTS[tag].cells(cat)
        if not cells:
            raise ValueError(f"function filters leave no functions for statement {tag!r}")
        for n in range(lo, hi + 1):
            for t in range(config.trials_per_cell):
                ci = t % len(cells)
                seed = generators.derive_seed(config.master_seed, tag, n, t)
                kind = generators.PAIR_KINDS[(t + t // len(cells)) % len(generators.PAIR_KINDS)]
                tasks.append(Task(tag, ci, cells[ci], n, t, seed, kind))
    return tasks


def _digest(task: Task, tol_scale: float, search_budget: int) -> dict:
    d = {"statement": task.statement, "n": task.n, "seed": task.seed, "kind": task.kind,
         "params": task.params, "tol_scale": tol_scale}
    if task.statement == "cx_search":
        d["search_budget"] = search_budget
    return d


def run_digest(digest: dict, filters=None) -> dict:
    """Run one trial from its replay digest and return its report record."""
    tag = digest["statement"]
    stmt = STATEMENTS[tag]
    cat = Catalogues(filters)
    record = {"statement": tag, "n": digest["n"], "expected": stmt.expected, "inputs_digest": digest}
    kwargs = {"budget": digest["search_budget"]} if tag == "cx_search" else {}
    try:
        res, names = stmt.run(digest["n"], digest["seed"], digest["kind"], digest["params"], cat,
                              digest["tol_scale"], **kwargs)
    except ConvergenceError as exc:
        record.update(functions=[], holds=None, margin=None, near_miss=False, worst_k=None, tol=None,
                      error=f"nonconvergence: {exc}")
        return record
    except ineq.PreconditionError as exc:
        record.update(functions=[], holds=None, margin=None, near_miss=False, worst_k=None, tol=None,
                      error=f"precondition: {exc}")
        return record
    record.update(functions=names, holds=bool(res.holds), margin=float(res.margin),
                  near_miss=bool(res.near_miss), worst_k=int(res.worst_k), tol=float(res.tol), error=None)
    return record


def _run_chunk(args):
    digests, filters = args
    return [run_digest(d, filters) for d in digests]


def summarize(records: list[dict]) -> dict:
    summary: dict[str, dict] = {}
    for r in records:
        s = summary.setdefault(r["statement"], {"expected": r["expected"], "trials": 0, "passes": 0,
                                               "violations": 0, "near_misses": 0, "errors": 0,
                                               "min_margin": None})
        s["trials"] += 1
        if r["error"] is not None:
            s["errors"] += 1
            continue
        if r["holds"]:
            s["passes"] += 1
        else:
            s["violations"] += 1
        if r["near_miss"]:
            s["near_misses"] += 1
        if s["min_margin"] is None or r["margin"] < s["min_margin"]:
            s["min_margin"] = r["margin"]
    return summary


def exit_status(records: list[dict]) -> int:
    if not records:
        return STATUS_OK
    nonconv = sum(1 for r in records if r["error"] and r["error"].startswith("nonconvergence"))
    if nonconv > NONCONVERGENCE_LIMIT * len(records):
        return STATUS_NONCONVERGENCE
    for r in records:
        if r["expected"] and (r["holds"] is False or (r["error"] or "").startswith("precondition")):
            return STATUS_VIOLATION
    return STATUS_OK


def run_suite(config: SuiteConfig, jobs: int = 1) -> dict:
    """Run every cell of ``config`` and return the report dictionary.

    The report is identical for any ``jobs`` apart from ``wall_time``.
    """
    start = time.perf_counter()
    digests = [_digest(t, config.tol_scale, config.search_budget) for t in plan(config)]
    filters = config.function_filters
    if jobs <= 1 or len(digests) < 2:
        records = [run_digest(d, filters) for d in digests]
    else:
        size = max(1, len(digests) // (jobs * 8))
        chunks = [(digests[i:i + size], filters) for i in range(0, len(digests), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    summary = summarize(records)
    return {
        "schema": REPORT_SCHEMA,
        "tool_version": __version__,
        "config": config.to_dict(),
        "records": records,
        "summary": summary,
        "status": exit_status(records),
        "wall_time": time.perf_counter() - start,
    }


CSV_FIELDS = ("statement", "n", "functions", "margin", "holds", "near_miss", "worst_k", "tol",
              "expected", "error", "inputs_digest")


def report_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True)


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in report["records"]:
        row = {k: r.get(k) for k in CSV_FIELDS}
        row["functions"] = ";".join(r.get("functions") or [])
        row["inputs_digest"] = json.dumps(r["inputs_digest"], sort_keys=True)
        row["margin"] = repr(r["margin"]) if r["margin"] is not None else ""
        row["tol"] = repr(r["tol"]) if r["tol"] is not None else ""
        w.writerow(row)
    return buf.getvalue()


# -- replay --------------------------------------------------------------------

PAIR_STATEMENTS = ("ando", "diff_dominance", "withD", "fsll", "cor_product", "cor_pair",
                   "cor_weighted_sum", "cor_exp", "convex_theorem", "trace_monotone", "trace_convex")


def replay_witness(data: dict) -> ineq.CheckResult:
    """Recompute a stored witness.

    Two forms are accepted: a matrix witness with ``statement``, ``A``, ``B``
    (matrix JSON) and the function fields the statement needs, or a report
    record carrying an ``inputs_digest``.
    """
    if "inputs_digest" in data and "A" not in data:
        rec = run_digest(data["inputs_digest"])
        if rec["error"]:
            raise ValueError(rec["error"])
        return ineq.CheckResult(rec["statement"], rec["holds"], rec["margin"], rec["worst_k"], rec["tol"],
                                rec["inputs_digest"])
    tag = data.get("statement", "ando")
    if tag not in PAIR_STATEMENTS:
        raise ValueError(f"statement {tag!r} cannot be replayed from a matrix pair")
    a = data["A"] if isinstance(data["A"], np.ndarray) else from_json(data["A"])
    b = data["B"] if isinstance(data["B"], np.ndarray) else from_json(data["B"])
    tol_scale = float(data.get("tol_scale", 1.0))
    parse = fn.parse_function
    if tag == "ando":
        f = parse(data["function"])
        return ineq.check_ando(f, a, b, tol_scale, norm=data.get("norm"))
    if tag == "diff_dominance":
        return ineq.check_diff_dominance(a, b, tol_scale)
    if tag == "withD":
        return ineq.check_withD(float(data["s"]), a, b, tol_scale)
    if tag == "fsll":
        return ineq.check_fsll(float(data["s"]), a, b, tol_scale)
    if tag.startswith("cor_"):
        gs = [parse(x, role="monotone") for x in data["g"]]
        hs = [parse(x, role="plain") for x in data.get("h", [])]
        return ineq.check_corollaries(tag[4:], a, b, gs, hs, tol_scale)
    if tag == "convex_theorem":
        return ineq.check_convex_theorem(parse(data["f"], role="convex"), parse(data["h"], role="plain"),
                                         a, b, tol_scale)
    if tag == "trace_monotone":
        return ineq.check_trace_monotone(parse(data["h"], role="plain"), parse(data["g"], role="monotone"),
                                         a, b, tol_scale)
    return ineq.check_trace_convex(parse(data["h"], role="plain"), parse(data["f"], role="convex"),
                                   a, b, tol_scale)
