import json
import math
from pathlib import Path

import jsonschema
import pytest

from miq import suite
from miq.inequalities import STATEMENT_TAGS
from miq.suite import SuiteConfig, exit_status, plan, replay_witness, report_csv, report_json, run_suite

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "docs" / "report_schema.json").read_text())
GOLDEN = json.loads((Path(__file__).parent / "golden" / "report_small.json").read_text())


def strip_time(report):
    return {k: v for k, v in report.items() if k != "wall_time"}


def assert_close_tree(a, b, path="$"):
    assert type(a) is type(b) or {type(a), type(b)} <= {int, float}, path
    if isinstance(a, dict):
        assert sorted(a) == sorted(b), path
        for k in a:
            assert_close_tree(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            assert_close_tree(x, y, f"{path}[{i}]")
    elif isinstance(a, float):
        assert math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-14), path
    else:
        assert a == b, path


class TestConfig:
    def test_defaults_cover_all_tags(self):
        assert SuiteConfig().statements == STATEMENT_TAGS

    @pytest.mark.parametrize("kwargs", [
        {"trials_per_cell": 0}, {"dims": (0, 3)}, {"dims": (4, 2)}, {"dims": (1, 33)},
        {"statements": ("nope",)}, {"tol_scale": 0.0},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            SuiteConfig(**kwargs)

    def test_plan_shape_and_coverage(self):
        tasks = plan(SuiteConfig(statements=("ando", "convex_theorem"), dims=(2, 3), trials_per_cell=50))
        assert len(tasks) == 2 * 2 * 50
        kinds = [t.kind for t in tasks]
        for k in ("rank_deficient", "commuting_pair"):
            assert kinds.count(k) >= 0.1 * len(kinds)
        # every ando catalogue entry is visited
        assert len({t.cell for t in tasks if t.statement == "ando"}) == 9
        assert len({t.seed for t in tasks}) == len(tasks)

    def test_filters(self):
        tasks = plan(SuiteConfig(statements=("ando",), dims=(2, 2), trials_per_cell=4,
                                 function_filters=("log1p",)))
        assert {t.params["f"] for t in tasks} == {"log1p"}


class TestRun:
    def test_scalar_records(self):
        r = run_suite(SuiteConfig(statements=("ando",), dims=(1, 1), trials_per_cell=10))
        assert len(r["records"]) == 10
        assert all(rec["holds"] and rec["n"] == 1 for rec in r["records"])
        assert r["status"] == 0

    def test_schema_and_golden(self):
        r = run_suite(SuiteConfig(statements=("ando", "fsll"), dims=(1, 1), trials_per_cell=3, master_seed=42))
        jsonschema.validate(r, SCHEMA)
        assert_close_tree({k: v for k, v in strip_time(r).items() if k != "tool_version"},
                          {k: v for k, v in GOLDEN.items() if k != "tool_version"})

    def test_every_statement_validates(self):
        r = run_suite(SuiteConfig(dims=(2, 2), trials_per_cell=2, search_budget=50))
        jsonschema.validate(r, SCHEMA)
        assert set(r["summary"]) == set(STATEMENT_TAGS)
        assert r["status"] == 0
        for tag, s in r["summary"].items():
            recs = [x for x in r["records"] if x["statement"] == tag]
            assert s["trials"] == len(recs)
            assert s["passes"] + s["violations"] + s["errors"] == s["trials"]
            assert s["near_misses"] == sum(x["near_miss"] for x in recs)

    def test_json_round_trip(self):
        r = run_suite(SuiteConfig(statements=("withD",), dims=(2, 3), trials_per_cell=3))
        assert json.loads(report_json(r)) == r

    def test_csv(self):
        r = run_suite(SuiteConfig(statements=("cor_pair",), dims=(2, 2), trials_per_cell=3))
        lines = report_csv(r).splitlines()
        assert lines[0].split(",")[:3] == ["statement", "n", "functions"]
        assert len(lines) == 4

    def test_parallel_identical(self):
        cfg = SuiteConfig(statements=("ando", "lemma_poly", "trace_convex"), dims=(2, 3), trials_per_cell=6)
        assert report_json(strip_time(run_suite(cfg, jobs=1))) == report_json(strip_time(run_suite(cfg, jobs=2)))


class TestStatus:
    def rec(self, **kw):
        base = {"expected": True, "holds": True, "error": None}
        base.update(kw)
        return base

    def test_codes(self):
        assert exit_status([self.rec()] * 5) == 0
        assert exit_status([self.rec(), self.rec(holds=False)]) == 1
        assert exit_status([self.rec(expected=False, holds=False)]) == 0
        assert exit_status([self.rec(holds=None, error="precondition: x")]) == 1
        many = [self.rec()] * 999 + [self.rec(holds=None, error="nonconvergence: x")]
        assert exit_status(many) == 0
        assert exit_status(many + [self.rec(holds=None, error="nonconvergence: y")]) == 3

    def test_nonconvergence_recorded(self, monkeypatch):
        def boom(*args, **kwargs):
            raise suite.ConvergenceError("forced")

        patched = suite.Statement("ando", True, suite.STATEMENTS["ando"].cells, boom)
        monkeypatch.setitem(suite.STATEMENTS, "ando", patched)
        r = run_suite(SuiteConfig(statements=("ando",), dims=(2, 2), trials_per_cell=3))
        assert all(x["error"].startswith("nonconvergence") for x in r["records"])
        assert r["status"] == 3 and r["summary"]["ando"]["errors"] == 3


class TestReplay:
    def test_record_replays(self):
        r = run_suite(SuiteConfig(statements=("main_theorem", "cor_exp"), dims=(3, 3), trials_per_cell=3))
        for rec in r["records"]:
            assert replay_witness(rec).margin == rec["margin"]

    def test_unknown_statement(self):
        with pytest.raises(ValueError):
            replay_witness({"statement": "lemma_poly", "A": {"n": 1, "re": [0.0], "im": [0.0]},
                            "B": {"n": 1, "re": [0.0], "im": [0.0]}})
