import json

import numpy as np
import pytest

from conewalk.cli import main, write_lp_file
from conewalk.lp import LinearProgram

from conftest import SQRT2, make_square


@pytest.fixture
def square_file(tmp_path):
    path = tmp_path / "square.json"
    sq = make_square()
    write_lp_file(str(path), LinearProgram(A=sq.A, b=sq.b, c=sq.c),
                  name="unit-square", integral=True, Delta=1)
    return str(path)


@pytest.fixture
def infeasible_file(tmp_path):
    path = tmp_path / "infeasible.json"
    lp = LinearProgram(
        A=[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
        b=[0.0, -1.0, 1.0, 0.0], c=[1.0, 1.0])
    write_lp_file(str(path), lp, name="empty")
    return str(path)


@pytest.fixture
def unbounded_file(tmp_path):
    path = tmp_path / "unbounded.json"
    lp = LinearProgram(A=[[-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]],
                       b=[0.0, 1.0, 0.0], c=[1.0, 0.0])
    write_lp_file(str(path), lp, name="ray")
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


class TestSolveCommand:
    def test_square(self, capsys, square_file):
        code, out = run_cli(capsys, ["solve", "--input", square_file,
                                     "--seed", "0"])
        assert code == 0
        report = json.loads(out)
        assert report["status"] == "optimal"
        assert report["basis"] == [1, 2]
        assert report["value"] == pytest.approx(np.sqrt(2.0), abs=1e-7)
        assert report["delta"] == pytest.approx(1.0)
        assert report["delta_method"] == "brute_force"
        assert report["walk"]["alpha"] == pytest.approx(32.0)
        assert report["seed"] == 0

    def test_infeasible_exit_code(self, capsys, infeasible_file):
        code, out = run_cli(capsys, ["solve", "--input", infeasible_file])
        assert code == 2
        report = json.loads(out)
        assert report["status"] == "infeasible"
        assert report["witness_iteration"] == 2

    def test_unbounded_exit_code(self, capsys, unbounded_file):
        code, out = run_cli(capsys, ["solve", "--input", unbounded_file])
        assert code == 3
        assert json.loads(out)["status"] == "unbounded"

    def test_byte_identical_reports(self, capsys, square_file):
        argv = ["solve", "--input", square_file, "--seed", "42"]
        _, first = run_cli(capsys, argv)
        _, second = run_cli(capsys, argv)
        assert first == second

    def test_malformed_input(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{\"n\": 2}")
        code, out = run_cli(capsys, ["solve", "--input", str(bad)])
        assert code == 1
        report = json.loads(out)
        assert report["status"] == "error"
        assert "missing" in report["error"]

    def test_unreadable_input(self, capsys, tmp_path):
        code, out = run_cli(capsys, ["solve", "--input",
                                     str(tmp_path / "nope.json")])
        assert code == 1
        assert json.loads(out)["status"] == "error"

    def test_delta_bound_method(self, capsys, square_file):
        code, out = run_cli(capsys, ["solve", "--input", square_file,
                                     "--delta", "bound"])
        assert code == 0
        report = json.loads(out)
        assert report["delta"] == pytest.approx(0.5)
        assert report["delta_method"] == "integer_bound"

    def test_explicit_delta(self, capsys, square_file):
        code, out = run_cli(capsys, ["solve", "--input", square_file,
                                     "--delta", "0.75"])
        assert code == 0
        report = json.loads(out)
        assert report["delta"] == pytest.approx(0.75)
        assert report["delta_method"] == "provided"

    def test_trace_file(self, capsys, square_file, tmp_path):
        trace = tmp_path / "trace.jsonl"
        code, out = run_cli(capsys, ["solve", "--input", square_file,
                                     "--seed", "5", "--steps", "40",
                                     "--trace", str(trace)])
        assert code == 0
        report = json.loads(out)
        lines = [ln for ln in trace.read_text().splitlines() if ln]
        assert len(lines) == sum(report["walk"]["steps_per_level"])
        for ln in lines:
            rec = json.loads(ln)
            assert rec["step"] >= 1
            assert len(rec["basis"]) == 2

    def test_trace_includes_retried_attempts(self, capsys, square_file,
                                             tmp_path):
        # the step counter restarts with every walk attempt, so the number
        # of step-1 records is the retry count plus one
        trace = tmp_path / "retry_trace.jsonl"
        code, out = run_cli(capsys, ["solve", "--input", square_file,
                                     "--seed", "6", "--trace", str(trace)])
        assert code == 0
        report = json.loads(out)
        records = [json.loads(ln) for ln in trace.read_text().splitlines()
                   if ln]
        restarts = sum(1 for r in records if r["step"] == 1)
        expected = report["walk"]["retries"] + len(
            [s for s in report["walk"]["steps_per_level"] if s > 0])
        assert restarts == expected

    def test_report_self_certifies(self, capsys, square_file):
        # feasibility and cone membership re-check from the report alone
        from conewalk.cli import load_lp_file
        from conewalk.lp import normalize
        from conewalk.simplex import cone_membership

        _, out = run_cli(capsys, ["solve", "--input", square_file,
                                  "--seed", "9"])
        report = json.loads(out)
        lp, _ = load_lp_file(square_file)
        nlp = normalize(lp)
        x = np.array(report["x"], dtype=float)
        basis = tuple(b - 1 for b in report["basis"])
        assert nlp.is_feasible(x)
        np.testing.assert_allclose(nlp.A[list(basis)] @ x,
                                   nlp.b[list(basis)], atol=1e-9)
        assert cone_membership(nlp, basis, nlp.c).inside

    def test_floats_serialized_with_17_digits(self, capsys, square_file):
        import re

        _, out = run_cli(capsys, ["solve", "--input", square_file])
        match = re.search(r'"value": (1\.\d+)', out)
        assert match is not None
        # 17 significant digits: one before the point, 16 after
        assert len(match.group(1).replace(".", "")) == 17
        assert float(match.group(1)) == json.loads(out)["value"]


class TestVerifyDeltaCommand:
    def test_square_brute(self, capsys, square_file):
        code, out = run_cli(capsys, ["verify-delta", "--input", square_file])
        assert code == 0
        record = json.loads(out)
        assert record["delta"] == pytest.approx(1.0)
        assert record["method"] == "brute_force"
        assert "witness_row" in record

    def test_triangle_brute(self, capsys, tmp_path):
        path = tmp_path / "triangle.json"
        lp = LinearProgram(
            A=[[-1.0, 0.0], [0.0, -1.0], [1.0, 1.0]],
            b=[0.0, 0.0, 1.0], c=[0.0, 1.0])
        write_lp_file(str(path), lp, name="triangle")
        code, out = run_cli(capsys, ["verify-delta", "--input", str(path)])
        assert code == 0
        assert json.loads(out)["delta"] == pytest.approx(1.0 / SQRT2, abs=1e-9)

    def test_square_bound(self, capsys, square_file):
        code, out = run_cli(capsys, ["verify-delta", "--input", square_file,
                                     "--method", "bound"])
        assert code == 0
        record = json.loads(out)
        assert record["delta"] == pytest.approx(0.5)
        assert record["Delta"] == 1

    def test_bound_requires_integral_metadata(self, capsys, tmp_path):
        path = tmp_path / "plain.json"
        lp = LinearProgram(A=[[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0],
                              [0.0, -1.0]],
                           b=[1.0, 1.0, 0.0, 0.0], c=[1.0, 1.0])
        write_lp_file(str(path), lp)
        code, out = run_cli(capsys, ["verify-delta", "--input", str(path),
                                     "--method", "bound"])
        assert code == 1
        assert json.loads(out)["status"] == "error"


class TestWalkStatsCommand:
    def test_square_batch(self, capsys, square_file):
        code, out = run_cli(capsys, ["walk-stats", "--input", square_file,
                                     "--seeds", "20"])
        assert code == 0
        stats = json.loads(out)
        inst = stats["instances"][0]
        assert inst["name"] == "unit-square"
        assert inst["seeds"] == 20
        assert inst["success_rate"] >= 0.95
        assert len(inst["per_seed"]) == 20

    def test_single_seed_matches_solve(self, capsys, square_file):
        code, out = run_cli(capsys, ["walk-stats", "--input", square_file,
                                     "--seeds", "1", "--seed", "3"])
        stats = json.loads(out)["instances"][0]
        _, solve_out = run_cli(capsys, ["solve", "--input", square_file,
                                        "--seed", "3"])
        report = json.loads(solve_out)
        assert stats["per_seed"][0]["pivots"] == report["walk"]["pivots"]
        assert stats["per_seed"][0]["retries"] == report["walk"]["retries"]
        assert stats["mean_pivots"] == report["walk"]["pivots"]

    def test_multiple_inputs(self, capsys, square_file, infeasible_file):
        code, out = run_cli(capsys, ["walk-stats",
                                     "--input", square_file,
                                     "--input", infeasible_file,
                                     "--seeds", "2"])
        assert code == 0
        stats = json.loads(out)
        assert len(stats["instances"]) == 2
        assert stats["instances"][1]["median_pivots"] is None
