import json
import math

import pytest

from minkbvp.cli import (
    EXIT_HYPOTHESIS,
    EXIT_NUMERIC,
    EXIT_OK,
    EXIT_USAGE,
    ProblemFileError,
    main,
    parse_problem,
)

BALL_CUBIC = {
    "dimension": 3,
    "outer_radius": 1.0,
    "family": "linear_plus_cubic",
    "params": {"m": 1.0, "c": 1.0},
}

ANNULUS_CUBIC = {
    "dimension": 3,
    "outer_radius": 1.0,
    "inner_radius": 0.5,
    "family": "linear_plus_cubic",
    "params": {"m": 1.0, "c": 1.0},
}


def write_problem(tmp_path, doc, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


class TestParseProblem:
    def test_minimal_ball(self, tmp_path):
        spec = parse_problem(write_problem(tmp_path, BALL_CUBIC))
        assert spec.dimension == 3
        assert spec.outer_radius == 1.0
        assert spec.nonlinearity.family == "linear_plus_cubic"
        assert spec.weight(0.3) == 1.0

    def test_inner_radius_rejected_when_too_big(self, tmp_path):
        doc = dict(BALL_CUBIC, inner_radius=1.5)
        with pytest.raises(ProblemFileError):
            parse_problem(write_problem(tmp_path, doc))

    def test_alpha_must_exceed_radius(self, tmp_path):
        doc = dict(BALL_CUBIC, alpha=0.8)
        with pytest.raises(ProblemFileError, match="alpha"):
            parse_problem(write_problem(tmp_path, doc))

    def test_unknown_top_key(self, tmp_path):
        doc = dict(BALL_CUBIC, radius=2.0)
        with pytest.raises(ProblemFileError, match="radius"):
            parse_problem(write_problem(tmp_path, doc))

    def test_unknown_param_key(self, tmp_path):
        doc = dict(BALL_CUBIC, params={"m": 1.0, "c": 1.0, "zeta": 3})
        with pytest.raises(ProblemFileError, match="zeta"):
            parse_problem(write_problem(tmp_path, doc))

    def test_json_error_has_line_info(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "dimension": 3,\n  oops\n}')
        with pytest.raises(ProblemFileError, match="line 3"):
            parse_problem(path)

    def test_exponent_family_mismatch(self, tmp_path):
        doc = {
            "dimension": 3,
            "outer_radius": 1.0,
            "family": "power_superlinear",
            "params": {"q": 0.5},
        }
        with pytest.raises(ProblemFileError, match="q > 1"):
            parse_problem(write_problem(tmp_path, doc))

    def test_table_weight(self, tmp_path):
        doc = {
            "dimension": 3,
            "outer_radius": 1.0,
            "family": "linear_plus_cubic",
            "params": {"m": {"r": [0.0, 1.0], "values": [1.0, 2.0]}, "c": 0.0},
        }
        spec = parse_problem(write_problem(tmp_path, doc))
        assert spec.weight(0.5) == pytest.approx(1.5)

    def test_custom_table_family(self, tmp_path):
        doc = {
            "dimension": 3,
            "outer_radius": 1.0,
            "family": "custom_table",
            "params": {"s": [0.0, 1.0, 2.0], "f": [0.0, 1.0, 3.0], "odd": True},
        }
        spec = parse_problem(write_problem(tmp_path, doc))
        assert spec.eval_f(0.2, -1.0) == -1.0
        assert spec.alpha == 2.0


class TestSubcommands:
    def test_spectrum_writes_table(self, tmp_path):
        prob = write_problem(tmp_path, BALL_CUBIC)
        out = tmp_path / "out"
        code = main(["spectrum", "--problem", str(prob), "--out", str(out), "--count", "2"])
        assert code == EXIT_OK
        lines = (out / "spectrum.csv").read_text().splitlines()
        prov = json.loads(lines[0][2:])
        assert prov["version"] and prov["problem_sha256"]
        assert lines[1] == "k,lambda,zeros,method,residual"
        lam1 = float(lines[2].split(",")[1])
        assert lam1 == pytest.approx(math.pi**2, rel=1e-8)
        assert (out / "manifest.json").exists()

    def test_spectrum_deterministic(self, tmp_path):
        prob = write_problem(tmp_path, BALL_CUBIC)
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            assert main(["spectrum", "--problem", str(prob), "--out", str(out), "--count", "2"]) == EXIT_OK
            outs.append((out / "spectrum.csv").read_bytes())
        assert outs[0] == outs[1]

    def test_spectrum_json_format(self, tmp_path):
        prob = write_problem(tmp_path, ANNULUS_CUBIC)
        out = tmp_path / "out"
        code = main(
            ["spectrum", "--problem", str(prob), "--out", str(out), "--count", "2",
             "--method", "both", "--quadrature", "128", "--format", "json"]
        )
        assert code == EXIT_OK
        doc = json.loads((out / "spectrum.json").read_text())
        assert doc["columns"] == ["k", "lambda", "zeros", "method", "residual"]
        methods = {row[3] for row in doc["rows"]}
        assert methods == {"prufer", "nystrom"}

    def test_solve_csv_and_trajectory(self, tmp_path):
        prob = write_problem(tmp_path, ANNULUS_CUBIC)
        out = tmp_path / "out"
        code = main(
            ["solve", "--problem", str(prob), "--out", str(out), "--lam", "25.0",
             "--k", "1", "--nu", "+", "--d-grid", "64", "--trajectory"]
        )
        assert code == EXIT_OK
        meta = json.loads((out / "solutions.json").read_text())
        assert len(meta["solutions"]) == 1
        sol_lines = (out / "solution_k1p_0.csv").read_text().splitlines()
        assert sol_lines[1] == "r,u,du"
        traj_lines = (out / "trajectory_k1p_0.csv").read_text().splitlines()
        assert traj_lines[1] == "r,u,du,w"

    def test_sweep_below_threshold_is_empty(self, tmp_path):
        prob = write_problem(tmp_path, ANNULUS_CUBIC)
        out = tmp_path / "out"
        code = main(
            ["sweep", "--problem", str(prob), "--out", str(out),
             "--lambda-min", "4.0", "--lambda-max", "7.0", "--lambda-steps", "8",
             "--k", "1", "--nu", "+", "--d-grid", "48"]
        )
        assert code == EXIT_OK
        rows = (out / "sweep.csv").read_text().splitlines()[2:]
        assert len(rows) == 8
        assert all(row.split(",")[3] == "0" for row in rows)

    def test_sweep_workers_deterministic(self, tmp_path):
        prob = write_problem(tmp_path, ANNULUS_CUBIC)
        texts = []
        for name, workers in (("w1", "1"), ("w2", "3")):
            out = tmp_path / name
            code = main(
                ["sweep", "--problem", str(prob), "--out", str(out),
                 "--lambda-min", "20.0", "--lambda-max", "30.0", "--lambda-steps", "8",
                 "--k", "1", "--nu", "+", "--d-grid", "48", "--workers", workers]
            )
            assert code == EXIT_OK
            texts.append((out / "sweep.csv").read_bytes())
        assert texts[0] == texts[1]

    def test_branch_summary(self, tmp_path):
        prob = write_problem(tmp_path, ANNULUS_CUBIC)
        out = tmp_path / "out"
        code = main(
            ["branch", "--problem", str(prob), "--out", str(out), "--k", "1",
             "--nu", "+", "--lambda-max", "60.0"]
        )
        assert code == EXIT_OK
        summary = json.loads((out / "branch_summary.json").read_text())
        assert summary["origin"]["kind"] == "eigenvalue_bifurcation"
        assert summary["termination"] == "lambda_cap"
        assert 0 < summary["lambda_star"] <= summary["origin"]["lambda"] * (1 + 1e-6)
        header = (out / "branch.csv").read_text().splitlines()[1]
        assert header == "lambda,d,sup_u,sup_du,k,nu,fold"

    def test_limits_decay_mode(self, tmp_path):
        doc = {
            "dimension": 3,
            "outer_radius": 1.0,
            "inner_radius": 0.1,
            "family": "power_sublinear",
            "params": {"q": 0.5},
        }
        prob = write_problem(tmp_path, doc)
        out = tmp_path / "out"
        code = main(
            ["limits", "--problem", str(prob), "--out", str(out), "--mode", "decay",
             "--n-max", "4", "--lam", "1.0"]
        )
        assert code == EXIT_OK
        rows = (out / "limits_decay.csv").read_text().splitlines()[2:]
        assert len(rows) == 8  # n = 1..4, both signs
        assert all(row.split(",")[2] == "1" for row in rows)  # all found

    def test_limits_shift_mode(self, tmp_path):
        prob = write_problem(tmp_path, BALL_CUBIC)
        out = tmp_path / "out"
        code = main(
            ["limits", "--problem", str(prob), "--out", str(out), "--mode", "shift",
             "--k", "1", "--ladder", "4,16"]
        )
        assert code == EXIT_OK
        rows = (out / "limits_shift.csv").read_text().splitlines()[2:]
        lams = [float(r.split(",")[1]) for r in rows]
        assert lams[1] < lams[0]

    def test_verify_passes(self):
        assert main(["verify"]) == EXIT_OK


class TestExitCodes:
    def test_missing_problem_file(self, tmp_path):
        assert main(["spectrum", "--problem", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == EXIT_USAGE

    def test_hypothesis_violation(self, tmp_path):
        doc = {
            "dimension": 3,
            "outer_radius": 1.0,
            "alpha": 1.9,
            "family": "custom_table",
            "params": {"s": [0.0, 1.0, 2.0], "f": [0.0, -1.0, -2.0], "odd": True},
        }
        prob = write_problem(tmp_path, doc)
        code = main(["solve", "--problem", str(prob), "--out", str(tmp_path / "o"), "--lam", "5.0"])
        assert code == EXIT_HYPOTHESIS

    def test_numeric_failure(self, tmp_path):
        # spectrum on a problem with no usable weight: hypothesis violation
        doc = {
            "dimension": 3,
            "outer_radius": 1.0,
            "family": "power_superlinear",
            "params": {"q": 2.0},
        }
        prob = write_problem(tmp_path, doc)
        code = main(["spectrum", "--problem", str(prob), "--out", str(tmp_path / "o")])
        assert code == EXIT_HYPOTHESIS

    def test_solve_without_lambda(self, tmp_path):
        prob = write_problem(tmp_path, BALL_CUBIC)
        code = main(["solve", "--problem", str(prob), "--out", str(tmp_path / "o")])
        assert code == EXIT_NUMERIC
