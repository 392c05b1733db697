"""CLI contract: flags, exit codes, echo headers, reproducibility."""

import json
import math

import pytest

from lpwalk.cli import build_parser, dispatch


def run_cli(capsys, *argv) -> tuple[int, str, str]:
    code = dispatch(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def body_lines(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if not ln.startswith("#")]


class TestScalarCommands:
    def test_mp_value(self, capsys):
        code, out, _ = run_cli(capsys, "mp", "--p", "2")
        assert code == 0
        assert abs(float(out.strip()) - 1.0) <= 1e-12

    def test_mp_sqrt_two_over_pi(self, capsys):
        code, out, _ = run_cli(capsys, "mp", "--p", "1")
        assert code == 0
        assert float(out.strip()) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-12)

    def test_mp_rejects_negative(self, capsys):
        code, _, err = run_cli(capsys, "mp", "--p", "-1")
        assert code == 2 and "invalid configuration" in err

    def test_gh_two_point_example(self, capsys):
        code, out, _ = run_cli(capsys, "gh", "--two-point-example", "--p", "3", "--a", "0.25")
        assert code == 0
        assert abs(float(out.strip())) <= 1e-12

    def test_gh_requires_inputs(self, capsys):
        code, _, err = run_cli(capsys, "gh")
        assert code == 2 and "two-point-example" in err

    def test_gh_from_csv_files(self, capsys, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        a.write_text("1\n0\n")
        b.write_text("2\n0\n0.8,0\n")
        code, out, _ = run_cli(capsys, "gh", "--space-a", str(a), "--space-b", str(b))
        assert code == 0
        assert float(out.strip()) == pytest.approx(0.4, abs=1e-12)


class TestExitCodes:
    def test_converge_m_above_n_is_config_error(self, capsys):
        code, _, err = run_cli(
            capsys, "converge", "--points", "50x10", "--m", "60", "--replicates", "1"
        )
        assert code == 2
        assert "m" in err and "n" in err

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            dispatch(["mp", "--nope"])
        assert exc.value.code == 2

    def test_resource_refusal_exits_3(self, capsys, monkeypatch):
        monkeypatch.setenv("LPWALK_MEM_CAP", "10")
        code, _, err = run_cli(capsys, "simulate", "--n", "100", "--d", "50", "--m", "10")
        assert code == 3 and "resource limit" in err

    def test_bad_law_exits_2(self, capsys):
        code, _, err = run_cli(capsys, "simulate", "--law", "cauchy")
        assert code == 2


class TestReports:
    def test_simulate_echoes_config_and_zero_start(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--n", "8", "--d", "2", "--m", "4", "--seed", "5"
        )
        assert code == 0
        echo = [ln for ln in out.splitlines() if ln.startswith("#")]
        assert any(ln.startswith("# law=") for ln in echo)
        assert any(ln.startswith("# m_resolved=4") for ln in echo)
        body = body_lines(out)
        assert body[0] == "i,t,coord_index,value"
        assert body[1] == "0,0,0,0"

    def test_decompose_csv_and_json(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "decompose", "--n", "10", "--d", "3", "--seed", "2")
        assert code == 0
        assert body_lines(out)[0] == "j,T,Q"
        out_path = tmp_path / "trace.json"
        code, _, _ = run_cli(
            capsys, "decompose", "--n", "10", "--d", "3", "--seed", "2",
            "--format", "json", "--out", str(out_path),
        )
        assert code == 0
        doc = json.loads(out_path.read_text())
        assert len(doc["T"]) == 11
        assert doc["T"][0] == 0.0 and doc["Q"][0] == 0.0

    def test_moments_table(self, capsys):
        code, out, _ = run_cli(
            capsys, "moments", "--law", "rademacher", "--p", "2",
            "--points", "50,100", "--replicates", "200", "--seed", "3",
        )
        assert code == 0
        body = body_lines(out)
        assert body[0] == "n,estimate,stderr,limit"
        assert len(body) == 3

    def test_bimoments_table(self, capsys):
        code, out, _ = run_cli(
            capsys, "bimoments", "--law", "rademacher", "--p", "2", "--rho", "0.5",
            "--points", "100", "--replicates", "200", "--seed", "3",
        )
        assert code == 0
        row = body_lines(out)[1].split(",")
        assert float(row[3]) == pytest.approx(1.5, abs=1e-9)

    def test_martingale_json(self, capsys):
        code, out, _ = run_cli(
            capsys, "martingale", "--n", "50", "--d", "5", "--replicates", "500",
            "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["t_violation_fraction"] == 0.0


class TestConvergeDeterminism:
    def test_same_seed_different_threads_byte_identical(self, capsys, tmp_path):
        paths = []
        for threads in ("1", "2"):
            out = tmp_path / f"report_{threads}.csv"
            code, _, _ = run_cli(
                capsys, "converge", "--points", "40x10,80x20", "--p-list", "1,2",
                "--replicates", "2", "--seed", "11", "--m", "8",
                "--threads", threads, "--out", str(out),
            )
            assert code == 0
            paths.append(out)
        bodies = [body_lines(p.read_text()) for p in paths]
        assert bodies[0] == bodies[1]
        agg = [body_lines((tmp_path / f"report_{t}_aggregates.csv").read_text()) for t in ("1", "2")]
        assert agg[0] == agg[1]

    def test_rerun_is_byte_identical(self, capsys, tmp_path):
        outs = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.csv"
            run_cli(
                capsys, "converge", "--points", "40x10", "--p", "1.5",
                "--replicates", "3", "--seed", "7", "--out", str(out),
            )
            outs.append(body_lines(out.read_text()))
        assert outs[0] == outs[1]

    def test_plan_file_round_trip(self, capsys, tmp_path):
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(json.dumps({
            "points": [[30, 10]],
            "p": [2.0],
            "law": "uniform",
            "replicates": 2,
            "master_seed": 4,
            "m": 6,
            "statistics": ["sup_difference"],
        }))
        out = tmp_path / "r.csv"
        code, _, _ = run_cli(capsys, "converge", "--plan", str(plan_path), "--out", str(out))
        assert code == 0
        body = body_lines(out.read_text())
        assert len(body) == 1 + 2  # header + 2 replicate rows


class TestHelpRoundTrip:
    def test_every_flag_listed_in_help(self, capsys):
        parser = build_parser()
        sub_actions = next(
            a for a in parser._actions if isinstance(a, type(parser._subparsers._group_actions[0]))
        )
        for name, sub in sub_actions.choices.items():
            with pytest.raises(SystemExit) as exc:
                sub.parse_args(["--help"])
            assert exc.value.code == 0
            help_text = capsys.readouterr().out
            for action in sub._actions:
                for opt in action.option_strings:
                    assert opt in help_text, (name, opt)
