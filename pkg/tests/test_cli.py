"""End-to-end command line behavior, run in process."""

import json

import pytest

from cstree.cli import main
from cstree.tree import deserialize


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTrain:
    def test_fixed_costs_single_exponent(self, capsys, sample_path, costs_file_path, tmp_path):
        tree_out = tmp_path / "tree.json"
        report_out = tmp_path / "report.json"
        code, out, err = run(
            capsys,
            "train",
            "--data", str(sample_path),
            "--cost-file", str(costs_file_path),
            "--lambda", "-2",
            "--tree-out", str(tree_out),
            "--out-json", str(report_out),
        )
        assert code == 0 and err == ""
        assert out.startswith("class 0 = 0\nclass 1 = 1\n")
        assert "lambda -2.0" in out
        assert "training average cost" in out
        assert "testing average cost" not in out  # full data by default

        tree = deserialize(tree_out.read_text(encoding="utf-8"))
        assert tree.lambda_used == -2.0
        assert tree.tc_used.costs == (4.0, 1.0, 4.0, 1.0, 7.0, 7.0, 8.0, 9.0)

        report = json.loads(report_out.read_text(encoding="utf-8"))
        assert report["lambda"] == -2.0
        assert report["nodes"] == tree.node_count()
        assert report["test_costs"] == [4, 1, 4, 1, 7, 7, 8, 9]
        assert report["train"]["count"] == 24
        assert "test" not in report
        assert len(report["trace"]) > 0  # post-pruning is the default

    def test_defaults_to_cost_blind_exponent(self, capsys, sample_path, costs_file_path):
        code, out, _ = run(
            capsys, "train", "--data", str(sample_path), "--cost-file", str(costs_file_path)
        )
        assert code == 0
        assert "lambda 0.0" in out

    def test_holdout_fraction_reports_test_side(
        self, capsys, sample_path, costs_file_path, tmp_path
    ):
        report_out = tmp_path / "report.json"
        code, out, _ = run(
            capsys,
            "train",
            "--data", str(sample_path),
            "--cost-file", str(costs_file_path),
            "--train-fraction", "0.5",
            "--seed", "4",
            "--out-json", str(report_out),
        )
        assert code == 0
        assert "testing average cost" in out
        report = json.loads(report_out.read_text(encoding="utf-8"))
        assert report["train"]["count"] == 12
        assert report["test"]["count"] == 12

    def test_no_prune_leaves_no_trace(self, capsys, sample_path, costs_file_path, tmp_path):
        report_out = tmp_path / "report.json"
        code, _, _ = run(
            capsys,
            "train",
            "--data", str(sample_path),
            "--cost-file", str(costs_file_path),
            "--no-prune",
            "--out-json", str(report_out),
        )
        assert code == 0
        assert json.loads(report_out.read_text(encoding="utf-8"))["trace"] == []

    def test_same_seed_same_drawn_costs(self, capsys, sample_path):
        code_a, out_a, _ = run(capsys, "train", "--data", str(sample_path), "--seed", "9")
        code_b, out_b, _ = run(capsys, "train", "--data", str(sample_path), "--seed", "9")
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_inline_two_class_penalties(self, capsys, sample_path):
        code, _, _ = run(
            capsys,
            "train",
            "--data", str(sample_path),
            "--mc-01", "100",
            "--mc-10", "100",
        )
        assert code == 0


class TestPrune:
    def test_fixture_walkthrough(
        self, capsys, sample_path, fixture_tree_path, costs_file_path, tmp_path
    ):
        trace_csv = tmp_path / "trace.csv"
        report_out = tmp_path / "prune.json"
        pruned_out = tmp_path / "pruned.json"
        code, out, err = run(
            capsys,
            "prune",
            "--fixture", str(fixture_tree_path),
            "--data", str(sample_path),
            "--cost-file", str(costs_file_path),
            "--out-csv", str(trace_csv),
            "--out-json", str(report_out),
            "--tree-out", str(pruned_out),
        )
        assert code == 0 and err == ""
        lines = out.splitlines()
        assert "initial average cost 8.375 over 24 rows" in lines
        assert "step 1: attribute 1 keep 8.0 vs prune 24.666666666666668 -> keep" in lines
        assert "step 2: attribute 4 keep 8.0 vs prune 7.666666666666667 -> prune" in lines
        assert "step 4: attribute 1 keep 8.375 vs prune 18.75 -> keep" in lines
        assert "pruned average cost 8.166666666666666; nodes 5" in lines
        assert out.count("-> prune") == 1

        trace_lines = trace_csv.read_text(encoding="utf-8").splitlines()
        assert len(trace_lines) == 5
        assert [line.split(",")[-1] for line in trace_lines[1:]] == [
            "false", "true", "false", "false",
        ]

        report = json.loads(report_out.read_text(encoding="utf-8"))
        assert report["initial"]["average"] == 8.375
        assert report["pruned"]["average"] == pytest.approx(196 / 24, rel=1e-12)
        assert report["trace"][1]["pruned"] is True

        pruned = deserialize(pruned_out.read_text(encoding="utf-8"))
        assert pruned.node_count() == 5

    def test_costs_default_to_those_stored_in_the_tree(
        self, capsys, sample_path, fixture_tree_path
    ):
        code, out, _ = run(
            capsys,
            "prune",
            "--fixture", str(fixture_tree_path),
            "--data", str(sample_path),
        )
        assert code == 0
        assert "initial average cost 8.375 over 24 rows" in out


class TestSweep:
    def test_competition_outputs(self, capsys, sample_path, costs_file_path, tmp_path):
        rows_csv = tmp_path / "rows.csv"
        summary_json = tmp_path / "summary.json"
        winner_json = tmp_path / "winner.json"
        code, out, err = run(
            capsys,
            "sweep",
            "--data", str(sample_path),
            "--cost-file", str(costs_file_path),
            "--lambda-start", "-1",
            "--lambda-end", "0",
            "--lambda-step", "0.5",
            "--prune", "both",
            "--seed", "3",
            "--out-csv", str(rows_csv),
            "--out-json", str(summary_json),
            "--tree-out", str(winner_json),
        )
        assert code == 0 and err == ""
        assert "winner (unpruned): lambda " in out
        assert "winner (pruned): lambda " in out

        lines = rows_csv.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 1 + 3 * 2

        summary = json.loads(summary_json.read_text(encoding="utf-8"))
        assert summary["grid"] == [-1.0, -0.5, 0.0]
        assert set(summary["winners"]) == {"unpruned", "pruned"}
        assert summary["winners"]["pruned"] in (-1.0, -0.5, 0.0)

        winner = deserialize(winner_json.read_text(encoding="utf-8"))
        assert winner.lambda_used == summary["winners"]["pruned"]

    def test_rerun_is_byte_identical(self, capsys, sample_path, costs_file_path, tmp_path):
        outputs = []
        for name in ("first", "second"):
            rows_csv = tmp_path / f"{name}.csv"
            code, _, _ = run(
                capsys,
                "sweep",
                "--data", str(sample_path),
                "--cost-file", str(costs_file_path),
                "--lambda-start", "-1",
                "--lambda-end", "0",
                "--lambda-step", "0.5",
                "--seed", "3",
                "--out-csv", str(rows_csv),
            )
            assert code == 0
            outputs.append(rows_csv.read_bytes())
        assert outputs[0] == outputs[1]


class TestExperiment:
    def test_small_run_reports(self, capsys, sample_path, tmp_path):
        rows_csv = tmp_path / "rows.csv"
        summary_json = tmp_path / "summary.json"
        code, out, err = run(
            capsys,
            "experiment",
            "--data", str(sample_path),
            "--trials", "2",
            "--lambda-start", "-1",
            "--lambda-end", "0",
            "--lambda-step", "1.0",
            "--seed", "5",
            "--out-csv", str(rows_csv),
            "--out-json", str(summary_json),
        )
        assert code == 0 and err == ""
        assert "trials 2  rows 8" in out
        assert "average reduction ratio" in out
        assert "winner co-minimal on test in" in out

        lines = rows_csv.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 9
        summary = json.loads(summary_json.read_text(encoding="utf-8"))
        assert summary["trials"] == 2
        assert set(summary["modes"]) == {"unpruned", "pruned"}

    def test_rerun_is_byte_identical(self, capsys, sample_path, tmp_path):
        blobs = []
        for name in ("first", "second"):
            rows_csv = tmp_path / f"{name}.csv"
            summary_json = tmp_path / f"{name}.json"
            code, _, _ = run(
                capsys,
                "experiment",
                "--data", str(sample_path),
                "--trials", "2",
                "--lambda-start", "-1",
                "--lambda-end", "0",
                "--lambda-step", "1.0",
                "--seed", "5",
                "--out-csv", str(rows_csv),
                "--out-json", str(summary_json),
            )
            assert code == 0
            blobs.append((rows_csv.read_bytes(), summary_json.read_bytes()))
        assert blobs[0] == blobs[1]


class TestExitCodes:
    def test_missing_data_file(self, capsys):
        code, _, err = run(capsys, "train", "--data", "/nonexistent/rows.csv")
        assert code == 1
        assert err.startswith("error:")

    def test_lopsided_penalty_flags(self, capsys, sample_path):
        code, _, err = run(
            capsys, "train", "--data", str(sample_path), "--mc-01", "100"
        )
        assert code == 1
        assert "--mc-01 and --mc-10 must be given together" in err

    def test_unknown_flag(self, capsys, sample_path):
        code, _, err = run(capsys, "train", "--data", str(sample_path), "--bogus")
        assert code == 1
        assert "error:" in err

    def test_bad_train_fraction(self, capsys, sample_path):
        code, _, err = run(
            capsys, "sweep", "--data", str(sample_path), "--train-fraction", "1.5"
        )
        assert code == 1
        assert "train_fraction" in err

    def test_bad_distribution_choice(self, capsys, sample_path):
        code, _, _ = run(
            capsys, "train", "--data", str(sample_path), "--cost-dist", "cauchy"
        )
        assert code == 1

    def test_missing_fixture_file(self, capsys, sample_path):
        code, _, err = run(
            capsys,
            "prune",
            "--fixture", "/nonexistent/tree.json",
            "--data", str(sample_path),
        )
        assert code == 1
        assert "error:" in err

    def test_matrix_file_without_matrix(self, capsys, sample_path, tmp_path):
        costs_only = tmp_path / "costs_only.json"
        costs_only.write_text(json.dumps({"test_costs": [1] * 8}), encoding="utf-8")
        code, _, err = run(
            capsys,
            "train",
            "--data", str(sample_path),
            "--mc-file", str(costs_only),
        )
        assert code == 1
        assert "no mc_matrix key" in err

    def test_help_exits_cleanly(self, capsys):
        code, out, _ = run(capsys, "--help")
        assert code == 0
        assert "train" in out and "experiment" in out

    def test_missing_subcommand(self, capsys):
        code, _, err = run(capsys)
        assert code == 1
        assert "error:" in err

    def test_unexpected_failure_is_distinguished(self, capsys, sample_path, monkeypatch):
        import cstree.cli as cli_module

        def boom(config):
            raise RuntimeError("wires crossed")

        monkeypatch.setattr(cli_module, "run_experiment", boom)
        code, _, err = run(capsys, "experiment", "--data", str(sample_path), "--trials", "1")
        assert code == 2
        assert "unexpected failure" in err
