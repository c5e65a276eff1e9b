import json

import pytest

from paretonav.cli import main

TOY_CONFIG = {
    "objectives": [
        {"name": "score", "direction": "maximize"},
        {"name": "co2", "direction": "minimize"},
    ]
}


@pytest.fixture
def toy_csv(fixtures_dir):
    return str(fixtures_dir / "toy_leaderboard.csv")


@pytest.fixture
def toy_cfg(fixtures_dir):
    return str(fixtures_dir / "toy_leaderboard_config.json")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGenSynthetic:
    def test_reproducible_bytes(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["gen-synthetic", "--n", "60", "--seed", "4", "--out", str(a)]) == 0
        assert main(["gen-synthetic", "--n", "60", "--seed", "4", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_bundled_fixture_matches_default_generator(self, tmp_path, fixtures_dir):
        out = tmp_path / "regen.csv"
        assert main(["gen-synthetic", "--out", str(out)]) == 0
        assert out.read_bytes() == (fixtures_dir / "synthetic_front_240.csv").read_bytes()

    def test_stdout_structured(self, capsys):
        code, out, _ = run_cli(capsys, "gen-synthetic", "--n", "3", "--seed", "1")
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "population" and len(doc["model_ids"]) == 3


class TestSelect:
    def test_structured_selection(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys,
            "select",
            "--input", toy_csv,
            "--config", toy_cfg,
            "--p", "inf",
            "--weights", "0.5,0.5",
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "selection"
        assert doc["model_id"] == "elnath-7b"
        assert doc["top_percent"] == [40.0, 40.0]

    def test_table_mode(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys, "select", "--input", toy_csv, "--config", toy_cfg, "--alpha", "0.5"
        )
        assert code == 0
        assert "selected:" in out and "top-%" in out

    def test_constraint_flag(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys,
            "select",
            "--input", toy_csv,
            "--config", toy_cfg,
            "--p", "inf",
            "--constraint", "co2<=0.45",
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["constraints"] == ["co2<=0.45"]
        assert doc["raw_values"][1] <= 0.45

    def test_baseline_method_saw(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys,
            "select",
            "--input", toy_csv,
            "--config", toy_cfg,
            "--method", "saw",
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "baseline_selection" and doc["method"] == "saw"

    def test_infeasible_exit_code_3(self, capsys, toy_csv, toy_cfg):
        code, _, err = run_cli(
            capsys,
            "select",
            "--input", toy_csv,
            "--config", toy_cfg,
            "--constraint", "co2<=0.0001",
        )
        assert code == 3
        assert "infeasible" in err

    def test_missing_column_exit_code_2(self, capsys, tmp_path, toy_cfg):
        bad = tmp_path / "bad.csv"
        bad.write_text("model,score\nm1,1\n")
        code, _, err = run_cli(
            capsys, "select", "--input", str(bad), "--config", toy_cfg
        )
        assert code == 2
        assert "co2" in err

    def test_usage_error_exit_code_1(self, capsys, toy_csv):
        code, _, err = run_cli(capsys, "select", "--input", toy_csv, "--p", "0.5")
        assert code == 1

    def test_unknown_flag_exit_code_1(self, capsys):
        code, _, _ = run_cli(capsys, "select", "--frobnicate")
        assert code == 1

    def test_missing_input_exit_code_1(self, capsys):
        code, _, err = run_cli(capsys, "select")
        assert code == 1
        assert "--input" in err


class TestOtherCommands:
    def test_front(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys, "front", "--input", toy_csv, "--config", toy_cfg,
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        # fomal-4b and jabbah-tiny are dominated in the toy fixture
        assert "fomal-4b" not in doc["model_ids"]
        assert "jabbah-tiny" not in doc["model_ids"]
        assert len(doc["model_ids"]) == 8

    def test_rank_table(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys, "rank", "--input", toy_csv, "--config", toy_cfg,
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "rank_table"
        assert "rank-pinf" in doc["labels"] and "delta-avg" in doc["labels"]

    def test_normalize_ccdf(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys, "normalize", "--input", toy_csv, "--config", toy_cfg,
            "--method", "ccdf", "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["method"] == "ccdf"
        assert max(max(row) for row in doc["values"]) == 1.0

    def test_normalize_rejects_score_methods(self, capsys, toy_csv, toy_cfg):
        code, _, err = run_cli(
            capsys, "normalize", "--input", toy_csv, "--config", toy_cfg,
            "--method", "saw",
        )
        assert code == 1

    def test_sweep_grid(self, capsys, toy_csv, toy_cfg):
        code, out, _ = run_cli(
            capsys, "sweep", "--input", toy_csv, "--config", toy_cfg,
            "--p", "inf", "--grid", "2", "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "sweep"
        assert 1 <= len(doc["entries"]) <= 2

    def test_objective_flags_without_config(self, capsys, toy_csv):
        code, out, _ = run_cli(
            capsys,
            "select",
            "--input", toy_csv,
            "--objective", "score:maximize",
            "--objective", "co2:minimize",
            "--p", "inf",
            "--weights", "0.5,0.5",
            "--format", "structured",
        )
        assert code == 0
        assert json.loads(out)["model_id"] == "elnath-7b"

    def test_drop_incomplete_flag(self, capsys, tmp_path, toy_cfg):
        path = tmp_path / "holes.csv"
        path.write_text("model,score,co2\nm1,5,n/a\nm2,6,0.3\n")
        code, out, _ = run_cli(
            capsys,
            "select",
            "--input", str(path),
            "--config", toy_cfg,
            "--drop-incomplete",
            "--format", "structured",
        )
        assert code == 0
        assert json.loads(out)["model_id"] == "m2"


class TestOfflineReproduction:
    """The bundled fixtures alone reproduce the headline numbers."""

    def test_equal_preference_lands_in_flat_stretch(self, capsys, fixtures_dir):
        code, out, _ = run_cli(
            capsys,
            "select",
            "--input", str(fixtures_dir / "synthetic_front_240.csv"),
            "--p", "inf",
            "--alpha", "0.5",
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert 0.075 <= doc["raw_values"][0] <= 0.11

    def test_sweep_covers_unit_interval(self, capsys, fixtures_dir):
        code, out, _ = run_cli(
            capsys,
            "sweep",
            "--input", str(fixtures_dir / "synthetic_front_240.csv"),
            "--p", "inf",
            "--grid", "50",
            "--format", "structured",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["entries"][0]["alpha_lo"] == 0.0
        assert doc["entries"][-1]["alpha_hi"] == 1.0
