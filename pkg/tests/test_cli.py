"""Command-line interface: gen-synthetic, run, compare."""

import json

import pytest

from stablepred.cli import main
from stablepred.data import load_dataset, load_feature_graph
from stablepred.experiment import StabilityReport


@pytest.fixture()
def spec_file(tmp_path):
    payload = {
        "n_samples": 40,
        "n_groups": 3,
        "group_size": 3,
        "within_group_noise": 0.3,
        "n_informative_groups": 1,
        "true_weight_scale": 1.5,
        "label_noise": 0.0,
        "seed": 21,
    }
    path = tmp_path / "spec.json"
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def run_config(tmp_path, cohort_dir):
    return {
        "train_path": str(cohort_dir / "train.csv"),
        "validation_path": str(cohort_dir / "validation.csv"),
        "model": "lasso",
        "hyperparams": {"alpha": 0.02},
        "optimizer": {"max_iters": 100, "learning_rate": 0.05, "rel_tol": 1e-8, "seed": 2},
        "n_bootstraps": 3,
        "k_list": [3],
        "top_for_snr": 4,
        "output_dir": str(tmp_path / "out"),
    }


class TestGenSynthetic:
    def test_writes_cohort_bundle(self, tmp_path, spec_file, capsys):
        code = main(["gen-synthetic", "--spec", str(spec_file), "--out", str(tmp_path / "coh")])
        assert code == 0
        train = load_dataset(tmp_path / "coh" / "train.csv", label_column="label")
        assert train.n_samples == 40 and train.n_features == 9
        augment = load_dataset(tmp_path / "coh" / "augment.csv")
        assert augment.y is None
        graph = load_feature_graph(tmp_path / "coh" / "graph.tsv")
        assert len(graph.edges) == 9  # 3 groups x C(3,2)
        assert "train.csv" in capsys.readouterr().out

    def test_missing_spec_file_fails(self, tmp_path, capsys):
        code = main(["gen-synthetic", "--spec", str(tmp_path / "none.json"), "--out", str(tmp_path)])
        assert code == 1
        assert "error:" in capsys.readouterr().err


class TestRun:
    def test_end_to_end(self, tmp_path, spec_file, capsys):
        cohorts = tmp_path / "coh"
        assert main(["gen-synthetic", "--spec", str(spec_file), "--out", str(cohorts)]) == 0
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(run_config(tmp_path, cohorts)), encoding="utf-8")
        code = main(["run", "--config", str(cfg_path)])
        assert code == 0
        report = StabilityReport.from_json(tmp_path / "out" / "report.json")
        assert report.model == "lasso"
        assert (tmp_path / "out" / "ci_curve.csv").exists()

    def test_bad_config_exits_nonzero(self, tmp_path, spec_file, capsys):
        cohorts = tmp_path / "coh"
        main(["gen-synthetic", "--spec", str(spec_file), "--out", str(cohorts)])
        payload = run_config(tmp_path, cohorts)
        payload["hyperparams"]["lambda_ae"] = 5.0  # inapplicable for lasso
        cfg_path = tmp_path / "cfg.json"
        cfg_path.write_text(json.dumps(payload), encoding="utf-8")
        assert main(["run", "--config", str(cfg_path)]) == 1
        assert "lambda_ae" in capsys.readouterr().err


class TestCompare:
    def test_two_model_comparison(self, tmp_path, spec_file, capsys):
        cohorts = tmp_path / "coh"
        main(["gen-synthetic", "--spec", str(spec_file), "--out", str(cohorts)])
        base = run_config(tmp_path, cohorts)
        cfg_a = tmp_path / "a.json"
        cfg_a.write_text(json.dumps(base), encoding="utf-8")
        other = dict(base)
        other["model"] = "elastic-net"
        other["hyperparams"] = {"alpha": 0.02, "lambda_en": 0.5}
        cfg_b = tmp_path / "b.json"
        cfg_b.write_text(json.dumps(other), encoding="utf-8")
        code = main([
            "compare", "--configs", str(cfg_a), str(cfg_b), "--out", str(tmp_path / "cmp"),
        ])
        assert code == 0
        lines = (tmp_path / "cmp" / "comparison.csv").read_text().strip().splitlines()
        assert lines[0].startswith("model,ci_k3,auc")
        assert len(lines) == 3
