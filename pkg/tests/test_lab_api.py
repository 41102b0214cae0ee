from __future__ import annotations

import pytest

import irsuavlab
from irsuavlab import Lab, LabStatus, api
from irsuavlab.exceptions import ConfigError
from irsuavlab.persistence.metrics import read_metrics
from irsuavlab.presets import resolve

from tests.configs import tiny_config


def test_public_exports():
    for name in ("Lab", "LabStatus", "ExperimentConfig", "load_config", "train", "evaluate", "export", "compare", "validate"):
        assert hasattr(irsuavlab, name)
    assert isinstance(irsuavlab.__version__, str)


def test_status_before_training(tmp_path):
    with Lab(tiny_config(), out_dir=tmp_path) as lab:
        st = lab.status
    assert isinstance(st, LabStatus)
    assert (st.episodes_done, st.global_step, st.learn_steps) == (0, 0, 0)
    assert st.last_reward is None and st.mean_reward is None and st.eval_reward is None


def test_api_train_applies_overrides(tmp_path):
    seen = []
    lab, status = api.train(tiny_config(), out_dir=tmp_path, on_episode=seen.append, algo="greedy", N_eps=3, seed=None)
    assert lab.cfg.algo == "greedy" and lab.cfg.seed == 3
    assert status.episodes_done == 3
    assert [r["episode"] for r in seen] == [1, 2, 3]
    assert status.mean_reward == pytest.approx(sum(r["accumulated_reward"] for r in seen[-2:]) / 2)


def test_api_evaluate_writes_eval_csvs(tmp_path):
    records = api.evaluate(tiny_config(algo="random"), out_dir=tmp_path, episodes=2)
    assert [r["episode"] for r in records] == [1, 2]
    assert len(read_metrics(tmp_path / "eval_episodes.csv")) == 2
    assert (tmp_path / "config.yaml").is_file()


def test_api_compare_baselines_only(tmp_path):
    rows = api.compare(tiny_config(), out_dir=tmp_path, seeds=[4])
    assert [(r["algo"], r["seed"]) for r in rows] == [("greedy", 4), ("random", 4)]
    text = (tmp_path / "comparison.tsv").read_text().splitlines()
    assert text[0] == "\t".join(api.COMPARISON_FIELDS)
    assert text[1].startswith("greedy\t4\t")


def test_api_validate(tmp_path):
    assert api.validate(resolve("desk")) == []
    p = tmp_path / "bad.yaml"
    p.write_text("K: 0\n")
    with pytest.raises(ConfigError):
        api.validate(p)
