from __future__ import annotations

import pytest

from irsuavlab.config import load_config, parse_flat, save_config, validate_config_dict
from irsuavlab.config.loader import REFERENCE_IRS
from irsuavlab.exceptions import ConfigError
from irsuavlab.presets import PRESETS, path as preset_path, resolve

from tests.configs import flat_text, tiny_config


def test_empty_config_is_the_six_irs_reference():
    cfg = load_config({})
    assert (cfg.num_irs, cfg.num_ue, cfg.elements_per_irs) == (6, 6, 20)
    assert cfg.ref_path_loss == pytest.approx(1e-3)
    assert cfg.noise_power == pytest.approx(1e-10)
    assert cfg.max_energy == 20000.0
    assert (cfg.n_directions, cfg.n_distances, cfg.phase_levels) == (6, 3, 12)
    assert cfg.epsilon == 0.9 and cfg.gamma == 0.99
    assert len(cfg.irs_positions) == 6 and len(cfg.ue_positions) == 6


def test_empty_flat_file(tmp_path):
    p = tmp_path / "empty.cfg"
    p.write_text("# nothing here\n\n")
    assert load_config(p) == load_config({})


def test_unit_keys_are_converted(tmp_path):
    p = tmp_path / "units.cfg"
    p.write_text("alpha_db = -30\nsigma2_dbm = -70\nP_dbm = 10\n")
    cfg = load_config(p)
    assert cfg.ref_path_loss == pytest.approx(1e-3, rel=1e-12)
    assert cfg.noise_power == pytest.approx(1e-10, rel=1e-12)
    assert cfg.tx_power == pytest.approx(0.01, rel=1e-12)


def test_unit_key_and_linear_key_conflict():
    with pytest.raises(ConfigError):
        load_config({"alpha_db": -30, "alpha": 1e-3})


def test_invariant_violation_names_the_key():
    with pytest.raises(ConfigError) as exc:
        load_config({"K": 0})
    assert "K" in str(exc.value)


def test_flat_parse_error_carries_line_number(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("K = 3\nthis line has no equals sign\n")
    with pytest.raises(ConfigError) as exc:
        load_config(p)
    assert exc.value.line == 2


def test_validation_error_points_at_the_offending_line(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("M = 8\nN_eps = -1\n")
    with pytest.raises(ConfigError) as exc:
        load_config(p)
    assert exc.value.line == 2
    assert "N_eps" in str(exc.value)


def test_unknown_and_duplicate_keys_rejected(tmp_path):
    with pytest.raises(ConfigError) as exc:
        load_config({"warp_drive": 1})
    assert "warp_drive" in str(exc.value)
    p = tmp_path / "dup.cfg"
    p.write_text("K = 3\nK = 4\n")
    with pytest.raises(ConfigError) as exc2:
        load_config(p)
    assert exc2.value.line == 2


def test_flat_values_are_typed():
    doc, lines = parse_flat("M = 20\nd_over_lambda = 0.5\ndqn_hidden = [64, 64]  # widths\nalgo = ddpg\n")
    assert doc == {"M": 20, "d_over_lambda": 0.5, "dqn_hidden": [64, 64], "algo": "ddpg"}
    assert lines["dqn_hidden"] == 3


def test_descriptive_names_and_aliases_agree():
    assert load_config({"num_irs": 3}) == load_config({"K": 3})
    with pytest.raises(ConfigError):
        load_config({"num_irs": 3, "K": 3})


def test_counts_take_leading_packaged_positions():
    cfg = load_config({"K": 3, "N": 2})
    assert cfg.irs_positions == list(REFERENCE_IRS[:3])
    assert len(cfg.ue_positions) == 2


def test_position_count_mismatch():
    with pytest.raises(ConfigError):
        load_config({"K": 2, "irs_positions": [[100, 0, 100]]})


def test_start_outside_area_rejected():
    with pytest.raises(ConfigError):
        load_config({"X_U0": 700})


def test_env_interpolation(monkeypatch):
    doc = {"algo": "${IRSUAV_TEST_ALGO:greedy}", "out_dir": "${IRSUAV_TEST_OUT:runs/x}"}
    assert load_config(doc).algo == "greedy"
    monkeypatch.setenv("IRSUAV_TEST_ALGO", "ddpg")
    cfg = load_config(doc)
    assert cfg.algo == "ddpg"
    assert cfg.out_dir == "runs/x"


def test_phase_strategy_follows_algorithm():
    dqn = load_config({"algo": "dqn"})
    assert dqn.phase_strategy_for().kind == "quantized"
    assert dqn.phase_strategy_for().levels == 12
    assert dqn.phase_strategy_for("ddpg").kind == "continuous"
    assert load_config({"algo": "dqn", "phase_strategy": "random"}).phase_strategy_for().kind == "random"


def test_with_overrides_revalidates():
    cfg = load_config(tiny_config())
    ddpg = cfg.with_overrides(algo="ddpg", seed=9)
    assert (ddpg.algo, ddpg.seed, ddpg.num_irs) == ("ddpg", 9, 2)
    assert ddpg.with_overrides(K=1).irs_positions == [REFERENCE_IRS[0]]
    with pytest.raises(ConfigError):
        cfg.with_overrides(algo="ppo")


def test_save_then_load_round_trips(tmp_path):
    cfg = load_config(tiny_config(alpha_db=-25))
    save_config(cfg, tmp_path / "config.yaml")
    assert load_config(tmp_path / "config.yaml") == cfg


def test_flat_file_matches_dict(tmp_path):
    p = tmp_path / "tiny.cfg"
    p.write_text(flat_text(tiny_config()))
    assert load_config(p) == load_config(tiny_config())


@pytest.mark.parametrize("name", PRESETS)
def test_packaged_presets_load(name):
    cfg = load_config(preset_path(name))
    assert len(cfg.irs_positions) == cfg.num_irs


def test_desk_preset_values():
    cfg = load_config(resolve("desk"))
    assert (cfg.num_irs, cfg.num_ue, cfg.elements_per_irs) == (2, 3, 8)
    assert cfg.episodes == 300 and cfg.max_energy == 4000
    assert cfg.dqn_hidden == cfg.actor_hidden == cfg.critic_hidden == [64, 64]
    assert (cfg.noise_scale, cfg.noise_decay) == (0.3, 0.9998)
    # still a tenth of its start after 300 episodes of ~30 TSs
    assert cfg.noise_scale * cfg.noise_decay ** (300 * 30) > cfg.noise_scale / 10


def test_three_irs_preset():
    cfg = load_config(resolve("reference_3irs.yaml"))
    assert cfg.irs_positions == [(100.0, 0.0, 100.0), (300.0, 200.0, 100.0), (500.0, 0.0, 100.0)]


def test_lint_warnings():
    assert validate_config_dict({}) == []
    warnings = validate_config_dict(
        {"T": 50, "batch": 64, "m_max": 10, "N_I": 2, "X_U0": 0, "epsilon": 0.1, "checkpoint_every": 500, "N_eps": 10}
    )
    assert len(warnings) == 6
    assert any("epsilon" in w for w in warnings)
