from __future__ import annotations

from typer.testing import CliRunner

from irsuavlab.cli.app import app

from tests.configs import flat_text, tiny_config

runner = CliRunner()


def _config(tmp_path, **overrides):
    p = tmp_path / "tiny.cfg"
    p.write_text(flat_text(tiny_config(**overrides)))
    return str(p)


def test_version_and_presets():
    r = runner.invoke(app, ["--version"])
    assert r.exit_code == 0
    assert r.stdout.startswith("irsuavlab ")

    r2 = runner.invoke(app, ["presets"])
    assert r2.exit_code == 0
    assert "desk.yaml" in r2.stdout and "reference_6irs.yaml" in r2.stdout


def test_validate(tmp_path):
    r = runner.invoke(app, ["validate", "desk"])
    assert r.exit_code == 0, r.output

    bad = tmp_path / "bad.cfg"
    bad.write_text("K = 3\nno equals here\n")
    r2 = runner.invoke(app, ["validate", str(bad)])
    assert r2.exit_code == 1

    noisy = tmp_path / "noisy.cfg"
    noisy.write_text("epsilon = 0.1\n")
    r3 = runner.invoke(app, ["validate", str(noisy)])
    assert r3.exit_code == 0
    assert "issue(s)" in r3.stdout
    assert runner.invoke(app, ["validate", str(noisy), "--strict"]).exit_code == 1


def test_train_eval_export_compare(tmp_path):
    cfg = _config(tmp_path)
    run = tmp_path / "run"

    r = runner.invoke(app, ["train", "-c", cfg, "--out", str(run), "--log-level", "WARNING"])
    assert r.exit_code == 0, r.output
    assert "dqn: 2 episodes" in r.stdout
    checkpoint = run / "checkpoints" / "final"
    assert checkpoint.is_dir()

    r2 = runner.invoke(app, ["eval", "-c", cfg, "--checkpoint", str(checkpoint), "--out", str(tmp_path / "ev")])
    assert r2.exit_code == 0, r2.output
    assert "episode=1 ts=" in r2.stdout

    r3 = runner.invoke(app, ["export", "--run", str(run)])
    assert r3.exit_code == 0, r3.output
    assert (run / "curves" / "reward_vs_episode.tsv").is_file()

    out = tmp_path / "cmp"
    r4 = runner.invoke(app, ["compare", "-c", cfg, "--dqn", str(checkpoint), "--out", str(out), "--seed", "1", "--seed", "2"])
    assert r4.exit_code == 0, r4.output
    lines = (out / "comparison.tsv").read_text().splitlines()
    assert lines[0].split("\t")[0] == "algo"
    # greedy, random, dqn for two seeds each
    assert len(lines) == 1 + 3 * 2
    assert (out / "dqn" / "seed_2" / "eval_episodes.csv").is_file()


def test_train_overrides(tmp_path):
    cfg = _config(tmp_path)
    r = runner.invoke(
        app, ["train", "-c", cfg, "--algo", "greedy", "--episodes", "1", "--seed", "5", "--out", str(tmp_path / "g")]
    )
    assert r.exit_code == 0, r.output
    assert "greedy: 1 episodes" in r.stdout


def test_errors_exit_non_zero(tmp_path):
    cfg = _config(tmp_path)
    run = tmp_path / "run"
    assert runner.invoke(app, ["train", "-c", cfg, "--out", str(run)]).exit_code == 0

    mismatched = runner.invoke(
        app, ["eval", "-c", cfg, "--algo", "ddpg", "--checkpoint", str(run / "checkpoints" / "final"), "--out", str(tmp_path / "x")]
    )
    assert mismatched.exit_code == 1

    assert runner.invoke(app, ["train", "-c", cfg, "--algo", "ppo", "--out", str(tmp_path / "y")]).exit_code == 1
    assert runner.invoke(app, ["export", "--run", str(tmp_path / "empty")]).exit_code == 1


def test_exit_codes_separate_config_and_runtime_failures(tmp_path):
    missing = runner.invoke(app, ["train", "-c", str(tmp_path / "nope.yaml"), "--out", str(tmp_path / "a")])
    assert missing.exit_code == 1
    assert "config:" in missing.output
    assert runner.invoke(app, ["validate", "no-such-preset"]).exit_code == 1
    assert runner.invoke(app, ["eval", "-c", "no-such-preset", "--out", str(tmp_path / "b")]).exit_code == 1

    blocker = tmp_path / "occupied"
    blocker.write_text("not a directory\n")
    unwritable = runner.invoke(app, ["train", "-c", _config(tmp_path), "--out", str(blocker / "run")])
    assert unwritable.exit_code == 2
    assert "error:" in unwritable.output
