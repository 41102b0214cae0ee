from __future__ import annotations

import math
from importlib.metadata import PackageNotFoundError, version as pkg_version
from pathlib import Path
from typing import Dict, List, Optional

import typer
from rich.console import Console
from rich.table import Table

from irsuavlab import api
from irsuavlab.config.loader import load_config
from irsuavlab.exceptions import CheckpointError, ConfigError, RunDirectoryError, TrainingAbortedError
from irsuavlab.logging import setup_logging
from irsuavlab.presets import PRESETS, path as packaged_preset_path, resolve
from irsuavlab.types import EpisodeRecord

app = typer.Typer(add_completion=False, help="irsuavlab: IRS-assisted UAV downlink trajectory learning.")
console = Console()


def _version_callback(value: bool) -> None:
    if not value:
        return
    try:
        v = pkg_version("irsuavlab")
    except PackageNotFoundError:
        from irsuavlab.version import __version__ as v
    typer.echo(f"irsuavlab {v}")
    raise typer.Exit()


@app.callback()
def _root(
    version: bool = typer.Option(
        False,
        "--version",
        "-V",
        help="Show version and exit",
        callback=_version_callback,
        is_eager=True,
    ),
):
    """irsuavlab: IRS-assisted UAV downlink trajectory learning."""
    return


def _load_env() -> None:
    """Load variables from a project .env so ${VAR} in configs resolves."""
    from dotenv import load_dotenv

    load_dotenv(dotenv_path=Path(".env"), override=False)


def _resolve_config(config: str) -> Path:
    """A filesystem path or the name of a packaged preset (``desk`` / ``desk.yaml``)."""
    p = Path(resolve(config))
    if not p.is_file():
        raise ConfigError(f"no such file or preset '{config}'; presets: {', '.join(PRESETS)}", key="config")
    return p


def _fail(exc: Exception, code: int) -> typer.Exit:
    typer.echo(f"error: {exc}", err=True)
    return typer.Exit(code=code)


def _setup(config_path: Path, log_level: Optional[str]) -> None:
    cfg = load_config(config_path)
    setup_logging(log_level or cfg.log_level, cfg.log_file, cfg.trace_file)


def _fmt(value: float) -> str:
    return "nan" if math.isnan(value) else f"{value:.4f}"


@app.command("train")
def train_cmd(
    config: str = typer.Option("reference_6irs", "--config", "-c", help="Config file or packaged preset name"),
    algo: Optional[str] = typer.Option(None, "--algo", help="dqn | ddpg | greedy | random"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the config seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Run directory (default: config out_dir)"),
    episodes: Optional[int] = typer.Option(None, "--episodes", help="Override N_eps"),
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override the config log level"),
) -> None:
    """Train an agent and write metrics and checkpoints into the run directory."""
    _load_env()
    try:
        path = _resolve_config(config)
        _setup(path, log_level)
        lab, status = api.train(path, out_dir=out, algo=algo, seed=seed, N_eps=episodes)
    except ConfigError as e:
        raise _fail(e, 1)
    except (TrainingAbortedError, CheckpointError, OSError) as e:
        raise _fail(e, 2)
    mean = "n/a" if status.mean_reward is None else _fmt(status.mean_reward)
    typer.echo(
        f"{status.algo}: {status.episodes_done} episodes, {status.global_step} TSs, "
        f"{status.learn_steps} learn steps, trailing mean reward {mean} -> {status.out_dir}"
    )


@app.command("eval")
def eval_cmd(
    config: str = typer.Option("reference_6irs", "--config", "-c", help="Config file or packaged preset name"),
    checkpoint: Optional[Path] = typer.Option(None, "--checkpoint", help="Agent checkpoint directory"),
    algo: Optional[str] = typer.Option(None, "--algo", help="Override the config algorithm"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override the config seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory (default: config out_dir)"),
    episodes: Optional[int] = typer.Option(None, "--episodes", help="Evaluation episodes"),
    log_level: Optional[str] = typer.Option(None, "--log-level"),
) -> None:
    """Run greedy-policy episodes (no exploration, no learning) and print their summaries."""
    _load_env()
    try:
        path = _resolve_config(config)
        _setup(path, log_level)
        records = api.evaluate(path, checkpoint=checkpoint, out_dir=out, episodes=episodes, algo=algo, seed=seed)
    except (ConfigError, CheckpointError) as e:
        raise _fail(e, 1)
    except TrainingAbortedError as e:
        raise _fail(e, 2)
    for rec in records:
        _echo_record(rec)


def _echo_record(rec: EpisodeRecord) -> None:
    typer.echo(
        f"episode={rec['episode']} ts={rec['ts_count']} reward={_fmt(rec['accumulated_reward'])} "
        f"fairness={_fmt(rec['final_fairness'])} sum_rate={rec['sum_rate']:.6g} "
        f"oob={rec['boundary_violations']}"
    )


@app.command("export")
def export_cmd(
    run: Path = typer.Option(..., "--run", help="Finished run directory"),
    window: Optional[int] = typer.Option(None, "--window", help="Trailing-mean window (default: run config)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Target directory (default: <run>/curves)"),
) -> None:
    """Write tab-separated curve tables from a run's metric CSVs."""
    try:
        written = api.export(run, window=window, out_dir=out)
    except (RunDirectoryError, ValueError) as e:
        raise _fail(e, 1)
    for name, p in written.items():
        typer.echo(f"{name}\t{p}")


@app.command("compare")
def compare_cmd(
    config: str = typer.Option("reference_6irs", "--config", "-c", help="Config file or packaged preset name"),
    dqn: Optional[Path] = typer.Option(None, "--dqn", help="DQN checkpoint directory"),
    ddpg: Optional[Path] = typer.Option(None, "--ddpg", help="DDPG checkpoint directory"),
    out: Path = typer.Option(Path("runs/compare"), "--out", help="Output directory"),
    seeds: List[int] = typer.Option([], "--seed", help="Evaluation seed (repeatable)"),
    log_level: Optional[str] = typer.Option("WARNING", "--log-level"),
) -> None:
    """Evaluate Greedy, Random and trained agents on one scene side by side."""
    _load_env()
    checkpoints: Dict[str, Path] = {}
    if dqn is not None:
        checkpoints["dqn"] = dqn
    if ddpg is not None:
        checkpoints["ddpg"] = ddpg
    try:
        path = _resolve_config(config)
        _setup(path, log_level)
        rows = api.compare(path, checkpoints=checkpoints, out_dir=out, seeds=seeds or None)
    except (ConfigError, CheckpointError) as e:
        raise _fail(e, 1)
    except TrainingAbortedError as e:
        raise _fail(e, 2)

    table = Table(title=f"Comparison on {path.name}")
    for col in ("algo", "seed", "TSs", "overall reward", "final fairness", "sum rate"):
        table.add_column(col, justify="left" if col == "algo" else "right")
    for row in rows:
        table.add_row(
            row["algo"],
            str(row["seed"]),
            str(row["ts_count"]),
            _fmt(row["overall_reward"]),
            _fmt(row["final_fairness"]),
            f"{row['sum_rate']:.6g}",
        )
    console.print(table)
    typer.echo(f"Wrote {out / 'comparison.tsv'}")


@app.command("validate")
def validate_cmd(
    config: str = typer.Argument(..., help="Config file or packaged preset name"),
    strict: bool = typer.Option(False, "--strict/--no-strict", help="Exit non-zero when issues are found"),
) -> None:
    """Load a config and print advisory warnings."""
    _load_env()
    try:
        warnings = api.validate(_resolve_config(config))
    except ConfigError as e:
        raise _fail(e, 1)
    if not warnings:
        typer.echo("No issues found.")
        return
    typer.echo(f"Found {len(warnings)} issue(s):")
    for msg in warnings:
        typer.echo(f" - {msg}")
    if strict:
        raise typer.Exit(code=1)


@app.command("presets")
def presets_cmd() -> None:
    """List the packaged presets."""
    for name in PRESETS:
        typer.echo(f"{name}\t{packaged_preset_path(name)}")


def main() -> None:  # pragma: no cover
    app()


if __name__ == "__main__":  # pragma: no cover
    main()
