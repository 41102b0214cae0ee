from __future__ import annotations

import logging
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, model_validator

from irsuavlab.agents.actions import DiscreteActionTable
from irsuavlab.agents.base import AlgoName
from irsuavlab.channel import ChannelParams, PhaseStrategy, ScenarioGeometry
from irsuavlab.env import EnergyModel, RewardConfig
from irsuavlab.exceptions import ConfigError
from irsuavlab.neural import AdamConfig
from irsuavlab.presets import resolve as resolve_preset

logger = logging.getLogger(__name__)

PhaseKind = Literal["continuous", "quantized", "random"]

# Packaged placement: IRSs on the two long walls, UEs on two rows between them
REFERENCE_IRS: Tuple[Tuple[float, float, float], ...] = (
    (100.0, 0.0, 100.0),
    (300.0, 0.0, 100.0),
    (500.0, 0.0, 100.0),
    (100.0, 200.0, 100.0),
    (300.0, 200.0, 100.0),
    (500.0, 200.0, 100.0),
)
REFERENCE_UE: Tuple[Tuple[float, float], ...] = (
    (100.0, 50.0),
    (300.0, 50.0),
    (500.0, 50.0),
    (100.0, 150.0),
    (300.0, 150.0),
    (500.0, 150.0),
)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


# unit key -> (linear key, converter)
_UNIT_KEYS = {
    "alpha_db": ("alpha", db_to_linear),
    "sigma2_dbm": ("sigma2", dbm_to_watts),
    "P_dbm": ("P", dbm_to_watts),
}


# --------------------------- Experiment config ---------------------------
class ExperimentConfig(BaseModel):
    """Every knob of a run. Field defaults are the 6-IRS reference scenario.

    Each parameter is reachable by its short symbolic alias (``K``, ``N``, ``e_max``,
    ``N_mu`` ...) or by its descriptive field name.
    """

    # Run
    algo: AlgoName = "dqn"
    seed: int = 0
    out_dir: str = "runs/latest"

    # Scene
    num_irs: int = Field(6, alias="K", ge=1)
    num_ue: int = Field(6, alias="N", ge=1)
    elements_per_irs: int = Field(20, alias="M", ge=1)
    area_x: float = Field(600.0, alias="X_max", gt=0)
    area_y: float = Field(200.0, alias="Y_max", gt=0)
    start_x: float = Field(10.0, alias="X_U0", ge=0)
    start_y: float = Field(10.0, alias="Y_U0", ge=0)
    uav_altitude: float = Field(200.0, alias="H_U", gt=0)
    irs_positions: List[Tuple[float, float, float]] = Field(default_factory=lambda: list(REFERENCE_IRS))
    ue_positions: List[Tuple[float, float]] = Field(default_factory=lambda: list(REFERENCE_UE))

    # Motion and energy
    slot_duration: float = Field(1.0, alias="T_d", gt=0)
    horizon: int = Field(50, alias="T", ge=1)  # listed for completeness; episodes end on energy
    max_distance: float = Field(40.0, alias="d_max", gt=0)
    blade_power: float = Field(79.85, alias="P_s", gt=0)
    induced_power: float = Field(88.63, alias="P_m", gt=0)
    tip_speed: float = Field(120.0, alias="U_r", gt=0)
    induced_velocity: float = Field(4.03, alias="V_h", gt=0)
    drag_ratio: float = Field(0.6, alias="d_0", gt=0)
    air_density: float = Field(1.225, alias="rho_a", gt=0)
    rotor_solidity: float = Field(0.05, alias="z", gt=0)
    disc_area: float = Field(0.503, alias="A", gt=0)
    max_energy: float = Field(20000.0, alias="e_max", gt=0)

    # Channel
    ref_path_loss: float = Field(1e-3, alias="alpha", gt=0)
    ue_path_exponent: float = Field(2.8, alias="beta", ge=2)
    element_spacing_ratio: float = Field(0.5, alias="d_over_lambda", gt=0, le=1)
    noise_power: float = Field(1e-10, alias="sigma2", gt=0)
    tx_power: float = Field(0.01, alias="P", gt=0)

    # Reward
    fairness_weight: float = Field(100.0, alias="k_i", gt=0)
    rate_weight: float = Field(1.0, alias="k_q", ge=0)
    penalty: float = Field(1.0, alias="p", ge=0)

    # Actions and phases
    n_directions: int = Field(6, alias="N_mu", ge=1)
    n_distances: int = Field(3, alias="N_d", ge=1)
    phase_levels: int = Field(12, alias="N_I", ge=1)
    phase_strategy: Optional[PhaseKind] = None  # None: quantized for discrete agents, continuous for ddpg

    # Learning
    episodes: int = Field(10000, alias="N_eps", ge=1)
    epsilon: float = Field(0.9, ge=0, le=1)
    noise_scale: float = Field(1.3, alias="N_prime", ge=0)
    noise_decay: float = Field(0.9995, alias="eta", gt=0, le=1)
    gamma: float = Field(0.99, ge=0, le=1)
    batch_size: int = Field(128, alias="batch", ge=1)
    memory_size: int = Field(200000, alias="m_max", ge=1)
    target_update_period: int = Field(200, alias="C", ge=1)
    tau: float = Field(0.01, gt=0, le=1)
    dqn_hidden: List[int] = Field(default_factory=lambda: [400, 300, 64])
    actor_hidden: List[int] = Field(default_factory=lambda: [400, 300, 256, 128])
    critic_hidden: List[int] = Field(default_factory=lambda: [400, 300, 256, 128])
    dqn_lr: float = Field(1e-5, gt=0)
    actor_lr: float = Field(1e-4, gt=0)
    critic_lr: float = Field(2e-4, gt=0)
    adam_beta1: float = Field(0.9, gt=0, lt=1)
    adam_beta2: float = Field(0.999, gt=0, lt=1)
    adam_eps: float = Field(1e-8, gt=0)

    # Harness
    checkpoint_every: int = Field(100, ge=1)
    eval_episodes: int = Field(1, ge=1)
    smoothing_window: int = Field(100, ge=1)
    log_level: str = "INFO"
    log_file: Optional[str] = None
    trace_file: Optional[str] = None

    model_config = dict(extra="forbid", populate_by_name=True, frozen=True)

    @model_validator(mode="before")
    @classmethod
    def _normalize(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        doc = _canonical_keys(dict(data))
        for unit_key, (linear_key, convert) in _UNIT_KEYS.items():
            if unit_key in doc:
                if linear_key in doc:
                    raise ValueError(f"{unit_key} and {linear_key} both given")
                doc[linear_key] = convert(float(doc.pop(unit_key)))
        _fill_positions(doc, "irs_positions", "K", REFERENCE_IRS)
        _fill_positions(doc, "ue_positions", "N", REFERENCE_UE)
        return doc

    @model_validator(mode="after")
    def _check_scene(self) -> "ExperimentConfig":
        if len(self.irs_positions) != self.num_irs:
            raise ValueError(f"irs_positions has {len(self.irs_positions)} entries, K={self.num_irs}")
        if len(self.ue_positions) != self.num_ue:
            raise ValueError(f"ue_positions has {len(self.ue_positions)} entries, N={self.num_ue}")
        if not (self.start_x <= self.area_x and self.start_y <= self.area_y):
            raise ValueError(f"start ({self.start_x}, {self.start_y}) lies outside the area")
        for name in ("dqn_hidden", "actor_hidden", "critic_hidden"):
            widths = getattr(self, name)
            if not widths or any(w < 1 for w in widths):
                raise ValueError(f"{name} needs at least one positive width")
        return self

    # ----- Builders ------------------------------------------------------
    def geometry(self) -> ScenarioGeometry:
        return ScenarioGeometry(
            uav_altitude=self.uav_altitude,
            area_x=self.area_x,
            area_y=self.area_y,
            irs_positions=tuple(self.irs_positions),
            ue_positions=tuple(self.ue_positions),
            elements_per_irs=self.elements_per_irs,
        )

    def channel_params(self) -> ChannelParams:
        return ChannelParams(
            ref_path_loss=self.ref_path_loss,
            ue_path_exponent=self.ue_path_exponent,
            element_spacing_ratio=self.element_spacing_ratio,
            noise_power=self.noise_power,
            tx_power=self.tx_power,
        )

    def energy_model(self) -> EnergyModel:
        return EnergyModel(
            blade_power=self.blade_power,
            induced_power=self.induced_power,
            tip_speed=self.tip_speed,
            induced_velocity=self.induced_velocity,
            drag_ratio=self.drag_ratio,
            air_density=self.air_density,
            rotor_solidity=self.rotor_solidity,
            disc_area=self.disc_area,
            slot_duration=self.slot_duration,
            max_energy=self.max_energy,
        )

    def reward_config(self) -> RewardConfig:
        return RewardConfig(
            fairness_weight=self.fairness_weight,
            rate_weight=self.rate_weight,
            penalty=self.penalty,
        )

    def action_table(self) -> DiscreteActionTable:
        return DiscreteActionTable(self.n_directions, self.n_distances, self.max_distance)

    def phase_strategy_for(self, algo: Optional[str] = None) -> PhaseStrategy:
        kind = self.phase_strategy or ("continuous" if (algo or self.algo) == "ddpg" else "quantized")
        if kind == "quantized":
            return PhaseStrategy.quantized(self.phase_levels)
        if kind == "random":
            return PhaseStrategy.random()
        return PhaseStrategy.continuous()

    def adam(self, learning_rate: float) -> AdamConfig:
        return AdamConfig(
            learning_rate=learning_rate,
            beta1=self.adam_beta1,
            beta2=self.adam_beta2,
            eps=self.adam_eps,
        )

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Re-validated copy; keys may be field names or aliases."""
        aliases = _alias_map()
        doc = self.dump()
        changed = {aliases.get(k, k): v for k, v in overrides.items()}
        # a new K or N without coordinates re-derives them from the packaged lists
        if "K" in changed and "irs_positions" not in changed:
            doc.pop("irs_positions")
        if "N" in changed and "ue_positions" not in changed:
            doc.pop("ue_positions")
        doc.update(changed)
        return load_config(doc)

    def dump(self) -> Dict[str, Any]:
        """Plain dict keyed by the short aliases, positions as lists."""
        doc = self.model_dump(by_alias=True)
        doc["irs_positions"] = [list(p) for p in self.irs_positions]
        doc["ue_positions"] = [list(p) for p in self.ue_positions]
        return doc


def _alias_map() -> Dict[str, str]:
    return {
        name: (info.alias or name) for name, info in ExperimentConfig.model_fields.items()
    }


def _canonical_keys(doc: Dict[str, Any]) -> Dict[str, Any]:
    """Rename descriptive field names to their aliases so errors report the short name."""
    aliases = _alias_map()
    out: Dict[str, Any] = {}
    for key, value in doc.items():
        target = aliases.get(key, key)
        if target in out:
            raise ValueError(f"{key!r} given twice (as {target!r})")
        out[target] = value
    return out


def _fill_positions(doc: Dict[str, Any], list_key: str, count_key: str, packaged: Tuple[Any, ...]) -> None:
    if list_key in doc:
        doc.setdefault(count_key, len(doc[list_key] or []))
        return
    count = doc.get(count_key)
    if count is None:
        return
    try:
        n = int(count)
    except (TypeError, ValueError):
        return
    doc[list_key] = [list(p) for p in packaged[: max(n, 0)]]


# ----------------------------- Loader -----------------------------
ENV_RE = re.compile(r"\$\{([^}:]+)(?::([^}]+))?\}")


def _env_interp_scalar(s: str) -> str:
    return ENV_RE.sub(lambda m: os.getenv(m.group(1), m.group(2) or ""), s)


def _env_interp_deep(obj: Any) -> Any:
    if isinstance(obj, str):
        return _env_interp_scalar(obj)
    if isinstance(obj, list):
        return [_env_interp_deep(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _env_interp_deep(v) for k, v in obj.items()}
    return obj


def parse_flat(text: str) -> Tuple[Dict[str, Any], Dict[str, int]]:
    """Parse ``name = value`` lines; returns the document and each key's line number.

    Values are read as YAML scalars/flow sequences, so ``M = 20``,
    ``d_over_lambda = 0.5`` and ``dqn_hidden = [64, 64]`` come back typed.
    """
    doc: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, value = line.partition("=")
        name, value = name.strip(), value.strip()
        if not sep or not name:
            raise ConfigError("expected 'name = value'", line=lineno)
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
            raise ConfigError(f"invalid key {name!r}", line=lineno)
        if not value:
            raise ConfigError("missing value", key=name, line=lineno)
        if name in doc:
            raise ConfigError("duplicate key", key=name, line=lineno)
        try:
            doc[name] = yaml.safe_load(_env_interp_scalar(value))
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse value {value!r}", key=name, line=lineno) from exc
        lines[name] = lineno
    return doc, lines


def read_document(path: Path) -> Tuple[Dict[str, Any], Dict[str, int]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    if path.suffix.lower() in {".yaml", ".yml"}:
        try:
            raw = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            mark = getattr(exc, "problem_mark", None)
            raise ConfigError(f"invalid YAML: {exc}", line=(mark.line + 1) if mark else None) from exc
        if not isinstance(raw, dict):
            raise ConfigError("top level of a YAML config must be a mapping")
        return _env_interp_deep(raw), {}
    return parse_flat(text)


def _config_error(exc: ValidationError, lines: Dict[str, int]) -> ConfigError:
    parts: List[str] = []
    first_key: Optional[str] = None
    for err in exc.errors():
        key = ".".join(str(p) for p in err.get("loc", ())) or "config"
        first_key = first_key or key.split(".")[0]
        parts.append(f"{key}: {err.get('msg')}")
    line = lines.get(first_key) if first_key else None
    return ConfigError("; ".join(parts), line=line)


def load_config(source: Union[str, Path, Dict[str, Any], ExperimentConfig]) -> ExperimentConfig:
    """Load a YAML file, a flat ``name = value`` file, a packaged preset name or a dict.

    Missing keys fall back to the 6-IRS reference values; unknown keys are rejected.
    """
    if isinstance(source, ExperimentConfig):
        return source
    lines: Dict[str, int] = {}
    if isinstance(source, (str, Path)):
        doc, lines = read_document(Path(resolve_preset(str(source))))
    elif isinstance(source, dict):
        doc = _env_interp_deep(dict(source))
    else:
        raise TypeError("load_config expects a path, a dict or an ExperimentConfig")
    try:
        cfg = ExperimentConfig.model_validate(doc)
    except ValidationError as exc:
        raise _config_error(exc, lines) from exc
    logger.debug("Loaded config algo=%s K=%d N=%d M=%d", cfg.algo, cfg.num_irs, cfg.num_ue, cfg.elements_per_irs)
    return cfg


def save_config(cfg: ExperimentConfig, path: Union[str, Path]) -> None:
    Path(path).write_text(yaml.safe_dump(cfg.dump(), sort_keys=False), encoding="utf-8")
