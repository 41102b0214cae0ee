"""Episodic IRS-assisted UAV environment.

The pure functions (`apply_motion`, `propulsion_energy`, `step`, `reset`, `observe`)
carry the dynamics; `UavEnv` wraps them with the static scene and the current state
so training loops only call `reset()` / `step(action)`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Optional

import numpy as np
from numpy.typing import NDArray

from irsuavlab.channel import (
    TWO_PI,
    ChannelParams,
    PhaseStrategy,
    ScenarioGeometry,
    best_ue,
    irs_ue_matrix,
    jain_fairness,
    uav_irs_stacked,
    ue_rates,
)
from irsuavlab.exceptions import ConfigError, EpisodeFinishedError

if TYPE_CHECKING:
    from irsuavlab.config.loader import ExperimentConfig

logger = logging.getLogger(__name__)

# Rounding slack when a move ends exactly on the border (e.g. cos(pi/2) != 0)
_BORDER_EPS = 1e-9


# ----------------------------- Domain types -----------------------------
@dataclass(frozen=True)
class EnergyModel:
    """Rotary-wing propulsion constants plus slot length and energy budget."""

    blade_power: float = 79.85  # P_s, W
    induced_power: float = 88.63  # P_m, W
    tip_speed: float = 120.0  # U_r, m/s
    induced_velocity: float = 4.03  # V_h, m/s
    drag_ratio: float = 0.6  # d_0
    air_density: float = 1.225  # rho_a, kg/m^3
    rotor_solidity: float = 0.05  # z
    disc_area: float = 0.503  # A, m^2
    slot_duration: float = 1.0  # T^d, s
    max_energy: float = 20000.0  # e^max, J

    def __post_init__(self) -> None:
        for name, value in vars(self).items():
            if value <= 0:
                raise ConfigError("must be strictly positive", key=name)


@dataclass(frozen=True)
class RewardConfig:
    fairness_weight: float = 100.0  # k_i
    rate_weight: float = 1.0  # k_q
    penalty: float = 1.0  # p

    def __post_init__(self) -> None:
        if self.fairness_weight <= 0:
            raise ConfigError("must be positive", key="k_i")
        if self.rate_weight < 0:
            raise ConfigError("must be non-negative", key="k_q")
        if self.penalty < 0:
            raise ConfigError("must be non-negative", key="p")


@dataclass(frozen=True)
class Action:
    """Flying angle in [0, 2π) and distance in meters."""

    angle: float
    distance: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.angle < TWO_PI):
            raise ValueError(f"angle {self.angle} outside [0, 2π)")
        if self.distance < 0.0:
            raise ValueError(f"distance {self.distance} is negative")


@dataclass(frozen=True)
class EnvState:
    x: float
    y: float
    energy: float
    serve_counts: tuple[int, ...]
    ts: int = 0

    @property
    def done(self) -> bool:
        return self.energy <= 0.0


@dataclass(frozen=True)
class StepResult:
    state: EnvState
    reward: float
    rates: NDArray[np.float64] = field(repr=False)
    served: int
    done: bool
    out_of_bounds: bool
    fairness: float
    energy_used: float

    @property
    def served_rate(self) -> float:
        return float(self.rates[self.served])


# ------------------------------ Dynamics ------------------------------
def apply_motion(state: EnvState, act: Action, geom: ScenarioGeometry) -> tuple[EnvState, bool]:
    """Move by (d cos mu, d sin mu); clamp to the area and flag a violation."""
    tx = state.x + act.distance * math.cos(act.angle)
    ty = state.y + act.distance * math.sin(act.angle)
    out_x = tx < -_BORDER_EPS or tx > geom.area_x + _BORDER_EPS
    out_y = ty < -_BORDER_EPS or ty > geom.area_y + _BORDER_EPS
    nx = min(max(tx, 0.0), geom.area_x)
    ny = min(max(ty, 0.0), geom.area_y)
    return replace(state, x=nx, y=ny), bool(out_x or out_y)


def propulsion_energy(v: float, model: EnergyModel) -> float:
    """Energy (J) spent in one slot flying at constant speed v (m/s)."""
    if v < 0:
        raise ValueError("speed must be non-negative")
    blade = model.blade_power * (1.0 + 3.0 * (v / model.tip_speed) ** 2)
    ratio_sq = (v / model.induced_velocity) ** 2
    induced = model.induced_power * math.sqrt(math.sqrt(1.0 + 0.25 * ratio_sq**2) - 0.5 * ratio_sq)
    parasite = 0.5 * model.drag_ratio * model.air_density * model.rotor_solidity * model.disc_area * v**3
    return (blade + induced + parasite) * model.slot_duration


def min_propulsion_energy(model: EnergyModel, v_max: float, *, samples: int = 20001) -> float:
    """Smallest per-slot energy over speeds in [0, v_max] (dense sweep).

    The induced term dips with speed, so the minimum sits above hover speed and
    bounds the episode length at ceil(e_max / min).
    """
    speeds = np.linspace(0.0, max(v_max, 0.0), samples)
    return min(propulsion_energy(float(v), model) for v in speeds)


def max_episode_length(model: EnergyModel, v_max: float) -> int:
    return math.ceil(model.max_energy / min_propulsion_energy(model, v_max))


def reward(fairness: float, served_rate: float, out_of_bounds: bool, cfg: RewardConfig) -> float:
    """r_t = f_t + (k_q / k_i) * R_served - p * [out of bounds]."""
    r = fairness + (cfg.rate_weight / cfg.fairness_weight) * served_rate
    if out_of_bounds:
        r -= cfg.penalty
    return r


def reset(geom: ScenarioGeometry, model: EnergyModel, start: tuple[float, float]) -> EnvState:
    x, y = float(start[0]), float(start[1])
    if not (0.0 <= x <= geom.area_x and 0.0 <= y <= geom.area_y):
        raise ConfigError(f"start position ({x}, {y}) lies outside the area", key="start")
    return EnvState(x=x, y=y, energy=model.max_energy, serve_counts=(0,) * geom.num_ue, ts=0)


def observe(state: EnvState, geom: ScenarioGeometry, model: EnergyModel) -> NDArray[np.float64]:
    """Normalized observation (x/X_max, y/Y_max, energy/e_max), each in [0, 1]."""
    energy = min(max(state.energy / model.max_energy, 0.0), 1.0)
    return np.array([state.x / geom.area_x, state.y / geom.area_y, energy], dtype=np.float64)


def step(
    state: EnvState,
    act: Action,
    strategy: PhaseStrategy,
    geom: ScenarioGeometry,
    params: ChannelParams,
    model: EnergyModel,
    reward_cfg: RewardConfig,
    *,
    rng: Optional[np.random.Generator] = None,
    h_ie: Optional[NDArray[np.complex128]] = None,
) -> StepResult:
    """Advance one TS: move, pay energy, beamform for every UE, serve the best one."""
    if state.done:
        raise EpisodeFinishedError(f"episode already finished at ts={state.ts}")
    moved, oob = apply_motion(state, act, geom)
    # energy follows the commanded distance, clamped or not
    used = propulsion_energy(act.distance / model.slot_duration, model)

    if h_ie is None:
        h_ie = irs_ue_matrix(geom, params)
    h_ui = uav_irs_stacked((moved.x, moved.y), geom, params)
    rates = ue_rates(h_ui, h_ie, params, strategy, rng)
    served = best_ue(rates)

    counts = list(state.serve_counts)
    counts[served] += 1
    fairness = jain_fairness(counts)
    r = reward(fairness, float(rates[served]), oob, reward_cfg)

    nxt = replace(moved, energy=state.energy - used, serve_counts=tuple(counts), ts=state.ts + 1)
    return StepResult(
        state=nxt,
        reward=r,
        rates=rates,
        served=served,
        done=nxt.done,
        out_of_bounds=oob,
        fairness=fairness,
        energy_used=used,
    )


# ------------------------------ Wrapper ------------------------------
class UavEnv:
    """Stateful environment over the pure step function.

    Holds the static scene, the cached IRS->UE channels and the current `EnvState`.
    Single-threaded; create one instance per rollout.
    """

    def __init__(
        self,
        geom: ScenarioGeometry,
        params: ChannelParams,
        model: EnergyModel,
        reward_cfg: RewardConfig,
        *,
        start: tuple[float, float],
        max_distance: float,
        strategy: PhaseStrategy,
        rng: Optional[np.random.Generator] = None,
    ) -> None:
        if max_distance <= 0:
            raise ConfigError("must be positive", key="d_max")
        self.geom = geom
        self.params = params
        self.model = model
        self.reward_cfg = reward_cfg
        self.start = start
        self.max_distance = max_distance
        self.strategy = strategy
        self.rng = rng
        self._h_ie = irs_ue_matrix(geom, params)
        self._state: Optional[EnvState] = None

    @classmethod
    def from_config(
        cls,
        cfg: "ExperimentConfig",
        strategy: PhaseStrategy,
        rng: Optional[np.random.Generator] = None,
    ) -> "UavEnv":
        return cls(
            cfg.geometry(),
            cfg.channel_params(),
            cfg.energy_model(),
            cfg.reward_config(),
            start=(cfg.start_x, cfg.start_y),
            max_distance=cfg.max_distance,
            strategy=strategy,
            rng=rng,
        )

    # -------- lifecycle --------
    def reset(self) -> NDArray[np.float64]:
        self._state = reset(self.geom, self.model, self.start)
        return self.observe()

    def snapshot(self) -> EnvState:
        if self._state is None:
            raise EpisodeFinishedError("environment has not been reset")
        return self._state

    def observe(self) -> NDArray[np.float64]:
        return observe(self.snapshot(), self.geom, self.model)

    def step(self, act: Action) -> StepResult:
        result = self.preview(act)
        self._state = result.state
        logger.debug(
            "ts=%d pos=(%.2f, %.2f) energy=%.2f served=%d reward=%.5f oob=%s",
            result.state.ts, result.state.x, result.state.y, result.state.energy,
            result.served, result.reward, result.out_of_bounds,
        )
        return result

    def preview(self, act: Action, state: Optional[EnvState] = None) -> StepResult:
        """Evaluate a hypothetical step without touching the current state."""
        if act.distance > self.max_distance + _BORDER_EPS:
            raise ValueError(f"distance {act.distance} exceeds d_max={self.max_distance}")
        return step(
            state if state is not None else self.snapshot(),
            act,
            self.strategy,
            self.geom,
            self.params,
            self.model,
            self.reward_cfg,
            rng=self.rng,
            h_ie=self._h_ie,
        )

    @property
    def done(self) -> bool:
        return self._state is not None and self._state.done
