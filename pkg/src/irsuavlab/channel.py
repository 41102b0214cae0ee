"""Geometry, LoS array-response channels, phase shifts, fairness and rate.

All functions are pure: they read their arguments and return fresh numpy arrays or
floats, so they can be shared freely between environments and worker threads.

Conventions:
  * complex channel vectors are 1-D ``complex128`` arrays; the stacked form for K
    IRSs is the concatenation in IRS order, length ``M * K``
  * a phase matrix is stored as its diagonal, a float array of radians in [0, 2π)
    laid out exactly like the stacked channel it applies to
  * the composite gain of UE n is ``sum(conj(h_ie) * exp(j*theta) * h_ui)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Literal, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from irsuavlab.exceptions import ChannelError, ConfigError

TWO_PI = 2.0 * math.pi

ComplexVector = NDArray[np.complex128]
PhaseMatrix = NDArray[np.float64]


# ----------------------------- Domain types -----------------------------
@dataclass(frozen=True)
class ScenarioGeometry:
    """Static scene: area, UAV altitude, IRS and UE placement, IRS size."""

    uav_altitude: float
    area_x: float
    area_y: float
    irs_positions: tuple[tuple[float, float, float], ...]
    ue_positions: tuple[tuple[float, float], ...]
    elements_per_irs: int

    def __post_init__(self) -> None:
        if self.elements_per_irs < 1:
            raise ConfigError("must be >= 1", key="M")
        if not self.irs_positions:
            raise ConfigError("at least one IRS is required", key="K")
        if not self.ue_positions:
            raise ConfigError("at least one UE is required", key="N")
        if self.area_x <= 0 or self.area_y <= 0:
            raise ConfigError("area side lengths must be positive", key="X_max/Y_max")
        for k, (x, y, h) in enumerate(self.irs_positions):
            if not (0.0 <= x <= self.area_x and 0.0 <= y <= self.area_y):
                raise ConfigError(f"IRS {k} at ({x}, {y}) lies outside the area", key="irs_positions")
            if h <= 0:
                raise ConfigError(f"IRS {k} height must be positive", key="irs_positions")
        for n, (x, y) in enumerate(self.ue_positions):
            if not (0.0 <= x <= self.area_x and 0.0 <= y <= self.area_y):
                raise ConfigError(f"UE {n} at ({x}, {y}) lies outside the area", key="ue_positions")

    @property
    def num_irs(self) -> int:
        return len(self.irs_positions)

    @property
    def num_ue(self) -> int:
        return len(self.ue_positions)

    @cached_property
    def irs_array(self) -> NDArray[np.float64]:
        return np.asarray(self.irs_positions, dtype=np.float64).reshape(-1, 3)

    @cached_property
    def ue_array(self) -> NDArray[np.float64]:
        return np.asarray(self.ue_positions, dtype=np.float64).reshape(-1, 2)


@dataclass(frozen=True)
class ChannelParams:
    """Link-budget constants, all linear units (alpha as power gain at 1 m, watts)."""

    ref_path_loss: float = 1e-3
    ue_path_exponent: float = 2.8
    element_spacing_ratio: float = 0.5
    noise_power: float = 1e-10
    tx_power: float = 0.01

    def __post_init__(self) -> None:
        if self.ref_path_loss <= 0:
            raise ConfigError("must be positive", key="alpha")
        if self.ue_path_exponent < 2:
            raise ConfigError("must be >= 2", key="beta")
        if not 0 < self.element_spacing_ratio <= 1:
            raise ConfigError("must lie in (0, 1]", key="d_over_lambda")
        if self.noise_power <= 0:
            raise ConfigError("must be positive", key="noise_power")
        if self.tx_power <= 0:
            raise ConfigError("must be positive", key="P")


@dataclass(frozen=True)
class PhaseStrategy:
    """How a step chooses IRS phases: aligned (continuous), quantized to N_I levels, or random."""

    kind: Literal["continuous", "quantized", "random"]
    levels: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind == "quantized" and (self.levels is None or self.levels < 1):
            raise ConfigError("quantized phases need at least one level", key="N_I")

    @classmethod
    def continuous(cls) -> "PhaseStrategy":
        return cls("continuous")

    @classmethod
    def quantized(cls, levels: int) -> "PhaseStrategy":
        return cls("quantized", levels)

    @classmethod
    def random(cls) -> "PhaseStrategy":
        return cls("random")


# ------------------------------ Geometry ------------------------------
def dist_uav_irs(uav_xy: ArrayLike, k: int, geom: ScenarioGeometry) -> float:
    """3-D distance between the UAV (at altitude H^U) and IRS k."""
    x, y = np.asarray(uav_xy, dtype=np.float64)
    ix, iy, ih = geom.irs_positions[k]
    return math.sqrt((x - ix) ** 2 + (y - iy) ** 2 + (geom.uav_altitude - ih) ** 2)


def dist_irs_ue(k: int, n: int, geom: ScenarioGeometry) -> float:
    """Distance between IRS k and ground-level UE n."""
    ix, iy, ih = geom.irs_positions[k]
    ux, uy = geom.ue_positions[n]
    return math.sqrt((ix - ux) ** 2 + (iy - uy) ** 2 + ih**2)


# ------------------------------ Channels ------------------------------
def _array_response(elements: int, spacing_ratio: float, cosine: float) -> ComplexVector:
    m = np.arange(elements, dtype=np.float64)
    return np.exp(-1j * TWO_PI * spacing_ratio * m * cosine)


def channel_uav_irs(
    uav_xy: ArrayLike, k: int, geom: ScenarioGeometry, params: ChannelParams
) -> ComplexVector:
    """LoS UAV -> IRS k channel: free-space amplitude times the ULA response."""
    d = dist_uav_irs(uav_xy, k, geom)
    cosine = (geom.irs_positions[k][0] - float(np.asarray(uav_xy)[0])) / d
    amplitude = math.sqrt(params.ref_path_loss / d**2)
    return amplitude * _array_response(geom.elements_per_irs, params.element_spacing_ratio, cosine)


def channel_irs_ue(k: int, n: int, geom: ScenarioGeometry, params: ChannelParams) -> ComplexVector:
    """LoS IRS k -> UE n channel with path-loss exponent beta."""
    d = dist_irs_ue(k, n, geom)
    cosine = (geom.irs_positions[k][0] - geom.ue_positions[n][0]) / d
    amplitude = math.sqrt(params.ref_path_loss / d**params.ue_path_exponent)
    return amplitude * _array_response(geom.elements_per_irs, params.element_spacing_ratio, cosine)


def stack_channels(per_irs: Sequence[ArrayLike]) -> ComplexVector:
    if not per_irs:
        raise ChannelError("cannot stack an empty channel list")
    parts = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in per_irs]
    lengths = {p.shape[0] for p in parts}
    if len(lengths) != 1:
        raise ChannelError(f"per-IRS channels differ in length: {sorted(lengths)}")
    return np.concatenate(parts)


def unstack_channels(stacked: ArrayLike, num_irs: int) -> list[ComplexVector]:
    v = np.asarray(stacked, dtype=np.complex128).reshape(-1)
    if num_irs < 1 or v.shape[0] % num_irs:
        raise ChannelError(f"length {v.shape[0]} is not a multiple of K={num_irs}")
    return [part.copy() for part in np.split(v, num_irs)]


def uav_irs_stacked(uav_xy: ArrayLike, geom: ScenarioGeometry, params: ChannelParams) -> ComplexVector:
    return stack_channels([channel_uav_irs(uav_xy, k, geom, params) for k in range(geom.num_irs)])


def irs_ue_matrix(geom: ScenarioGeometry, params: ChannelParams) -> NDArray[np.complex128]:
    """Stacked IRS -> UE channels, one row per UE, shape (N, M*K). Static for a scene."""
    rows = [
        stack_channels([channel_irs_ue(k, n, geom, params) for k in range(geom.num_irs)])
        for n in range(geom.num_ue)
    ]
    return np.vstack(rows)


# ------------------------------- Phases -------------------------------
def _wrap(angles: NDArray[np.float64]) -> NDArray[np.float64]:
    out = np.mod(angles, TWO_PI)
    # mod of a tiny negative rounds up to exactly 2π
    return np.where(out >= TWO_PI, 0.0, out)


def element_phases(v: ArrayLike) -> PhaseMatrix:
    """Polar phase of every entry, mapped into [0, 2π)."""
    arr = np.asarray(v, dtype=np.complex128)
    if np.any(arr == 0):
        raise ChannelError("phase of a zero-magnitude entry is undefined")
    return _wrap(np.atleast_1d(np.angle(arr)).astype(np.float64))


def align_phases(h_ui: ArrayLike, h_ie: ArrayLike) -> PhaseMatrix:
    """Continuous phases that make every reflected path add coherently.

    Element e gets ``theta = omega_ie - omega_ui`` (mod 2π): the IRS->UE phase plus the
    compensation of the UAV->IRS phase. With it every term of
    ``conj(h_ie) * exp(j*theta) * h_ui`` is real and positive. ``h_ie`` may be a
    matrix with one UE per row; the last axis must match ``h_ui``.
    """
    a = np.asarray(h_ui, dtype=np.complex128)
    b = np.asarray(h_ie, dtype=np.complex128)
    if a.shape[-1] != b.shape[-1]:
        raise ChannelError(f"channel lengths differ: {a.shape[-1]} vs {b.shape[-1]}")
    return _wrap(element_phases(b) - element_phases(a))


def quantize_phases(continuous: ArrayLike, levels: int) -> PhaseMatrix:
    """Snap each phase to the nearest of ``2πi/levels`` under circular distance.

    Ties go to the smaller grid index.
    """
    if levels < 1:
        raise ChannelError("number of phase levels must be >= 1")
    theta = _wrap(np.asarray(continuous, dtype=np.float64).copy())
    step = TWO_PI / levels
    lo = np.floor(theta / step).astype(np.int64) % levels
    hi = (lo + 1) % levels
    d_lo = circular_distance(theta, lo * step)
    d_hi = circular_distance(theta, hi * step)
    pick_hi = (d_hi < d_lo) | ((d_hi == d_lo) & (hi < lo))
    idx = np.where(pick_hi, hi, lo)
    return idx * step


def circular_distance(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    diff = np.abs(np.mod(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64), TWO_PI))
    return np.minimum(diff, TWO_PI - diff)


def random_phases(shape: int | tuple[int, ...], rng: np.random.Generator) -> PhaseMatrix:
    return rng.uniform(0.0, TWO_PI, size=shape)


def optimize_phases(
    h_ui: ArrayLike,
    h_ie: ArrayLike,
    strategy: PhaseStrategy,
    rng: Optional[np.random.Generator] = None,
) -> PhaseMatrix:
    if strategy.kind == "random":
        if rng is None:
            raise ChannelError("random phases need a generator")
        return random_phases(np.shape(h_ie), rng)
    aligned = align_phases(h_ui, h_ie)
    if strategy.kind == "quantized":
        assert strategy.levels is not None
        return quantize_phases(aligned, strategy.levels)
    return aligned


# -------------------------------- Rate --------------------------------
def composite_gain(h_ui: ArrayLike, h_ie: ArrayLike, theta: ArrayLike) -> NDArray[np.complex128]:
    """(h_ie)^H diag(exp(j*theta)) h_ui, reduced over the last axis."""
    a = np.asarray(h_ui, dtype=np.complex128)
    b = np.asarray(h_ie, dtype=np.complex128)
    t = np.asarray(theta, dtype=np.float64)
    if not (a.shape[-1] == b.shape[-1] == t.shape[-1]):
        raise ChannelError("channel and phase lengths differ")
    return np.sum(np.conj(b) * np.exp(1j * t) * a, axis=-1)


def data_rate(h_ui: ArrayLike, h_ie: ArrayLike, theta: ArrayLike, params: ChannelParams) -> float:
    """Achievable rate log2(1 + P |composite|^2 / sigma^2) in bits/s/Hz."""
    gain = complex(composite_gain(h_ui, h_ie, theta))
    snr = params.tx_power * abs(gain) ** 2 / params.noise_power
    return math.log1p(snr) / math.log(2.0)


def ue_rates(
    h_ui: ArrayLike,
    h_ie_matrix: NDArray[np.complex128],
    params: ChannelParams,
    strategy: PhaseStrategy,
    rng: Optional[np.random.Generator] = None,
) -> NDArray[np.float64]:
    """Rate of every UE for one UAV position, each with its own optimized phases."""
    theta = optimize_phases(h_ui, h_ie_matrix, strategy, rng)
    gains = composite_gain(h_ui, h_ie_matrix, theta)
    snr = params.tx_power * np.abs(gains) ** 2 / params.noise_power
    return np.log1p(snr) / math.log(2.0)


# ------------------------- Scheduling & fairness -------------------------
def jain_fairness(serve_counts: ArrayLike) -> float:
    """Jain index (sum c)^2 / (N * sum c^2); 0 when nobody has been served yet."""
    c = np.asarray(serve_counts, dtype=np.float64)
    if c.size == 0:
        raise ChannelError("fairness needs at least one UE")
    total_sq = float(np.sum(c * c))
    if total_sq == 0.0:
        return 0.0
    return float(np.sum(c)) ** 2 / (c.size * total_sq)


def best_ue(rates: ArrayLike) -> int:
    """Index of the UE with the maximal rate, lowest index on ties."""
    r = np.asarray(rates, dtype=np.float64)
    if r.size == 0:
        raise ChannelError("no UE rates given")
    return int(np.argmax(r))
