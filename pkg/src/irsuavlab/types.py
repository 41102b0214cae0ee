from __future__ import annotations

from typing import TypedDict


class StepRecord(TypedDict):
    """Per-TS row emitted by the environment loop and written to `steps.csv`.

    Keys:
      episode: Episode index (1-based)
      ts: Time-slot index within the episode (1-based)
      x, y: UAV planar position after the move (meters)
      energy: Remaining energy after the move (joules, may be negative on the last TS)
      served_ue: Index of the UE served in this TS
      rate: Data rate of the served UE (bits/s/Hz)
      fairness: Jain fairness f_t over serve counts up to this TS
      reward: Reward r_t
      out_of_bounds: 1 if the commanded move left the area, else 0
    """

    episode: int
    ts: int
    x: float
    y: float
    energy: float
    served_ue: int
    rate: float
    fairness: float
    reward: float
    out_of_bounds: int


class EpisodeRecord(TypedDict):
    """Per-episode summary written to `episodes.csv`."""

    episode: int
    ts_count: int
    accumulated_reward: float
    final_fairness: float
    sum_rate: float
    boundary_violations: int
    mean_loss: float


class ComparisonRow(TypedDict):
    """One evaluation episode of one algorithm in a comparison table."""

    algo: str
    seed: int
    ts_count: int
    overall_reward: float
    final_fairness: float
    sum_rate: float
