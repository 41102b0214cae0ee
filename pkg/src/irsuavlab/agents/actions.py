from __future__ import annotations

import math
from functools import cached_property

from irsuavlab.env import Action


class DiscreteActionTable:
    """Finite action set: N_mu directions times N_d non-zero distances.

    Index ``i * N_d + (l - 1)`` holds ``(2π i / N_mu, d_max * l / N_d)`` for
    ``i = 0..N_mu-1`` and ``l = 1..N_d``.
    """

    def __init__(self, n_directions: int, n_distances: int, max_distance: float) -> None:
        if n_directions < 1 or n_distances < 1:
            raise ValueError("the action table needs at least one direction and one distance")
        if max_distance <= 0:
            raise ValueError("max_distance must be positive")
        self.n_directions = n_directions
        self.n_distances = n_distances
        self.max_distance = max_distance

    @cached_property
    def actions(self) -> tuple[Action, ...]:
        return tuple(
            Action(
                angle=2.0 * math.pi * i / self.n_directions,
                distance=self.max_distance * l / self.n_distances,
            )
            for i in range(self.n_directions)
            for l in range(1, self.n_distances + 1)
        )

    def __len__(self) -> int:
        return self.n_directions * self.n_distances

    def __getitem__(self, index: int) -> Action:
        if not 0 <= index < len(self):
            raise IndexError(f"action index {index} outside [0, {len(self)})")
        return self.actions[index]

    def index(self, direction: int, distance_level: int) -> int:
        """Table index of direction ``i`` and 1-based distance level ``l``."""
        if not (0 <= direction < self.n_directions and 1 <= distance_level <= self.n_distances):
            raise IndexError(f"no action for direction={direction}, level={distance_level}")
        return direction * self.n_distances + distance_level - 1
