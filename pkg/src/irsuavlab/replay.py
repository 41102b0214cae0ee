"""Fixed-capacity experience replay with uniform mini-batch sampling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray

from irsuavlab.exceptions import ReplayUnderflowError

Array = NDArray[np.float64]


@dataclass(frozen=True)
class Transition:
    """One stored step. DQN actions are a 1-entry vector holding the table index."""

    obs: Array
    action: Array
    reward: float
    next_obs: Array
    terminal: bool

    @classmethod
    def make(
        cls,
        obs: ArrayLike,
        action: ArrayLike,
        reward: float,
        next_obs: ArrayLike,
        terminal: bool,
    ) -> "Transition":
        return cls(
            obs=np.asarray(obs, dtype=np.float64).reshape(-1),
            action=np.atleast_1d(np.asarray(action, dtype=np.float64)).reshape(-1),
            reward=float(reward),
            next_obs=np.asarray(next_obs, dtype=np.float64).reshape(-1),
            terminal=bool(terminal),
        )


@dataclass(frozen=True)
class Batch:
    """Column view of K sampled transitions (fresh copies, never views of the ring)."""

    obs: Array
    actions: Array
    rewards: Array
    next_obs: Array
    terminals: NDArray[np.bool_]

    def __len__(self) -> int:
        return int(self.rewards.shape[0])

    @classmethod
    def of(cls, transitions: list[Transition]) -> "Batch":
        if not transitions:
            raise ReplayUnderflowError("a batch needs at least one transition")
        return cls(
            obs=np.vstack([t.obs for t in transitions]),
            actions=np.vstack([t.action for t in transitions]),
            rewards=np.array([t.reward for t in transitions], dtype=np.float64),
            next_obs=np.vstack([t.next_obs for t in transitions]),
            terminals=np.array([t.terminal for t in transitions], dtype=bool),
        )


class ReplayMemory:
    """Ring buffer of transitions; the oldest entry is overwritten first.

    Storage is allocated on the first push, which also fixes the observation and
    action widths for the lifetime of the memory.
    """

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError("replay capacity must be >= 1")
        self.capacity = capacity
        self._size = 0
        self._cursor = 0
        self._obs: Optional[Array] = None
        self._act: Optional[Array] = None
        self._rew = np.zeros(capacity, dtype=np.float64)
        self._next: Optional[Array] = None
        self._term = np.zeros(capacity, dtype=bool)

    def __len__(self) -> int:
        return self._size

    def _allocate(self, t: Transition) -> None:
        self._obs = np.zeros((self.capacity, t.obs.shape[0]), dtype=np.float64)
        self._act = np.zeros((self.capacity, t.action.shape[0]), dtype=np.float64)
        self._next = np.zeros((self.capacity, t.next_obs.shape[0]), dtype=np.float64)

    def push(self, t: Transition) -> None:
        if self._obs is None:
            self._allocate(t)
        assert self._obs is not None and self._act is not None and self._next is not None
        if (
            t.obs.shape[0] != self._obs.shape[1]
            or t.next_obs.shape[0] != self._next.shape[1]
            or t.action.shape[0] != self._act.shape[1]
        ):
            raise ValueError("transition widths differ from the ones already stored")
        i = self._cursor
        self._obs[i] = t.obs
        self._act[i] = t.action
        self._rew[i] = t.reward
        self._next[i] = t.next_obs
        self._term[i] = t.terminal
        self._cursor = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, k: int, rng: np.random.Generator) -> Batch:
        """K uniform draws with replacement."""
        if k < 1:
            raise ValueError("batch size must be >= 1")
        if self._size < k:
            raise ReplayUnderflowError(f"requested {k} transitions, only {self._size} stored")
        assert self._obs is not None and self._act is not None and self._next is not None
        idx = rng.integers(0, self._size, size=k)
        return Batch(
            obs=self._obs[idx],
            actions=self._act[idx],
            rewards=self._rew[idx],
            next_obs=self._next[idx],
            terminals=self._term[idx],
        )

    def ordered(self) -> list[Transition]:
        """Stored transitions, oldest first."""
        if self._size == 0:
            return []
        assert self._obs is not None and self._act is not None and self._next is not None
        start = self._cursor if self._size == self.capacity else 0
        order = [(start + j) % self.capacity for j in range(self._size)]
        return [
            Transition(
                self._obs[i].copy(), self._act[i].copy(), float(self._rew[i]),
                self._next[i].copy(), bool(self._term[i]),
            )
            for i in order
        ]
