from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, ClassVar, Dict, Literal, Optional

import numpy as np
from numpy.typing import NDArray

from irsuavlab.env import Action
from irsuavlab.neural import NetworkParams

if TYPE_CHECKING:
    from irsuavlab.env import UavEnv
    from irsuavlab.replay import Batch

logger = logging.getLogger(__name__)


# ----------------------------- Types ---------------------------------------
AlgoName = Literal["dqn", "ddpg", "greedy", "random"]


@dataclass(frozen=True)
class Decision:
    """What an agent chose for one TS.

    - `action` is handed to the environment.
    - `stored` is what goes into replay: the table index for discrete agents, the raw
      actor 2-vector for DDPG.
    - `index` is the discrete table index, None for continuous actions.
    """

    action: Action
    stored: NDArray[np.float64]
    index: Optional[int] = None


@dataclass(frozen=True)
class LearnResult:
    loss: float
    actor_objective: Optional[float] = None


class AgentBase(ABC):
    """Strict abstract base for every policy (learning or not).

    Engine contract:
      • `act(obs, env, rng, explore=...)` is called once per TS.
      • `learn(batch)` is called only when `learns` is True and replay holds a batch.
      • `networks()` / `load_networks()` expose the parameter sets for checkpoints;
        `steps` is persisted next to them.
    """

    algo: ClassVar[AlgoName]
    learns: ClassVar[bool] = False

    def __init__(self) -> None:
        self.steps = 0

    @abstractmethod
    def act(
        self,
        obs: NDArray[np.float64],
        env: "UavEnv",
        rng: np.random.Generator,
        *,
        explore: bool,
    ) -> Decision:
        """Choose the action for the current TS."""

    def learn(self, batch: "Batch") -> LearnResult:
        raise NotImplementedError(f"{self.algo} agent does not learn")

    # ----- Checkpoint hooks ---------------------------------------------
    def networks(self) -> Dict[str, NetworkParams]:
        return {}

    def load_networks(self, nets: Dict[str, NetworkParams], *, steps: int = 0) -> None:
        if nets:
            raise ValueError(f"{self.algo} agent has no networks to load")
        self.steps = steps

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(steps={self.steps})"
