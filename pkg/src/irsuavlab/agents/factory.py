from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Dict, Type

import numpy as np

from .base import AgentBase
from .baselines import GreedyAgent, RandomAgent
from .ddpg import DdpgAgent, DdpgSettings
from .dqn import DqnAgent, DqnSettings

if TYPE_CHECKING:
    from irsuavlab.config.loader import ExperimentConfig

ALGO_TO_AGENT: Dict[str, Type[AgentBase]] = {
    "dqn": DqnAgent,
    "ddpg": DdpgAgent,
    "greedy": GreedyAgent,
    "random": RandomAgent,
}


def make_agent(cfg: "ExperimentConfig", rng: np.random.Generator) -> AgentBase:
    """
    Factory: instantiate the agent named by `cfg.algo`.
    Args:
        cfg: validated ExperimentConfig
        rng: the run's `init` stream; network weights are drawn from it
    Returns:
        A fresh agent of the matching class.
    """
    algo = cfg.algo
    if algo not in ALGO_TO_AGENT:
        logging.getLogger(__name__).error("Unknown algorithm '%s'", algo)
        raise ValueError(f"Unknown algorithm: {algo!r}")
    table = cfg.action_table()
    if algo == "dqn":
        settings = DqnSettings(
            epsilon=cfg.epsilon,
            gamma=cfg.gamma,
            target_update_period=cfg.target_update_period,
            adam=cfg.adam(cfg.dqn_lr),
        )
        return DqnAgent.build(table, cfg.dqn_hidden, settings, rng)
    if algo == "ddpg":
        ddpg = DdpgSettings(
            gamma=cfg.gamma,
            tau=cfg.tau,
            noise_scale=cfg.noise_scale,
            noise_decay=cfg.noise_decay,
            max_distance=cfg.max_distance,
            actor_adam=cfg.adam(cfg.actor_lr),
            critic_adam=cfg.adam(cfg.critic_lr),
        )
        return DdpgAgent.build(cfg.actor_hidden, cfg.critic_hidden, ddpg, rng)
    return ALGO_TO_AGENT[algo](table)  # type: ignore[call-arg]
