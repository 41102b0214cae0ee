from irsuavlab.agents.actions import DiscreteActionTable
from irsuavlab.agents.base import AgentBase, Decision, LearnResult
from irsuavlab.agents.baselines import GreedyAgent, RandomAgent, greedy_select, random_select
from irsuavlab.agents.ddpg import DdpgAgent, DdpgSettings, to_action
from irsuavlab.agents.dqn import DqnAgent, DqnSettings
from irsuavlab.agents.factory import ALGO_TO_AGENT, make_agent

__all__ = [
    "ALGO_TO_AGENT",
    "AgentBase",
    "DdpgAgent",
    "DdpgSettings",
    "Decision",
    "DiscreteActionTable",
    "DqnAgent",
    "DqnSettings",
    "GreedyAgent",
    "LearnResult",
    "RandomAgent",
    "greedy_select",
    "make_agent",
    "random_select",
    "to_action",
]
