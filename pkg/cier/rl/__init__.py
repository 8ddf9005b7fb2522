"""Desk-scale environments, numpy actor-critic agents and the training loop."""

from .envs import EnvSpec, LaneWorldEnv, PlantedFactorEnv, make_env, motif_template
from .networks import Adam, Mlp, mlp_backward, soft_update
from .agents import DDPGAgent, TD3Agent, clipped_double_q_target, make_agent, td_target
from .trainer import Trainer, train, write_run_outputs

__all__ = [
    "EnvSpec",
    "LaneWorldEnv",
    "PlantedFactorEnv",
    "make_env",
    "motif_template",
    "Adam",
    "Mlp",
    "mlp_backward",
    "soft_update",
    "DDPGAgent",
    "TD3Agent",
    "clipped_double_q_target",
    "make_agent",
    "td_target",
    "Trainer",
    "train",
    "write_run_outputs",
]
