"""DDPG and TD3 actor-critic agents on top of the numpy networks."""

from typing import Dict, List, Optional

import numpy as np

from ..core.config import AgentConfig
from ..core.exceptions import ShapeError
from ..core.interfaces import Agent
from ..utils.logging import LoggerMixin
from .envs import EnvSpec
from .networks import Adam, Mlp, mlp_backward, soft_update


def td_target(rewards: np.ndarray, dones: np.ndarray, next_q: np.ndarray, gamma: float) -> np.ndarray:
    """One-step bootstrapped target ``r + gamma * (1 - done) * Q'(s', a')``."""
    return np.asarray(rewards, float) + gamma * (1.0 - np.asarray(dones, float)) * np.asarray(next_q, float)


def clipped_double_q_target(rewards: np.ndarray, dones: np.ndarray, q1: np.ndarray, q2: np.ndarray,
                            gamma: float) -> np.ndarray:
    """TD target bootstrapped from the smaller of two target critics."""
    return td_target(rewards, dones, np.minimum(q1, q2), gamma)


class DDPGAgent(Agent, LoggerMixin):
    """Deterministic policy gradient with one critic and soft-updated targets.

    The critic minimizes the importance-weighted squared TD error
    ``mean(w * (y - Q(s, a))^2)``; the actor ascends ``Q(s, pi(s))``.
    """

    critic_count = 1

    def __init__(self, spec: EnvSpec, config: AgentConfig, seed: Optional[int] = None):
        config.validate()
        self.spec = spec
        self.config = config
        self.rng = np.random.default_rng(config.seed if seed is None else seed)
        self.actor = Mlp([spec.state_dim, *config.actor_hidden, spec.action_dim], "tanh",
                         scale=spec.action_scale, center=spec.action_center, rng=self.rng)
        self.actor_target = self.actor.copy()
        self.actor_optimizer = Adam(self.actor.params, lr=config.actor_lr)
        self.critics = [self._make_critic() for _ in range(self.critic_count)]
        self.critic_targets = [c.copy() for c in self.critics]
        self.critic_optimizers = [Adam(c.params, lr=config.critic_lr) for c in self.critics]
        self.updates = 0

    def _make_critic(self) -> Mlp:
        sizes = [self.spec.state_dim + self.spec.action_dim, *self.config.critic_hidden, 1]
        return Mlp(sizes, "linear", rng=self.rng)

    @property
    def critic(self) -> Mlp:
        return self.critics[0]

    @property
    def networks(self) -> List[Mlp]:
        return [self.actor, self.actor_target, *self.critics, *self.critic_targets]

    def is_finite(self) -> bool:
        return all(net.is_finite() for net in self.networks)

    def act(self, state: np.ndarray, noise_sigma: float = 0.0) -> np.ndarray:
        action = self.actor(np.asarray(state, dtype=float))
        if noise_sigma > 0:
            action = action + self.rng.normal(0.0, noise_sigma, size=action.shape) * self.spec.action_scale
        return np.clip(action, self.spec.low, self.spec.high)

    def random_action(self) -> np.ndarray:
        return self.rng.uniform(self.spec.low, self.spec.high)

    def _unpack(self, batch: Dict[str, np.ndarray]):
        states = np.asarray(batch["states"], float)
        actions = np.asarray(batch["actions"], float)
        if states.ndim != 2 or states.shape[1] != self.spec.state_dim:
            raise ShapeError(f"states must be (batch, {self.spec.state_dim}), got {states.shape}")
        if actions.shape != (states.shape[0], self.spec.action_dim):
            raise ShapeError(f"actions must be ({states.shape[0]}, {self.spec.action_dim}), got {actions.shape}")
        return (states, actions, np.asarray(batch["rewards"], float),
                np.asarray(batch["next_states"], float), np.asarray(batch["dones"], float))

    def compute_target(self, rewards: np.ndarray, next_states: np.ndarray, dones: np.ndarray) -> np.ndarray:
        next_actions = self.actor_target(next_states)
        next_q = self.critic_targets[0](np.hstack([next_states, next_actions]))[:, 0]
        return td_target(rewards, dones, next_q, self.spec.gamma)

    def _critic_step(self, index: int, inputs: np.ndarray, targets: np.ndarray, weights: np.ndarray) -> np.ndarray:
        critic = self.critics[index]
        q, cache = critic.forward_cache(inputs)
        errors = targets - q[:, 0]
        upstream = (-2.0 * weights * errors / len(errors)).reshape(-1, 1)
        grads, _ = mlp_backward(critic, inputs, upstream, cache)
        self.critic_optimizers[index].step(grads)
        return errors

    def _actor_step(self, states: np.ndarray) -> None:
        actions, actor_cache = self.actor.forward_cache(states)
        inputs = np.hstack([states, actions])
        batch = len(states)
        _, dinput = mlp_backward(self.critic, inputs, np.full((batch, 1), -1.0 / batch))
        dactions = dinput[:, self.spec.state_dim:]
        grads, _ = mlp_backward(self.actor, states, dactions, actor_cache)
        self.actor_optimizer.step(grads)

    def _soft_update_targets(self) -> None:
        tau = self.config.tau
        soft_update(self.actor_target, self.actor, tau)
        for target, critic in zip(self.critic_targets, self.critics):
            soft_update(target, critic, tau)

    def update(self, batch: Dict[str, np.ndarray], weights: Optional[np.ndarray] = None) -> np.ndarray:
        states, actions, rewards, next_states, dones = self._unpack(batch)
        weights = np.ones(len(states)) if weights is None else np.asarray(weights, float)
        targets = self.compute_target(rewards, next_states, dones)
        inputs = np.hstack([states, actions])
        errors = self._critic_step(0, inputs, targets, weights)
        self._actor_step(states)
        self._soft_update_targets()
        self.updates += 1
        return errors


class TD3Agent(DDPGAgent):
    """Twin critics with clipped double-Q targets, target policy smoothing and a delayed actor."""

    critic_count = 2

    def compute_target(self, rewards: np.ndarray, next_states: np.ndarray, dones: np.ndarray) -> np.ndarray:
        cfg = self.config
        scale = self.spec.action_scale
        noise = self.rng.normal(0.0, cfg.target_noise_sigma, size=(len(next_states), self.spec.action_dim)) * scale
        noise = np.clip(noise, -cfg.target_noise_clip * scale, cfg.target_noise_clip * scale)
        next_actions = np.clip(self.actor_target(next_states) + noise, self.spec.low, self.spec.high)
        inputs = np.hstack([next_states, next_actions])
        q1 = self.critic_targets[0](inputs)[:, 0]
        q2 = self.critic_targets[1](inputs)[:, 0]
        return clipped_double_q_target(rewards, dones, q1, q2, self.spec.gamma)

    def update(self, batch: Dict[str, np.ndarray], weights: Optional[np.ndarray] = None) -> np.ndarray:
        states, actions, rewards, next_states, dones = self._unpack(batch)
        weights = np.ones(len(states)) if weights is None else np.asarray(weights, float)
        targets = self.compute_target(rewards, next_states, dones)
        inputs = np.hstack([states, actions])
        errors = self._critic_step(0, inputs, targets, weights)
        self._critic_step(1, inputs, targets, weights)
        self.updates += 1
        if self.updates % self.config.policy_delay == 0:
            self._actor_step(states)
            self._soft_update_targets()
        return errors


AGENT_TYPES = {"ddpg": DDPGAgent, "td3": TD3Agent}


def make_agent(spec: EnvSpec, config: AgentConfig, seed: Optional[int] = None) -> DDPGAgent:
    config.validate()
    return AGENT_TYPES[config.algorithm](spec, config, seed)
