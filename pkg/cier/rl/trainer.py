"""Training loop with periodic causal analysis of the collected experience.

Each episode is rolled out with exploration noise and pushed into the replay
buffer. In the causal modes the buffer's temporary pool triggers an analysis once
it is full; the resulting effect table is turned into per-transition causal
weights and installed before the next episode starts. Learning begins after the
warmup steps, with one or more sampled updates per environment step.
"""

import time
from concurrent.futures import Future, ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.config import CIERConfig
from ..core.exceptions import DataError, DivergenceError, NumericalError
from ..core.pipeline import AnalysisResult, CausalAnalysisPipeline
from ..core.results import AnalysisRequest
from ..models.metrics import EffectSnapshot, TrainingRun
from ..models.transition import Transition
from ..replay.buffer import ReplayBuffer, assign_causal_weights
from ..utils.episode_io import write_scores_csv
from ..utils.logging import LoggerMixin
from ..utils.serialization import save_json
from ..utils.visualization import explain_effects
from .agents import make_agent
from .envs import make_env


class Trainer(LoggerMixin):
    """One seeded training run.

    Args:
        config: Full configuration
        seed: Seeds the environment, agent, buffer and analysis
        output_dir: Directory for per-analysis reports; nothing is written when None
    """

    def __init__(self, config: CIERConfig, seed: int, output_dir: Optional[str] = None):
        config.validate()
        self.config = config
        self.seed = seed
        self.output_dir = Path(output_dir) if output_dir else None
        self.env = make_env(config.env, seed=seed)
        spec = self.env.spec
        self.agent = make_agent(spec, config.agent, seed=seed)
        self.buffer = ReplayBuffer(config.replay, config.curriculum, spec.state_dim, spec.action_dim, seed=seed)
        self.causal = self.buffer.uses_global_priorities
        self.pipeline = CausalAnalysisPipeline(self._seeded(config, seed)) if self.causal else None

        self.total_steps = 0
        self.scores: List[float] = []
        self.effect_history: List[EffectSnapshot] = []
        self.ground_truth: Dict[int, List[Tuple[int, int]]] = {}
        self._executor: Optional[ThreadPoolExecutor] = None
        self._pending: Optional[Tuple[int, Future]] = None

    @staticmethod
    def _seeded(config: CIERConfig, seed: int) -> CIERConfig:
        return config.update(**{"ticc.seed": seed, "tscf.seed": seed, "causal.seed": seed})

    # -- acting and learning ------------------------------------------------

    def _select_action(self, state: np.ndarray) -> np.ndarray:
        if self.total_steps < self.config.run.warmup_steps:
            return self.agent.random_action()
        return self.agent.act(state, self.config.agent.exploration_sigma)

    def _learn(self, episode: int) -> None:
        if self.total_steps <= self.config.run.warmup_steps or len(self.buffer) < self.buffer.config.batch:
            return
        for _ in range(self.config.run.updates_per_step):
            sampled = self.buffer.sample()
            td_errors = self.agent.update(self.buffer.get_batch(sampled.indices), sampled.weights)
            if not np.all(np.isfinite(td_errors)):
                raise DivergenceError(episode, float("nan"), self.config.run.score_bound)
            self.buffer.update_priorities(sampled.indices, td_errors)

    def run_episode(self, episode: int) -> float:
        """Roll out one episode, learning along the way; returns the episode return."""
        state = self.env.reset()
        done = False
        step = 0
        score = 0.0
        while not done:
            action = self._select_action(state)
            next_state, reward, done = self.env.step(action)
            self.buffer.add(Transition(state, action, reward, next_state, done, episode, step))
            self.total_steps += 1
            score += reward
            self._learn(episode)
            state = next_state
            step += 1

        bound = self.config.run.score_bound
        if not np.isfinite(score) or abs(score) > bound:
            raise DivergenceError(episode, score, bound)
        intervals = self.env.planted_intervals()
        if intervals:
            self.ground_truth[episode] = intervals
        return score

    # -- causal analysis ----------------------------------------------------

    def _truth_for(self, request: AnalysisRequest) -> Optional[Dict[int, List[Tuple[int, int]]]]:
        if self.config.env.name != "planted_factor":
            return None
        return {ep: self.ground_truth.get(ep, []) for ep in request.episode_ids}

    def _analyze(self, request: AnalysisRequest) -> AnalysisResult:
        return self.pipeline.analyze(request, ground_truth=self._truth_for(request))

    def _install(self, episode: int, request: AnalysisRequest, outcome) -> None:
        if isinstance(outcome, BaseException):
            self.logger.warning("Causal analysis %d failed: %s", request.request_id, outcome)
            self.effect_history.append(EffectSnapshot(episode=episode, request_id=request.request_id,
                                                      k_prime=0, error=str(outcome)))
            return
        result: AnalysisResult = outcome
        assign_causal_weights(self.buffer, result.effect_table, result.occurrences, result.episode_ids)
        table = result.effect_table
        self.effect_history.append(EffectSnapshot(
            episode=episode,
            request_id=result.request_id,
            k_prime=result.k_prime,
            strengths=table.strengths(),
            relevant=table.relevant_factors(),
            planted_factor=result.planted_factor,
            planted_relevant=result.planted_relevant,
        ))
        if self.output_dir is not None:
            report = explain_effects(table, result.dag, result.dictionary)
            path = self.output_dir / f"explain_{result.request_id:03d}.txt"
            path.write_text(report, encoding="utf-8")

    def _run_sync(self, request: AnalysisRequest):
        try:
            return self._analyze(request)
        except (DataError, NumericalError) as e:
            return e

    def _collect(self, episode: int, wait: bool = False) -> None:
        if self._pending is None:
            return
        request, future = self._pending
        if not wait and not future.done():
            return
        self._pending = None
        error = future.exception()
        if error is not None and not isinstance(error, (DataError, NumericalError)):
            raise error
        self._install(episode, request, error if error is not None else future.result())

    def after_episode(self, episode: int) -> None:
        """Advance the curriculum and handle any analysis request at this episode boundary."""
        self.buffer.set_epoch(episode + 1)
        if not self.causal:
            return
        if self.config.run.async_analysis:
            self._collect(episode)
        request = self.buffer.on_temp_full()
        if request is None:
            return
        self.logger.info("Episode %d: analysing %d episodes (%d transitions)",
                         episode, len(request.episode_ids), request.transition_count)
        if not self.config.run.async_analysis:
            self._install(episode, request, self._run_sync(request))
            return
        self._collect(episode, wait=True)
        if self._executor is None:
            self._executor = ThreadPoolExecutor(max_workers=1, thread_name_prefix="cier-analysis")
        self._pending = (request, self._executor.submit(self._analyze, request))

    # -- entry point --------------------------------------------------------

    def train(self, episodes: Optional[int] = None) -> TrainingRun:
        episodes = episodes or self.config.run.episodes
        start = time.perf_counter()
        try:
            for episode in range(episodes):
                score = self.run_episode(episode)
                self.scores.append(score)
                self.after_episode(episode)
                if (episode + 1) % max(1, episodes // 10) == 0:
                    self.logger.info("Seed %d episode %d/%d: score %.3f", self.seed, episode + 1,
                                     episodes, score)
            if self._pending is not None:
                self._collect(episodes - 1, wait=True)
        finally:
            if self._executor is not None:
                self._executor.shutdown(wait=True)
                self._executor = None

        return TrainingRun(
            seed=self.seed,
            mode=self.config.replay.mode,
            algorithm=self.config.agent.algorithm,
            scores=list(self.scores),
            effect_history=list(self.effect_history),
            ground_truth={str(k): [list(i) for i in v] for k, v in sorted(self.ground_truth.items())},
            wall_clock=time.perf_counter() - start,
        )


def write_run_outputs(run: TrainingRun, config: CIERConfig, output_dir: str) -> Dict[str, str]:
    """Write ``scores.csv``, ``effects.json``, ``config.json`` and ``run.json`` for one run."""
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = {
        "scores": str(out / "scores.csv"),
        "effects": str(out / "effects.json"),
        "config": str(out / "config.json"),
        "run": str(out / "run.json"),
    }
    write_scores_csv(run.scores, outputs["scores"])
    save_json([s.to_dict() for s in run.effect_history], outputs["effects"])
    config.save_to_file(outputs["config"])
    save_json({"seed": run.seed, "mode": run.mode, "algorithm": run.algorithm,
               "episodes": run.episodes, "wall_clock": run.wall_clock,
               "planted_relevance_rate": run.planted_relevance_rate(),
               "ground_truth": run.ground_truth}, outputs["run"])
    return outputs


def train(config: CIERConfig, seed: Optional[int] = None, output_dir: Optional[str] = None,
          episodes: Optional[int] = None) -> TrainingRun:
    """Train one seeded run and, when ``output_dir`` is given, write its artifacts there.

    Raises:
        DivergenceError: If a score is non-finite or exceeds ``run.score_bound``
    """
    seed = config.run.seeds[0] if seed is None else seed
    if output_dir:
        Path(output_dir).mkdir(parents=True, exist_ok=True)
    run = Trainer(config, seed, output_dir).train(episodes)
    if output_dir:
        write_run_outputs(run, config, output_dir)
    return run
