"""Configuration management for the CIER pipeline.

Every stage owns a small dataclass; :class:`CIERConfig` aggregates them and is the
single JSON document the CLI reads (flags override file values).
"""

from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional
import json
import os
from pathlib import Path
from .exceptions import ConfigurationError

# Optional yaml support
try:
    import yaml
    HAS_YAML = True
except ImportError:
    HAS_YAML = False


VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
REPLAY_MODES = ["uniform", "per", "cier", "ciper"]
PATH_AGGREGATIONS = ["sum", "product"]
ALGORITHMS = ["ddpg", "td3"]
ENVIRONMENTS = ["planted_factor", "lane_world"]


def _filtered(cls, data: Dict[str, Any]) -> Dict[str, Any]:
    """Drop unknown keys so older or richer documents still load."""
    valid_keys = {f.name for f in fields(cls)}
    return {k: v for k, v in (data or {}).items() if k in valid_keys}


class _Section:
    """Shared dict conversion for the flat section dataclasses."""

    def to_dict(self) -> Dict[str, Any]:
        result = {}
        for f in fields(self):
            value = getattr(self, f.name)
            result[f.name] = list(value) if isinstance(value, (list, tuple)) else value
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]):
        try:
            section = cls(**_filtered(cls, data))
        except TypeError as e:
            raise ConfigurationError(f"Invalid {cls.__name__} parameters: {e}")
        section.validate()
        return section

    def validate(self) -> None:  # pragma: no cover - overridden
        pass


@dataclass
class TiccConfig(_Section):
    """Segmentation settings; ``sparsity_lambda`` is scaled by the window count of each fit."""

    window: int = 3
    beta: float = 50.0
    sparsity_lambda: float = 0.11
    max_em_iters: int = 30
    admm_iters: int = 200
    tol: float = 1e-4
    rho: float = 1.0
    target_segment_length: int = 25
    k_min: int = 2
    k_max: int = 10
    normalize: bool = True
    seed: int = 0

    def validate(self) -> None:
        if self.window < 1:
            raise ConfigurationError("ticc.window must be >= 1")
        if self.beta < 0:
            raise ConfigurationError("ticc.beta must be >= 0")
        if self.sparsity_lambda < 0:
            raise ConfigurationError("ticc.sparsity_lambda must be >= 0")
        if self.max_em_iters < 1 or self.admm_iters < 1:
            raise ConfigurationError("ticc.max_em_iters and ticc.admm_iters must be positive")
        if self.tol <= 0 or self.rho <= 0:
            raise ConfigurationError("ticc.tol and ticc.rho must be positive")
        if self.target_segment_length < 1:
            raise ConfigurationError("ticc.target_segment_length must be positive")
        if not 1 <= self.k_min <= self.k_max:
            raise ConfigurationError("ticc requires 1 <= k_min <= k_max")


@dataclass
class TscfConfig(_Section):
    """Factor dictionary settings."""

    max_iters: int = 50
    sakoe_chiba_radius: Optional[int] = None
    k_prime: Optional[int] = None
    min_segment_length: Optional[int] = None
    seed: int = 0

    def validate(self) -> None:
        if self.max_iters < 1:
            raise ConfigurationError("tscf.max_iters must be positive")
        if self.sakoe_chiba_radius is not None and self.sakoe_chiba_radius < 0:
            raise ConfigurationError("tscf.sakoe_chiba_radius must be >= 0")
        if self.k_prime is not None and self.k_prime < 1:
            raise ConfigurationError("tscf.k_prime must be >= 1")
        if self.min_segment_length is not None and self.min_segment_length < 1:
            raise ConfigurationError("tscf.min_segment_length must be >= 1")


@dataclass
class CausalConfig(_Section):
    """Causal discovery and effect estimation settings."""

    alpha: float = 0.01
    max_sepset_size: int = 3
    restarts: int = 3
    path_aggregation: str = "sum"
    min_samples_per_node: int = 10
    seed: int = 0

    def validate(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ConfigurationError("causal.alpha must be in (0, 1)")
        if self.max_sepset_size < 0:
            raise ConfigurationError("causal.max_sepset_size must be >= 0")
        if self.restarts < 0:
            raise ConfigurationError("causal.restarts must be >= 0")
        if self.path_aggregation not in PATH_AGGREGATIONS:
            raise ConfigurationError(
                f"Invalid path aggregation: {self.path_aggregation}. Must be one of {PATH_AGGREGATIONS}")


@dataclass
class CurriculumSchedule(_Section):
    """Quarter-ellipse schedule controlling the causal tilt.

    ``epsilon_m`` is measured in episodes.
    """

    epsilon_m: int = 1000
    eta: float = 1.0

    def validate(self) -> None:
        if self.epsilon_m <= 0:
            raise ConfigurationError("curriculum.epsilon_m must be positive")
        if self.eta <= 0:
            raise ConfigurationError("curriculum.eta must be positive")


@dataclass
class ReplayConfig(_Section):
    """Replay buffer settings.

    ``lambda_u``, ``td_coeff`` and ``causal_coeff`` have no published values; the
    defaults keep full sampling support while leaving a visible causal tilt.
    """

    capacity: int = 1_000_000
    temp_capacity: int = 100_000
    batch: int = 256
    mode: str = "uniform"
    lambda_u: float = 0.3
    per_alpha: float = 0.6
    per_beta: float = 0.4
    per_beta_final: float = 1.0
    per_epsilon: float = 1e-3
    td_coeff: float = 0.5
    causal_coeff: float = 0.5
    seed: int = 0

    def validate(self) -> None:
        if self.mode not in REPLAY_MODES:
            raise ConfigurationError(f"Invalid replay mode: {self.mode}. Must be one of {REPLAY_MODES}")
        if self.capacity <= 0 or self.batch <= 0:
            raise ConfigurationError("replay.capacity and replay.batch must be positive")
        if not 0 < self.temp_capacity <= self.capacity:
            raise ConfigurationError("replay.temp_capacity must be in (0, capacity]")
        if not 0.0 <= self.lambda_u <= 1.0:
            raise ConfigurationError("replay.lambda_u must be in [0, 1]")
        if self.mode in ("cier", "ciper") and self.lambda_u <= 0.0:
            raise ConfigurationError(
                f"replay.lambda_u must be > 0 in {self.mode} mode to keep every transition sampleable")
        if self.per_alpha < 0:
            raise ConfigurationError("replay.per_alpha must be >= 0")
        if not 0.0 <= self.per_beta <= self.per_beta_final <= 1.0:
            raise ConfigurationError("replay requires 0 <= per_beta <= per_beta_final <= 1")
        if self.per_epsilon <= 0:
            raise ConfigurationError("replay.per_epsilon must be positive")
        if self.td_coeff < 0 or self.causal_coeff < 0:
            raise ConfigurationError("replay.td_coeff and replay.causal_coeff must be >= 0")


@dataclass
class EnvConfig(_Section):
    """Environment selection and parameters for both desk-scale environments."""

    name: str = "planted_factor"
    max_steps: int = 50
    gamma: float = 0.99
    # LaneWorld
    reward_a: float = 0.5
    reward_b: float = 1.0
    v_min: float = 0.0
    v_max: float = 1.0
    n_obstacles: int = 5
    n_lanes: int = 3
    # PlantedFactor
    motif_length: int = 5
    delay: int = 10
    pulse: float = 1.0
    noise_sigma: float = 0.01
    motif_tolerance: float = 0.35

    def validate(self) -> None:
        if self.name not in ENVIRONMENTS:
            raise ConfigurationError(f"Invalid environment: {self.name}. Must be one of {ENVIRONMENTS}")
        if self.max_steps < 1:
            raise ConfigurationError("env.max_steps must be positive")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigurationError("env.gamma must be in (0, 1)")
        if self.v_min >= self.v_max:
            raise ConfigurationError("env requires v_min < v_max")
        if self.motif_length < 1 or self.delay < 0:
            raise ConfigurationError("env.motif_length must be >= 1 and env.delay >= 0")
        if self.noise_sigma < 0 or self.motif_tolerance <= 0:
            raise ConfigurationError("env.noise_sigma must be >= 0 and env.motif_tolerance > 0")
        if self.n_lanes < 1 or self.n_obstacles < 0:
            raise ConfigurationError("env.n_lanes must be >= 1 and env.n_obstacles >= 0")


@dataclass
class AgentConfig(_Section):
    """Actor-critic settings; hidden lists of length 2 or 3 give 3-4 dense layers."""

    algorithm: str = "ddpg"
    actor_hidden: List[int] = field(default_factory=lambda: [64, 64])
    critic_hidden: List[int] = field(default_factory=lambda: [64, 64])
    actor_lr: float = 1e-3
    critic_lr: float = 1e-3
    tau: float = 0.005
    exploration_sigma: float = 0.1
    policy_delay: int = 2
    target_noise_sigma: float = 0.2
    target_noise_clip: float = 0.5
    seed: int = 0

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(f"Invalid algorithm: {self.algorithm}. Must be one of {ALGORITHMS}")
        for name in ("actor_hidden", "critic_hidden"):
            sizes = getattr(self, name)
            if len(sizes) not in (2, 3) or any(s <= 0 for s in sizes):
                raise ConfigurationError(f"agent.{name} must list 2 or 3 positive layer sizes")
        if self.actor_lr <= 0 or self.critic_lr <= 0:
            raise ConfigurationError("agent learning rates must be positive")
        if not 0.0 < self.tau <= 1.0:
            raise ConfigurationError("agent.tau must be in (0, 1]")
        if self.exploration_sigma < 0 or self.target_noise_sigma < 0 or self.target_noise_clip < 0:
            raise ConfigurationError("agent noise parameters must be >= 0")
        if self.policy_delay < 1:
            raise ConfigurationError("agent.policy_delay must be >= 1")


@dataclass
class RunConfig(_Section):
    """Experiment runner settings."""

    episodes: int = 300
    seeds: List[int] = field(default_factory=lambda: [0])
    warmup_steps: int = 1000
    updates_per_step: int = 1
    workers: int = 1
    output_dir: str = "output"
    score_bound: float = 1e6
    async_analysis: bool = False
    enable_logging: bool = True
    log_level: str = "INFO"

    def validate(self) -> None:
        if self.episodes < 1:
            raise ConfigurationError("run.episodes must be positive")
        if not self.seeds:
            raise ConfigurationError("run.seeds must not be empty")
        if self.warmup_steps < 0 or self.updates_per_step < 0:
            raise ConfigurationError("run.warmup_steps and run.updates_per_step must be >= 0")
        if self.workers < 1:
            raise ConfigurationError("run.workers must be positive")
        if self.score_bound <= 0:
            raise ConfigurationError("run.score_bound must be positive")
        if self.log_level not in VALID_LOG_LEVELS:
            raise ConfigurationError(f"Invalid log level: {self.log_level}. Must be one of {VALID_LOG_LEVELS}")


SECTIONS = {
    "ticc": TiccConfig,
    "tscf": TscfConfig,
    "causal": CausalConfig,
    "replay": ReplayConfig,
    "curriculum": CurriculumSchedule,
    "env": EnvConfig,
    "agent": AgentConfig,
    "run": RunConfig,
}


@dataclass
class CIERConfig:
    """Complete configuration document mirroring every module's settings."""

    ticc: TiccConfig = field(default_factory=TiccConfig)
    tscf: TscfConfig = field(default_factory=TscfConfig)
    causal: CausalConfig = field(default_factory=CausalConfig)
    replay: ReplayConfig = field(default_factory=ReplayConfig)
    curriculum: CurriculumSchedule = field(default_factory=CurriculumSchedule)
    env: EnvConfig = field(default_factory=EnvConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    run: RunConfig = field(default_factory=RunConfig)

    @classmethod
    def from_file(cls, config_path: str) -> 'CIERConfig':
        """Load configuration from a file (JSON or YAML).

        Args:
            config_path: Path to the configuration file

        Returns:
            CIERConfig instance loaded from file

        Raises:
            ConfigurationError: If file cannot be loaded, parsed or validated
        """
        try:
            path = Path(config_path)
            if not path.exists():
                raise ConfigurationError(f"Configuration file not found: {config_path}")

            with open(path, 'r', encoding='utf-8') as f:
                if path.suffix.lower() in ['.yaml', '.yml']:
                    if not HAS_YAML:
                        raise ConfigurationError(
                            "PyYAML is required for YAML configuration files. Install with: pip install PyYAML")
                    config_data = yaml.safe_load(f) or {}
                else:
                    config_data = json.load(f)

            return cls.from_dict(config_data)

        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON format in configuration file: {e}")
        except ConfigurationError:
            raise
        except Exception as e:
            if HAS_YAML and isinstance(e, yaml.YAMLError):
                raise ConfigurationError(f"Invalid YAML format in configuration file: {e}")
            raise ConfigurationError(f"Error loading configuration file: {e}")

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> 'CIERConfig':
        """Create configuration from a (possibly partial) nested dictionary.

        The document is checked against the JSON schema first, then each section
        is validated semantically.

        Raises:
            ConfigurationError: If configuration is invalid
        """
        from ..evaluators.schema_validator import ConfigSchemaValidator

        result = ConfigSchemaValidator().validate(config_dict)
        if not result.is_valid:
            details = "\n".join(f"  - {e}" for e in result.errors)
            raise ConfigurationError(f"Configuration does not match schema:\n{details}")

        sections = {name: section_cls.from_dict(config_dict.get(name, {}))
                    for name, section_cls in SECTIONS.items()}
        config = cls(**sections)
        config.validate()
        return config

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to a nested dictionary."""
        return {name: getattr(self, name).to_dict() for name in SECTIONS}

    def save_to_file(self, config_path: str, format: str = "json") -> None:
        """Save configuration to a file.

        Raises:
            ConfigurationError: If file cannot be saved
        """
        try:
            path = Path(config_path)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, 'w', encoding='utf-8') as f:
                if format.lower() == "yaml":
                    if not HAS_YAML:
                        raise ConfigurationError("PyYAML is required for YAML format. Install with: pip install PyYAML")
                    yaml.dump(self.to_dict(), f, default_flow_style=False, indent=2)
                else:
                    json.dump(self.to_dict(), f, indent=2)
        except ConfigurationError:
            raise
        except Exception as e:
            raise ConfigurationError(f"Error saving configuration file: {e}")

    def validate(self) -> None:
        """Validate every section plus cross-section constraints."""
        for name in SECTIONS:
            getattr(self, name).validate()
        if self.replay.batch > self.replay.capacity:
            raise ConfigurationError("replay.batch cannot exceed replay.capacity")

    def update(self, **overrides: Any) -> 'CIERConfig':
        """Return a new configuration with dotted-key overrides applied.

        Example:
            ``config.update(**{"replay.mode": "cier", "run.episodes": 50})``
        """
        data = self.to_dict()
        for dotted, value in overrides.items():
            section, _, key = dotted.partition(".")
            if section not in SECTIONS or not key:
                raise ConfigurationError(f"Unknown configuration parameter: {dotted}")
            if key not in {f.name for f in fields(SECTIONS[section])}:
                raise ConfigurationError(f"Unknown configuration parameter: {dotted}")
            data[section][key] = value
        return self.from_dict(data)


def load_default_config() -> CIERConfig:
    """Load default configuration."""
    return CIERConfig()


def load_config_from_env(base: Optional[CIERConfig] = None) -> CIERConfig:
    """Apply ``CIER_*`` environment variables on top of ``base``.

    Invalid values are skipped, as for the other optional sources.
    """
    config = base or CIERConfig()

    env_mappings = {
        "CIER_SEED": ("run.seeds", lambda x: [int(x)]),
        "CIER_EPISODES": ("run.episodes", int),
        "CIER_LOG_LEVEL": ("run.log_level", str.upper),
        "CIER_OUTPUT_DIR": ("run.output_dir", str),
        "CIER_REPLAY_MODE": ("replay.mode", str.lower),
        "CIER_ALGORITHM": ("agent.algorithm", str.lower),
    }

    overrides = {}
    for env_var, (key, converter) in env_mappings.items():
        value = os.getenv(env_var)
        if value is None:
            continue
        try:
            overrides[key] = converter(value)
        except (ValueError, TypeError):
            pass

    if not overrides:
        return config
    return config.update(**overrides)


def create_config_template(filename: str, format: str = "json") -> None:
    """Write the default configuration as an editable template."""
    CIERConfig().save_to_file(filename, format)
