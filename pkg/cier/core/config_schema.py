"""JSON schema (Draft 7) for the CIER configuration document.

Documented field by field in ``docs/CONFIGURATION.md``. The schema checks types and
enumerations; range rules live in each section's ``validate()``.
"""

from typing import Any, Dict

_INT = {"type": "integer"}
_NUM = {"type": "number"}
_BOOL = {"type": "boolean"}
_OPT_INT = {"type": ["integer", "null"]}


def _section(properties: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "object", "properties": properties}


CONFIG_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "CIER configuration",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "ticc": _section({
            "window": _INT,
            "beta": _NUM,
            "sparsity_lambda": _NUM,
            "max_em_iters": _INT,
            "admm_iters": _INT,
            "tol": _NUM,
            "rho": _NUM,
            "target_segment_length": _INT,
            "k_min": _INT,
            "k_max": _INT,
            "normalize": _BOOL,
            "seed": _INT,
        }),
        "tscf": _section({
            "max_iters": _INT,
            "sakoe_chiba_radius": _OPT_INT,
            "k_prime": _OPT_INT,
            "min_segment_length": _OPT_INT,
            "seed": _INT,
        }),
        "causal": _section({
            "alpha": _NUM,
            "max_sepset_size": _INT,
            "restarts": _INT,
            "path_aggregation": {"enum": ["sum", "product"]},
            "min_samples_per_node": _INT,
            "seed": _INT,
        }),
        "replay": _section({
            "capacity": _INT,
            "temp_capacity": _INT,
            "batch": _INT,
            "mode": {"enum": ["uniform", "per", "cier", "ciper"]},
            "lambda_u": _NUM,
            "per_alpha": _NUM,
            "per_beta": _NUM,
            "per_beta_final": _NUM,
            "per_epsilon": _NUM,
            "td_coeff": _NUM,
            "causal_coeff": _NUM,
            "seed": _INT,
        }),
        "curriculum": _section({
            "epsilon_m": _INT,
            "eta": _NUM,
        }),
        "env": _section({
            "name": {"enum": ["planted_factor", "lane_world"]},
            "max_steps": _INT,
            "gamma": _NUM,
            "reward_a": _NUM,
            "reward_b": _NUM,
            "v_min": _NUM,
            "v_max": _NUM,
            "n_obstacles": _INT,
            "n_lanes": _INT,
            "motif_length": _INT,
            "delay": _INT,
            "pulse": _NUM,
            "noise_sigma": _NUM,
            "motif_tolerance": _NUM,
        }),
        "agent": _section({
            "algorithm": {"enum": ["ddpg", "td3"]},
            "actor_hidden": {"type": "array", "items": _INT},
            "critic_hidden": {"type": "array", "items": _INT},
            "actor_lr": _NUM,
            "critic_lr": _NUM,
            "tau": _NUM,
            "exploration_sigma": _NUM,
            "policy_delay": _INT,
            "target_noise_sigma": _NUM,
            "target_noise_clip": _NUM,
            "seed": _INT,
        }),
        "run": _section({
            "episodes": _INT,
            "seeds": {"type": "array", "items": _INT, "minItems": 1},
            "warmup_steps": _INT,
            "updates_per_step": _INT,
            "workers": _INT,
            "output_dir": {"type": "string"},
            "score_bound": _NUM,
            "async_analysis": _BOOL,
            "enable_logging": _BOOL,
            "log_level": {"enum": ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]},
        }),
    },
}
