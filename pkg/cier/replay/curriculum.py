"""Curriculum coefficient controlling the causal tilt of replay sampling."""

import math

from ..core.config import CurriculumSchedule
from ..utils.logging import get_logger

logger = get_logger(__name__)


def mu(epsilon_c: float, schedule: CurriculumSchedule) -> float:
    """Quarter-ellipse schedule ``eta * sqrt(eps_m^2 - eps_c^2) / eps_m``.

    Equals ``eta`` at episode 0 and 0 at ``epsilon_m``. Out-of-range ``epsilon_c``
    is clamped to ``[0, epsilon_m]`` with a warning.
    """
    epsilon_m = float(schedule.epsilon_m)
    if epsilon_c < 0 or epsilon_c > epsilon_m:
        clamped = min(max(float(epsilon_c), 0.0), epsilon_m)
        logger.warning("epsilon_c=%s outside [0, %s]; clamped to %s", epsilon_c, schedule.epsilon_m, clamped)
        epsilon_c = clamped
    epsilon_c = float(epsilon_c)
    return schedule.eta * (math.sqrt(epsilon_m * epsilon_m - epsilon_c * epsilon_c) / epsilon_m)
