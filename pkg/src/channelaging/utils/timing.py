import logging
import time
from typing import Dict

logger = logging.getLogger(__name__)


class Timer:
    """Wall-clock phases of a scenario run; each call closes the phase opened by the previous one."""

    def __init__(self):
        self.reset()

    def reset(self):
        self.started = self.previous_time = time.perf_counter()
        self.phases: Dict[str, float] = {}

    def __call__(self, phase: str):
        if phase in self.phases:
            logger.warning("Phase '%s' already timed", phase)
            return
        now = time.perf_counter()
        self.phases[phase] = 1000.0 * (now - self.previous_time)
        logger.debug("%s: %.1f ms", phase, self.phases[phase])
        self.previous_time = now

    @property
    def total_ms(self) -> float:
        return 1000.0 * (self.previous_time - self.started)

    def summary(self) -> str:
        parts = ", ".join(f"{phase} {ms:.1f} ms" for phase, ms in self.phases.items())
        return f"{parts}; total {self.total_ms:.1f} ms"
