from typing import Optional, Tuple, Union

import numpy as np

_U64 = 2**64

Shape = Union[int, Tuple[int, ...]]


def _check_u64(name: str, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if not 0 <= value < _U64:
        raise ValueError(f"{name} must be a 64-bit unsigned integer, got {value}")
    return value


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic 64-bit child seed addressed by ``keys`` (sweep point, curve, ...)."""
    seed = _check_u64("seed", seed)
    keys = tuple(_check_u64("key", k) for k in keys)
    state = np.random.SeedSequence(seed, spawn_key=keys).generate_state(1, np.uint64)
    return int(state[0])


class Rng:
    """
    Counter-based random stream addressed by ``(seed, stream_id)``.

    Each Monte Carlo trial owns its own stream, so a trial can be replayed
    in isolation and results do not depend on how trials are spread over
    worker threads.
    """

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = _check_u64("seed", seed)
        self.stream_id = _check_u64("stream_id", stream_id)
        self._generator: Optional[np.random.Generator] = None

    def __repr__(self):
        return f"Rng(seed={self.seed}, stream_id={self.stream_id})"

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
            self._generator = np.random.Generator(np.random.Philox(sequence))
        return self._generator

    def standard_normal(self, size: Shape) -> np.ndarray:
        return self.generator.standard_normal(size)

    def normal(self, loc: float, scale: float, size: Shape) -> np.ndarray:
        return self.generator.normal(loc, scale, size)

    def uniform(self, low: float, high: float, size: Shape) -> np.ndarray:
        return self.generator.uniform(low, high, size)
