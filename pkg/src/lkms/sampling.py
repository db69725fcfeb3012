"""Platform-independent probe sampling.

SplitMix64 with its published constants drives every random probe, so
reports are byte-identical across machines for a given seed.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = int(seed) & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal(self) -> float:
        # Box-Muller, one variate per call
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        return float(np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2))

    def unit_vector3(self) -> np.ndarray:
        while True:
            v = np.array([self.normal(), self.normal(), self.normal()])
            n = float(np.sqrt(v @ v))
            if n > 1e-12:
                return v / n


DEFAULT_MAGNITUDES = (0.5, 1.0, 3.0)


def default_shell_samples(m: float, seed: int = 0, n_random: int = 20, magnitudes=DEFAULT_MAGNITUDES) -> np.ndarray:
    """Probe momenta: 0 (massive only), +-e_i, then random directions at several magnitudes."""
    samples = []
    if m > 0:
        samples.append(np.zeros(3))
    for i in range(3):
        for sign in (1.0, -1.0):
            v = np.zeros(3)
            v[i] = sign
            samples.append(v)
    rng = SplitMix64(seed)
    for _ in range(n_random):
        d = rng.unit_vector3()
        samples.extend(mag * d for mag in magnitudes)
    return np.array(samples)
