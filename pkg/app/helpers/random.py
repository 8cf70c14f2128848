import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK = (1 << 64) - 1


class SplitMix64:
    """
    64-bit SplitMix generator.

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z ^= z >> 31

    all modulo 2^64. Uniform doubles are (z >> 11) * 2^-53, so the stream is
    reproducible bit-for-bit on any platform.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & MASK

    def next_int(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self, size: int) -> np.ndarray:
        """`size` doubles in [0, 1)."""
        return np.array(
            [(self.next_int() >> 11) * 2.0**-53 for _ in range(size)], dtype=float
        )
