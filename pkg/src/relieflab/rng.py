"""Platform-independent seeded random streams.

All randomness in the package flows through :class:`SplitMix64`, a 64-bit
counter-based generator (Steele, Lea & Flood, 2014). Each output is the
SplitMix64 finalizer applied to ``seed + i * 0x9E3779B97F4A7C15`` for the
i-th draw, so the stream is a pure function of the seed and can be produced
in vectorized blocks without changing its values.

Derived quantities:

* ``random``: top 53 bits scaled to ``[0, 1)``.
* ``integer``: Lemire's multiply-shift with rejection, exact over Python ints.
* ``normal``: Box-Muller on two consecutive uniforms.
"""

from __future__ import annotations

import hashlib
import math
from collections.abc import Sequence

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_TWO_POW_53 = float(1 << 53)


def _mix(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based 64-bit generator with bit-stable output on every platform."""

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return _mix(self.state)

    def u64_array(self, n: int) -> np.ndarray:
        """Next ``n`` outputs as a uint64 array, identical to ``n`` calls of next_u64."""
        if n <= 0:
            return np.zeros(0, dtype=np.uint64)
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self.state) + steps * np.uint64(GOLDEN_GAMMA)
            out = _mix_array(states)
        self.state = (self.state + n * GOLDEN_GAMMA) & MASK64
        return out

    def random(self, size: int | None = None):
        """Uniform float(s) in ``[0, 1)``."""
        if size is None:
            return (self.next_u64() >> 11) / _TWO_POW_53
        return (self.u64_array(size) >> np.uint64(11)).astype(np.float64) / _TWO_POW_53

    def uniform(self, low: float, high: float, size: int | None = None):
        u = self.random(size)
        return low + (high - low) * u

    def integer(self, bound: int) -> int:
        """Unbiased integer in ``[0, bound)``."""
        if bound <= 0:
            raise ValueError(f"bound must be positive, got {bound}")
        threshold = ((1 << 64) - bound) % bound
        while True:
            product = self.next_u64() * bound
            if (product & MASK64) >= threshold:
                return product >> 64

    def integers(self, bound: int, size: int) -> np.ndarray:
        return np.array([self.integer(bound) for _ in range(size)], dtype=np.int64)

    def normal(self, size: int | None = None):
        """Standard normal variate(s) by Box-Muller (cosine branch only)."""
        n = 1 if size is None else size
        u = self.random(2 * n).reshape(n, 2)
        radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        z = radius * np.cos(2.0 * math.pi * u[:, 1])
        return float(z[0]) if size is None else z

    def choice(self, weights: Sequence[float] | np.ndarray, size: int | None = None):
        """Index draw(s) proportional to non-negative ``weights``."""
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or len(w) == 0 or np.any(w < 0) or w.sum() <= 0:
            raise ValueError("weights must be a non-empty non-negative vector with positive sum")
        cdf = np.cumsum(w)
        cdf /= cdf[-1]
        u = self.random(1 if size is None else size)
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(w) - 1)
        return int(idx[0]) if size is None else idx

    def permutation(self, n: int) -> list[int]:
        """Fisher-Yates shuffle of ``0..n-1``."""
        perm = list(range(n))
        for i in range(n - 1, 0, -1):
            j = self.integer(i + 1)
            perm[i], perm[j] = perm[j], perm[i]
        return perm


def derive_seed(*parts: object) -> int:
    """Stable 63-bit seed from an arbitrary tuple of printable parts.

    The parts are joined with ``|`` and hashed with BLAKE2b (8-byte digest);
    the top bit is cleared so the seed fits a signed 64-bit integer.
    """
    text = "|".join(str(p) for p in parts).encode("utf-8")
    digest = hashlib.blake2b(text, digest_size=8).digest()
    return int.from_bytes(digest, "big") & ((1 << 63) - 1)
