"""Deterministic pseudo-random generation.

All randomness in the package flows through one scheme: a 64-bit seed is
expanded by SplitMix64 into xoshiro256** state, and independent substreams
are derived by jumping the SplitMix64 state by a fixed key before expanding.
No call ever touches OS entropy, so equal seeds give equal results on every
platform.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def _mix64(z: int) -> int:
    """SplitMix64 output function on a 64-bit state value."""
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def splitmix64_next(state: int) -> tuple[int, int]:
    """Advance a SplitMix64 state by one step, returning (new_state, output)."""
    state = (state + GAMMA) & MASK64
    return state, _mix64(state)


def splitmix64_stream(seed: int, count: int) -> list[int]:
    """First `count` outputs of SplitMix64 seeded with `seed`."""
    state = seed & MASK64
    out = []
    for _ in range(count):
        state, value = splitmix64_next(state)
        out.append(value)
    return out


def child_seed(seed: int, key: int) -> int:
    """Seed for an independent substream: jump SplitMix64 by `key` steps.

    A SplitMix64 jump is a constant-time state addition, so this is the
    output one step past state `seed + key * GAMMA`.  Distinct keys give
    distinct states and therefore distinct outputs (the output function is
    a bijection).
    """
    state = (seed + key * GAMMA) & MASK64
    return splitmix64_next(state)[1]


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """Scalar xoshiro256** generator with SplitMix64 seed expansion."""

    def __init__(self, seed: int):
        self.s = splitmix64_stream(seed, 4)

    def next_u64(self) -> int:
        s0, s1, s2, s3 = self.s
        result = (_rotl((s1 * 5) & MASK64, 7) * 9) & MASK64
        t = (s1 << 17) & MASK64
        s2 ^= s0
        s3 ^= s1
        s1 ^= s2
        s0 ^= s3
        s2 ^= t
        s3 = _rotl(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def random(self) -> float:
        """Uniform float64 in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) without modulo bias (rejection sampling)."""
        if n <= 0:
            raise ValueError("below() requires n >= 1")
        threshold = ((1 << 64) // n) * n
        while True:
            r = self.next_u64()
            if r < threshold:
                return r % n

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates shuffle."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample_indices(self, n: int, k: int) -> list[int]:
        """First k entries of a partial Fisher-Yates shuffle of range(n).

        Draws k distinct indices; only k swap positions are visited so the
        cost is O(n + k) and the draw order is well defined.
        """
        if not 0 <= k <= n:
            raise ValueError(f"cannot sample {k} of {n} indices")
        arr = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            arr[i], arr[j] = arr[j], arr[i]
        return arr[:k]


# -- vectorized variant -------------------------------------------------------

_U64 = np.uint64


def _mix64_np(z: np.ndarray) -> np.ndarray:
    # Same finalizer as _mix64; uint64 arithmetic wraps, matching mod 2^64.
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


def splitmix64_stream_np(seed: int, count: int) -> np.ndarray:
    """Vectorized equivalent of splitmix64_stream (output i depends only on i)."""
    steps = np.arange(1, count + 1, dtype=_U64)
    states = _U64(seed & MASK64) + steps * _U64(GAMMA)
    return _mix64_np(states)


def _rotl_np(x: np.ndarray, k: int) -> np.ndarray:
    return (x << _U64(k)) | (x >> _U64(64 - k))


class XoshiroLanes:
    """Many parallel xoshiro256** streams advanced in lockstep.

    Lane i produces exactly the stream of Xoshiro256StarStar(seeds[i]); the
    scalar class is the reference, this one exists for speed.
    """

    def __init__(self, seeds: np.ndarray):
        seeds = np.asarray(seeds, dtype=_U64)
        steps = np.arange(1, 5, dtype=_U64)
        states = seeds[:, None] + steps[None, :] * _U64(GAMMA)
        expanded = _mix64_np(states)
        self.s = [expanded[:, i].copy() for i in range(4)]

    def next_words(self) -> np.ndarray:
        """One output word per lane."""
        s0, s1, s2, s3 = self.s
        result = _rotl_np(s1 * _U64(5), 7) * _U64(9)
        t = s1 << _U64(17)
        s2 = s2 ^ s0
        s3 = s3 ^ s1
        s1 = s1 ^ s2
        s0 = s0 ^ s3
        s2 = s2 ^ t
        s3 = _rotl_np(s3, 45)
        self.s = [s0, s1, s2, s3]
        return result

    def generate(self, count: int) -> np.ndarray:
        """(lanes, count) matrix of output words, column j from step j."""
        out = np.empty((self.s[0].shape[0], count), dtype=_U64)
        for j in range(count):
            out[:, j] = self.next_words()
        return out
