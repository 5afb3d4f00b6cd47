"""Near-orthogonality of random sign vectors on the unit hypersphere.

Vectors have components +-1/sqrt(n), one sign per PRNG bit, so each vector
is ceil(n/64) raw generator words.  The inner product of two such vectors
is (n - 2 * popcount(xor of their sign bits)) / n, which lets the
simulation run on packed words without ever materializing float vectors.

Concentration: for threshold eps(n) = sqrt(5 / sqrt(n)), the probability
that |cos| reaches eps is at most 2 * exp(-sqrt(n) / 2), so high dimensions
drive random vectors toward orthogonality.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .rng import XoshiroLanes, Xoshiro256StarStar, child_seed, splitmix64_stream_np

_CHUNK_ROWS = 1 << 16
_MASK_ALL = (1 << 64) - 1


@dataclass
class OrthoRunSpec:
    """One simulation request: pair counts per dimension, all from one seed."""

    dims: list[int]
    num_pairs: int
    seed: int

    def __post_init__(self):
        if not self.dims:
            raise ValueError("dims must not be empty")
        if any(n < 1 for n in self.dims):
            raise ValueError("dimensions must be >= 1")
        if self.num_pairs < 1:
            raise ValueError(f"num_pairs must be >= 1, got {self.num_pairs}")


@dataclass
class OrthoResult:
    dim: int
    mean_abs_cos: float
    max_abs_cos: float
    frac_exceeding_eps: float  # share of pairs with |cos| >= eps(dim)


def epsilon_threshold(n: int) -> float:
    """Concentration threshold eps(n) = sqrt(5 / sqrt(n))."""
    return math.sqrt(5.0 / math.sqrt(n))


def random_unit_vector(n: int, rng: Xoshiro256StarStar) -> np.ndarray:
    """Unit vector with components +-1/sqrt(n), signs from rng bits.

    Consumes ceil(n/64) words; component i takes bit i % 64 of word i // 64
    (set bit = positive).  The packed simulation reproduces exactly these
    vectors.
    """
    words = [rng.next_u64() for _ in range((n + 63) // 64)]
    scale = 1.0 / math.sqrt(n)
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        bit = (words[i >> 6] >> (i & 63)) & 1
        out[i] = scale if bit else -scale
    return out


def _dim_stats(n: int, num_pairs: int, seed: int) -> OrthoResult:
    """Simulate num_pairs random pairs in dimension n, packed in uint64 words.

    Row r of the word matrix is the bit stream of one vector, seeded so
    that row r equals the words Xoshiro256StarStar(row_seed[r]) would emit;
    pair p uses rows 2p and 2p+1.
    """
    words_per_vec = (n + 63) // 64
    tail_bits = n & 63
    tail_mask = np.uint64((1 << tail_bits) - 1) if tail_bits else np.uint64(_MASK_ALL)
    eps = epsilon_threshold(n)

    rows = 2 * num_pairs
    row_seeds = splitmix64_stream_np(child_seed(seed, n), rows)

    total_abs = 0.0
    max_abs = 0.0
    exceed = 0
    for start in range(0, rows, _CHUNK_ROWS):
        chunk_seeds = row_seeds[start : start + _CHUNK_ROWS]
        words = XoshiroLanes(chunk_seeds).generate(words_per_vec)
        diff = words[0::2] ^ words[1::2]
        diff[:, -1] &= tail_mask
        disagreements = np.bitwise_count(diff).sum(axis=1, dtype=np.int64)
        abs_cos = np.abs((n - 2.0 * disagreements) / n)
        total_abs += float(abs_cos.sum())
        max_abs = max(max_abs, float(abs_cos.max()))
        exceed += int(np.count_nonzero(abs_cos >= eps))

    return OrthoResult(n, total_abs / num_pairs, max_abs, exceed / num_pairs)


def run_ortho_sim(spec: OrthoRunSpec, threads: int = 1) -> list[OrthoResult]:
    """Run the simulation for every dimension in spec.dims, in that order.

    Each dimension gets its own generator substream derived from spec.seed
    (SplitMix64 jump by the dimension), so results per dimension are
    independent of which other dimensions run and of the thread count.
    """
    if threads <= 1 or len(spec.dims) == 1:
        return [_dim_stats(n, spec.num_pairs, spec.seed) for n in spec.dims]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_dim_stats, n, spec.num_pairs, spec.seed) for n in spec.dims]
        return [f.result() for f in futures]
