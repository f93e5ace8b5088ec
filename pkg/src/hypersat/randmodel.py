"""Seeded binomial random hypergraphs and the block partition.

Generator: SplitMix64.  The draw deciding the edge of colex rank ``k`` is
the ``(k+1)``-th SplitMix64 output for the seed, i.e.
``mix64(seed + (k + 1) * 0x9E3779B97F4A7C15 mod 2**64)``, mapped to a
double in ``[0, 1)`` as ``(x >> 11) * 2**-53``.  The edge is kept iff the
double is ``< p``.  Because each rank owns a fixed draw, samples at
``p1 < p2`` with the same seed are nested.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NotFound, ParameterError
from .hypercore import Hypergraph, VertexSet, binom

GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """SplitMix64 output function (scalar reference)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def uniforms(seed: int, count: int) -> np.ndarray:
    """The first ``count`` SplitMix64 draws for ``seed`` as doubles in [0, 1)."""
    if not 0 <= seed <= _MASK64:
        raise ParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
    with np.errstate(over="ignore"):
        k = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(seed) + k * np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def sample(n: int, r: int, p: float, seed: int) -> Hypergraph:
    """Draw ``G^r(n, p)``: each ``r``-subset kept independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    if not 2 <= r <= n:
        raise ParameterError(f"need 2 <= r <= n, got n={n}, r={r}")
    total = binom(n, r)
    keep = uniforms(seed, total) < p
    # combinations() is lex order; sorting reversed tuples puts them in colex order
    subsets = sorted(combinations(range(n), r), key=lambda e: e[::-1])
    return Hypergraph._trusted(n, r, (e for e, k in zip(subsets, keep.tolist()) if k))


@dataclass(frozen=True)
class BlockPartition:
    """Consecutive blocks ``Q_1..Q_N`` of size ``ell``; unused vertices in ``leftover``.

    Block indices are 1-based throughout the package.
    """

    n: int
    ell: int
    blocks: tuple[VertexSet, ...]
    leftover: VertexSet

    def __len__(self) -> int:
        return len(self.blocks)

    def block(self, i: int) -> VertexSet:
        return self.blocks[i - 1]

    def indices(self) -> range:
        return range(1, len(self.blocks) + 1)


def partition_blocks(n: int, ell: int) -> BlockPartition:
    if not 1 <= ell <= n:
        raise ParameterError(f"need 1 <= ell <= n, got n={n}, ell={ell}")
    count = n // ell
    blocks = tuple(tuple(range(i * ell, (i + 1) * ell)) for i in range(count))
    return BlockPartition(n, ell, blocks, tuple(range(count * ell, n)))


def block_extends(G: Hypergraph, block: VertexSet, S: VertexSet) -> bool:
    """Every edge inside ``block + S`` that meets ``block`` is present in ``G``."""
    inside = set(block)
    if inside & set(S):
        return False
    pool = sorted(inside | set(S))
    return all(e in G.edges for e in combinations(pool, G.r) if inside.intersection(e))


def find_block(
    G: Hypergraph, part: BlockPartition, S: VertexSet, exclude: frozenset[int] | set[int] = frozenset()
) -> int:
    """Smallest block index outside ``exclude`` that is disjoint from ``S`` and
    whose edges towards ``S`` are all present in ``G``."""
    for i in part.indices():
        if i in exclude:
            continue
        if block_extends(G, part.block(i), S):
            return i
    raise NotFound(f"no block extends {tuple(S)}")

