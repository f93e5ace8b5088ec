"""Staged construction of a strongly K_s^r-saturated spark.

The vertex set is split into ``A1, A2, A3`` and the rest ``B``.  Edges
between ``A1`` and ``B`` complete most edges of ``G[B]``; ``A2`` completes
the edges of ``B`` that contain a bad ``(r-1)``-set and ``A3`` completes most
edges joining a good set to ``A2``.  Whatever is still uncompleted at the
end is patched in directly.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations

from .bootstrap import completes
from .errors import Infeasible, IntegrityViolation, ParameterError
from .hypercore import (
    Hypergraph,
    VertexSet,
    binom,
    colex_combinations,
    contains_clique,
    iter_cliques,
    mask_of,
)
from .randmodel import sample

RICH_SAMPLES = 200


@dataclass(frozen=True)
class SaturationParams:
    n: int
    r: int
    s: int
    p: float
    t: int
    alpha: float
    beta: float
    a1: int
    a2: int
    a3: int
    m: float
    q: float | None
    T: float | None
    lam: int
    delta: float
    c0: float
    c1: float

    def to_json(self) -> dict:
        return asdict(self)


def _log(x: float, base: float) -> float:
    return math.log(x) / math.log(base)


def compute_params(
    n: int,
    r: int,
    s: int,
    p: float,
    c0: float = 1.0,
    c1: float = 1.0,
    delta: float = 0.1,
    *,
    a1: int | None = None,
    a2: int | None = None,
    a3: int | None = None,
) -> SaturationParams:
    """Set sizes and thresholds for the staged construction; logs are base ``alpha``.

    Explicit ``a1``/``a2``/``a3`` replace the formula values, which exceed
    ``n / 2`` unless ``n`` is very large.
    """
    if not 2 <= r < s:
        raise ParameterError(f"need 2 <= r < s, got r={r}, s={s}")
    if not 0.0 < p < 1.0:
        raise ParameterError(f"need 0 < p < 1, got {p}")
    if n < s:
        raise ParameterError(f"need n >= s, got n={n}")
    t = s - r
    alpha = 1.0 / (1.0 - p ** (r - 1))
    beta = 1.0 / (1.0 - p ** (binom(s, r) - binom(s - r, r) - 1))
    log_n = _log(n, alpha)
    loglog = _log(log_n, alpha) if log_n > 0 else 0.0
    if loglog > 0:
        a1_f = log_n * (1 + 3 / loglog) / p
        m = (1 + 2 / loglog) * log_n
    else:
        a1_f = log_n / p
        m = log_n
    a2_f = s * _log(n**r, beta)
    log_a2 = _log(a2_f, alpha)
    a3_f = a2_f / log_a2 ** (1 / r) if log_a2 > 0 else a2_f
    a1 = math.ceil(a1_f) if a1 is None else a1
    a2 = math.ceil(a2_f) if a2 is None else a2
    a3 = math.ceil(a3_f) if a3 is None else a3
    if min(a1, a2, a3) < 1:
        raise ParameterError("set sizes must be positive")
    if t >= r:
        kt1 = binom(t + 1, r) - 1
        q = c1 * a1 ** (-(t + 1 - r) / kt1)
        T = c0 * a1 ** (binom(t, r) * (t + 1 - r) / (kt1 * (t - 1))) * _log(a1, alpha) ** (1 / (t - 1))
    else:
        q = T = None
    lam = binom(t, r) * (binom(t + 1, r) - 1) + 1
    params = SaturationParams(
        n=n, r=r, s=s, p=p, t=t, alpha=alpha, beta=beta, a1=a1, a2=a2, a3=a3,
        m=m, q=q, T=T, lam=lam, delta=delta, c0=c0, c1=c1,
    )
    if a1 + a2 + a3 >= n / 2:
        raise Infeasible(f"a1+a2+a3 = {a1 + a2 + a3} does not fit below n/2 = {n / 2}")
    return params


@dataclass(frozen=True)
class VertexSplit:
    A1: VertexSet
    A2: VertexSet
    A3: VertexSet
    B: VertexSet

    def sizes(self) -> dict[str, int]:
        return {"A1": len(self.A1), "A2": len(self.A2), "A3": len(self.A3), "B": len(self.B)}


def make_split(n: int, params: SaturationParams) -> VertexSplit:
    """Consecutive ranges from vertex 0: ``A1``, then ``A2``, then ``A3``; ``B`` is the rest."""
    a, b, c = params.a1, params.a2, params.a3
    if a + b + c > n:
        raise Infeasible(f"split sizes {a}+{b}+{c} exceed n={n}")
    return VertexSplit(
        tuple(range(0, a)),
        tuple(range(a, a + b)),
        tuple(range(a + b, a + b + c)),
        tuple(range(a + b + c, n)),
    )


@dataclass
class GoodSetIndex:
    """``(r-1)``-subsets of ``B`` with their neighbourhood size in ``A1``."""

    m: float
    entries: dict[VertexSet, tuple[int, bool]] = field(default_factory=dict)

    def good(self, S: VertexSet) -> bool:
        return self.entries[S][1]

    def counts(self) -> tuple[int, int]:
        g = sum(1 for _, ok in self.entries.values() if ok)
        return g, len(self.entries) - g


def classify_sets(G: Hypergraph, split: VertexSplit, m: float) -> GoodSetIndex:
    a1 = mask_of(split.A1)
    idx = G.index
    out = GoodSetIndex(m)
    for S in colex_combinations(split.B, G.r - 1):
        size = (idx.link(S) & a1).bit_count()
        out.entries[S] = (size, size >= m)
    return out


def build_rich_free(Gsub: Hypergraph, t: int, *, empty_below: bool = False) -> Hypergraph:
    """Delete a greedy maximal family of edge-disjoint ``K_{t+1}^r`` copies.

    Copies are scanned in colex order and accepted when all their edges are
    still present.  With ``empty_below`` the result is empty whenever
    ``t < r``.
    """
    r = Gsub.r
    if t < 1:
        raise ParameterError(f"need t >= 1, got {t}")
    if empty_below and t < r:
        return Hypergraph.empty(Gsub.n, r)
    if t + 1 < r:
        return Gsub
    state = Gsub.index.copy()
    for clique in iter_cliques(Gsub, t + 1):
        sub = list(combinations(clique, r))
        if all(f in state.edges for f in sub):
            for f in sub:
                state.discard(f)
    return Hypergraph._trusted(Gsub.n, r, state.edges)


def rich_failures(H: Hypergraph, vertices: VertexSet, t: int, k: int, seed: int,
                  samples: int = RICH_SAMPLES) -> int | None:
    """Sampled ``k``-subsets of ``vertices`` whose induced part lacks ``K_t^r``.

    ``None`` when the check does not apply (``t < r`` or ``k`` out of range).
    """
    if t < H.r or not 1 <= k <= len(vertices):
        return None
    rng = random.Random(seed)
    bad = 0
    for _ in range(samples):
        sub = rng.sample(vertices, k)
        if not contains_clique(H.induced(sub), t):
            bad += 1
    return bad


@dataclass
class StrongBuild:
    H: Hypergraph
    params: SaturationParams
    split: VertexSplit
    index: GoodSetIndex
    stage_edges: list[int]
    rich: dict[str, int | None]


def _check_free(H: Hypergraph, s: int, stage: int) -> None:
    if contains_clique(H, s):
        raise IntegrityViolation(f"stage {stage} produced a copy of K_{s}")


def assemble_strong(G: Hypergraph, params: SaturationParams, split: VertexSplit, seed: int) -> StrongBuild:
    """Three-stage assembly with per-stage freeness checks and diagnostics."""
    r, s, t = G.r, params.s, params.t
    if (G.n, r) != (params.n, params.r):
        raise ParameterError("parameters do not match the host")
    where = [3] * G.n  # 0,1,2 for A1..A3, 3 for B
    for label, part in enumerate((split.A1, split.A2, split.A3)):
        for v in part:
            where[v] = label
    index = classify_sets(G, split, params.m)
    rich_parts = [build_rich_free(G.induced(part), t, empty_below=True)
                  for part in (split.A1, split.A2, split.A3)]

    stages: list[set[VertexSet]] = [set(h.edges) for h in rich_parts]
    for e in G.sorted_edges():
        c = [0, 0, 0, 0]
        for v in e:
            c[where[v]] += 1
        n1, n2, n3, nb = c
        if n1:
            if n1 <= t and nb == r - n1 > 0:
                stages[0].add(e)
        elif n2 >= 2 and not n3:
            if n2 <= t and nb >= 1:
                stages[1].add(e)
        elif n2 == 1 and not n3:
            if nb == r - 1 and not index.good(_drop(e, where)):
                stages[1].add(e)
        elif n3 and not n2:
            if 2 <= n3 <= t and nb >= 1:
                stages[2].add(e)
            elif n3 == 1 and nb == r - 1 and index.good(_drop(e, where)):
                stages[2].add(e)
        elif n2 == 1 and 1 <= n3 <= t:
            stages[2].add(e)

    acc: set[VertexSet] = set()
    counts = []
    for i, edges in enumerate(stages, start=1):
        acc |= edges
        counts.append(len(acc))
        _check_free(Hypergraph._trusted(G.n, r, acc), s, i)
    rich = {}
    for name, h, part, k in (
        ("A1", rich_parts[0], split.A1, math.ceil(params.T) if params.T else 0),
        ("A2", rich_parts[1], split.A2, math.ceil(len(split.A2) ** (1 - params.delta))),
        ("A3", rich_parts[2], split.A3, math.ceil(len(split.A3) ** (1 - params.delta))),
    ):
        rich[name] = rich_failures(h, part, t, k, seed)
    H = Hypergraph._trusted(G.n, r, acc)
    return StrongBuild(H, params, split, index, counts, rich)


def _drop(e: VertexSet, where: list[int]) -> VertexSet:
    """The ``B``-part of an edge with exactly one vertex outside ``B``."""
    return tuple(v for v in e if where[v] == 3)


def build_strong_H(G: Hypergraph, params: SaturationParams, split: VertexSplit, seed: int) -> Hypergraph:
    return assemble_strong(G, params, split, seed).H


def patch_uncompleted(G: Hypergraph, H: Hypergraph, s: int) -> Hypergraph:
    """One colex pass adding every missing edge that cannot be completed at its turn."""
    state = H.index.copy()
    for e in G.sorted_edges():
        if e not in state.edges and completes(state, e, s) is None:
            state.add(e)
    return Hypergraph._trusted(G.n, G.r, state.edges)


def leading_term(n: int, r: int, p: float) -> float:
    alpha = 1.0 / (1.0 - p ** (r - 1))
    return binom(n, r - 1) * _log(n, alpha)


def strong_report(G: Hypergraph, build: StrongBuild, final: Hypergraph, verified: bool) -> dict:
    good, bad = build.index.counts()
    lead = leading_term(G.n, G.r, build.params.p)
    return {
        "params": build.params.to_json(),
        "split": build.split.sizes(),
        "stage_edges": build.stage_edges,
        "good_sets": good,
        "bad_sets": bad,
        "rich_failures": build.rich,
        "patched_edges": len(final) - len(build.H),
        "final_edges": len(final),
        "leading_term": lead,
        "ratio": len(final) / lead if lead else None,
        "verified": verified,
    }


def check_t_inequality(r: int, t: int) -> bool:
    """Exact comparison of the clique-density exponent against ``1 - (r-1)/t``."""
    if r < 3 or t < max(4, r):
        raise ParameterError(f"need r >= 3 and t >= max(4, r), got r={r}, t={t}")
    lhs = Fraction(binom(t, r) * (t + 1 - r), (binom(t + 1, r) - 1) * (t - 1))
    return lhs < 1 - Fraction(r - 1, t)


@dataclass
class PairBoundReport:
    n: int
    r: int
    t: int
    c: float
    rho: float
    bound: float
    seeds: list[int]
    max_counts: list[int]

    @property
    def passed(self) -> list[bool]:
        return [m <= self.bound for m in self.max_counts]

    @property
    def pass_rate(self) -> float:
        return sum(self.passed) / len(self.passed) if self.passed else 1.0

    def to_json(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        d["pass_rate"] = self.pass_rate
        return d


def pair_bound(n: int, r: int, t: int, c: float) -> tuple[float, float]:
    rho = c * n ** (-(t + 1 - r) / (binom(t + 1, r) - 1))
    return rho, 2 * binom(n, t - 2) * rho ** binom(t, r)


def max_pair_count(G: Hypergraph, t: int) -> int:
    """Largest number of ``K_t^r`` copies through a single vertex pair."""
    tally: Counter = Counter()
    for clique in iter_cliques(G, t):
        tally.update(combinations(clique, 2))
    return max(tally.values(), default=0)


def check_pair_clique_bound(n: int, r: int, t: int, c: float, seeds: list[int]) -> PairBoundReport:
    if r < 2 or t < max(4, r):
        raise ParameterError(f"need t >= max(4, r), got r={r}, t={t}")
    rho, bound = pair_bound(n, r, t, c)
    p = min(1.0, rho)
    counts = [max_pair_count(sample(n, r, p, seed), t) for seed in seeds]
    return PairBoundReport(n, r, t, c, rho, bound, list(seeds), counts)
