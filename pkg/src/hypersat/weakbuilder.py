"""Core-assignment construction of a weakly K_s^r-saturated spark.

Blocks of size ``ell = s - r`` serve as cores.  ``C_0`` is the first block
inducing a clique; the remaining cores are the blocks ``Q`` for which
``C_0 + Q`` induces a clique, in block order.  Every vertex set ``S``
avoiding ``C_0`` with ``1 <= |S| <= r - 1`` is either assigned the first
core compatible with all chains of smaller assigned sets, or is recorded
as not core-definable together with the subset that absorbs it.

Core numbers: ``0`` denotes ``C_0`` and ``j >= 1`` denotes ``cores[j-1]``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .bootstrap import ActivationTrace
from .errors import IntegrityViolation, NoCoreFound, NotFound, ParameterError, TraceFailed
from .hypercore import (
    EdgeIndex,
    Hypergraph,
    VertexSet,
    binom,
    canonical,
    colex_combinations,
    colex_key,
    is_clique,
    mask_of,
    members,
)
from .randmodel import BlockPartition, partition_blocks

MAX_UNIFORMITY = 6


@dataclass(frozen=True)
class NotDefinable:
    """``S`` is absorbed by ``witness``: ``S - witness`` lies in the witness's core."""

    witness: VertexSet


@dataclass
class CorePlan:
    n: int
    r: int
    ell: int
    c0: int
    cores: list[int]
    assignment: dict[VertexSet, int | NotDefinable] = field(default_factory=dict)

    @property
    def part(self) -> BlockPartition:
        return partition_blocks(self.n, self.ell)

    @property
    def s(self) -> int:
        return self.r + self.ell

    def core_block(self, j: int) -> int:
        return self.c0 if j == 0 else self.cores[j - 1]

    def core_vertices(self, j: int) -> VertexSet:
        b = self.core_block(j)
        return tuple(range((b - 1) * self.ell, b * self.ell))

    def core_index(self, S: Iterable[int]) -> int | None:
        """Core number assigned to ``S`` (``0`` for the empty set), else ``None``."""
        S = canonical(S)
        if not S:
            return 0
        val = self.assignment.get(S)
        return val if isinstance(val, int) else None

    def defined(self, S: Iterable[int]) -> bool:
        return self.core_index(S) is not None

    def core_of(self, S: Iterable[int]) -> VertexSet | None:
        j = self.core_index(S)
        return None if j is None else self.core_vertices(j)

    def to_json(self) -> dict:
        entries = []
        for S in sorted(self.assignment, key=lambda t: (len(t), colex_key(t))):
            val = self.assignment[S]
            if isinstance(val, NotDefinable):
                entries.append({"S": list(S), "witness": list(val.witness)})
            else:
                entries.append({"S": list(S), "core": val})
        return {
            "n": self.n,
            "r": self.r,
            "ell": self.ell,
            "c0": self.c0,
            "cores": list(self.cores),
            "assignment": entries,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CorePlan":
        assignment: dict[VertexSet, int | NotDefinable] = {}
        for item in data["assignment"]:
            S = tuple(item["S"])
            if "core" in item:
                assignment[S] = int(item["core"])
            else:
                assignment[S] = NotDefinable(tuple(item["witness"]))
        return cls(
            n=data["n"], r=data["r"], ell=data["ell"], c0=data["c0"],
            cores=list(data["cores"]), assignment=assignment,
        )


class _EdgeChecks:
    """Memoised edge-presence predicates over vertex masks."""

    def __init__(self, G: Hypergraph):
        self.G = G
        self.edges = G.edges
        self._meets: dict[tuple[int, int], bool] = {}
        self._clique: dict[int, bool] = {}

    def meets_all(self, xmask: int, cmask: int) -> bool:
        """Every ``r``-subset of ``xmask`` meeting ``cmask`` is an edge."""
        key = (xmask, cmask)
        hit = self._meets.get(key)
        if hit is None:
            edges = self.edges
            hit = True
            for f in combinations(members(xmask), self.G.r):
                if mask_of(f) & cmask and f not in edges:
                    hit = False
                    break
            self._meets[key] = hit
        return hit

    def clique(self, xmask: int) -> bool:
        hit = self._clique.get(xmask)
        if hit is None:
            hit = is_clique(self.G, members(xmask))
            self._clique[xmask] = hit
        return hit


def _proper_subsets(S: VertexSet) -> Iterator[VertexSet]:
    for k in range(len(S)):
        yield from combinations(S, k)


def _maximal(masks: Iterable[int]) -> frozenset[int]:
    ms = sorted(set(masks), key=lambda m: -m.bit_count())
    keep: list[int] = []
    for m in ms:
        if not any(m | k == k for k in keep):
            keep.append(m)
    return frozenset(keep)


def find_cores(G: Hypergraph, s: int) -> CorePlan:
    """Pick ``C_0``, enumerate the cores and assign a core to every definable set."""
    r, n = G.r, G.n
    if not 2 <= r < s:
        raise ParameterError(f"need 2 <= r < s, got r={r}, s={s}")
    if r > MAX_UNIFORMITY:
        raise ParameterError(f"chain enumeration is capped at r <= {MAX_UNIFORMITY}")
    ell = s - r
    if n < 3 * ell:
        raise ParameterError(f"need n >= 3*(s-r) = {3 * ell}, got n={n}")
    part = partition_blocks(n, ell)
    c0 = next((i for i in part.indices() if is_clique(G, part.block(i))), None)
    if c0 is None:
        raise NoCoreFound("no block induces a clique")
    C0 = part.block(c0)
    cores = [i for i in part.indices() if i != c0 and is_clique(G, C0 + part.block(i))]
    plan = CorePlan(n=n, r=r, ell=ell, c0=c0, cores=cores)
    core_masks = [mask_of(plan.core_vertices(j)) for j in range(len(cores) + 1)]
    c0mask = core_masks[0]
    checks = _EdgeChecks(G)
    outside = tuple(v for v in range(n) if not c0mask >> v & 1)

    # unions of core masks over chains  C_0 = C_{S_0}, C_{S_1}, ..., C_{S_t}  with S_t ⊊ S
    below: dict[VertexSet, frozenset[int]] = {}
    ends: dict[VertexSet, frozenset[int]] = {}

    def unions_below(S: VertexSet) -> frozenset[int]:
        got = below.get(S)
        if got is None:
            acc = [c0mask]
            for A in _proper_subsets(S):
                if A and A in ends:
                    acc.extend(ends[A])
            got = below[S] = _maximal(acc)
        return got

    for size in range(1, r):
        for S in colex_combinations(outside, size):
            smask = mask_of(S)
            witness = None
            for A in sorted((A for A in _proper_subsets(S) if A), key=colex_key):
                j = plan.core_index(A)
                if j is not None and (smask & ~mask_of(A)) & ~core_masks[j] == 0:
                    witness = A
                    break
            if witness is not None:
                plan.assignment[S] = NotDefinable(witness)
                continue
            unions = unions_below(S)
            for j, cmask in enumerate(core_masks):
                if cmask & smask:
                    continue
                if all(
                    checks.meets_all(smask | cmask | u, cmask) and checks.clique(cmask | u)
                    for u in unions
                ):
                    plan.assignment[S] = j
                    ends[S] = frozenset(u | cmask for u in unions)
                    break
            else:
                raise NoCoreFound(f"no core qualifies for S={S}")
    return plan


def validate_plan(G: Hypergraph, plan: CorePlan) -> list[str]:
    """Re-check the plan's structural invariants directly against ``G``."""
    problems = []
    C0 = plan.core_vertices(0)
    if not is_clique(G, C0):
        problems.append("C_0 does not induce a clique")
    if len(set(plan.cores)) != len(plan.cores) or plan.c0 in plan.cores:
        problems.append("core blocks are not distinct")
    for j in range(1, len(plan.cores) + 1):
        if not is_clique(G, C0 + plan.core_vertices(j)):
            problems.append(f"C_0 + C_{j} is not a clique")
    for S, val in plan.assignment.items():
        if set(S) & set(C0):
            problems.append(f"{S} meets C_0")
        if isinstance(val, NotDefinable):
            A = val.witness
            core = plan.core_of(A)
            if not set(A) < set(S) or core is None or not set(S) - set(A) <= set(core):
                problems.append(f"bad not-definable witness {A} for {S}")
            continue
        if set(S) & set(plan.core_vertices(val)):
            problems.append(f"{S} meets its own core")
        for A in _proper_subsets(S):
            j = plan.core_index(A)
            if j is not None and j > val:
                problems.append(f"monotonicity: i({A})={j} > i({S})={val}")
    return problems


def _iter_weak_edges(plan: CorePlan) -> Iterator[VertexSet]:
    r = plan.r
    C0 = plan.core_vertices(0)
    yield from combinations(C0, r)
    for S, val in plan.assignment.items():
        if isinstance(val, NotDefinable):
            continue
        k = r - len(S)
        C = plan.core_vertices(val)
        for part in combinations(C, k):
            yield canonical(S + part)
        if val == 0:
            continue  # with C_S = C_0 the mixed class repeats the edges above
        for a in range(1, k):
            for part in combinations(C, a):
                for part0 in combinations(C0, k - a):
                    yield canonical(S + part + part0)


def build_weak_H(G: Hypergraph, plan: CorePlan) -> Hypergraph:
    """Spark made of the edges inside ``C_0``, the ``S + C'`` edges and the
    ``S + C' + C_0'`` edges."""
    edges = set()
    for e in _iter_weak_edges(plan):
        if e not in G.edges:
            raise IntegrityViolation(f"spark edge {e} is missing from the host")
        edges.add(e)
    return Hypergraph._trusted(G.n, G.r, edges)


def count_weak_upper(n: int, r: int, s: int) -> int:
    if not r < s <= n:
        raise ParameterError(f"need r < s <= n, got n={n}, r={r}, s={s}")
    return binom(n, r) - binom(n - (s - r), r)


# --- auxiliary cores and the structured activation order --------------------


def _chains_below(S: VertexSet, pool: list[VertexSet]) -> Iterator[tuple[VertexSet, ...]]:
    """Strictly increasing chains ``S_0 ⊊ ... ⊊ S_t ⊊ S`` drawn from ``pool``."""
    sset = set(S)
    options = [A for A in pool if set(A) < sset]

    def grow(chain: tuple[VertexSet, ...]) -> Iterator[tuple[VertexSet, ...]]:
        yield chain
        top = set(chain[-1])
        for A in options:
            if top < set(A):
                yield from grow(chain + (A,))

    for A in options:
        yield from grow((A,))


def _defined_subsets(plan: CorePlan, e: VertexSet) -> list[VertexSet]:
    c0 = set(plan.core_vertices(0))
    free = tuple(v for v in e if v not in c0)
    out = []
    for k in range(len(free) + 1):
        for A in combinations(free, k):
            if A != e and plan.defined(A):
                out.append(A)
    return out


def select_auxiliary_core(G: Hypergraph, plan: CorePlan, e: Iterable[int]) -> int:
    """First block usable as the auxiliary core of edge ``e``."""
    e = canonical(e)
    if len(e) != plan.r:
        raise ParameterError(f"edge must have {plan.r} vertices")
    checks = _EdgeChecks(G)
    defined = _defined_subsets(plan, e)
    cmask = {A: mask_of(plan.core_of(A)) for A in defined}
    forbidden = mask_of(e)
    for m in cmask.values():
        forbidden |= m
    configs = set()
    for S in defined:
        for chain in _chains_below(S, defined):
            u = 0
            for A in chain:
                u |= cmask[A]
            base = cmask[S] | u
            configs.add((mask_of(S) | base, mask_of(chain[0]) | base))
    emask = mask_of(e)
    part = plan.part
    for i in part.indices():
        q = mask_of(part.block(i))
        if q & forbidden:
            continue
        # all of e + Q except e itself must be host edges
        if not checks.meets_all(emask | q, q):
            continue
        if all(checks.meets_all(x1 | q, q) and checks.clique(x2 | q) for x1, x2 in configs):
            return i
    raise NotFound(f"no auxiliary core for edge {e}")


def _activate(state: EdgeIndex, trace: ActivationTrace, f: VertexSet, witness: VertexSet) -> None:
    for h in combinations(witness, state.r):
        if h != f and h not in state.edges:
            raise TraceFailed(f"witness {witness} for {f} lacks edge {h}")
    state.add(f)
    trace.append(f, witness)


def proof_trace_activation(G: Hypergraph, plan: CorePlan, H: Hypergraph) -> ActivationTrace:
    """Activate ``E(G) - E(H)`` in the structured order: edges avoiding ``C_0``
    first, each through its auxiliary core, with sub-edges handled by
    increasing ``|S|`` using ``C_0`` or the core of ``S`` as witness."""
    r = plan.r
    C0 = plan.core_vertices(0)
    c0mask = mask_of(C0)
    part = plan.part
    state = H.index.copy()
    trace = ActivationTrace()
    missing = [e for e in G.sorted_edges() if e not in H.edges]
    first = [e for e in missing if not mask_of(e) & c0mask]
    second = [e for e in missing if mask_of(e) & c0mask]
    for batch, with_c0 in ((first, False), (second, True)):
        for e in batch:
            if e in state.edges:
                continue
            try:
                aux = part.block(select_auxiliary_core(G, plan, e))
            except NotFound as exc:
                raise TraceFailed(str(exc)) from exc
            base = mask_of(aux) | (c0mask if with_c0 else 0)
            free = tuple(v for v in e if not c0mask >> v & 1)
            defined = _defined_subsets(plan, e)
            for size in range(len(free) + 1):
                for S in colex_combinations(free, size):
                    if S == e:
                        continue
                    pools = [base]
                    above = [A for A in defined if set(S) < set(A)]
                    for A in above:
                        for chain in _chains_below(A, above):
                            pools.append(base | mask_of(plan.core_of(A)) | _core_union(plan, chain))
                        pools.append(base | mask_of(plan.core_of(A)))
                    smask = mask_of(S)
                    todo = set()
                    for pool in _maximal(pools):
                        for U in combinations(members(pool & ~smask), r - size):
                            todo.add(canonical(S + U))
                    for f in sorted(todo, key=colex_key):
                        if f == e or f in state.edges:
                            continue
                        if f not in G.edges:
                            raise TraceFailed(f"sub-edge {f} of {e} is not a host edge")
                        core = C0 if not S else plan.core_of(S)
                        if core is None or set(core) & set(f):
                            raise TraceFailed(f"sub-edge {f} should already be present")
                        _activate(state, trace, f, canonical(f + core))
            _activate(state, trace, e, canonical(e + aux))
    return trace


def _core_union(plan: CorePlan, chain: Iterable[VertexSet]) -> int:
    u = 0
    for A in chain:
        u |= mask_of(plan.core_of(A))
    return u


# --- extension-property sampling ------------------------------------------


@dataclass
class ExtensionReport:
    requested: int
    checked: int = 0
    skipped: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_extension_property(
    G: Hypergraph, plan: CorePlan, samples: int, seed: int
) -> ExtensionReport:
    """Sample configurations ``(e_0, S, chain, U)`` and check that ``S + U``
    keeps the core of ``S``.

    ``U`` is drawn from the cores of a chain ``S ⊊ S_0 ⊊ ... ⊊ e_0`` of
    assigned sets whose cores differ from that of ``S``, together with the
    auxiliary core of ``e_0``; vertices of ``C_0`` are left out because sets
    meeting ``C_0`` carry no core.
    """
    report = ExtensionReport(requested=samples)
    if samples <= 0:
        return report
    rng = random.Random(seed)
    r = plan.r
    c0mask = mask_of(plan.core_vertices(0))
    edges = G.sorted_edges()
    part = plan.part
    aux_cache: dict[VertexSet, int | None] = {}
    attempts = 0
    while report.checked < samples and attempts < 50 * samples:
        attempts += 1
        e0 = rng.choice(edges)
        if e0 not in aux_cache:
            try:
                aux_cache[e0] = select_auxiliary_core(G, plan, e0)
            except NotFound:
                aux_cache[e0] = None
        aux = aux_cache[e0]
        defined = _defined_subsets(plan, e0)
        bases = [S for S in defined if len(S) <= r - 2]
        if aux is None or not bases:
            report.skipped += 1
            continue
        S = rng.choice(bases)
        jS = plan.core_index(S)
        above = [A for A in defined if set(S) < set(A) and plan.core_index(A) != jS]
        chains = [c for A in above for c in _chains_below(A, above)] + [(A,) for A in above]
        chains = [c for c in chains if set(S) < set(c[0])]
        if not chains:
            report.skipped += 1
            continue
        chain = rng.choice(sorted(set(chains)))
        pool = (_core_union(plan, chain) | mask_of(part.block(aux))) & ~c0mask & ~mask_of(S)
        pool_v = members(pool)
        room = r - 1 - len(S)
        if not pool_v or room < 1:
            report.skipped += 1
            continue
        k = rng.randint(1, min(room, len(pool_v)))
        U = tuple(rng.sample(pool_v, k))
        T = canonical(S + U)
        got = plan.assignment.get(T)
        report.checked += 1
        if got != jS:
            report.violations.append(
                {"edge": list(e0), "S": list(S), "chain": [list(A) for A in chain],
                 "U": sorted(U), "expected": jS,
                 "got": got.witness if isinstance(got, NotDefinable) else got}
            )
    return report
