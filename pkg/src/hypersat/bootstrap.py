"""K_s^r-bootstrap activation: completion, closure, saturation checks and
exhaustive minimum-saturation oracles."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .errors import FormatError, ParameterError, TooLarge
from .hypercore import (
    EdgeIndex,
    Hypergraph,
    VertexSet,
    canonical,
    colex_combinations,
    common_candidates,
    contains_clique,
    extensions,
)

DEFAULT_BUDGET = 22


@dataclass
class ActivationTrace:
    """Ordered activations; each step is ``(edge, witness)`` with ``|witness| = s``."""

    steps: list[tuple[VertexSet, VertexSet]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[tuple[VertexSet, VertexSet]]:
        return iter(self.steps)

    def append(self, edge: VertexSet, witness: VertexSet) -> None:
        self.steps.append((edge, witness))

    def edges(self) -> list[VertexSet]:
        return [e for e, _ in self.steps]

    def dumps(self) -> str:
        return "".join(
            f"edge {' '.join(map(str, e))} witness {' '.join(map(str, w))}\n"
            for e, w in self.steps
        )

    @classmethod
    def loads(cls, text: str) -> "ActivationTrace":
        trace = cls()
        body = text[:-1] if text.endswith("\n") else text
        if not body:
            return trace
        for lineno, line in enumerate(body.split("\n"), start=1):
            words = line.split(" ")
            try:
                mid = words.index("witness")
                if words[0] != "edge":
                    raise ValueError
                edge = tuple(int(x) for x in words[1:mid])
                witness = tuple(int(x) for x in words[mid + 1:])
            except ValueError as exc:
                raise FormatError(f"trace line {lineno}: {line!r}") from exc
            if not edge or not witness:
                raise FormatError(f"trace line {lineno}: empty vertex list")
            trace.append(edge, witness)
        return trace

    def to_json(self) -> list[dict]:
        return [{"edge": list(e), "witness": list(w)} for e, w in self.steps]

    @classmethod
    def from_json(cls, data: list[dict]) -> "ActivationTrace":
        return cls([(tuple(d["edge"]), tuple(d["witness"])) for d in data])


def completes(H: Hypergraph | EdgeIndex, e: Iterable[int], s: int) -> VertexSet | None:
    """Colex-smallest ``s``-set containing ``e`` whose other ``r``-subsets are all in ``H``."""
    idx = H.index if isinstance(H, Hypergraph) else H
    e = canonical(e)
    if s <= idx.r:
        raise ParameterError(f"need s > r, got s={s}, r={idx.r}")
    cand = common_candidates(idx, e)
    t = next(extensions(idx, e, cand, s - idx.r), None)
    if t is None:
        return None
    return tuple(sorted(e + t))


def closure(
    G: Hypergraph, H: Hypergraph, s: int, *, reverse: bool = False
) -> tuple[Hypergraph, ActivationTrace]:
    """Bootstrap closure of ``H`` inside ``G``.

    Batch-synchronous sweeps: every missing edge is tested against the state
    at the start of the sweep, then all completed edges are added together.
    ``reverse`` sweeps in reverse colex order (used to check the fixpoint does
    not depend on scheduling).
    """
    if not H.issubgraph(G):
        raise ParameterError("spark must be a sub-hypergraph of the host")
    if s <= G.r:
        raise ParameterError(f"need s > r, got s={s}, r={G.r}")
    state = H.index.copy()
    missing = [e for e in G.sorted_edges() if e not in state.edges]
    if reverse:
        missing.reverse()
    trace = ActivationTrace()
    while missing:
        found = []
        rest = []
        for e in missing:
            w = completes(state, e, s)
            if w is None:
                rest.append(e)
            else:
                found.append((e, w))
        if not found:
            break
        for e, w in found:
            state.add(e)
            trace.append(e, w)
        missing = rest
    return Hypergraph._trusted(G.n, G.r, state.edges), trace


def replay_trace(H: Hypergraph, trace: ActivationTrace, s: int) -> bool:
    """Check every step's witness against ``H`` plus the preceding steps."""
    state = H.index.copy()
    for e, w in trace:
        if len(w) != s or not set(e) <= set(w) or e in state.edges:
            return False
        if not all(f in state.edges for f in combinations(w, H.r) if f != e):
            return False
        state.add(e)
    return True


def _check_pair(G: Hypergraph, H: Hypergraph) -> None:
    if not H.issubgraph(G):
        raise ParameterError("spark must be a sub-hypergraph of the host")


def is_weakly_saturated(G: Hypergraph, H: Hypergraph, s: int) -> bool:
    _check_pair(G, H)
    if contains_clique(H, s):
        return False
    return len(closure(G, H, s)[0]) == len(G)


def is_strongly_saturated(G: Hypergraph, H: Hypergraph, s: int) -> bool:
    _check_pair(G, H)
    if contains_clique(H, s):
        return False
    idx = H.index
    return all(completes(idx, e, s) is not None for e in G.edges - H.edges)


def uncompleted_edges(G: Hypergraph, H: Hypergraph, s: int) -> list[VertexSet]:
    idx = H.index
    return [e for e in G.sorted_edges() if e not in idx.edges and completes(idx, e, s) is None]


# --- exhaustive oracles ----------------------------------------------------
#
# The oracles deliberately avoid `closure` and `completes`: they precompute,
# for every host edge, the bitmasks (over host-edge positions) of the other
# edges of each K_s^r of the host through it, and run the activation fixpoint
# on those masks.


class _MaskModel:
    def __init__(self, G: Hypergraph, s: int):
        self.edges = G.sorted_edges()
        pos = {e: i for i, e in enumerate(self.edges)}
        self.full = (1 << len(self.edges)) - 1
        self.cliques: list[int] = []
        self.witness_masks: list[list[int]] = [[] for _ in self.edges]
        r = G.r
        for w in combinations(range(G.n), s):
            ids = []
            for f in combinations(w, r):
                i = pos.get(f)
                if i is None:
                    break
                ids.append(i)
            else:
                m = 0
                for i in ids:
                    m |= 1 << i
                self.cliques.append(m)
                for i in ids:
                    self.witness_masks[i].append(m & ~(1 << i))

    def has_clique(self, h: int) -> bool:
        return any(c & h == c for c in self.cliques)

    def weak_closure(self, h: int) -> int:
        changed = True
        while changed:
            changed = False
            for i, masks in enumerate(self.witness_masks):
                if h >> i & 1:
                    continue
                if any(m & h == m for m in masks):
                    h |= 1 << i
                    changed = True
        return h

    def strongly_saturated(self, h: int) -> bool:
        for i, masks in enumerate(self.witness_masks):
            if h >> i & 1:
                continue
            if not any(m & h == m for m in masks):
                return False
        return True

    def to_hypergraph(self, G: Hypergraph, ids: tuple[int, ...]) -> Hypergraph:
        return Hypergraph._trusted(G.n, G.r, (self.edges[i] for i in ids))


def _min_search(G: Hypergraph, s: int, budget: int, strong: bool) -> tuple[int, Hypergraph]:
    if s <= G.r:
        raise ParameterError(f"need s > r, got s={s}, r={G.r}")
    if len(G) > budget:
        raise TooLarge(f"host has {len(G)} edges, budget is {budget}")
    model = _MaskModel(G, s)
    positions = list(range(len(model.edges)))
    for k in range(len(positions) + 1):
        for ids in colex_combinations(positions, k):
            h = 0
            for i in ids:
                h |= 1 << i
            if model.has_clique(h):
                continue
            if strong:
                ok = model.strongly_saturated(h)
            else:
                ok = model.weak_closure(h) == model.full
            if ok:
                return k, model.to_hypergraph(G, ids)
    # unreachable: a maximal K_s-free sub-hypergraph is always saturated
    raise AssertionError("no saturated spark found")


def min_wsat_bruteforce(G: Hypergraph, s: int, budget: int = DEFAULT_BUDGET) -> tuple[int, Hypergraph]:
    """Minimum weakly ``K_s^r``-saturated spark in ``G`` by exhaustive search."""
    return _min_search(G, s, budget, strong=False)


def min_sat_bruteforce(G: Hypergraph, s: int, budget: int = DEFAULT_BUDGET) -> tuple[int, Hypergraph]:
    """Minimum strongly ``K_s^r``-saturated spark in ``G`` by exhaustive search."""
    return _min_search(G, s, budget, strong=True)
