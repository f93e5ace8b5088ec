"""Uniform hypergraphs, colex edge codec, clique search and the ``.hg`` format.

Vertices are the integers ``0..n-1`` (0-based).  An edge is stored as the
strictly increasing tuple of its vertices.  Vertex sets used as search state
are packed into Python ints (bit ``v`` set iff vertex ``v`` is present).
"""

from __future__ import annotations

import re
from collections import Counter
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import FormatError, ParameterError

VertexSet = tuple[int, ...]
EdgeId = int


def binom(a: int, b: int) -> int:
    """Binomial coefficient that is 0 whenever ``a < b`` or either is negative."""
    if a < 0 or b < 0 or a < b:
        return 0
    return comb(a, b)


def colex_key(vertices: Iterable[int]) -> int:
    """Sort key realising colex order on finite sets of any size."""
    key = 0
    for v in vertices:
        key |= 1 << v
    return key


def mask_of(vertices: Iterable[int]) -> int:
    return colex_key(vertices)


def members(mask: int) -> VertexSet:
    """Vertices of a bitmask, increasing."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def colex_combinations(items: Sequence, k: int) -> Iterator[tuple]:
    """Yield the ``k``-subsets of ``items`` (assumed increasing) in colex order."""
    if k == 0:
        yield ()
        return
    for top in range(k - 1, len(items)):
        last = items[top]
        for head in colex_combinations(items[:top], k - 1):
            yield head + (last,)


def _check_subset(n: int, r: int, e: Sequence[int]) -> None:
    if len(e) != r:
        raise ParameterError(f"expected {r} vertices, got {len(e)}")
    for a, b in zip(e, e[1:]):
        if a >= b:
            raise ParameterError(f"vertex set {tuple(e)} is not strictly increasing")
    if e and (e[0] < 0 or e[-1] >= n):
        raise ParameterError(f"vertex set {tuple(e)} out of range for n={n}")


def rank_edge(n: int, r: int, e: Sequence[int]) -> EdgeId:
    """Colex rank of the sorted ``r``-subset ``e`` of ``{0..n-1}``."""
    _check_subset(n, r, e)
    return sum(comb(c, i) for i, c in enumerate(e, start=1))


def unrank_edge(n: int, r: int, rank: EdgeId) -> VertexSet:
    """Inverse of :func:`rank_edge`."""
    if not 0 <= rank < binom(n, r):
        raise ParameterError(f"rank {rank} outside [0, C({n},{r}))")
    out = []
    c = n - 1
    for i in range(r, 0, -1):
        while comb(c, i) > rank:
            c -= 1
        out.append(c)
        rank -= comb(c, i)
        c -= 1
    return tuple(reversed(out))


def canonical(e: Iterable[int]) -> VertexSet:
    return tuple(sorted(e))


class EdgeIndex:
    """Mutable edge set plus link masks ``R -> {v : R + v is an edge}``.

    ``R`` ranges over sorted ``(r-1)``-tuples.  This is the working state
    of every search and activation loop; :class:`Hypergraph` values hand
    out copies of it and never mutate their own.
    """

    __slots__ = ("n", "r", "edges", "links")

    def __init__(self, n: int, r: int, edges: Iterable[VertexSet] = ()):
        self.n = n
        self.r = r
        self.edges: set[VertexSet] = set()
        self.links: dict[VertexSet, int] = {}
        for e in edges:
            self.add(e)

    def add(self, e: VertexSet) -> bool:
        if e in self.edges:
            return False
        self.edges.add(e)
        links = self.links
        for i, v in enumerate(e):
            key = e[:i] + e[i + 1:]
            links[key] = links.get(key, 0) | (1 << v)
        return True

    def discard(self, e: VertexSet) -> None:
        if e not in self.edges:
            return
        self.edges.remove(e)
        for i, v in enumerate(e):
            key = e[:i] + e[i + 1:]
            self.links[key] &= ~(1 << v)

    def link(self, key: VertexSet) -> int:
        return self.links.get(key, 0)

    def __contains__(self, e) -> bool:
        return e in self.edges

    def __len__(self) -> int:
        return len(self.edges)

    def copy(self) -> "EdgeIndex":
        other = EdgeIndex.__new__(EdgeIndex)
        other.n, other.r = self.n, self.r
        other.edges = set(self.edges)
        other.links = dict(self.links)
        return other


class Hypergraph:
    """An immutable ``r``-uniform hypergraph on vertex set ``{0..n-1}``.

    Edges may be given in any vertex order; they are stored canonically
    (sorted).  Repeated edges collapse.  Iteration yields edges in colex
    order.
    """

    __slots__ = ("n", "r", "_edges", "_index", "_sorted")

    def __init__(self, n: int, r: int, edges: Iterable[Iterable[int]] = ()):
        if r < 2:
            raise ParameterError(f"uniformity must be >= 2, got {r}")
        if n < 0:
            raise ParameterError(f"vertex count must be >= 0, got {n}")
        canon = set()
        for e in edges:
            t = canonical(e)
            _check_subset(n, r, t)
            canon.add(t)
        self.n = n
        self.r = r
        self._edges = frozenset(canon)
        self._index: EdgeIndex | None = None
        self._sorted: tuple[VertexSet, ...] | None = None

    @classmethod
    def complete(cls, n: int, r: int) -> "Hypergraph":
        return cls(n, r, combinations(range(n), r))

    @classmethod
    def empty(cls, n: int, r: int) -> "Hypergraph":
        return cls(n, r)

    @classmethod
    def _trusted(cls, n: int, r: int, edges: Iterable[VertexSet]) -> "Hypergraph":
        # Skips validation; callers guarantee canonical in-range edges.
        h = cls.__new__(cls)
        h.n, h.r = n, r
        h._edges = frozenset(edges)
        h._index = None
        h._sorted = None
        return h

    @property
    def edges(self) -> frozenset[VertexSet]:
        return self._edges

    @property
    def index(self) -> EdgeIndex:
        """Shared read-only link index; call ``.copy()`` before mutating."""
        if self._index is None:
            self._index = EdgeIndex(self.n, self.r, self._edges)
        return self._index

    def sorted_edges(self) -> tuple[VertexSet, ...]:
        if self._sorted is None:
            self._sorted = tuple(sorted(self._edges, key=colex_key))
        return self._sorted

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.sorted_edges())

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, e) -> bool:
        return canonical(e) in self._edges

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.n, self.r, self._edges) == (other.n, other.r, other._edges)

    def __hash__(self) -> int:
        return hash((self.n, self.r, self._edges))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, r={self.r}, m={len(self)})"

    def issubgraph(self, other: "Hypergraph") -> bool:
        return self.n == other.n and self.r == other.r and self._edges <= other._edges

    def with_edges(self, extra: Iterable[Iterable[int]]) -> "Hypergraph":
        return Hypergraph(self.n, self.r, list(self._edges) + [canonical(e) for e in extra])

    def without_edges(self, removed: Iterable[Iterable[int]]) -> "Hypergraph":
        gone = {canonical(e) for e in removed}
        return Hypergraph._trusted(self.n, self.r, self._edges - gone)

    def induced(self, vertices: Iterable[int]) -> "Hypergraph":
        """Sub-hypergraph on the same vertex ids keeping edges inside ``vertices``."""
        keep = set(vertices)
        return Hypergraph._trusted(
            self.n, self.r, (e for e in self._edges if keep.issuperset(e))
        )

    def degrees(self) -> Counter:
        return Counter(v for e in self._edges for v in e)


def _as_index(h: Hypergraph | EdgeIndex) -> EdgeIndex:
    return h.index if isinstance(h, Hypergraph) else h


def common_candidates(h: Hypergraph | EdgeIndex, base: Sequence[int]) -> int:
    """Mask of vertices ``u`` outside ``base`` with ``R + u`` an edge for every
    ``(r-1)``-subset ``R`` of ``base``."""
    idx = _as_index(h)
    cand = ((1 << idx.n) - 1) & ~mask_of(base)
    for key in combinations(base, idx.r - 1):
        cand &= idx.link(key)
        if not cand:
            break
    return cand


def extensions(
    h: Hypergraph | EdgeIndex, base: Sequence[int], cand: int, k: int
) -> Iterator[VertexSet]:
    """Yield ``k``-sets ``T`` (colex order) such that every ``r``-subset of
    ``base + T`` that meets ``T`` is an edge.

    ``cand`` must already be restricted to :func:`common_candidates` of
    ``base``.  Edges inside ``base`` itself are not inspected.
    """
    idx = _as_index(h)
    r = idx.r
    link = idx.link

    def grow(chosen: list[int], cand: int, k: int) -> Iterator[VertexSet]:
        if k == 0:
            yield tuple(reversed(chosen))
            return
        if cand.bit_count() < k:
            return
        rest = cand >> (k - 1) << (k - 1)  # the largest element is >= k-1
        ctx = list(base) + chosen
        while rest:
            low = rest & -rest
            rest ^= low
            v = low.bit_length() - 1
            below = cand & (low - 1)
            if k > 1:
                for part in combinations(ctx, r - 2):
                    below &= link(tuple(sorted(part + (v,))))
                    if not below:
                        break
                if below.bit_count() < k - 1:
                    continue
            chosen.append(v)
            yield from grow(chosen, below, k - 1)
            chosen.pop()

    yield from grow([], cand, k)


def is_clique(h: Hypergraph | EdgeIndex, vertices: Iterable[int]) -> bool:
    """True iff every ``r``-subset of ``vertices`` is an edge (vacuous below ``r``)."""
    idx = _as_index(h)
    w = canonical(vertices)
    return all(e in idx.edges for e in combinations(w, idx.r))


def iter_cliques(h: Hypergraph | EdgeIndex, k: int) -> Iterator[VertexSet]:
    """All ``k``-vertex sets inducing a complete sub-hypergraph, colex order."""
    idx = _as_index(h)
    return extensions(idx, (), (1 << idx.n) - 1, k)


def contains_clique(h: Hypergraph | EdgeIndex, s: int) -> bool:
    """True iff some ``s``-set of vertices induces ``K_s^r``."""
    idx = _as_index(h)
    r = idx.r
    if s < r:
        return idx.n >= s
    need = binom(s - 1, r - 1)
    deg = Counter(v for e in idx.edges for v in e)
    # a vertex of a K_s^r lies in C(s-1, r-1) of its edges
    cand = mask_of(v for v, d in deg.items() if d >= need)
    return next(extensions(idx, (), cand, s), None) is not None


def count_cliques_through_pair(h: Hypergraph | EdgeIndex, t: int, u: int, v: int) -> int:
    """Number of ``t``-cliques containing both ``u`` and ``v``."""
    if u == v:
        raise ParameterError("u and v must differ")
    idx = _as_index(h)
    base = (min(u, v), max(u, v))
    if t < 2 or not is_clique(idx, base):
        return 0
    cand = common_candidates(idx, base)
    return sum(1 for _ in extensions(idx, base, cand, t - 2))


def wsat_complete_formula(n: int, r: int, s: int) -> int:
    """Weak saturation number of ``K_s^r`` in ``K_n^r``."""
    if not 2 <= r < s <= n:
        raise ParameterError(f"need 2 <= r < s <= n, got n={n}, r={r}, s={s}")
    return binom(n, r) - binom(n - s + r, r)


# --- .hg text format -------------------------------------------------------

_INTS = re.compile(r"(?:0|[1-9][0-9]*)(?: (?:0|[1-9][0-9]*))*")


def dumps(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.r} {len(h)}"]
    lines.extend(" ".join(map(str, e)) for e in h.sorted_edges())
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int) -> list[int]:
    if not _INTS.fullmatch(line):
        raise FormatError(f"line {lineno}: malformed integer list {line!r}")
    return [int(x) for x in line.split(" ")]


def loads(text: str) -> Hypergraph:
    """Parse the ``.hg`` format, rejecting any deviation from canonical form."""
    body = text[:-1] if text.endswith("\n") else text
    lines = body.split("\n")
    header = _ints(lines[0], 1)
    if len(header) != 3:
        raise FormatError("line 1: header must be 'n r m'")
    n, r, m = header
    if r < 2:
        raise FormatError(f"line 1: uniformity {r} < 2")
    if len(lines) != m + 1:
        raise FormatError(f"expected {m} edge lines, found {len(lines) - 1}")
    edges = []
    prev = -1
    for lineno, line in enumerate(lines[1:], start=2):
        e = _ints(line, lineno)
        if len(e) != r:
            raise FormatError(f"line {lineno}: edge has {len(e)} vertices, expected {r}")
        if any(a >= b for a, b in zip(e, e[1:])) or e[-1] >= n:
            raise FormatError(f"line {lineno}: vertices not increasing or out of range")
        rank = rank_edge(n, r, e)
        if rank <= prev:
            raise FormatError(f"line {lineno}: edges not in strictly increasing colex order")
        prev = rank
        edges.append(tuple(e))
    return Hypergraph._trusted(n, r, edges)


def write_hg(path: str | Path, h: Hypergraph) -> None:
    Path(path).write_bytes(dumps(h).encode("ascii"))


def read_hg(path: str | Path) -> Hypergraph:
    data = Path(path).read_bytes()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise FormatError("non-ASCII bytes in .hg file") from exc
    return loads(text)
