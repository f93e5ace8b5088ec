from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypersat.bootstrap import (
    ActivationTrace,
    closure,
    completes,
    is_strongly_saturated,
    is_weakly_saturated,
    min_sat_bruteforce,
    min_wsat_bruteforce,
    replay_trace,
    uncompleted_edges,
)
from hypersat.errors import FormatError, ParameterError, TooLarge
from hypersat.hypercore import Hypergraph, contains_clique, is_clique, wsat_complete_formula
from hypersat.randmodel import sample

K4 = Hypergraph.complete(4, 3)
K5 = Hypergraph.complete(5, 3)


def random_pair(seed, n=8, p=0.8, q=0.5):
    G = sample(n, 3, p, seed)
    keep = sample(n, 3, q, seed + 10_000)
    return G, Hypergraph(n, 3, G.edges & keep.edges)


def naive_closure(G, H, s):
    """One edge at a time until nothing changes; no link masks."""
    cur = set(H.edges)
    changed = True
    while changed:
        changed = False
        for e in G.sorted_edges():
            if e in cur:
                continue
            for w in combinations(range(G.n), s):
                if set(e) <= set(w) and all(f in cur for f in combinations(w, G.r) if f != e):
                    cur.add(e)
                    changed = True
                    break
    return cur


class TestCompletes:
    def test_examples(self):
        assert completes(K4.without_edges([(0, 1, 2)]), (0, 1, 2), 4) == (0, 1, 2, 3)
        assert completes(Hypergraph.empty(6, 3), (0, 1, 2), 4) is None
        star = Hypergraph(5, 3, [e for e in K5.edges if 4 in e])
        assert completes(star, (0, 1, 2), 4) == (0, 1, 2, 4)

    def test_colex_smallest_witness(self):
        H = Hypergraph.complete(7, 3).without_edges([(0, 1, 2)])
        assert completes(H, (0, 1, 2), 5) == (0, 1, 2, 3, 4)
        H = H.without_edges([(0, 1, 3)])
        assert completes(H, (0, 1, 2), 5) == (0, 1, 2, 4, 5)

    def test_needs_s_above_r(self):
        with pytest.raises(ParameterError):
            completes(K4, (0, 1, 2), 3)


class TestClosure:
    def test_examples(self):
        H3 = K4.without_edges([(1, 2, 3)])
        cl, trace = closure(K4, H3, 4)
        assert cl == K4 and len(trace) == 1
        H2 = Hypergraph(4, 3, [(0, 1, 2), (0, 1, 3)])
        cl, trace = closure(K4, H2, 4)
        assert cl == H2 and len(trace) == 0
        G = sample(9, 3, 0.6, 3)
        cl, trace = closure(G, G, 4)
        assert cl == G and len(trace) == 0

    def test_spark_must_be_inside_host(self):
        with pytest.raises(ParameterError):
            closure(Hypergraph.empty(4, 3), K4, 4)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_matches_naive_fixpoint_and_replays(self, seed):
        G, H = random_pair(seed)
        cl, trace = closure(G, H, 4)
        assert cl.edges == naive_closure(G, H, 4)
        assert replay_trace(H, trace, 4)
        for e, w in trace:
            assert is_clique(G, w)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_monotone_idempotent_schedule_free(self, seed):
        G, H = random_pair(seed)
        _, Hsmall = random_pair(seed, q=0.3)
        Hsmall = Hypergraph(G.n, 3, Hsmall.edges & H.edges)
        cl, _ = closure(G, H, 4)
        assert closure(G, Hsmall, 4)[0].issubgraph(cl)
        again, trace = closure(G, cl, 4)
        assert again == cl and len(trace) == 0
        assert closure(G, H, 4, reverse=True)[0] == cl

    def test_replay_rejects_bad_witness(self):
        H = Hypergraph(4, 3, [(0, 1, 2), (0, 1, 3)])
        bad = ActivationTrace([((0, 2, 3), (0, 1, 2, 3))])
        assert not replay_trace(H, bad, 4)


class TestTraceFormat:
    def test_round_trip(self):
        t = ActivationTrace([((0, 1, 2), (0, 1, 2, 3)), ((1, 2, 3), (0, 1, 2, 3))])
        text = t.dumps()
        assert text == "edge 0 1 2 witness 0 1 2 3\nedge 1 2 3 witness 0 1 2 3\n"
        assert ActivationTrace.loads(text).steps == t.steps
        assert ActivationTrace.from_json(t.to_json()).steps == t.steps
        assert len(ActivationTrace.loads("")) == 0

    @pytest.mark.parametrize("text", ["edge 0 1 2\n", "edg 0 1 witness 0 1 2\n", "edge witness 1\n"])
    def test_rejects(self, text):
        with pytest.raises(FormatError):
            ActivationTrace.loads(text)


class TestSaturation:
    def test_weak_examples(self):
        sparks = [K4.without_edges([e]) for e in K4.edges]
        assert all(is_weakly_saturated(K4, h, 4) for h in sparks)
        assert not is_weakly_saturated(K4, K4, 4)
        _, witness = min_wsat_bruteforce(K5, 4)
        assert len(witness) == 6 and is_weakly_saturated(K5, witness, 4)

    def test_strong_examples(self):
        assert is_strongly_saturated(K4, K4.without_edges([(0, 1, 2)]), 4)
        assert not is_strongly_saturated(K5, Hypergraph.empty(5, 3), 4)
        _, witness = min_sat_bruteforce(K5, 4)
        assert len(witness) == 6 and is_strongly_saturated(K5, witness, 4)
        assert uncompleted_edges(K5, witness, 4) == []

    def test_strong_implies_weak(self):
        for seed in range(20):
            G, H = random_pair(seed, n=7)
            if is_strongly_saturated(G, H, 4):
                assert is_weakly_saturated(G, H, 4)


class TestOracles:
    @pytest.mark.parametrize("n,r,s,value", [(4, 3, 4, 3), (5, 3, 4, 6), (5, 4, 5, 4)])
    def test_complete_hosts(self, n, r, s, value):
        K = Hypergraph.complete(n, r)
        for search, check in ((min_wsat_bruteforce, is_weakly_saturated),
                              (min_sat_bruteforce, is_strongly_saturated)):
            got, witness = search(K, s)
            assert got == value == wsat_complete_formula(n, r, s)
            assert check(K, witness, s)
            assert not contains_clique(witness, s)

    def test_budget(self):
        with pytest.raises(TooLarge):
            min_wsat_bruteforce(Hypergraph.complete(6, 3), 4, budget=19)

    def test_sat_at_least_wsat(self):
        for seed in range(12):
            G = sample(6, 3, 0.7, seed)
            assert min_sat_bruteforce(G, 4)[0] >= min_wsat_bruteforce(G, 4)[0]

    def test_witness_is_minimal_by_exhaustion(self):
        # no spark with one edge fewer is weakly saturated in K_5^3
        value, _ = min_wsat_bruteforce(K5, 4)
        for ids in combinations(K5.sorted_edges(), value - 1):
            assert not is_weakly_saturated(K5, Hypergraph(5, 3, ids), 4)
