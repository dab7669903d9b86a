import itertools
from fractions import Fraction

import numpy as np
import pytest

from conftest import fresh_rng, random_stream
from qmcstream import estimator as est
from qmcstream.graph import EdgeStream, WeightedEdge, WeightedGraph, max_incident_sum, total_weight
from qmcstream.rng import substream

E = WeightedEdge


def stream(n, *triples):
    return EdgeStream(n, tuple(E(u, v, Fraction(w)) for u, v, w in triples))


class TestReservoirReference:
    def test_first_edge_always_kept(self):
        r = est.ReservoirState()
        r.process_edge(E(0, 1, Fraction(3)), fresh_rng(60))
        assert r.candidate == E(0, 1, Fraction(3))
        assert r.weight_seen == 3

    def test_second_unit_edge_replaces_half_the_time(self):
        hits = 0
        for i in range(4000):
            r = est.ReservoirState()
            rng = fresh_rng(61, i)
            r.process_edge(E(0, 1), rng)
            r.process_edge(E(2, 3), rng)
            hits += r.candidate.pair == (2, 3)
        assert 0.46 < hits / 4000 < 0.54

    def test_superseded_by_heavier_incident_edge(self):
        r = est.ReservoirState()
        r.weight_seen = Fraction(1000000)  # make replacement essentially impossible
        r.candidate, r.endpoint = E(0, 1, Fraction(3)), 0
        r.process_edge(E(0, 2, Fraction(5)), fresh_rng(62))
        assert r.superseded and r.best_after == 5

    def test_equal_weight_zeroes_but_does_not_supersede(self):
        r = est.ReservoirState()
        r.weight_seen = Fraction(1000000)
        r.candidate, r.endpoint = E(0, 1, Fraction(3)), 0
        r.process_edge(E(0, 2, Fraction(3)), fresh_rng(63))
        assert not r.superseded
        assert est.finalize_sample(r) == 0

    def test_word_count_constant(self):
        r = est.ReservoirState()
        rng = fresh_rng(64)
        before = r.word_count()
        for i in range(200):
            r.process_edge(E(i % 7, 7 + i % 11, Fraction(1 + i % 3)), rng)
        assert r.word_count() == before


class TestFinalize:
    def test_rules(self):
        r = est.ReservoirState()
        assert est.finalize_sample(r) == 0  # empty stream
        r.candidate, r.endpoint, r.weight_seen = E(0, 1, Fraction(4)), 0, Fraction(4)
        assert est.finalize_sample(r) == 1  # nothing later
        r.best_after = Fraction(3)
        assert est.finalize_sample(r) == Fraction(1, 4)
        r.superseded = True
        assert est.finalize_sample(r) == 0


class TestExpectationOracle:
    def test_single_edge(self):
        assert est.expectation_oracle(stream(2, (0, 1, 5))) == 1

    def test_unit_path(self):
        assert est.expectation_oracle(stream(3, (0, 1, 1), (1, 2, 1))) == Fraction(3, 4)

    def test_weighted_example(self):
        # candidate weight 4 with a later weight-3 incident edge gives 1/4
        s = stream(3, (0, 1, 4), (0, 2, 3))
        # outcomes: (e0,u0): 1-3/4=1/4; (e0,u1): 1; (e1,*): 1 each
        expect = (Fraction(4, 7) * (Fraction(1, 4) + 1) + Fraction(3, 7) * 2) / 2
        assert est.expectation_oracle(s) == expect

    def test_equals_w_over_2m_exactly(self):
        for i in range(50):
            rng = fresh_rng(65, i)
            s = random_stream(rng, int(rng.integers(2, 11)), 8, weights=(1, 2, 3, 8))
            g = WeightedGraph.from_stream(s)
            assert est.expectation_oracle(s) == max_incident_sum(g) / (2 * total_weight(g))

    def test_exhaustive_up_to_three_edges(self):
        pairs = list(itertools.combinations(range(6), 2))
        checked = 0
        for k in (1, 2, 3):
            for combo in itertools.combinations(pairs, k):
                for order in itertools.permutations(combo):
                    s = EdgeStream(6, tuple(E(u, v) for u, v in order))
                    g = WeightedGraph.from_stream(s)
                    assert est.expectation_oracle(s) == max_incident_sum(g) / (
                        2 * total_weight(g)
                    )
                    checked += 1
        assert checked == 15 + 105 * 2 + 455 * 6  # all ordered streams, k <= 3

    def test_permutation_invariance(self):
        for i in range(10):
            rng = fresh_rng(66, i)
            s = random_stream(rng, 8, 6, weights=(1, 2, 5))
            base = est.expectation_oracle(s)
            for j in range(10):
                perm = list(rng.permutation(len(s.edges)))
                shuffled = EdgeStream(s.n, tuple(s.edges[p] for p in perm))
                assert est.expectation_oracle(shuffled) == base

    def test_cap(self):
        s = EdgeStream(20, tuple(E(i, i + 1) for i in range(17)))
        with pytest.raises(ValueError, match="capped"):
            est.expectation_oracle(s)

    def test_empty(self):
        assert est.expectation_oracle(EdgeStream(2, ())) == 0


class TestBankAgainstReference:
    """The chunked bank must match the sequential reservoir in distribution."""

    def test_sample_value_distributions_match(self):
        s = stream(4, (0, 1, 3), (1, 2, 1), (0, 2, 2), (2, 3, 4))
        ref_counts = {}
        trials = 6000
        for i in range(trials):
            r = est.ReservoirState()
            rng = fresh_rng(67, i)
            for e in s.edges:
                r.process_edge(e, rng)
            x = float(est.finalize_sample(r))
            ref_counts[round(x, 9)] = ref_counts.get(round(x, 9), 0) + 1
        bank = est.EstimatorBank(0.35, 0.3, seed=9, chunk_size=3)
        bank.process_stream(s)
        xs = bank.sample_values()
        bank_counts = {}
        for x in np.round(xs, 9):
            bank_counts[float(x)] = bank_counts.get(float(x), 0) + 1
        assert set(bank_counts) == set(ref_counts)
        for value, count in ref_counts.items():
            p_ref = count / trials
            p_bank = bank_counts[value] / bank.size
            # three-sigma agreement between two Monte Carlo estimates
            sigma = (p_ref * (1 - p_ref) / trials + p_bank * (1 - p_bank) / bank.size) ** 0.5
            assert abs(p_ref - p_bank) < 4 * max(sigma, 1e-3)

    def test_candidate_distribution_proportional_to_weight(self):
        s = stream(4, (0, 1, 1), (1, 2, 2), (2, 3, 5))
        bank = est.EstimatorBank(0.2, 0.2, seed=3, chunk_size=2)
        bank.process_stream(s)
        cands = bank.candidate_edges()
        m = 8.0
        for pair, w in (((0, 1), 1), ((1, 2), 2), ((2, 3), 5)):
            freq = float(np.mean((cands[:, 0] == pair[0]) & (cands[:, 1] == pair[1])))
            sigma = (w / m * (1 - w / m) / bank.size) ** 0.5
            assert abs(freq - w / m) < 5 * sigma

    def test_chunk_boundaries_do_not_matter_statistically(self):
        s = stream(5, *[(u, v, 1 + (u + v) % 3) for u in range(5) for v in range(u + 1, 5)])
        means = []
        for chunk in (1, 3, 100):
            bank = est.EstimatorBank(0.1, 0.1, seed=8, chunk_size=chunk)
            bank.process_stream(s)
            means.append(float(np.mean(bank.sample_values())))
        exact = float(est.expectation_oracle(s))
        for m in means:
            assert abs(m - exact) < 0.02


class TestBoundedness:
    def test_every_sample_value_in_unit_interval(self):
        for i in range(30):
            rng = fresh_rng(159, i)
            s = random_stream(rng, int(rng.integers(2, 10)), 14, weights=(1, 2, 3, 7))
            bank = est.EstimatorBank(0.5, 0.4, seed=i, chunk_size=5)
            bank.process_stream(s)
            xs = bank.sample_values()
            assert float(np.min(xs)) >= 0.0 and float(np.max(xs)) <= 1.0
            ref = est.ReservoirState()
            rng2 = fresh_rng(160, i)
            for e in s.edges:
                ref.process_edge(e, rng2)
            x = est.finalize_sample(ref)
            assert 0 <= x <= 1


class TestEstimateW:
    def test_empty_stream(self):
        assert est.estimate_w(EdgeStream(2, ()), 0.3, 0.1).w_hat == 0.0

    def test_single_edge_exact(self):
        r = est.estimate_w(stream(2, (0, 1, 5)), 0.3, 0.1, seed=4)
        assert r.w_hat == 10.0

    def test_plan_constants(self):
        k, b = est.amplification_plan(0.1, 0.1)
        assert b == 3600
        assert k == 2 * int(np.ceil(12 * np.log(10))) + 1
        assert k % 2 == 1

    def test_invalid_parameters(self):
        with pytest.raises(ValueError):
            est.amplification_plan(0.0, 0.5)
        with pytest.raises(ValueError):
            est.amplification_plan(0.5, 1.0)

    def test_additive_guarantee_monte_carlo(self):
        rng = fresh_rng(68)
        edges = []
        for u in range(60):
            for v in range(u + 1, 60):
                if rng.random() < 0.15:
                    edges.append(E(u, v))
        s = EdgeStream(60, tuple(edges))
        g = WeightedGraph.from_stream(s)
        w_true = float(max_incident_sum(g))
        m = float(total_weight(g))
        hits = sum(
            abs(est.estimate_w(s, 0.2, 0.1, seed=t).w_hat - w_true) <= 0.2 * m
            for t in range(40)
        )
        assert hits >= 36

    def test_clamped_to_range(self):
        s = stream(3, (0, 1, 1), (1, 2, 1))
        for t in range(10):
            r = est.estimate_w(s, 0.5, 0.3, seed=t)
            assert 0.0 <= r.w_hat <= 2.0 * float(total_weight(WeightedGraph.from_stream(s)))


class TestEstimateQmc:
    def test_single_unit_edge_value(self):
        q = est.estimate_qmc(stream(2, (0, 1, 1)), 0.1, 0.1, seed=7)
        assert q.value == pytest.approx(1.00625, abs=1e-12)
        assert q.mode == "unweighted"
        assert q.guaranteed_ratio == pytest.approx(2.1)

    def test_empty_stream(self):
        q = est.estimate_qmc(EdgeStream(3, ()), 0.2, 0.1)
        assert q.value == 0.0

    def test_weighted_mode_detection(self):
        q = est.estimate_qmc(stream(2, (0, 1, 2)), 0.2, 0.1)
        assert q.mode == "weighted"
        assert q.guaranteed_ratio == pytest.approx(2.7)

    def test_value_window(self):
        for i in range(15):
            rng = fresh_rng(69, i)
            s = random_stream(rng, 8, 12, weights=(1, 2, 3))
            q = est.estimate_qmc(s, 0.3, 0.2, seed=i)
            m = q.m
            assert m / 2 - 1e-12 <= q.value <= m + 0.3 * m / 4 + 1e-12

    def test_deterministic_under_seed(self):
        s = stream(6, (0, 1, 1), (2, 3, 1), (1, 2, 1), (4, 5, 1))
        a = est.estimate_qmc(s, 0.25, 0.1, seed=123)
        b = est.estimate_qmc(s, 0.25, 0.1, seed=123)
        assert a == b
        c = est.estimate_qmc(s, 0.25, 0.1, seed=124)
        assert a.m == c.m  # same exact counting regardless of seed


class TestSpaceDiscipline:
    def test_words_independent_of_stream_length(self):
        short = est.EstimatorBank(0.4, 0.2, seed=1)
        for i in range(10):
            short.process_edge(E(i, i + 10))
        long = est.EstimatorBank(0.4, 0.2, seed=1)
        n_side = 400
        for i in range(100_000):
            u = i % n_side
            v = n_side + (i // n_side) % n_side
            long.process_edge(E(u, v))
        assert short.words_used() == long.words_used()
        assert short.words_used() == 6 * short.size + 8

    def test_rejects_nonpositive_weight(self):
        bank = est.EstimatorBank(0.5, 0.5)
        with pytest.raises(ValueError):
            bank.process_edge(E(0, 1, Fraction(0)))
