import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dspl import (
    IntervalUnion,
    InvalidArgumentError,
    build_prime_table,
    decompose_pairs,
    divisor_log_union,
    divisors,
    factorize,
    measure_L,
    sum_L_density,
    triple,
    vitali_subcover,
)

TABLE = build_prime_table(2_000)
LOG2 = math.log(2)


def L(a: int, sigma: float) -> float:
    return measure_L(divisor_log_union(factorize(a, TABLE), sigma))


class TestIntervalUnion:
    def test_merges_overlaps(self):
        u = IntervalUnion.from_intervals([(0, 1), (0.5, 2), (3, 4)])
        assert u.parts == ((0, 2), (3, 4))
        assert u.measure == pytest.approx(3.0)

    def test_merges_adjacent_within_tolerance(self):
        a = math.log(12)
        b = math.log(3) + math.log(4)  # equal in exact arithmetic
        u = IntervalUnion.from_intervals([(0, a), (b, 3)])
        assert len(u) == 1

    def test_covers(self):
        u = IntervalUnion.from_intervals([(0, 1), (2, 3)])
        assert u.covers(0.2, 0.9)
        assert u.covers(2, 3)
        assert not u.covers(0.5, 2.5)

    def test_empty(self):
        assert IntervalUnion.from_intervals([]).measure == 0.0


class TestDivisorLogUnion:
    def test_prime_power_chain(self):
        # divisors of 8 are evenly spaced in log; sigma = log 2 tiles exactly
        u = divisor_log_union(factorize(8, TABLE), LOG2)
        assert len(u) == 1
        assert u.measure == pytest.approx(4 * LOG2, abs=1e-12)

    def test_disjoint_blocks(self):
        # divisors 1, 997; tiny sigma keeps the two intervals apart
        u = divisor_log_union(factorize(997, TABLE), 0.01)
        assert len(u) == 2
        assert u.measure == pytest.approx(0.02, abs=1e-15)

    def test_sigma_must_be_positive(self):
        with pytest.raises(InvalidArgumentError):
            divisor_log_union(factorize(6, TABLE), 0.0)

    @given(
        st.integers(min_value=1, max_value=5_000),
        st.floats(min_value=0.01, max_value=3.0),
    )
    @settings(max_examples=300, deadline=None)
    def test_measure_bounds(self, a, sigma):
        f = factorize(a, TABLE)
        tau = len(divisors(f))
        val = L(a, sigma)
        assert sigma - 1e-12 <= val <= min(tau * sigma, sigma + math.log(a)) + 1e-12

    def test_submultiplicative_on_coprime_pairs(self):
        rng = random.Random(5)
        hits = 0
        while hits < 120:
            a = rng.randint(1, 1_000)
            b = rng.randint(1, 1_000)
            if math.gcd(a, b) != 1:
                continue
            hits += 1
            sigma = rng.uniform(0.05, 1.5)
            tau_a = len(divisors(factorize(a, TABLE)))
            assert L(a * b, sigma) <= tau_a * L(b, sigma) + 1e-12


class TestPairDecomposition:
    def test_blocks_partition_divisors(self):
        for a in (1, 2, 12, 360, 720, 1_024):
            for eta in (0.05, 0.3, LOG2, 2.0):
                d = decompose_pairs(factorize(a, TABLE), eta)
                ds = divisors(factorize(a, TABLE))
                # each divisor falls in exactly one [d1, d2] run
                for dv in ds:
                    assert sum(1 for d1, d2 in d.pairs if d1 <= dv <= d2) == 1
                # runs are separated by gaps larger than eta
                for (_, d2), (d1_next, _) in zip(d.pairs, d.pairs[1:]):
                    assert math.log(d1_next / d2) >= eta

    def test_total_measure_round_trips(self):
        # sum over runs of (log d2 - log d1 + eta) equals the union measure
        for a in (6, 30, 210, 840, 97):
            for eta in (0.1, 0.5, 1.0):
                d = decompose_pairs(factorize(a, TABLE), eta)
                total = sum(math.log(d2 / d1) + eta for d1, d2 in d.pairs)
                assert total == pytest.approx(L(a, eta), abs=1e-9)


class TestVitali:
    def test_triple_dilates_about_center(self):
        assert triple((0.0, 1.0)) == (-1.0, 2.0)
        assert triple((2.0, 2.5)) == (1.5, 3.0)

    def test_chosen_are_disjoint_and_triples_cover(self):
        rng = random.Random(17)
        for _ in range(300):
            ivs = []
            for _ in range(rng.randint(1, 25)):
                left = rng.uniform(-5, 5)
                ivs.append((left, left + rng.uniform(0.01, 2.0)))
            picked = vitali_subcover(ivs)
            chosen = [ivs[i] for i in picked]
            for i, (l1, r1) in enumerate(chosen):
                for l2, r2 in chosen[i + 1:]:
                    assert r1 <= l2 or r2 <= l1  # pairwise disjoint
            dilated = [triple(c) for c in chosen]
            for left, right in ivs:
                assert any(dl <= left and right <= dr for dl, dr in dilated), \
                    (left, right)

    def test_captures_a_third_of_the_measure(self):
        rng = random.Random(23)
        for _ in range(100):
            ivs = []
            for _ in range(rng.randint(1, 40)):
                left = rng.uniform(0, 10)
                ivs.append((left, left + rng.uniform(0.05, 1.5)))
            picked = vitali_subcover(ivs)
            total = IntervalUnion.from_intervals(ivs, rel_tol=0).measure
            kept = sum(r - l for l, r in (ivs[i] for i in picked))
            assert 3 * kept >= total - 1e-9


class TestDensitySum:
    def test_brute_force_small(self):
        eta = 0.4
        w = 10
        squarefree = [1, 2, 3, 5, 6, 7, 10]
        expected = sum(L(a, eta) / a for a in squarefree)
        assert sum_L_density(w, eta) == pytest.approx(expected, rel=1e-12)

    def test_includes_non_squarefree_when_asked(self):
        eta = 0.4
        all_terms = sum(L(a, eta) / a for a in range(1, 11))
        assert sum_L_density(10, eta, squarefree=False) == \
            pytest.approx(all_terms, rel=1e-12)

    def test_totient_weighting(self):
        from dspl import totient

        eta = 0.25
        expected = sum(
            L(a, eta) / totient(factorize(a, TABLE)) for a in (1, 2, 3, 5, 6, 7)
        )
        assert sum_L_density(7, eta, "reciprocal_phi") == \
            pytest.approx(expected, rel=1e-12)

    def test_coprimality_filter(self):
        eta = 0.3
        expected = sum(L(a, eta) / a for a in (1, 3, 7, 9) if math.gcd(a, 10) == 1)
        got = sum_L_density(9, eta, squarefree=False, coprime_to=10)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_rejects_bad_weight(self):
        with pytest.raises(InvalidArgumentError):
            sum_L_density(10, 0.5, "harmonic")
