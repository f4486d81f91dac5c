import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dspl import (
    Factorization,
    InvalidArgumentError,
    TableTooSmallError,
    big_omega_between,
    build_prime_table,
    divisors,
    factorize,
    factorize_spf,
    has_divisor_in,
    is_in_script_p,
    mobius,
    omega_between,
    pi_ap,
    prime_extremes,
    spf_sieve,
    tau_interval,
    tau_k,
    totient,
)


def _is_prime_slow(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


PI_VALUES = {10: 4, 100: 25, 1_000: 168, 10_000: 1229, 1_000_000: 78_498}


class TestPrimeTable:
    def test_counts_match_reference(self, table_medium):
        for x, expected in PI_VALUES.items():
            assert table_medium.pi(x) == expected

    def test_membership_against_trial_division(self, table_small):
        for n in range(-3, 2_000):
            assert table_small.is_prime(n) == _is_prime_slow(n), n

    def test_vectorized_membership_matches_scalar(self, table_small):
        ns = np.arange(0, 5_000, dtype=np.int64)
        flags = table_small.is_prime_array(ns)
        for n in (0, 1, 2, 3, 4, 997, 998, 4999):
            assert bool(flags[n]) == table_small.is_prime(n)
        assert int(flags.sum()) == table_small.pi(4_999)

    def test_primes_array_sorted_and_prime(self, table_small):
        ps = table_small.primes()
        assert ps[0] == 2
        assert np.all(np.diff(ps) > 0)
        assert len(ps) == table_small.count

    def test_tiny_limits(self):
        assert build_prime_table(2).count == 1
        assert list(build_prime_table(3).primes()) == [2, 3]
        with pytest.raises(InvalidArgumentError):
            build_prime_table(1)

    def test_budget_enforced(self):
        from dspl import ResourceLimitError

        with pytest.raises(ResourceLimitError):
            build_prime_table(100_000_000, budget_mb=1)


class TestFactorize:
    def test_reconstruction_small_range(self, table_small):
        spf = spf_sieve(3_000)
        for n in range(1, 3_000):
            f = factorize(n, table_small)
            assert f.n == n
            assert f == factorize_spf(n, spf)
            assert math.prod(p**e for p, e in f.factors) == n

    def test_large_semiprime(self, table_small):
        # 19997 * 19993 exceeds the table limit but not its square
        n = 19_997 * 19_993
        f = factorize(n, table_small)
        assert f.factors == ((19_993, 1), (19_997, 1))

    def test_table_too_small(self, table_small):
        with pytest.raises(TableTooSmallError):
            factorize(20_000**2 + 1_000_000, table_small)

    def test_validates_product(self):
        with pytest.raises(InvalidArgumentError):
            Factorization(10, ((2, 1), (3, 1)))

    @given(st.integers(min_value=1, max_value=10**6))
    @settings(max_examples=200, deadline=None)
    def test_spf_route_agrees(self, n):
        table = build_prime_table(1_000)
        f = factorize(n, table)
        assert math.prod(p**e for p, e in f.factors) == n
        assert all(_is_prime_slow(p) for p, _ in f.factors)


class TestDivisorFunctions:
    def test_divisors_of_12(self, table_small):
        assert divisors(factorize(12, table_small)) == [1, 2, 3, 4, 6, 12]

    def test_tau_interval_matches_enumeration(self, table_small):
        for n in (1, 2, 36, 360, 720, 1024, 9973):
            f = factorize(n, table_small)
            ds = divisors(f)
            for y, z in ((0.5, 4), (1, 6), (2.5, 2.6), (5, n), (0, 0.5)):
                expected = sum(1 for d in ds if y < d <= z)
                assert tau_interval(f, y, z) == expected
                assert has_divisor_in(f, y, z) == (expected > 0)

    @given(
        st.integers(min_value=1, max_value=20_000),
        st.floats(min_value=0, max_value=110, allow_nan=False),
        st.floats(min_value=0, max_value=120, allow_nan=False),
    )
    @settings(max_examples=300, deadline=None)
    def test_has_divisor_matches_brute(self, n, y, z):
        table = build_prime_table(200)
        f = factorize(n, table)
        expected = any(y < d <= z for d in divisors(f))
        assert has_divisor_in(f, y, z) == expected

    def test_mobius_divisor_sum_identity(self, table_small):
        # sum over d | n of mu(d) vanishes except at n = 1
        spf = spf_sieve(2_000)
        for n in range(1, 2_000):
            f = factorize_spf(n, spf)
            total = sum(mobius(factorize_spf(d, spf)) for d in divisors(f))
            assert total == (1 if n == 1 else 0)

    def test_totient_divisor_sum_identity(self, table_small):
        spf = spf_sieve(2_000)
        for n in range(1, 2_000):
            f = factorize_spf(n, spf)
            assert sum(totient(factorize_spf(d, spf)) for d in divisors(f)) == n

    def test_tau_k_small_cases(self, table_small):
        for n in (1, 2, 12, 64, 210, 1024):
            f = factorize(n, table_small)
            assert tau_k(f, 1) == 1
            assert tau_k(f, 2) == len(divisors(f))
            # tau_3(n) = #{(a, b, c) : abc = n}
            brute = sum(
                1
                for a in divisors(f)
                for b in divisors(f)
                if (n // a) % b == 0
            )
            assert tau_k(f, 3) == brute

    def test_omega_between(self, table_small):
        f = factorize(360, table_small)  # 2^3 * 3^2 * 5
        assert omega_between(f, 1, 5) == 3
        assert omega_between(f, 2, 5) == 2
        assert big_omega_between(f, 1, 5) == 6
        assert big_omega_between(f, 2, 3) == 2
        assert big_omega_between(f, 5, 100) == 0

    def test_prime_extremes(self, table_small):
        assert prime_extremes(factorize(1, table_small)) == (math.inf, 0)
        assert prime_extremes(factorize(12, table_small)) == (2, 3)

    def test_script_p_membership(self, table_small):
        f15 = factorize(15, table_small)
        assert is_in_script_p(f15, 2, 5)
        assert not is_in_script_p(f15, 3, 5)  # P^-(15) = 3 is not > 3
        assert not is_in_script_p(f15, 2, 4)
        with pytest.raises(InvalidArgumentError):
            is_in_script_p(f15, 5, 5)


class TestPiAp:
    def test_known_residue_class(self, table_small):
        # primes = 1 (mod 4) up to 100: 5 13 17 29 37 41 53 61 73 89 97
        assert pi_ap(100, 4, 1, table_small) == 11

    def test_classes_partition_primes(self, table_small):
        x, q = 10_000, 12
        total = sum(pi_ap(x, q, a, table_small) for a in range(q))
        assert total == table_small.pi(x)

    def test_modulus_one(self, table_small):
        assert pi_ap(1_000, 1, 0, table_small) == 168
