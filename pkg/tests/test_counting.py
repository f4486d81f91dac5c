import math
import random

import pytest

from dspl import (
    InvalidArgumentError,
    QueryWindow,
    count_A,
    count_A_shifted,
    count_H,
    count_H_brute,
    count_H_shifted,
    count_H_shifted_window,
    pi_ap,
    sum_pi_ap_range,
)


class TestCountH:
    def test_matches_brute_on_seeded_queries(self):
        rng = random.Random(7)
        for _ in range(60):
            x = rng.randint(2, 2_000)
            y = rng.uniform(0.5, x)
            z = rng.uniform(y + 0.1, 1.5 * x)
            assert count_H(x, y, z).count == count_H_brute(x, y, z)

    @pytest.mark.parametrize(
        "x,y,z,expected",
        [
            (100, 0.5, 1.0, 100),   # divisor 1 qualifies, so everything counts
            (100, 1.0, 2.0, 50),    # exactly the evens
            (100, 50, 100, 50),     # only n itself can divide n here
            (10, 10, 20, 0),        # window above x is empty below... n = 20 > x
            (1, 2, 3, 0),
        ],
    )
    def test_pinned_values(self, x, y, z, expected):
        assert count_H(x, y, z).count == expected

    def test_integer_endpoints_are_half_open(self):
        # (y, z] excludes y and includes z
        assert count_H(30, 3, 5).count == count_H_brute(30, 3, 5)
        base = count_H(1_000, 4, 5).count        # divisor 5 only
        assert count_H(1_000, 5.1, 5.9).count == 0  # no integer in window
        assert base == 200

    def test_segmentation_is_invisible(self):
        for seg in (1_024, 7_777, 50_000):
            assert count_H(50_000, 99.5, 501, segment_len=seg).count == \
                count_H(50_000, 99.5, 501).count

    def test_rejects_bad_arguments(self):
        with pytest.raises(InvalidArgumentError):
            count_H(0, 1, 2)
        with pytest.raises(InvalidArgumentError):
            count_H(100, 5, 5)
        with pytest.raises(InvalidArgumentError):
            count_H(100, 7, 3)


def _shifted_brute(x, y, z, s, table):
    count = 0
    dlo, dhi = math.floor(y) + 1, math.floor(z)
    for p in map(int, table.primes()):
        n = p + s
        if n > x:
            if p + s > x and s >= 0:
                break
            continue
        if n < 1:
            continue
        if any(n % d == 0 for d in range(max(1, dlo), dhi + 1) if d <= n):
            count += 1
    return count


class TestCountHShifted:
    def test_matches_double_loop(self, table_small):
        rng = random.Random(11)
        for s in (1, -1, 2, 12):
            for _ in range(6):
                x = rng.randint(50, 3_000)
                y = rng.uniform(1, 40)
                z = rng.uniform(y + 0.5, 80)
                got = count_H_shifted(x, y, z, s, table_small).count
                assert got == _shifted_brute(x, y, z, s, table_small), (x, y, z, s)

    def test_scan_and_marked_agree(self, table_small):
        for method in ("scan", "marked"):
            r = count_H_shifted(5_000, 9.5, 60, -1, table_small, method=method)
            assert r.method == method
        a = count_H_shifted(5_000, 9.5, 60, -1, table_small, method="scan")
        b = count_H_shifted(5_000, 9.5, 60, -1, table_small, method="marked")
        assert a.count == b.count

    def test_shift_keeps_values_positive(self, table_small):
        # p = 2, s = -4 would give n = -2; such p must be skipped, and n = 1
        # (from p = 5) has no divisor above 1
        got = count_H_shifted(10, 1, 10, -4, table_small).count
        ns = [p - 4 for p in (5, 7, 11, 13) if 1 <= p - 4 <= 10]
        expected = sum(
            1 for n in ns if any(n % d == 0 for d in range(2, 11) if d <= n)
        )
        assert got == expected

    def test_table_must_cover_range(self, table_small):
        with pytest.raises(InvalidArgumentError):
            count_H_shifted(30_000, 2, 5, -1, table_small)


class TestWindow:
    def test_window_is_difference_of_full_counts(self, table_small):
        x, y, z, s = 4_000, 5.5, 30, 1
        for delta in (1, 17, 1_000, 3_999):
            full_hi = count_H_shifted(x, y, z, s, table_small).count
            full_lo = count_H_shifted(x - delta, y, z, s, table_small).count
            win = count_H_shifted_window(x, delta, y, z, s, table_small).count
            assert win == full_hi - full_lo

    def test_query_window_validation(self):
        with pytest.raises(InvalidArgumentError):
            QueryWindow(x=100, y=5, z=5)
        with pytest.raises(InvalidArgumentError):
            QueryWindow(x=100, y=5, z=10, delta=0)
        w = QueryWindow(x=100, y=5, z=10, s=2, delta=40)
        assert (w.x, w.s, w.delta) == (100, 2, 40)


class TestMultiplicationTable:
    def test_small_tables_by_enumeration(self):
        for n in (1, 2, 3, 7, 16, 50, 64):
            expected = len({a * b for a in range(1, n + 1)
                            for b in range(1, n + 1)})
            assert count_A(n) == expected

    def test_shifted_small_tables(self, table_small):
        for n, s in ((7, 1), (16, -1), (30, 2), (50, 1)):
            products = {a * b for a in range(1, n + 1) for b in range(1, n + 1)}
            expected = sum(1 for m in products if table_small.is_prime(m - s))
            assert count_A_shifted(n, s, table_small) == expected

    def test_segmentation_is_invisible(self):
        assert count_A(600, segment_len=4_096) == count_A(600)


class TestPiApRange:
    def test_matches_per_modulus_sum(self, table_small):
        x, a = 10_000, -1
        got = sum_pi_ap_range(x, 10, 40, a, table_small)
        expected = sum(
            pi_ap(x, q, a, table_small)
            for q in range(11, 41)
            if math.gcd(q, a) == 1
        )
        assert got == expected

    def test_skips_moduli_sharing_a_factor(self, table_small):
        # a = 2: even moduli drop out entirely
        got = sum_pi_ap_range(1_000, 2, 10, 2, table_small)
        expected = sum(
            pi_ap(1_000, q, 2, table_small) for q in (3, 5, 7, 9)
        )
        assert got == expected
