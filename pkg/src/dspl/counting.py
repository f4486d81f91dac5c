"""Exact counters: integers and shifted primes with a divisor in (y, z],
multiplication-table sizes, and progression prime counts summed over moduli.

Two independent routes exist for the headline count: `count_H_brute` walks
every n and enumerates its divisors, `count_H` marks multiples of the interval
divisors in a segmented array.  They must agree exactly; the tests hold them
to that.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .arith import (
    DEFAULT_BUDGET_MB,
    PrimeTable,
    _divisor_bounds,
    factorize,
    factorize_spf,
    has_divisor_in,
    spf_sieve,
)
from .errors import InvalidArgumentError, ResourceLimitError, TableTooSmallError

BRUTE_BUDGET = 1_000_000
# below this x the per-prime scan tends to beat building the marked array
_SCAN_CUTOFF = 20_000


@dataclass(frozen=True)
class QueryWindow:
    """A counting query: n in (x - delta, x] (delta=None means (0, x]),
    divisor sought in (y, z], optional shift s for the prime version."""

    x: int
    y: float
    z: float
    s: int = 0
    delta: int | None = None

    def __post_init__(self):
        if self.x < 1:
            raise InvalidArgumentError(f"x must be >= 1, got {self.x}")
        if not (self.y < self.z):
            raise InvalidArgumentError(f"need y < z, got y={self.y}, z={self.z}")
        if self.delta is not None and not (1 <= self.delta <= self.x):
            raise InvalidArgumentError(f"delta={self.delta} outside [1, x]")


@dataclass(frozen=True)
class CountResult:
    count: int
    method: str  # "brute" | "marked" | "scan"
    elapsed: float
    x: int
    y: float
    z: float
    s: int = 0


def _validate_xyz(x, y, z):
    if x < 1:
        raise InvalidArgumentError(f"x must be >= 1, got {x}")
    if not (y < z):
        raise InvalidArgumentError(f"need y < z, got y={y}, z={z}")


def count_H_brute(x: int, y: float, z: float, budget: int = BRUTE_BUDGET) -> int:
    """Oracle route: for each n <= x enumerate divisors, count n with one in (y, z]."""
    _validate_xyz(x, y, z)
    if x > budget:
        raise ResourceLimitError(f"brute count at x={x} exceeds budget {budget}")
    lo, hi = _divisor_bounds(y, min(z, x))
    if lo > hi:
        return 0
    spf = spf_sieve(x)
    count = 0
    for n in range(1, x + 1):
        if has_divisor_in(factorize_spf(n, spf), y, z):
            count += 1
    return count


def _segments(total_lo: int, total_hi: int, budget_mb: int | None,
              segment_len: int | None):
    """Yield [lo, hi] subranges covering [total_lo, total_hi]."""
    if segment_len is None:
        budget = DEFAULT_BUDGET_MB if budget_mb is None else budget_mb
        # keep the working bool array at ~half the budget
        segment_len = max(1024, min(total_hi - total_lo + 1, budget * (1 << 19)))
    lo = total_lo
    while lo <= total_hi:
        hi = min(total_hi, lo + segment_len - 1)
        yield lo, hi
        lo = hi + 1


def _mark_segment(mask: np.ndarray, seg_lo: int, seg_hi: int,
                  dlo: int, dhi: int) -> None:
    """Mark positions n - seg_lo for every n in [seg_lo, seg_hi] that is a
    multiple of some d in [dlo, dhi].  Chooses the cheaper loop: over the
    divisors d, or over the multipliers k (n = k*d)."""
    d_ops = dhi - dlo + 1
    k_hi = seg_hi // dlo
    if d_ops <= k_hi:
        for d in range(dlo, dhi + 1):
            first = ((seg_lo + d - 1) // d) * d
            if first <= seg_hi:
                mask[first - seg_lo:: d] = True
    else:
        for k in range(1, k_hi + 1):
            lo = max(k * dlo, ((seg_lo + k - 1) // k) * k)
            hi = min(k * dhi, seg_hi - (seg_hi - lo) % k if lo <= seg_hi else -1)
            if lo <= hi:
                mask[lo - seg_lo: hi - seg_lo + 1: k] = True


def count_H(x: int, y: float, z: float, *, budget_mb: int | None = DEFAULT_BUDGET_MB,
            segment_len: int | None = None) -> CountResult:
    """Exact |{1 <= n <= x : some divisor of n lies in (y, z]}| by marking."""
    t0 = time.perf_counter()
    _validate_xyz(x, y, z)
    dlo, dhi = _divisor_bounds(y, min(z, x))
    if dlo > dhi:
        return CountResult(0, "marked", time.perf_counter() - t0, x, y, z)
    if dlo == 1:
        # the divisor 1 is in range, so every n counts
        return CountResult(x, "marked", time.perf_counter() - t0, x, y, z)
    count = 0
    for seg_lo, seg_hi in _segments(1, x, budget_mb, segment_len):
        mask = np.zeros(seg_hi - seg_lo + 1, dtype=bool)
        _mark_segment(mask, seg_lo, seg_hi, dlo, dhi)
        count += int(np.count_nonzero(mask))
    return CountResult(count, "marked", time.perf_counter() - t0, x, y, z)


def _shifted_primes_in(table: PrimeTable, n_lo: int, n_hi: int, s: int) -> np.ndarray:
    """Values n = p + s with p prime and n_lo <= n <= n_hi, ascending."""
    ps = table.primes()
    lo_p, hi_p = n_lo - s, n_hi - s
    if hi_p < 2:
        return np.empty(0, dtype=np.int64)
    i = np.searchsorted(ps, max(2, lo_p), side="left")
    j = np.searchsorted(ps, hi_p, side="right")
    return ps[i:j] + s


def count_H_shifted(x: int, y: float, z: float, s: int, table: PrimeTable, *,
                    budget_mb: int | None = DEFAULT_BUDGET_MB,
                    segment_len: int | None = None,
                    method: str = "auto") -> CountResult:
    """Exact count of n = p + s, p prime, 1 <= n <= x, with a divisor in (y, z].

    method "scan" factors each shifted prime and tests its divisors; "marked"
    builds the same marked array as count_H and reads it off at the shifted
    primes.  "auto" picks by size.
    """
    t0 = time.perf_counter()
    _validate_xyz(x, y, z)
    if table.limit < x + abs(s):
        raise TableTooSmallError(
            f"need table.limit >= x + |s| = {x + abs(s)}, have {table.limit}"
        )
    if method == "auto":
        method = "scan" if x <= _SCAN_CUTOFF else "marked"
    if method not in ("scan", "marked"):
        raise InvalidArgumentError(f"unknown method {method!r}")
    dlo, dhi = _divisor_bounds(y, min(z, x))
    if dlo > dhi:
        return CountResult(0, method, time.perf_counter() - t0, x, y, z, s)

    count = 0
    if method == "scan":
        for n in _shifted_primes_in(table, 1, x, s):
            if has_divisor_in(factorize(int(n), table), y, z):
                count += 1
    else:
        for seg_lo, seg_hi in _segments(1, x, budget_mb, segment_len):
            ns = _shifted_primes_in(table, seg_lo, seg_hi, s)
            if dlo == 1:
                count += len(ns)
                continue
            mask = np.zeros(seg_hi - seg_lo + 1, dtype=bool)
            _mark_segment(mask, seg_lo, seg_hi, dlo, dhi)
            count += int(np.count_nonzero(mask[ns - seg_lo]))
    return CountResult(count, method, time.perf_counter() - t0, x, y, z, s)


def count_H_shifted_window(x: int, delta: int, y: float, z: float, s: int,
                           table: PrimeTable, *,
                           budget_mb: int | None = DEFAULT_BUDGET_MB,
                           segment_len: int | None = None) -> CountResult:
    """Same count restricted to the window x - delta < n <= x, one pass."""
    t0 = time.perf_counter()
    _validate_xyz(x, y, z)
    if not (1 <= delta <= x):
        raise InvalidArgumentError(f"delta={delta} outside [1, x]")
    if table.limit < x + abs(s):
        raise TableTooSmallError(
            f"need table.limit >= x + |s| = {x + abs(s)}, have {table.limit}"
        )
    dlo, dhi = _divisor_bounds(y, min(z, x))
    count = 0
    if dlo <= dhi:
        for seg_lo, seg_hi in _segments(x - delta + 1, x, budget_mb, segment_len):
            ns = _shifted_primes_in(table, seg_lo, seg_hi, s)
            if dlo == 1:
                count += len(ns)
                continue
            mask = np.zeros(seg_hi - seg_lo + 1, dtype=bool)
            _mark_segment(mask, seg_lo, seg_hi, dlo, dhi)
            count += int(np.count_nonzero(mask[ns - seg_lo]))
    return CountResult(count, "marked", time.perf_counter() - t0, x, y, z, s)


_TABLE_CAP = 1 << 16


def _product_segments(n: int, budget_mb, segment_len):
    yield from _segments(1, n * n, budget_mb, segment_len)


def _mark_products(mask: np.ndarray, seg_lo: int, seg_hi: int, n: int) -> None:
    for a in range(1, n + 1):
        if a * a > seg_hi:
            break
        b0 = max(a, (seg_lo + a - 1) // a)
        b1 = min(n, seg_hi // a)
        if b0 <= b1:
            mask[a * b0 - seg_lo: a * b1 - seg_lo + 1: a] = True


def count_A(n: int, *, budget_mb: int | None = DEFAULT_BUDGET_MB,
            segment_len: int | None = None) -> int:
    """|{ab : 1 <= a, b <= n}|, the number of distinct products in the n x n table."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if n > _TABLE_CAP:
        raise ResourceLimitError(f"n={n} exceeds table cap {_TABLE_CAP}")
    count = 0
    for seg_lo, seg_hi in _product_segments(n, budget_mb, segment_len):
        mask = np.zeros(seg_hi - seg_lo + 1, dtype=bool)
        _mark_products(mask, seg_lo, seg_hi, n)
        count += int(np.count_nonzero(mask))
    return count


def count_A_shifted(n: int, s: int, table: PrimeTable, *,
                    budget_mb: int | None = DEFAULT_BUDGET_MB,
                    segment_len: int | None = None) -> int:
    """Distinct products ab (a, b <= n) of the form p + s with p prime."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if n > _TABLE_CAP:
        raise ResourceLimitError(f"n={n} exceeds table cap {_TABLE_CAP}")
    if table.limit < n * n + abs(s):
        raise TableTooSmallError(
            f"need table.limit >= n^2 + |s| = {n * n + abs(s)}, have {table.limit}"
        )
    count = 0
    for seg_lo, seg_hi in _product_segments(n, budget_mb, segment_len):
        mask = np.zeros(seg_hi - seg_lo + 1, dtype=bool)
        _mark_products(mask, seg_lo, seg_hi, n)
        vals = np.flatnonzero(mask).astype(np.int64) + seg_lo
        count += int(np.count_nonzero(table.is_prime_array(vals - s)))
    return count


def sum_pi_ap_range(x: int, q1: int, q2: int, a: int, table: PrimeTable) -> int:
    """Sum of pi(x; q, a) over q1 < q <= q2 with gcd(q, a) = 1.

    Walks each progression and tests membership against the table; the cost is
    about x * log(q2/q1) membership probes, so bands with q1 >> log x are fast.
    """
    if not (0 <= q1 < q2):
        raise InvalidArgumentError(f"need 0 <= q1 < q2, got {q1}, {q2}")
    if x > table.limit:
        raise TableTooSmallError(f"x={x} exceeds table limit {table.limit}")
    total = 0
    for q in range(q1 + 1, q2 + 1):
        if math.gcd(q, a) != 1:
            continue
        r = a % q
        first = r + q * max(0, -((r - 2) // q))  # smallest value >= 2 in the class
        if first > x:
            continue
        cand = np.arange(first, x + 1, q, dtype=np.int64)
        total += int(np.count_nonzero(table.is_prime_array(cand)))
    return total
