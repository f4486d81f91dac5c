"""Prime tables, factorization, and the small multiplicative toolbox.

The PrimeTable is the one shared piece of heavy state: an odd-only packed bit
array built by a segment-free sieve of Eratosthenes.  Everything else here is
exact integer arithmetic on top of it.  Interval endpoints (y, z) arrive as
reals; divisor membership d in (y, z] is always decided by the integer
comparisons floor(y) < d <= floor(z).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError, TableTooSmallError

DEFAULT_BUDGET_MB = 2048


def _check_budget(n_bytes: int, budget_mb: int | None, what: str) -> None:
    if budget_mb is None:
        return
    if n_bytes > budget_mb * (1 << 20):
        raise ResourceLimitError(
            f"{what} needs {n_bytes / (1 << 20):.1f} MiB, budget is {budget_mb} MiB"
        )


class PrimeTable:
    """Primality table for 2..limit, one bit per odd integer >= 3.

    Immutable after construction.  `bits` is the little-endian packed bit
    array (bit i <-> the odd integer 2i+3), which is also the byte payload of
    the on-disk cache format.
    """

    __slots__ = ("limit", "bits", "n_bits", "count", "_primes")

    def __init__(self, limit: int, bits: np.ndarray, n_bits: int, count: int):
        self.limit = limit
        self.bits = bits
        self.n_bits = n_bits
        self.count = count
        self._primes = None

    def __repr__(self):
        return f"PrimeTable(limit={self.limit}, count={self.count})"

    def is_prime(self, n: int) -> bool:
        if n > self.limit:
            raise TableTooSmallError(f"n={n} exceeds table limit {self.limit}")
        if n < 2:
            return False
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        i = (n - 3) >> 1
        return bool((self.bits[i >> 3] >> (i & 7)) & 1)

    def is_prime_array(self, ns: np.ndarray) -> np.ndarray:
        """Vectorized membership; entries below 2 are simply non-prime."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size and int(ns.max()) > self.limit:
            raise TableTooSmallError(
                f"max query {int(ns.max())} exceeds table limit {self.limit}"
            )
        res = np.zeros(ns.shape, dtype=bool)
        res[ns == 2] = True
        odd = (ns >= 3) & ((ns & 1) == 1)
        idx = (ns[odd] - 3) >> 1
        res[odd] = (self.bits[idx >> 3] >> (idx & 7).astype(np.uint8)) & 1
        return res

    def primes(self) -> np.ndarray:
        """All primes <= limit as an int64 array (cached after first call)."""
        if self._primes is None:
            unpacked = np.unpackbits(self.bits, count=self.n_bits, bitorder="little")
            odd = 2 * np.flatnonzero(unpacked).astype(np.int64) + 3
            head = [2] if self.limit >= 2 else []
            self._primes = np.concatenate((np.array(head, dtype=np.int64), odd))
        return self._primes

    def pi(self, x: int | float) -> int:
        """pi(x) = number of primes <= x, for x <= limit."""
        x = math.floor(x)
        if x > self.limit:
            raise TableTooSmallError(f"x={x} exceeds table limit {self.limit}")
        return int(np.searchsorted(self.primes(), x, side="right"))


def build_prime_table(limit: int, budget_mb: int | None = DEFAULT_BUDGET_MB) -> PrimeTable:
    """Sieve of Eratosthenes over the odd integers in [3, limit]."""
    if limit < 2:
        raise InvalidArgumentError(f"limit must be >= 2, got {limit}")
    n_bits = (limit - 1) // 2  # number of odd integers in [3, limit]
    _check_budget(n_bits + n_bits // 8, budget_mb, f"prime table to {limit}")
    sieve = np.ones(n_bits, dtype=bool)
    i = 0
    while True:
        p = 2 * i + 3
        if p * p > limit:
            break
        if sieve[i]:
            sieve[(p * p - 3) // 2:: p] = False
        i += 1
    count = (1 if limit >= 2 else 0) + int(sieve.sum())
    bits = np.packbits(sieve, bitorder="little")
    return PrimeTable(limit, bits, n_bits, count)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization n = prod p^e with factors sorted by p.

    n >= 1; n = 1 carries an empty factor list.
    """

    n: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        for p, e in self.factors:
            prod *= p**e
        if prod != self.n or self.n < 1:
            raise InvalidArgumentError(f"inconsistent factorization of {self.n}")


def factorize(n: int, table: PrimeTable) -> Factorization:
    """Factor n by trial division over table primes up to sqrt(n).

    Requires table.limit >= n or table.limit**2 >= n; in the latter case the
    cofactor left after removing all prime factors <= sqrt(n) is prime.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if table.limit < n and table.limit * table.limit < n:
        raise TableTooSmallError(
            f"table limit {table.limit} cannot certify factors of {n}"
        )
    factors = []
    m = n
    if m > 1 and m <= table.limit and table.is_prime(m):
        return Factorization(n, ((m, 1),))
    for p in table.primes():
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        factors.append((m, 1))
    return Factorization(n, tuple(factors))


def spf_sieve(n: int, budget_mb: int | None = DEFAULT_BUDGET_MB) -> np.ndarray:
    """Smallest-prime-factor array for 0..n (spf[0] = spf[1] = 0)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    _check_budget(4 * (n + 1), budget_mb, f"spf sieve to {n}")
    spf = np.zeros(n + 1, dtype=np.int32)
    if n >= 2:
        spf[2::2] = 2
    for p in range(3, math.isqrt(n) + 1, 2):
        if spf[p] == 0:
            sl = spf[p * p:: 2 * p]  # odd multiples only; even ones already have spf 2
            sl[sl == 0] = p
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    return spf


def factorize_spf(n: int, spf: np.ndarray) -> Factorization:
    """Factor n by walking a precomputed smallest-prime-factor array."""
    if n < 1 or n >= len(spf):
        raise InvalidArgumentError(f"n={n} outside spf range")
    factors = []
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        factors.append((p, e))
    return Factorization(n, tuple(factors))


def divisors(f: Factorization) -> list[int]:
    """All divisors of f.n, sorted ascending."""
    ds = [1]
    for p, e in f.factors:
        ds = [d * p**k for d in ds for k in range(e + 1)]
    ds.sort()
    return ds


def _divisor_bounds(y: float, z: float) -> tuple[int, int]:
    # d in (y, z]  <=>  lo <= d <= hi for integer d >= 1
    return max(1, math.floor(y) + 1), math.floor(z)


def tau_interval(f: Factorization, y: float, z: float) -> int:
    """Number of divisors of f.n lying in (y, z]."""
    lo, hi = _divisor_bounds(y, z)
    if lo > hi:
        return 0
    return sum(1 for d in divisors(f) if lo <= d <= hi)


def has_divisor_in(f: Factorization, y: float, z: float) -> bool:
    """True iff f.n has at least one divisor in (y, z]; early-exits."""
    lo, hi = _divisor_bounds(y, z)
    if lo > hi:
        return False
    if lo <= 1:
        return True
    ds = [1]
    for p, e in f.factors:
        new = []
        for d in ds:
            v = d
            for _ in range(e + 1):
                if lo <= v <= hi:
                    return True
                if v <= hi:
                    new.append(v)
                v *= p
        ds = new
    return False


def totient(f: Factorization) -> int:
    phi = 1
    for p, e in f.factors:
        phi *= (p - 1) * p ** (e - 1)
    return phi


def mobius(f: Factorization) -> int:
    for _, e in f.factors:
        if e >= 2:
            return 0
    return -1 if len(f.factors) % 2 else 1


def tau_k(f: Factorization, k: int) -> int:
    """Number of ordered k-tuples with product f.n: prod C(e+k-1, k-1)."""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    out = 1
    for _, e in f.factors:
        out *= math.comb(e + k - 1, k - 1)
    return out


def omega_between(f: Factorization, y: float, z: float) -> int:
    """Distinct primes p | f.n with y < p <= z (y=1 gives plain omega up to z)."""
    lo, hi = _divisor_bounds(y, z)
    return sum(1 for p, _ in f.factors if lo <= p <= hi)


def big_omega_between(f: Factorization, y: float, z: float) -> int:
    """Prime factors counted with multiplicity in (y, z]."""
    lo, hi = _divisor_bounds(y, z)
    return sum(e for p, e in f.factors if lo <= p <= hi)


def prime_extremes(f: Factorization) -> tuple[float, float]:
    """(P^-(n), P^+(n)); the empty product n=1 gives (+inf, 0)."""
    if not f.factors:
        return math.inf, 0
    return f.factors[0][0], f.factors[-1][0]


def is_in_script_p(f: Factorization, y: float, z: float) -> bool:
    """Membership in the set of n with all prime factors in (y, z].

    n = 1 belongs for every y < z by the empty-product conventions.
    """
    if not (y < z):
        raise InvalidArgumentError(f"need y < z, got y={y}, z={z}")
    p_min, p_max = prime_extremes(f)
    return p_max <= z and p_min > y


def pi_ap(x: int, q: int, a: int, table: PrimeTable) -> int:
    """Count primes p <= x with p = a (mod q).  No coprimality filtering:
    pi(20; 4, 1) = 3 counts 5, 13, 17."""
    if q < 1 or x < 0:
        raise InvalidArgumentError(f"need q >= 1 and x >= 0, got q={q}, x={x}")
    if x > table.limit:
        raise TableTooSmallError(f"x={x} exceeds table limit {table.limit}")
    ps = table.primes()
    ps = ps[: np.searchsorted(ps, x, side="right")]
    return int(np.count_nonzero(ps % q == a % q))
