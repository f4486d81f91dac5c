"""Analytic reference values: the parameter map (eta, u, beta, xi), the
piecewise exponent G, the order-of-magnitude bracket for the divisor-interval
count, main terms for the shifted counts, and the Euler-product constants with
certified truncation tails.

Everything here is cheap relative to the exact counters; these are the
reference columns of every report row.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import DEFAULT_BUDGET_MB, PrimeTable, _check_budget, build_prime_table
from .errors import InvalidArgumentError

LOG4M1 = math.log(4) - 1.0
#: 1 - (1 + log log 2)/log 2, the exponent at beta = 0
DELTA = 1.0 - (1.0 + math.log(math.log(2.0))) / math.log(2.0)
ZETA3 = 1.2020569031595942854
#: 315 zeta(3) / (2 pi^4) = sum over squarefree k of 1/(k phi(k))
C315 = 315.0 * ZETA3 / (2.0 * math.pi**4)
EULER_GAMMA = 0.5772156649015329

DEFAULT_PRIME_CUTOFF = 1_000_000


@dataclass(frozen=True)
class AnalyticConstants:
    delta: float = DELTA
    c315: float = C315
    euler_gamma: float = EULER_GAMMA
    zeta3: float = ZETA3


@dataclass(frozen=True)
class ParamPoint:
    """The reparameterization of (y, z): z = y e^eta = y^(1+u), and when
    log log y > 0 also eta = (log y)^(-beta) with xi measuring the distance
    of beta from log 4 - 1 in sqrt(log log y) units."""

    y: float
    z: float
    eta: float
    u: float
    z0: float
    beta: float | None = None
    xi: float | None = None


def derive_params(y: float, z: float) -> ParamPoint:
    if not (1 < y < z):
        raise InvalidArgumentError(f"need 1 < y < z, got y={y}, z={z}")
    eta = math.log(z / y)
    logy = math.log(y)
    u = eta / logy
    z0 = y * math.exp(logy ** (1.0 - math.log(4.0)))
    loglogy = math.log(logy) if logy > 0 else None
    beta = xi = None
    if loglogy is not None and loglogy > 0:
        beta = -math.log(eta) / loglogy
        xi = (beta - LOG4M1) * math.sqrt(loglogy)
    return ParamPoint(y=y, z=z, eta=eta, u=u, z0=z0, beta=beta, xi=xi)


def G_function(beta: float) -> float:
    """Piecewise exponent: smooth branch on [0, log4 - 1], identity above.

    G(0) = DELTA and the two branches agree at log4 - 1.
    """
    if beta < 0:
        raise InvalidArgumentError(f"beta must be >= 0, got {beta}")
    if beta >= LOG4M1:
        return beta
    l2 = math.log(2.0)
    return (1.0 + beta) / l2 * math.log((1.0 + beta) / (math.e * l2)) + 1.0


def _order_bracket(x: float, y: float, z: float) -> float:
    """Order bracket with constant 1 for the density of n <= x with a divisor
    in (y, z]; callers guarantee z <= x and z > y.  Handles the degenerate
    small-y shapes that the one-step recursion can produce."""
    if y < 1:
        return x  # the divisor 1 is in range
    logy = math.log(y)
    eta = math.log(z / y)
    if z >= y * y:
        return x
    if z >= 2 * y:
        u = eta / logy
        return x * u**DELTA * math.log(2.0 / u) ** -1.5
    if y > math.e:
        pp = derive_params(y, z)
        if z > pp.z0:
            beta, xi = pp.beta, pp.xi
            return x * beta / (max(1.0, -xi) * logy ** G_function(beta))
    return eta * x


def ford_order(x: float, y: float, z: float) -> float:
    """Order of magnitude (constant 1) for the count of n <= x with a divisor
    in (y, z].  For y above sqrt(x) the bracket reflects once through the
    complementary-divisor range (x/z, x/y]."""
    if not (2 <= y < z <= x):
        raise InvalidArgumentError(
            f"need 2 <= y < z <= x, got x={x}, y={y}, z={z}"
        )
    if y <= math.sqrt(x):
        return _order_bracket(x, y, z)
    if x / y >= x / z + 1:
        return _order_bracket(x, x / z, x / y)
    return math.log(z / y) * x


def tenenbaum_main(x: float, y: float, z: float) -> float:
    """Asymptotic main term eta * x for the slowly-widening regime."""
    if not (0 < y < z <= x):
        raise InvalidArgumentError(f"need 0 < y < z <= x, got x={x}, y={y}, z={z}")
    return math.log(z / y) * x


def _factor_small(n: int) -> list[tuple[int, int]]:
    """Trial-division factorization for the small shift/modulus arguments."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def f_factor(s: int) -> Fraction:
    """prod over p | s of (p-1)^2 / (p^2 - p + 1), exactly."""
    if s == 0:
        raise InvalidArgumentError("s must be nonzero")
    out = Fraction(1)
    for p, _ in _factor_small(abs(s)):
        out *= Fraction((p - 1) ** 2, p * p - p + 1)
    return out


def g_factor(m: int) -> Fraction:
    """prod over p | m of p(p-1) / (p^2 - p + 1), exactly."""
    if m == 0:
        raise InvalidArgumentError("m must be nonzero")
    out = Fraction(1)
    for p, _ in _factor_small(abs(m)):
        out *= Fraction(p * (p - 1), p * p - p + 1)
    return out


def shifted_main(x: float, y: float, z: float, s: int) -> float:
    """Main term f(s) * C315 * eta * x / log x for the shifted count."""
    if not (0 < y < z <= x) or x <= 1:
        raise InvalidArgumentError(f"bad arguments x={x}, y={y}, z={z}")
    return float(f_factor(s)) * C315 * math.log(z / y) * x / math.log(x)


def phi_sieve(n: int, budget_mb: int | None = DEFAULT_BUDGET_MB) -> np.ndarray:
    """Euler phi for 0..n as int64, by the standard multiplicative sweep."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    _check_budget(8 * (n + 1), budget_mb, f"phi sieve to {n}")
    phi = np.arange(n + 1, dtype=np.int64)
    table = build_prime_table(max(n, 2), budget_mb)
    for p in table.primes():
        phi[p::p] -= phi[p::p] // p
    return phi


def phi_ratio_sum(a: int, s: int, x: int, *,
                  phi: np.ndarray | None = None,
                  budget_mb: int | None = DEFAULT_BUDGET_MB) -> float:
    """Exact evaluation of  sum over n <= x, gcd(n, s)=1 of  phi(a)/phi(a n).

    A precomputed totient array covering a*x may be passed to amortize the
    sieve across calls.
    """
    if a < 1:
        raise InvalidArgumentError(f"a must be >= 1, got {a}")
    if s == 0 or abs(s) > x:
        raise InvalidArgumentError(f"need 1 <= |s| <= x, got s={s}, x={x}")
    xi = math.floor(x)
    if phi is None:
        phi = phi_sieve(a * xi, budget_mb)
    elif len(phi) < a * xi + 1:
        raise InvalidArgumentError("supplied phi array too short")
    ns = np.arange(1, xi + 1, dtype=np.int64)
    if abs(s) > 1:
        ns = ns[np.gcd(ns, abs(s)) == 1]
    phi_a = int(phi[a])
    return float(phi_a * np.sum(1.0 / phi[a * ns]))


def _prime_sum_terms(table: PrimeTable, cutoff: int) -> float:
    ps = table.primes()
    ps = ps[ps <= cutoff].astype(np.float64)
    return float(np.sum(np.log(ps) / (ps * ps - ps + 1.0)))


def prime_recip_tail_bound(cutoff: int) -> float:
    """Upper bound for sum over p > cutoff of log p / (p^2 - p + 1):
    compare with (1 + 1/K) * integral of log t / t^2."""
    k = float(cutoff)
    return (1.0 + 1.0 / k) * (math.log(k) + 1.0) / k


def phi_ratio_main(a: int, s: int, x: float,
                   prime_cutoff: int = DEFAULT_PRIME_CUTOFF, *,
                   table: PrimeTable | None = None) -> float:
    """Main term of the reciprocal-totient sum (see the interval variant)."""
    return phi_ratio_main_with_interval(a, s, x, prime_cutoff, table=table)[0]


def phi_ratio_main_with_interval(a: int, s: int, x: float,
                                 prime_cutoff: int = DEFAULT_PRIME_CUTOFF, *,
                                 table: PrimeTable | None = None
                                 ) -> tuple[float, float]:
    """Main term of the reciprocal-totient sum and its certified truncation
    half-width.

    Value: C315 * (phi(|s|)/|s|) * g(a s) * (log x + gamma - S1 + S2) with
    S1 the prime sum over p not dividing a*s truncated at prime_cutoff and
    S2 = sum over p | s of log p/(p-1).  The returned half-width bounds the
    truncation error of S1 propagated through the prefactor.
    """
    if a < 1 or s == 0 or x < 2:
        raise InvalidArgumentError(f"bad arguments a={a}, s={s}, x={x}")
    if prime_cutoff < 1000:
        raise InvalidArgumentError(f"prime_cutoff must be >= 1000, got {prime_cutoff}")
    if table is None or table.limit < prime_cutoff:
        table = build_prime_table(prime_cutoff)
    s_abs = abs(s)
    s_factors = _factor_small(s_abs)
    phi_s_over_s = 1.0
    for p, _ in s_factors:
        phi_s_over_s *= 1.0 - 1.0 / p
    s1 = _prime_sum_terms(table, prime_cutoff)
    for p, _ in _factor_small(a * s_abs):
        if p <= prime_cutoff:
            s1 -= math.log(p) / (p * p - p + 1.0)
    s2 = sum(math.log(p) / (p - 1.0) for p, _ in s_factors)
    prefactor = C315 * phi_s_over_s * float(g_factor(a * s_abs))
    value = prefactor * (math.log(x) + EULER_GAMMA - s1 + s2)
    half_width = prefactor * prime_recip_tail_bound(prime_cutoff)
    return value, half_width


def c315_partial(k_max: int, *, budget_mb: int | None = DEFAULT_BUDGET_MB
                 ) -> tuple[float, float]:
    """Partial sum over squarefree k <= k_max of 1/(k phi(k)) plus a proven
    tail bound.

    The tail uses n/phi(n) < e^gamma ln ln n + 2.50637/ln ln n (valid n >= 3)
    and sum-vs-integral comparison, so  partial <= limit <= partial + bound
    holds unconditionally.
    """
    if k_max < 1:
        raise InvalidArgumentError(f"k_max must be >= 1, got {k_max}")
    _check_budget(40 * (k_max + 1), budget_mb, f"partial constant sum to {k_max}")
    if k_max == 1:
        partial = 1.0
    else:
        table = build_prime_table(k_max, budget_mb)
        phi = np.arange(k_max + 1, dtype=np.float64)
        sq = np.ones(k_max + 1, dtype=bool)
        for p in table.primes():
            p = int(p)
            phi[p::p] *= 1.0 - 1.0 / p
            if p * p <= k_max:
                sq[p * p:: p * p] = False
        ks = np.arange(1, k_max + 1, dtype=np.float64)
        terms = 1.0 / (ks * phi[1:])
        partial = float(np.sum(terms[sq[1:]]))
    return partial, _c315_tail_bound(k_max)


def _c315_tail_bound(k: int) -> float:
    if k < 5:
        # add the exact terms up to 5 and bound the rest
        extra = sum(
            1.0 / (m * _phi_small(m)) for m in range(k + 1, 6) if _squarefree_small(m)
        )
        return extra + _c315_tail_bound(5)
    eg = math.exp(EULER_GAMMA)
    lnk = math.log(k)
    llk = math.log(lnk)
    return eg * (llk / k + 1.0 / (k * lnk)) + 2.50637 / (k * llk)


def _phi_small(m: int) -> int:
    out = 1
    for p, e in _factor_small(m):
        out *= (p - 1) * p ** (e - 1)
    return out


def _squarefree_small(m: int) -> bool:
    return all(e == 1 for _, e in _factor_small(m))


def sum_inv_phi_range(q1: int, q2: int, a: int = 1, *,
                      phi: np.ndarray | None = None,
                      budget_mb: int | None = DEFAULT_BUDGET_MB) -> float:
    """sum over q1 < q <= q2, gcd(q, a) = 1 of 1/phi(q)."""
    if not (0 <= q1 < q2):
        raise InvalidArgumentError(f"need 0 <= q1 < q2, got {q1}, {q2}")
    if phi is None:
        phi = phi_sieve(q2, budget_mb)
    elif len(phi) < q2 + 1:
        raise InvalidArgumentError("supplied phi array too short")
    qs = np.arange(q1 + 1, q2 + 1, dtype=np.int64)
    if abs(a) != 1:
        qs = qs[np.gcd(qs, abs(a)) == 1]
    return float(np.sum(1.0 / phi[qs]))
