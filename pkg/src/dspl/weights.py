"""Combinatorial sieve weight sequences of beta type.

A weight sequence is mu(d) restricted to a truncation set of squarefree d
composed of primes below the sifting limit Z, written d = p1...pr with
p1 > p2 > ... > pr.  The lower sequence keeps d when the cube conditions hold
at the even positions,

    p_{2l}^3 * p_{2l-1} ... p_1 < D        (1 <= l <= r/2),

the upper sequence when they hold at the odd positions,

    p_{2l+1}^3 * p_{2l} ... p_1 < D        (0 <= l < ceil(r/2)).

Convolved against 1 these sandwich the indicator that n has no prime factor
below Z; the tests enforce that exhaustively rather than trusting the
construction.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import build_prime_table, divisors
from .errors import InvalidArgumentError, ResourceLimitError

MAX_SUPPORT = 1 << 20
DEFAULT_KAPPA = 2.0


@dataclass(frozen=True)
class SieveWeights:
    kind: str          # "lower" | "upper"
    level: float       # D
    sifting_limit: float  # Z
    support: dict      # d -> mu(d), nonzero entries only

    def dump_support(self, path=None) -> str:
        """Two-column text `d weight`, ascending d; written to path if given."""
        text = "".join(f"{d} {self.support[d]}\n" for d in sorted(self.support))
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _sifting_primes(z: float) -> list[int]:
    """Primes strictly below the sifting limit."""
    if z <= 2:
        return []
    limit = int(np.ceil(z)) + 1
    table = build_prime_table(max(limit, 3))
    ps = table.primes()
    return [int(p) for p in ps[ps < z]]


def _enumerate(d_level: float, z: float, parity: str) -> dict:
    """DFS over decreasing prime chains; every node satisfying its cube
    conditions so far is a member (conditions only constrain prefixes)."""
    primes = _sifting_primes(z)
    support = {1: 1}
    # stack entries: (index into primes of last chosen, product, chain length)
    stack = [(i, primes[i], 1) for i in range(len(primes))]
    checked = {"even": lambda r: r % 2 == 0, "odd": lambda r: r % 2 == 1}[parity]
    # position r condition: p_r^3 * (p_{r-1} ... p_1) < D, i.e. p^3 * prev_product < D
    out = []
    while stack:
        i, prod, r = stack.pop()
        p = primes[i]
        if checked(r) and p**3 * (prod // p) >= d_level:
            continue
        support[prod] = 1 if r % 2 == 0 else -1
        if len(support) > MAX_SUPPORT:
            raise ResourceLimitError(f"support exceeds cap {MAX_SUPPORT}")
        for j in range(i):
            stack.append((j, prod * primes[j], r + 1))
    return support


def lower_beta_weights(d_level: float, z: float) -> SieveWeights:
    """Lower weight sequence at level D = d_level, sifting limit Z = z."""
    if d_level < 2 or z < 2:
        raise InvalidArgumentError(f"need D >= 2 and Z >= 2, got {d_level}, {z}")
    return SieveWeights("lower", d_level, z, _enumerate(d_level, z, "even"))


def upper_beta_weights(d_level: float, z: float) -> SieveWeights:
    """Upper weight sequence; the l=0 condition p1^3 < D applies to every chain."""
    if d_level < 2 or z < 2:
        raise InvalidArgumentError(f"need D >= 2 and Z >= 2, got {d_level}, {z}")
    return SieveWeights("upper", d_level, z, _enumerate(d_level, z, "odd"))


def convolve_unit(w: SieveWeights, f) -> int:
    """(weights * 1)(n) = sum of w(d) over divisors d | f.n."""
    return sum(w.support.get(d, 0) for d in divisors(f))


def convolve_unit_array(w: SieveWeights, n_max: int) -> np.ndarray:
    """(weights * 1)(n) for all 0 <= n <= n_max (index 0 unused, set to 0)."""
    if n_max < 1:
        raise InvalidArgumentError(f"n_max must be >= 1, got {n_max}")
    out = np.zeros(n_max + 1, dtype=np.int32)
    for d, wt in w.support.items():
        if d <= n_max:
            out[d::d] += wt
    out[0] = 0
    return out


def sifted_indicator_array(z: float, n_max: int) -> np.ndarray:
    """Indicator of 'no prime factor below Z' for 0 <= n <= n_max.

    This is the membership the weight sequences sandwich: for n whose least
    prime factor sits at or above Z (in particular n = 1) the indicator is 1.
    Index 0 is set to 0.
    """
    if n_max < 1:
        raise InvalidArgumentError(f"n_max must be >= 1, got {n_max}")
    ind = np.ones(n_max + 1, dtype=bool)
    ind[0] = False
    for p in _sifting_primes(z):
        if p > n_max:
            break
        ind[p::p] = False
    return ind


def _alpha_lookup(alpha):
    if callable(alpha):
        return alpha
    if isinstance(alpha, dict):
        return lambda p: alpha[p]
    if isinstance(alpha, (int, float, Fraction)):
        return lambda p: alpha
    raise InvalidArgumentError("alpha must be a constant, callable, or dict")


def density_sum(w: SieveWeights, alpha, kappa: float = DEFAULT_KAPPA):
    """(sum over support of w(d) * alpha(d)/d,  prod over p < Z of 1 - alpha(p)/p).

    alpha is completely multiplicative on the sifting primes, given per-prime;
    values must satisfy 0 <= alpha(p) <= min(kappa, p - 1).  Exact inputs
    (ints, Fractions) are computed exactly.
    """
    look = _alpha_lookup(alpha)
    primes = _sifting_primes(w.sifting_limit)
    vals = {}
    for p in primes:
        v = look(p)
        if isinstance(v, float):
            hiv = min(kappa, p - 1)
            ok = 0 <= v <= hiv
        else:
            v = Fraction(v)
            ok = 0 <= v <= min(Fraction(kappa), Fraction(p - 1))
        if not ok:
            raise InvalidArgumentError(f"alpha({p}) = {v} outside [0, min(kappa, p-1)]")
        vals[p] = v

    exact = all(not isinstance(v, float) for v in vals.values())
    one = Fraction(1) if exact else 1.0

    total = 0 * one
    for d, wt in sorted(w.support.items()):
        term = wt * one
        m = d
        for p in primes:
            if m == 1:
                break
            if m % p == 0:
                term *= vals[p]
                m //= p
        if exact:
            total += term / Fraction(d)
        else:
            total += term / d
    prod = one
    for p in primes:
        prod *= one - vals[p] * (Fraction(1, p) if exact else 1.0 / p)
    return total, prod
