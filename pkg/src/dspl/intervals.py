"""Half-open interval unions on the log line.

The central object is the union of [log d - sigma, log d) over the divisors d
of an integer; its measure drives the density sums that the counting theory
runs on.  Endpoints are floats in the divisor constructions but the generic
machinery (normalization, Vitali selection) works unchanged on Fractions,
which the exact tests use.
"""

import math
from dataclasses import dataclass

from .arith import Factorization, divisors
from .errors import InvalidArgumentError, ResourceLimitError

# relative slack when deciding whether two float intervals touch
MERGE_REL_TOL = 2.0**-40

MAX_DIVISORS = 1 << 20


def _merge_tol(a, b, rel_tol):
    if rel_tol == 0:
        return 0
    return rel_tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint half-open intervals [l, r), sorted, with strict gaps."""

    parts: tuple[tuple[float, float], ...]

    @classmethod
    def from_intervals(cls, intervals, rel_tol=MERGE_REL_TOL) -> "IntervalUnion":
        """Normalize arbitrary [l, r) pairs: sort, drop empties, merge overlaps
        and near-touches (gap <= rel_tol * scale)."""
        items = sorted((l, r) for l, r in intervals if l < r)
        merged: list[list] = []
        for l, r in items:
            if merged and l - merged[-1][1] <= _merge_tol(merged[-1][1], l, rel_tol):
                if r > merged[-1][1]:
                    merged[-1][1] = r
            else:
                merged.append([l, r])
        return cls(tuple((l, r) for l, r in merged))

    @property
    def measure(self):
        return sum(r - l for l, r in self.parts)

    def __len__(self):
        return len(self.parts)

    def covers(self, l, r) -> bool:
        """True iff [l, r) sits inside a single part (parts have strict gaps,
        so containment in the union means containment in one part)."""
        if l >= r:
            return True
        for pl, pr in self.parts:
            if pl <= l and r <= pr:
                return True
        return False


def _divisor_blocks(ds: list[int], sigma: float):
    """Group sorted divisors into maximal runs whose shifted log-intervals
    chain together; returns [(d_first, d_last, log d_first - sigma, log d_last)].

    Both divisor_log_union and decompose_pairs are built on this single
    grouping so the round-trip between them is exact by construction.
    """
    blocks = []
    cur_first = ds[0]
    cur_last = ds[0]
    cur_right = math.log(ds[0])
    for d in ds[1:]:
        left = math.log(d) - sigma
        if left - cur_right <= _merge_tol(cur_right, left, MERGE_REL_TOL):
            cur_last = d
            cur_right = math.log(d)
        else:
            blocks.append((cur_first, cur_last,
                           math.log(cur_first) - sigma, cur_right))
            cur_first = cur_last = d
            cur_right = math.log(d)
    blocks.append((cur_first, cur_last, math.log(cur_first) - sigma, cur_right))
    return blocks


def divisor_log_union(f: Factorization, sigma: float) -> IntervalUnion:
    """Union over divisors d of f.n of [log d - sigma, log d)."""
    if not (sigma > 0):
        raise InvalidArgumentError(f"sigma must be > 0, got {sigma}")
    ds = divisors(f)
    if len(ds) > MAX_DIVISORS:
        raise ResourceLimitError(f"{len(ds)} divisors exceed cap {MAX_DIVISORS}")
    blocks = _divisor_blocks(ds, sigma)
    return IntervalUnion(tuple((l, r) for _, _, l, r in blocks))


def measure_L(u: IntervalUnion) -> float:
    """Total length of the union."""
    return u.measure


@dataclass(frozen=True)
class DivisorPairDecomposition:
    """The canonical pairs (d, d') with the union of shifted log-intervals
    equal to the disjoint union of [log d - sigma, log d')."""

    n: int
    sigma: float
    pairs: tuple[tuple[int, int], ...]


def decompose_pairs(f: Factorization, eta: float) -> DivisorPairDecomposition:
    """Unique divisor pairs (d, d'), d <= d', both dividing f.n, whose blocks
    [log d - eta, log d') tile the divisor log-union disjointly."""
    if not (eta > 0):
        raise InvalidArgumentError(f"eta must be > 0, got {eta}")
    ds = divisors(f)
    if len(ds) > MAX_DIVISORS:
        raise ResourceLimitError(f"{len(ds)} divisors exceed cap {MAX_DIVISORS}")
    blocks = _divisor_blocks(ds, eta)
    return DivisorPairDecomposition(f.n, eta, tuple((a, b) for a, b, _, _ in blocks))


def triple(interval):
    """The concentric interval of three times the length: [a,b) -> [2a-b, 2b-a)."""
    l, r = interval
    return (2 * l - r, 2 * r - l)


def vitali_subcover(intervals) -> list[int]:
    """Greedy Vitali selection.  Input: list of [l, r) pairs.  Returns indices
    of a pairwise-disjoint subfamily such that the tripled selected intervals
    cover the union of the input family.

    Order: by length descending, ties by smaller left endpoint, then by input
    position — fully deterministic.
    """
    ivs = []
    for i, (l, r) in enumerate(intervals):
        if l >= r:
            raise InvalidArgumentError(f"interval {i} is empty: [{l}, {r})")
        ivs.append((l, r, i))
    order = sorted(ivs, key=lambda t: (-(t[1] - t[0]), t[0], t[2]))
    chosen: list[tuple] = []
    chosen_idx: list[int] = []
    for l, r, i in order:
        if all(r <= cl or cr <= l for cl, cr, _ in chosen):
            chosen.append((l, r, i))
            chosen_idx.append(i)
    return chosen_idx


def sum_L_density(w: float, eta: float, weight: str = "reciprocal", *,
                  squarefree: bool = True, coprime_to: int = 1) -> float:
    """Sum of L(a; eta) * weight(a) over 1 <= a <= w, in ascending a.

    weight "reciprocal" is 1/a, "reciprocal_phi" is 1/phi(a); optional
    squarefree and coprimality constraints mirror the density sums used by
    the counting bounds.
    """
    if weight not in ("reciprocal", "reciprocal_phi"):
        raise InvalidArgumentError(f"unknown weight {weight!r}")
    if not (eta > 0):
        raise InvalidArgumentError(f"eta must be > 0, got {eta}")
    if w < 1:
        return 0.0
    from .arith import factorize_spf, mobius, spf_sieve, totient

    top = math.floor(w)
    spf = spf_sieve(max(top, 2))
    total = 0.0
    for a in range(1, top + 1):
        if coprime_to != 1 and math.gcd(a, coprime_to) != 1:
            continue
        fa = factorize_spf(a, spf)
        if squarefree and mobius(fa) == 0:
            continue
        length = measure_L(divisor_log_union(fa, eta))
        total += length / (a if weight == "reciprocal" else totient(fa))
    return total
