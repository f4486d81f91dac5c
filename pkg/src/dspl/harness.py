"""Experiment runner, prime-table persistence, and report emission.

Each named experiment computes exact counts with the counters and divides by
a reference recomputable from the estimators alone; the ratio column is the
whole story.  Exactness experiments (oracle-h, sieve-sandwich) must come out
pass with ratio 1; the asymptotic ones are report-only and the acceptance
suite applies its own envelopes.
"""

import json
import logging
import math
import random
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .arith import (
    DEFAULT_BUDGET_MB,
    PrimeTable,
    big_omega_between,
    factorize_spf,
    build_prime_table,
    spf_sieve,
)
from .counting import (
    count_A,
    count_A_shifted,
    count_H,
    count_H_brute,
    count_H_shifted,
    sum_pi_ap_range,
)
from .errors import (
    CorruptCacheError,
    InvalidArgumentError,
    ResourceLimitError,
    UnsupportedVersionError,
)
from .estimators import (
    C315,
    f_factor,
    phi_ratio_main,
    phi_ratio_sum,
    phi_sieve,
    shifted_main,
)
from .intervals import sum_L_density
from .weights import (
    convolve_unit_array,
    lower_beta_weights,
    sifted_indicator_array,
    upper_beta_weights,
)

log = logging.getLogger("dspl")

EXPERIMENT_NAMES = (
    "oracle-h", "interm-ratio", "small-eta", "large-eta", "table-ratio",
    "phisum-error", "svl1-ratio", "prl8-ratio", "l2b-ratio", "sieve-sandwich",
)
#: experiments whose rows assert exact agreement (verdict "pass")
EXACT_EXPERIMENTS = ("oracle-h", "sieve-sandwich")


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    grid: dict
    seed: int = 1
    budget_mb: int = DEFAULT_BUDGET_MB
    threads: int = 1
    cache_dir: str | None = None

    def __post_init__(self):
        if self.name not in EXPERIMENT_NAMES:
            raise InvalidArgumentError(f"unknown experiment {self.name!r}")
        if not self.grid:
            raise InvalidArgumentError("grid must be nonempty")


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    params: dict
    observed: float
    reference: float
    ratio: float
    verdict: str  # "pass" | "report-only"


def _make_row(experiment, params, observed, reference, exact=False) -> ReportRow:
    if reference != 0:
        ratio = observed / reference
    else:
        ratio = 1.0 if observed == 0 else math.inf
    verdict = "pass" if exact and observed == reference else "report-only"
    return ReportRow(experiment, params, float(observed), float(reference),
                     float(ratio), verdict)


def _truncation_row(name, params) -> ReportRow:
    p = dict(params)
    p["truncated"] = 1
    return ReportRow(name, p, 0.0, 0.0, 0.0, "report-only")


# ---------------------------------------------------------------- grid rules

def z_from_rule(y: float, rule: str, b_exp: float = 2.0) -> float:
    """Canonical gap regimes: short z = y + y (log y)^-B, dyadic z = 2y,
    wide z = y^2."""
    if rule == "short":
        return y + y * math.log(y) ** -b_exp
    if rule == "dyadic":
        return 2.0 * y
    if rule == "wide":
        return y * y
    raise InvalidArgumentError(f"unknown z rule {rule!r}")


def eta_from_rule(y: float, rule) -> float:
    if rule == "invsq":
        return math.log(y) ** -2.0
    if rule == "log2":
        return math.log(2.0)
    return float(rule)


def _map_points(fn, points, threads):
    if threads <= 1:
        return [fn(pt) for pt in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, points))


# ---------------------------------------------------------------- experiments

def _run_oracle_h(spec: ExperimentSpec):
    g = spec.grid
    rng = random.Random(spec.seed)
    queries = []
    for _ in range(g["queries"]):
        x = rng.randint(10, g["x_max"])
        y = rng.uniform(1.0, x * 0.6)
        z = rng.uniform(y + 0.5, x)
        if rng.random() < 0.3:
            y = float(math.floor(y))  # exercise integer boundaries
        if rng.random() < 0.3:
            z = float(math.floor(z))
        if not y < z:
            y, z = z * 0.5, z
        queries.append((x, y, z))

    def point(q):
        x, y, z = q
        observed = count_H(x, y, z, budget_mb=spec.budget_mb).count
        reference = count_H_brute(x, y, z)
        return _make_row("oracle-h", {"x": x, "y": y, "z": z},
                         observed, reference, exact=True)

    return _map_points(point, queries, spec.threads)


def _run_sieve_sandwich(spec: ExperimentSpec):
    g = spec.grid
    n_max = g["n_max"]
    rows = []
    for z, d_level in g["pairs"]:
        lower = lower_beta_weights(d_level, z)
        upper = upper_beta_weights(d_level, z)
        lo = convolve_unit_array(lower, n_max)[1:]
        hi = convolve_unit_array(upper, n_max)[1:]
        ind = sifted_indicator_array(z, n_max)[1:].astype(np.int32)
        ok = (lo <= ind) & (ind <= hi)
        ok &= ~(ind == 1) | ((lo == 1) & (hi == 1))
        good = int(np.count_nonzero(ok))
        rows.append(_make_row("sieve-sandwich",
                              {"Z": z, "D": d_level, "n_max": n_max},
                              good, n_max, exact=True))
    return rows


def _run_interm_ratio(spec: ExperimentSpec):
    g = spec.grid
    x = g["x"]
    max_s = max(abs(s) for s in g["s_list"])
    table = get_prime_table(x + max_s, spec.cache_dir, spec.budget_mb)
    points = [(y, rule, s) for y in g["ys"] for rule in g["z_rules"]
              for s in g["s_list"]]

    def point(pt):
        y, rule, s = pt
        z = z_from_rule(y, rule, g.get("B", 2.0))
        h_all = count_H(x, y, z, budget_mb=spec.budget_mb).count
        h_s = count_H_shifted(x, y, z, s, table, budget_mb=spec.budget_mb).count
        return _make_row("interm-ratio",
                         {"x": x, "y": y, "z_rule": rule, "z": z, "s": s},
                         h_s, h_all / math.log(x))

    return _map_points(point, points, spec.threads)


def _run_small_eta(spec: ExperimentSpec):
    g = spec.grid
    x = g["x"]
    max_s = max(abs(s) for s in g["s_list"])
    table = get_prime_table(x + max_s, spec.cache_dir, spec.budget_mb)
    points = [(y, s) for y in g["ys"] for s in g["s_list"]]

    def point(pt):
        y, s = pt
        z = z_from_rule(y, "short", g.get("B", 2.0))
        h_s = count_H_shifted(x, y, z, s, table, budget_mb=spec.budget_mb).count
        return _make_row("small-eta", {"x": x, "y": y, "z": z, "s": s},
                         h_s, shifted_main(x, y, z, s))

    return _map_points(point, points, spec.threads)


def _run_large_eta(spec: ExperimentSpec):
    g = spec.grid
    x, y, z = g["x"], g["y"], g["z"]
    max_s = max(abs(s) for s in g["s_list"])
    table = get_prime_table(x + max_s, spec.cache_dir, spec.budget_mb)
    rows = []
    for s in g["s_list"]:
        h_s = count_H_shifted(x, y, z, s, table, budget_mb=spec.budget_mb).count
        observed = h_s * math.log(x) / x
        rows.append(_make_row("large-eta", {"x": x, "y": y, "z": z, "s": s},
                              observed, 1.0))
    return rows


def _run_table_ratio(spec: ExperimentSpec):
    g = spec.grid
    s = g["s"]
    n_top = max(g["n_list"])
    table = get_prime_table(n_top * n_top + abs(s), spec.cache_dir, spec.budget_mb)
    rows = []
    for n in g["n_list"]:
        a_all = count_A(n, budget_mb=spec.budget_mb)
        a_s = count_A_shifted(n, s, table, budget_mb=spec.budget_mb)
        rows.append(_make_row("table-ratio", {"N": n, "s": s},
                              a_s, a_all / math.log(n)))
    return rows


def _run_phisum_error(spec: ExperimentSpec):
    g = spec.grid
    cutoff = g.get("prime_cutoff", 1_000_000)
    table = get_prime_table(cutoff, spec.cache_dir, spec.budget_mb)
    rows = []
    for a, s in g["pairs"]:
        x_top = max(g["x_list"])
        phi = phi_sieve(a * x_top, spec.budget_mb)
        for x in g["x_list"]:
            lhs = phi_ratio_sum(a, s, x, phi=phi)
            main = phi_ratio_main(a, s, x, cutoff, table=table)
            rows.append(_make_row(
                "phisum-error",
                {"a": a, "s": s, "x": x, "prime_cutoff": cutoff}, lhs, main))
    return rows


def _run_svl1_ratio(spec: ExperimentSpec):
    g = spec.grid
    x, a = g["x"], g["a"]
    table = get_prime_table(x, spec.cache_dir, spec.budget_mb)
    rows = []
    for q1 in g["q1_list"]:
        observed = sum_pi_ap_range(x, q1, 2 * q1, a, table)
        reference = float(f_factor(a)) * C315 * x * math.log(2.0) / math.log(x)
        rows.append(_make_row("svl1-ratio",
                              {"x": x, "a": a, "Q1": q1, "Q2": 2 * q1},
                              observed, reference))
    return rows


def _run_prl8_ratio(spec: ExperimentSpec):
    g = spec.grid
    x, eps = g["x"], g.get("eps", 0.2)
    points = [(y, rule) for y in g["ys"] for rule in g["eta_rules"]]

    def point(pt):
        y, rule = pt
        eta = eta_from_rule(y, rule)
        z = y * math.exp(eta)
        h = count_H(x, y, z, budget_mb=spec.budget_mb).count
        dens = sum_L_density(y**eps, eta, "reciprocal", squarefree=True)
        reference = x * dens / math.log(y) ** 2
        return _make_row("prl8-ratio",
                         {"x": x, "y": y, "eta": eta, "z": z, "eps": eps},
                         h, reference)

    return _map_points(point, points, spec.threads)


def _run_l2b_ratio(spec: ExperimentSpec):
    g = spec.grid
    x, y = g["x"], g["y"]
    table = get_prime_table(x, spec.cache_dir, spec.budget_mb)
    rows = []
    for q, a in g["qa_pairs"]:
        phi_q = _phi_int(q)
        for v in g["v_list"]:
            observed = weighted_shifted_sum(x, q, a, v, y, table)
            reference = x / (phi_q * math.log(x)) * math.log(y) ** (v - 1.0)
            rows.append(_make_row("l2b-ratio",
                                  {"x": x, "q": q, "a": a, "v": v, "y": y},
                                  observed, reference))
    return rows


def _small_factors(n):
    out = []
    m, p = n, 2
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


def _phi_int(n):
    out = 1
    for p, e in _small_factors(n):
        out *= (p - 1) * p ** (e - 1)
    return out


_RUNNERS = {
    "oracle-h": _run_oracle_h,
    "sieve-sandwich": _run_sieve_sandwich,
    "interm-ratio": _run_interm_ratio,
    "small-eta": _run_small_eta,
    "large-eta": _run_large_eta,
    "table-ratio": _run_table_ratio,
    "phisum-error": _run_phisum_error,
    "svl1-ratio": _run_svl1_ratio,
    "prl8-ratio": _run_prl8_ratio,
    "l2b-ratio": _run_l2b_ratio,
}

_DEFAULT_GRIDS = {
    "oracle-h": {"x_max": 5000, "queries": 200},
    "sieve-sandwich": {"pairs": [(5, 125), (10, 1000), (20, 8000), (30, 27000)],
                       "n_max": 1_000_000},
    "interm-ratio": {"x": 100_000, "ys": [30, 100],
                     "z_rules": ["short", "dyadic", "wide"], "s_list": [1, -1],
                     "B": 2.0},
    "small-eta": {"x": 1_000_000, "ys": [100, 1000], "s_list": [1, 2], "B": 2.0},
    "large-eta": {"x": 10_000_000, "y": 20, "z": 100_000, "s_list": [1]},
    "table-ratio": {"n_list": [2**k for k in range(8, 14)], "s": 1},
    "phisum-error": {"pairs": [(1, 1), (2, 3), (1, -2)],
                     "x_list": [10**3, 10**4, 10**5, 10**6],
                     "prime_cutoff": 10_000_000},
    "svl1-ratio": {"x": 10_000_000, "a": -1, "q1_list": [100, 1000]},
    "prl8-ratio": {"x": 10_000_000, "ys": [100, 1000],
                   "eta_rules": ["invsq", 0.1, "log2"], "eps": 0.2},
    "l2b-ratio": {"x": 100_000, "qa_pairs": [(1, 1), (3, 1), (3, 2)],
                  "v_list": [1.0, 1.5], "y": 100},
}


def default_spec(name: str, **overrides) -> ExperimentSpec:
    if name not in _DEFAULT_GRIDS:
        raise InvalidArgumentError(f"unknown experiment {name!r}")
    grid = dict(_DEFAULT_GRIDS[name])
    grid_overrides = overrides.pop("grid", {})
    grid.update(grid_overrides)
    return ExperimentSpec(name=name, grid=grid, **overrides)


def run_experiment(spec: ExperimentSpec) -> list[ReportRow]:
    """Run one named experiment; deterministic rows for a fixed (spec, seed).

    On a budget violation the rows computed so far are returned with an
    explicit truncation marker appended rather than failing silently.
    """
    runner = _RUNNERS[spec.name]
    try:
        return runner(spec)
    except ResourceLimitError as exc:
        log.warning("experiment %s truncated: %s", spec.name, exc)
        return [_truncation_row(spec.name, {"reason": str(exc)})]


def weighted_shifted_sum(x: int, q: int, a: int, v: float, y: float,
                         table: PrimeTable) -> float:
    """sum over primes p <= x, p = a (mod q), of v^Omega((p-a)/q; y), where
    Omega(.; y) counts prime-power divisors up to y.

    The p = a term (cofactor 0) contributes v^0 = 1, so v = 1 collapses the
    sum to pi(x; q, a) exactly.
    """
    if math.gcd(a, q) != 1:
        raise InvalidArgumentError(f"need gcd(a, q) = 1, got a={a}, q={q}")
    if not (1.0 <= v < 2.0):
        raise InvalidArgumentError(f"need 1 <= v < 2, got v={v}")
    if x <= abs(a):
        raise InvalidArgumentError(f"need x > |a|, got x={x}, a={a}")
    if y < 1.5:
        raise InvalidArgumentError(f"need y >= 3/2, got y={y}")
    if x > table.limit:
        raise InvalidArgumentError(f"x={x} exceeds table limit {table.limit}")
    ps = table.primes()
    ps = ps[: np.searchsorted(ps, x, side="right")]
    ps = ps[ps % q == a % q]
    m_max = int((int(ps.max()) + abs(a)) // q) if ps.size else 1
    spf = spf_sieve(max(2, m_max))
    total = 0.0
    for p in ps:
        m = abs(int(p) - a) // q
        if m == 0:
            total += 1.0
            continue
        total += v ** big_omega_between(factorize_spf(m, spf), 1, y)
    return total


# ---------------------------------------------------------------- prime cache

_MAGIC = b"DSPL"
_VERSION = 1
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def save_prime_cache(table: PrimeTable, path) -> None:
    """Header: magic 'DSPL', u32 version, u64 limit, u64 bit count; then the
    raw little-endian bit array over odd integers >= 3; then u64 FNV-1a of
    the bit-array bytes.  All integers little-endian."""
    payload = table.bits.tobytes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<IQQ", _VERSION, table.limit, table.n_bits))
        fh.write(payload)
        fh.write(struct.pack("<Q", fnv1a64(payload)))


def load_prime_cache(path) -> PrimeTable:
    with open(path, "rb") as fh:
        blob = fh.read()
    head = 4 + struct.calcsize("<IQQ")
    if len(blob) < head + 8 or blob[:4] != _MAGIC:
        raise CorruptCacheError(f"{path}: not a prime cache")
    version, limit, n_bits = struct.unpack_from("<IQQ", blob, 4)
    if version != _VERSION:
        raise UnsupportedVersionError(f"{path}: version {version}")
    if n_bits != max(0, (limit - 1) // 2):
        raise CorruptCacheError(f"{path}: bit count {n_bits} inconsistent with limit {limit}")
    n_payload = (n_bits + 7) // 8
    if len(blob) != head + n_payload + 8:
        raise CorruptCacheError(f"{path}: truncated or oversized")
    payload = blob[head: head + n_payload]
    (checksum,) = struct.unpack_from("<Q", blob, head + n_payload)
    if fnv1a64(payload) != checksum:
        raise CorruptCacheError(f"{path}: checksum mismatch")
    bits = np.frombuffer(payload, dtype=np.uint8).copy()
    n_odd = int(np.unpackbits(bits, count=n_bits, bitorder="little").sum()) if n_bits else 0
    count = (1 if limit >= 2 else 0) + n_odd
    return PrimeTable(int(limit), bits, int(n_bits), count)


def get_prime_table(limit: int, cache_dir=None,
                    budget_mb: int | None = DEFAULT_BUDGET_MB) -> PrimeTable:
    """Build a table, or round-trip it through cache_dir when given."""
    if cache_dir is None:
        return build_prime_table(limit, budget_mb)
    from pathlib import Path

    path = Path(cache_dir) / f"primes-{limit}.dspl"
    if path.exists():
        table = load_prime_cache(path)
        log.info("prime cache hit: %s", path)
        return table
    table = build_prime_table(limit, budget_mb)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_prime_cache(table, path)
    log.info("prime cache written: %s", path)
    return table


# ---------------------------------------------------------------- reports

def _fmt_number(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isfinite(v):
            return f"{v:.15g}"
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return str(v)


def _csv_cell(text: str) -> str:
    # Quote only on demand so numeric-only reports stay byte-stable.
    if any(ch in text for ch in ',"\n\r'):
        return '"' + text.replace('"', '""') + '"'
    return text


def _param_columns(rows) -> list[str]:
    cols: list[str] = []
    for row in rows:
        for key in row.params:
            if key not in cols:
                cols.append(key)
    return cols


def emit_report(rows, format: str = "csv", path=None) -> str:
    """Serialize rows (csv or json) with 15-significant-digit numbers; returns
    the document and optionally writes it to path.  Byte-deterministic."""
    if not rows:
        raise InvalidArgumentError("rows must be nonempty")
    if format not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown format {format!r}")
    if format == "csv":
        cols = _param_columns(rows)
        lines = [",".join(["experiment", *cols,
                           "observed", "reference", "ratio", "verdict"])]
        for r in rows:
            cells = [r.experiment]
            cells += [_fmt_number(r.params[c]) if c in r.params else ""
                      for c in cols]
            cells += [_fmt_number(r.observed), _fmt_number(r.reference),
                      _fmt_number(r.ratio), r.verdict]
            lines.append(",".join(_csv_cell(c) for c in cells))
        doc = "\n".join(lines) + "\n"
    else:
        def jnum(v):
            s = _fmt_number(v)
            if s in ("inf", "-inf", "nan"):
                return f'"{s}"'
            return s

        def jval(v):
            if isinstance(v, str):
                return json.dumps(v)
            return jnum(v)

        row_docs = []
        for r in rows:
            params = ", ".join(f'"{k}": {jval(v)}' for k, v in r.params.items())
            row_docs.append(
                '    {"experiment": "%s", "params": {%s}, "observed": %s, '
                '"reference": %s, "ratio": %s, "verdict": "%s"}'
                % (r.experiment, params, jnum(r.observed), jnum(r.reference),
                   jnum(r.ratio), r.verdict))
        doc = '{\n  "rows": [\n' + ",\n".join(row_docs) + "\n  ]\n}\n"
    if path is not None:
        try:
            with open(path, "w") as fh:
                fh.write(doc)
        except OSError as exc:
            raise OSError(f"writing report to {path}: {exc}") from exc
    return doc
