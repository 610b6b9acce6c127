"""Auditors for decomposition runs, the Farey scanner and the prefix enumerator.

Every check is an exact integer or rational comparison.  Failures are
returned as data (a :class:`Check` with the first violating index and the
values involved); only :func:`scan` raises, and only to surface a witness.

Enumerator bounds
-----------------
:func:`enumerate_prefixes` searches staggered prefixes
``(b_1..b_d, c_1..c_{d-1})`` whose feasible region is nonempty and whose
``b_d`` is at most ``b_cap``.  The search is finite and complete because

* ``b`` is nondecreasing wherever defined, so every ``b_k <= b_cap``;
* ``B_{k+1}`` meets ``C_k``, hence ``t_k (t_k + t_{k-1}) < q_{k+1} q_k``, and
  ``q_{k+1} <= b_cap q_k + q_{k-1}``, which caps ``c_k`` from above;
* ``c_1 >= b_1`` and, for ``k >= 2``, ``c_k`` exceeds the lower bound forced by
  ``B_k``, ``C_k``, ``C_{k-1}`` meeting, which starts the ascent;
* the region is an intersection, so an empty region prunes the subtree.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator

from . import kernels
from .engine import DecompositionResult, _normalize, decompose
from .errors import PrecisionExhausted, ShulgaError
from .intervals import (
    DigitPrefix,
    Interval,
    b_interval,
    c_interval,
    feasible_region,
    lower_bound_b,
    lower_bound_c,
    partition_check,
)
from .rational import ConvergentTable, format_real, leading_digits, sub_rational

log = logging.getLogger(__name__)

__all__ = [
    "AuditReport",
    "Check",
    "ScanFailure",
    "ScanRecord",
    "ScanSummary",
    "audit",
    "c_drop_index",
    "enumerate_prefixes",
    "enumerate_prefixes_brute",
    "find_c_drop",
    "scan",
]

THEOREM_CHECKS = (
    "sum_exact",
    "digit_consistency",
    "strict_c_gt_b",
    "c1_ge_b1",
    "b_monotone",
    "b_skip_growth",
    "b_linear",
    "ratio_strictly_increasing",
    "ratio_le_q",
    "partition_ok",
    "region_membership",
    "b_ratio_bound",
    "three_halves",
    "c_lower_bound",
    "b_lower_bound",
)


@dataclass
class Check:
    name: str
    status: str = "pass"  # pass | fail | n/a | undetermined
    index: int | None = None
    witness: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status != "fail"

    def fail(self, index: int, **values) -> None:
        if self.status != "fail":
            self.status = "fail"
            self.index = index
            self.witness = {k: str(v) for k, v in values.items()}

    def to_dict(self) -> dict:
        d = {"status": self.status}
        if self.index is not None:
            d["index"] = str(self.index)
            d["witness"] = self.witness
        return d


@dataclass
class AuditReport:
    checks: dict[str, Check]
    stats: dict

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def __getitem__(self, name: str) -> Check:
        return self.checks[name]

    def failures(self) -> list[Check]:
        return [c for c in self.checks.values() if not c.ok]

    def flags(self) -> dict:
        return {name: c.to_dict() for name, c in self.checks.items()}


def audit(alpha, result: DecompositionResult) -> AuditReport:
    """Evaluate every theorem check on ``result`` for input ``alpha``."""
    alpha = result.alpha if alpha is None else _normalize(alpha)
    b, c = result.b, result.c
    N = len(c)
    ck = {name: Check(name) for name in THEOREM_CHECKS}
    B = ConvergentTable.build(0, b[:N])
    C = ConvergentTable.build(0, c)
    q, t = B.q_, C.q_
    rational = isinstance(alpha, Fraction)

    # sum
    if result.terminated:
        if rational and B.value() + C.value() != alpha:
            ck["sum_exact"].fail(N, alpha=alpha, beta=B.value(), gamma=C.value())
    else:
        ck["sum_exact"].status = "n/a"

    # digit consistency at every intermediate state
    dc = ck["digit_consistency"]
    try:
        for m in range(1, N + 1):
            got_b = leading_digits(sub_rational(alpha, C.value(m)), m)
            got_c = leading_digits(sub_rational(alpha, B.value(m)), m)
            if got_b != list(b[:m]) or got_c != list(c[:m]):
                dc.fail(m, b_expected=list(b[:m]), b_found=got_b,
                        c_expected=list(c[:m]), c_found=got_c)
                break
    except PrecisionExhausted:
        dc.status = "undetermined"

    if N >= 1 and c[0] < b[0]:
        ck["c1_ge_b1"].fail(1, b=b[0], c=c[0])
    for n in range(1, N + 1):
        i = n - 1
        if n >= 2 and c[i] <= b[i]:
            ck["strict_c_gt_b"].fail(n, b=b[i], c=c[i])
        if n < N and b[i + 1] < b[i]:
            ck["b_monotone"].fail(n, b_n=b[i], b_next=b[i + 1])
        if n + 1 < N and b[i + 2] < b[i] + 1:
            ck["b_skip_growth"].fail(n, b_n=b[i], b_n_plus_2=b[i + 2])
        if b[i] < n:
            ck["b_linear"].fail(n, b=b[i])
        qn, qm1, tn, tm1 = q(n), q(n - 1), t(n), t(n - 1)
        if n >= 2 and tn * qm1 <= tm1 * qn:
            ck["ratio_strictly_increasing"].fail(n, t_n=tn, q_n=qn, t_prev=tm1, q_prev=qm1)
        if rational and tn > alpha.denominator * qn:
            ck["ratio_le_q"].fail(n, t_n=tn, q_n=qn, q=alpha.denominator)
        if not partition_check((b[:N], c), n):
            ck["partition_ok"].fail(n, t_n=tn, q_n=qn)
        if n < N:
            if b[i + 1] * qn * qn <= tn * tn - qn * qn:
                ck["b_ratio_bound"].fail(n + 1, b_next=b[i + 1], t_n=tn, q_n=qn)
            if b[i] >= 8 and b[i + 1] < c[i] and 2 * c[i + 1] <= 3 * b[i]:
                ck["three_halves"].fail(n, b_n=b[i], c_n=c[i], c_next=c[i + 1])
    if not rational:
        ck["ratio_le_q"].status = "n/a"

    # region membership, level by level so a failure names its level
    pf = DigitPrefix(b[:N], c)
    region = Interval(Fraction(0), Fraction(1), True, True)
    rm = ck["region_membership"]
    try:
        for k in range(1, N + 1):
            Bk, Ck = b_interval(pf, k), c_interval(pf, k)
            region = region.intersect(Bk.as_interval()).intersect(Ck.as_interval())
            if not region.contains(alpha):
                rm.fail(k, region=region, B=Bk, C=Ck)
                break
    except PrecisionExhausted:
        rm.status = "undetermined"

    # conditional lower bounds; the hypotheses are evaluated, not assumed
    lb_c_tested = lb_b_tested = 0
    for n in range(2, N + 1):
        i = n - 1
        if not c_interval(pf, n).as_interval().intersect(
                b_interval(pf, n).as_interval()).intersect(
                c_interval(pf, n - 1).as_interval()).is_empty():
            lb_c_tested += 1
            bound = lower_bound_c(pf, n)
            if not c[i] > bound:
                ck["c_lower_bound"].fail(n, c=c[i], bound=bound)
        if not b_interval(pf, n - 1).as_interval().intersect(
                c_interval(pf, n).as_interval()).intersect(
                c_interval(pf, n - 1).as_interval()).is_empty():
            lb_b_tested += 1
            bound = lower_bound_b(pf, n)
            if not b[i] > bound:
                ck["b_lower_bound"].fail(n, b=b[i], bound=bound)

    drops = [l for l in range(2, N + 1) if c[l - 1] < c[0]]
    running, m = [], 0
    for x in c:
        m = max(m, x)
        running.append(m)
    stats = {
        "steps": N,
        "c_monotone": all(c[k] >= c[k - 1] for k in range(1, N)),
        "c_drop_indices": drops,
        "max_c_running": running,
        "ratio_final": Fraction(t(N), q(N)) if N else None,
        "c_lower_bound_tested": lb_c_tested,
        "b_lower_bound_tested": lb_b_tested,
    }
    return AuditReport(ck, stats)


# ---------------------------------------------------------------------------
# scanning
# ---------------------------------------------------------------------------

class ScanFailure(ShulgaError):
    """A scanned fraction failed to terminate or failed an audit."""

    def __init__(self, p: int, q: int, reason: str):
        super().__init__(f"{p}/{q}: {reason}")
        self.p, self.q, self.reason = p, q, reason


@dataclass(frozen=True)
class ScanRecord:
    p: int
    q: int
    steps: int
    terminated: bool
    max_b: int
    max_c: int
    first_c_decrease: int
    first_c_drop: int

    @property
    def c_monotone(self) -> bool:
        return self.first_c_decrease == 0

    @property
    def length_vs_log2q(self) -> float:
        return self.steps / math.log2(self.q) if self.q > 1 else 0.0

    @cached_property
    def _result(self) -> DecompositionResult:
        return decompose(Fraction(self.p, self.q))

    @property
    def c_drop_indices(self) -> list[int]:
        c = self._result.c
        return [l for l in range(2, len(c) + 1) if c[l - 1] < c[0]]

    @property
    def ratio_final(self) -> Fraction | None:
        r = self._result
        if not r.steps:
            return None
        return Fraction(ConvergentTable.build(0, r.c).q_(r.steps),
                        ConvergentTable.build(0, r.b).q_(r.steps))

    CSV_COLUMNS = ("p", "q", "steps", "terminated", "max_b", "max_c", "c_monotone",
                   "first_c_drop_index", "len_over_log2q")

    def csv_row(self) -> list[str]:
        return [str(self.p), str(self.q), str(self.steps), str(self.terminated).lower(),
                str(self.max_b), str(self.max_c), str(self.c_monotone).lower(),
                str(self.first_c_drop), f"{self.length_vs_log2q:.3f}"]


@dataclass
class ScanSummary:
    q_min: int
    q_max: int
    count: int = 0
    max_steps: int = 0
    argmax: tuple[int, int] | None = None
    c_nonmonotone: int = 0
    first_nonmonotone: tuple[int, int] | None = None
    c_drops: int = 0
    first_c_drop: tuple[int, int] | None = None
    # q -> longest run among fractions with that denominator
    per_q_max: dict[int, int] = field(default_factory=dict)

    def add(self, r: ScanRecord) -> None:
        self.count += 1
        if r.steps > self.max_steps:
            self.max_steps, self.argmax = r.steps, (r.p, r.q)
        if not r.c_monotone:
            self.c_nonmonotone += 1
            self.first_nonmonotone = self.first_nonmonotone or (r.p, r.q)
        if r.first_c_drop:
            self.c_drops += 1
            self.first_c_drop = self.first_c_drop or (r.p, r.q)
        if r.steps > self.per_q_max.get(r.q, -1):
            self.per_q_max[r.q] = r.steps

    def trend(self, buckets: int = 8) -> list[dict]:
        """Max steps versus ``2 log2 q`` on geometric denominator buckets."""
        rows = []
        if self.q_max < 2:
            return rows
        lo = max(2, self.q_min)
        edges = sorted({round(lo * (self.q_max / lo) ** (k / buckets)) for k in range(buckets + 1)})
        prev = lo - 1
        for hi in edges:
            if hi <= prev:
                continue
            steps = max((s for qq, s in self.per_q_max.items() if prev < qq <= hi), default=0)
            bound = 2 * math.log2(hi)
            rows.append({"q_upto": str(hi), "max_steps": str(steps),
                         "two_log2_q": f"{bound:.3f}", "ratio": f"{steps / bound:.3f}"})
            prev = hi
        return rows

    def to_dict(self) -> dict:
        fmt = lambda w: None if w is None else f"{w[0]}/{w[1]}"  # noqa: E731
        return {
            "q_min": str(self.q_min),
            "q_max": str(self.q_max),
            "fractions": str(self.count),
            "max_steps": str(self.max_steps),
            "argmax": fmt(self.argmax),
            "two_log2_qmax": f"{2 * math.log2(max(self.q_max, 2)):.3f}",
            "c_nonmonotone": str(self.c_nonmonotone),
            "first_c_nonmonotone": fmt(self.first_nonmonotone),
            "c_drops": str(self.c_drops),
            "first_c_drop": fmt(self.first_c_drop),
            "trend": self.trend(),
            "backend": kernels.BACKEND,
        }


def _scan_chunk(args) -> list[tuple]:
    qs, max_steps = args
    out = []
    for q in qs:
        out.extend(kernels.scan_q(q, max_steps(q) if callable(max_steps) else max_steps))
    return out


def _default_cap(q: int) -> int:
    return 10 * math.ceil(math.log2(q)) + 64 if q > 1 else 64


def _blocks(q_min: int, q_max: int, size: int = 64) -> list[range]:
    return [range(lo, min(lo + size, q_max + 1)) for lo in range(q_min, q_max + 1, size)]


def _raw_records(q_min: int, q_max: int, cap, jobs: int) -> Iterator[tuple]:
    # consecutive q blocks; ``map`` keeps them in order so output is deterministic
    tasks = [(blk, cap) for blk in _blocks(q_min, q_max)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            for part in ex.map(_scan_chunk, tasks):
                yield from part
    else:
        for task in tasks:
            yield from _scan_chunk(task)


def scan(q_max: int, q_min: int = 1, *, jobs: int = 1, max_steps: int | None = None,
         cross_check: bool = False, on_record=None, keep: bool = True,
         raise_on_failure: bool = True) -> tuple[list[ScanRecord], ScanSummary]:
    """Decompose and audit every reduced ``p/q`` in ``[0, 1]`` with ``q_min <= q <= q_max``.

    Records come back in increasing ``q`` then ``p``.  A run that hits the
    step cap or fails any audit raises :class:`ScanFailure` naming the first
    such fraction (or is logged and skipped when ``raise_on_failure`` is off).
    With ``cross_check`` each fraction is also run through the oracle.
    ``keep=False`` drops records after ``on_record`` sees them.
    """
    if q_max < 1 or q_min < 1 or q_min > q_max:
        raise ValueError("need 1 <= q_min <= q_max")
    cap = max_steps if max_steps is not None else _default_cap
    raw = _raw_records(q_min, q_max, cap, jobs)
    if cross_check:
        from .oracle import oracle_decompose
    summary = ScanSummary(q_min, q_max)
    records = []
    for p, q, steps, status, mb, mc, dec, drop, mask in raw:
        reason = None
        if status == kernels.CAPPED:
            reason = "step cap reached before termination"
        elif status == kernels.UNDEFINED or mask:
            reason = "audit failed: " + ", ".join(kernels.failed_checks(mask))
        elif cross_check:
            res = decompose(Fraction(p, q))
            ob, oc, _ = oracle_decompose(Fraction(p, q))
            if (res.b, res.c) != (ob, oc):
                reason = f"oracle mismatch: {res.b}/{res.c} vs {ob}/{oc}"
        if reason is not None:
            if raise_on_failure:
                raise ScanFailure(p, q, reason)
            log.error("%d/%d: %s", p, q, reason)
        rec = ScanRecord(p, q, steps, status == kernels.DONE, mb, mc, dec, drop)
        summary.add(rec)
        if on_record is not None:
            on_record(rec)
        if keep:
            records.append(rec)
    return records, summary


# ---------------------------------------------------------------------------
# c-drops
# ---------------------------------------------------------------------------

def c_drop_index(alpha, l: int | None = None, max_steps: int | None = None) -> int | None:
    """First index ``l >= 2`` with ``c_l < c_1`` (or test the given ``l``)."""
    r = decompose(alpha, max_steps)
    c = r.c
    if l is not None:
        return l if l <= len(c) and c[l - 1] < c[0] else None
    return next((k for k in range(2, len(c) + 1) if c[k - 1] < c[0]), None)


def find_c_drop(l: int, q_max: int, q_min: int = 1) -> Fraction | None:
    """First ``p/q`` in scan order (``q <= q_max``) with ``c_l < c_1``."""
    if l < 2:
        raise ValueError("l must be >= 2")
    for q in range(q_min, q_max + 1):
        for p, qq, steps, *_ in kernels.scan_q(q, _default_cap(q)):
            if steps >= l:
                _, c, _ = kernels.decompose_pq(p, qq, steps)
                if c[l - 1] < c[0]:
                    return Fraction(p, qq)
    return None


# ---------------------------------------------------------------------------
# prefix enumeration
# ---------------------------------------------------------------------------

def _c_upper(qs: list[int], ts: list[int], b_cap: int) -> int:
    """Largest ``c_k`` with ``t_k (t_k + t_{k-1}) < q_{k+1,max} q_k``."""
    qk, qk1 = qs[-1], qs[-2]
    rhs = (b_cap * qk + qk1) * qk
    tm1, tm2 = ts[-1], ts[-2]
    # t_k = c tm1 + tm2 is increasing in c; bisect the last admissible c
    lo, hi = 0, 1
    while (hi * tm1 + tm2) * (hi * tm1 + tm2 + tm1) < rhs:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        tk = mid * tm1 + tm2
        if tk * (tk + tm1) < rhs:
            lo = mid
        else:
            hi = mid
    return lo


def _nonempty(iv: Interval) -> bool:
    return not iv.is_empty()


def enumerate_prefixes(depth: int, b_cap: int, *, jobs: int = 1) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All staggered prefixes of length ``depth`` with nonempty region and ``b_depth <= b_cap``.

    Output is sorted lexicographically by ``(b, c)``; ``jobs > 1`` splits the
    search over ``b_1``.
    """
    if depth < 2 or b_cap < 2:
        raise ValueError("need depth >= 2 and b_cap >= 2")
    roots = [(depth, b_cap, b1) for b1 in range(2, b_cap + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as ex:
            parts = list(ex.map(_enumerate_root, roots))
    else:
        parts = [_enumerate_root(r) for r in roots]
    return sorted(x for part in parts for x in part)


def _enumerate_root(args) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    depth, b_cap, b1 = args
    out: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def rec(b: tuple, c: tuple, region: Interval, qs: list[int], ts: list[int]):
        # b has one more digit than c; region already includes B_{len(b)}
        k = len(b)
        if k == depth:
            out.append((b, c))
            return
        lo = b[0] if k == 1 else math.floor(lower_bound_c((b, c + (1,)), k)) + 1
        lo = max(lo, 1)
        hi = _c_upper(qs, ts, b_cap)
        for ck in range(lo, hi + 1):
            c1 = c + (ck,)
            r1 = region.intersect(c_interval((b, c1), k).as_interval())
            if not _nonempty(r1):
                continue
            ts1 = ts + [ck * ts[-1] + ts[-2]]
            for bk in range(b[-1], b_cap + 1):
                b1 = b + (bk,)
                r2 = r1.intersect(b_interval((b1, c1), k + 1).as_interval())
                if not _nonempty(r2):
                    continue
                rec(b1, c1, r2, qs + [bk * qs[-1] + qs[-2]], ts1)

    full = Interval(Fraction(0), Fraction(1), True, True)
    r = full.intersect(b_interval(((b1,), ()), 1).as_interval())
    if _nonempty(r):
        rec((b1,), (), r, [0, 1, b1], [0, 1])
    return out


def enumerate_prefixes_brute(depth: int, b_cap: int, c_cap: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Unpruned search over ``b <= b_cap``, ``c <= c_cap``; for cross-checks only."""
    import itertools

    out = []
    for b in itertools.product(range(2, b_cap + 1), repeat=depth):
        for c in itertools.product(range(1, c_cap + 1), repeat=depth - 1):
            if feasible_region((b, c)) is not None:
                out.append((b, c))
    out.sort()
    return out


def iter_scan_rows(records: Iterable[ScanRecord]) -> Iterator[list[str]]:
    for r in records:
        yield r.csv_row()
