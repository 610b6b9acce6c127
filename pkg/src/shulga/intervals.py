"""Half-open cylinder intervals and the B_k / C_k region calculus.

An :class:`OrientedInterval` records which endpoint belongs to the set, so a
cylinder ``[[0;a..a_n], [0;a..a_n+1])`` is built the same way whatever the
parity of ``n``.  Intersections of such intervals are general
:class:`Interval` objects with per-endpoint closure flags.

The feasibility criteria compare the interval lengths through the
convergent denominators ``q`` (of the ``b`` digits) and ``t`` (of the ``c``
digits) using integer cross-multiplication only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .rational import ConvergentTable, RealInput, as_fraction, cf_value, compare

__all__ = [
    "DigitPrefix",
    "Interval",
    "OrientedInterval",
    "b_interval",
    "c_interval",
    "criterion_BnCn",
    "criterion_BnCn1",
    "criterion_CnCn1",
    "cylinder",
    "feasible_region",
    "lower_bound_b",
    "lower_bound_c",
    "partition_check",
]


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    def is_empty(self) -> bool:
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def contains(self, x: RealInput) -> bool:
        s = compare(x, self.lo)
        if s < 0 or (s == 0 and not self.lo_closed):
            return False
        s = compare(x, self.hi)
        return s < 0 or (s == 0 and self.hi_closed)

    __contains__ = contains

    def intersect(self, other: "Interval") -> "Interval":
        # on equal endpoints the excluded flag wins
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif self.lo < other.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif self.hi > other.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lc, hc)

    def issubset(self, other: "Interval") -> bool:
        if self.is_empty():
            return True
        if self.lo < other.lo or (self.lo == other.lo and self.lo_closed and not other.lo_closed):
            return False
        if self.hi > other.hi or (self.hi == other.hi and self.hi_closed and not other.hi_closed):
            return False
        return True

    def __str__(self) -> str:
        return (f"{'[' if self.lo_closed else '('}{_fmt(self.lo)}, "
                f"{_fmt(self.hi)}{']' if self.hi_closed else ')'}")


@dataclass(frozen=True)
class OrientedInterval:
    """Half-open interval that includes ``included_end`` and not ``excluded_end``."""

    included_end: Fraction
    excluded_end: Fraction

    def __post_init__(self):
        object.__setattr__(self, "included_end", as_fraction(self.included_end))
        object.__setattr__(self, "excluded_end", as_fraction(self.excluded_end))
        if self.included_end == self.excluded_end:
            raise ValueError("degenerate oriented interval")

    @property
    def lo(self) -> Fraction:
        return min(self.included_end, self.excluded_end)

    @property
    def hi(self) -> Fraction:
        return max(self.included_end, self.excluded_end)

    def as_interval(self) -> Interval:
        if self.included_end < self.excluded_end:
            return Interval(self.included_end, self.excluded_end, True, False)
        return Interval(self.excluded_end, self.included_end, False, True)

    def contains(self, x: RealInput) -> bool:
        return self.as_interval().contains(x)

    __contains__ = contains

    def shift(self, z) -> "OrientedInterval":
        z = as_fraction(z)
        return OrientedInterval(self.included_end + z, self.excluded_end + z)

    def __str__(self) -> str:
        return str(self.as_interval())


def cylinder(digits: Sequence[int]) -> OrientedInterval:
    """Reals in ``[0, 1]`` whose expansion begins with ``digits``."""
    digits = tuple(digits)
    if not digits or any(d < 1 for d in digits):
        raise ValueError(f"cylinder needs positive digits, got {digits}")
    bumped = digits[:-1] + (digits[-1] + 1,)
    return OrientedInterval(cf_value(digits), cf_value(bumped))


@dataclass(frozen=True)
class DigitPrefix:
    """Digits ``b_1..`` (each >= 2) and ``c_1..`` (each >= 1) of a run."""

    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "c", tuple(self.c))
        if any(x < 2 for x in self.b):
            raise ValueError(f"b digits must be >= 2: {self.b}")
        if any(x < 1 for x in self.c):
            raise ValueError(f"c digits must be >= 1: {self.c}")

    def tables(self) -> tuple[ConvergentTable, ConvergentTable]:
        return ConvergentTable.build(0, self.b), ConvergentTable.build(0, self.c)


def _prefix(prefix) -> DigitPrefix:
    if isinstance(prefix, DigitPrefix):
        return prefix
    b, c = prefix
    return DigitPrefix(tuple(b), tuple(c))


def b_interval(prefix, k: int) -> OrientedInterval:
    """``B_k``: the cylinder step for ``b_k``, shifted by ``[0; c_1..c_{k-1}]``."""
    pf = _prefix(prefix)
    if not 1 <= k <= len(pf.b) or k - 1 > len(pf.c):
        raise ValueError(f"B_{k} needs b_1..b_{k} and c_1..c_{k - 1}")
    lower = pf.b[:k - 1] + (pf.b[k - 1] - 1,)
    shift = cf_value(pf.c[:k - 1])
    return OrientedInterval(cf_value(lower) + shift, cf_value(pf.b[:k]) + shift)


def c_interval(prefix, k: int) -> OrientedInterval:
    """``C_k``: the cylinder of ``c_1..c_k``, shifted by ``[0; b_1..b_k]``."""
    pf = _prefix(prefix)
    if not 1 <= k <= min(len(pf.b), len(pf.c)):
        raise ValueError(f"C_{k} needs b_1..b_{k} and c_1..c_{k}")
    return cylinder(pf.c[:k]).shift(cf_value(pf.b[:k]))


def feasible_region(prefix, n: int | None = None) -> Interval | None:
    """``A_n`` as one interval, or ``None`` when empty.

    A staggered prefix with ``len(b) == len(c) + 1`` also intersects the
    trailing ``B_{n+1}``.
    """
    pf = _prefix(prefix)
    if n is None:
        n = len(pf.c)
    region = Interval(Fraction(0), Fraction(1), True, True)
    for k in range(1, n + 1):
        region = region.intersect(b_interval(pf, k).as_interval())
        region = region.intersect(c_interval(pf, k).as_interval())
        if region.is_empty():
            return None
    if len(pf.b) > n:
        region = region.intersect(b_interval(pf, n + 1).as_interval())
        if region.is_empty():
            return None
    return region


# ---------------------------------------------------------------------------
# integer criteria
# ---------------------------------------------------------------------------

def _qt(prefix, n):
    """``(q_n, q_{n-1}, t_n, t_{n-1}, t_{n-2})`` with ``q_0 = t_0 = 1``."""
    pf = _prefix(prefix)
    qb, tc = pf.tables()
    q = qb.q_
    t = tc.q_
    tn = t(n) if n <= len(pf.c) else None
    tm2 = t(n - 2) if n >= 2 else None
    return q(n), q(n - 1), tn, t(n - 1), tm2


def criterion_BnCn(prefix, n: int | None = None) -> bool:
    """``B_n`` meets ``C_n``: ``q_n (q_n - q_{n-1}) < t_{n-1} (t_n + t_{n-1})``."""
    pf = _prefix(prefix)
    n = len(pf.c) if n is None else n
    qn, qm1, tn, tm1, _ = _qt(pf, n)
    return qn * (qn - qm1) < tm1 * (tn + tm1)


def criterion_CnCn1(prefix, n: int | None = None) -> bool:
    """``C_n`` meets ``C_{n-1}``: ``(t_n + t_{n-1})(t_{n-1} + t_{n-2}) < c_n q_n q_{n-1}``."""
    pf = _prefix(prefix)
    n = len(pf.c) if n is None else n
    if n < 2:
        raise ValueError("criterion needs n >= 2")
    qn, qm1, tn, tm1, tm2 = _qt(pf, n)
    return (tn + tm1) * (tm1 + tm2) < pf.c[n - 1] * qn * qm1


def criterion_BnCn1(prefix, n: int | None = None) -> bool:
    """``B_n`` meets ``C_{n-1}``: ``t_{n-1} (t_{n-1} + t_{n-2}) < q_n q_{n-1}``."""
    pf = _prefix(prefix)
    n = len(pf.b) if n is None else n
    if n < 2:
        raise ValueError("criterion needs n >= 2")
    qn, qm1, _, tm1, tm2 = _qt(pf, n)
    return tm1 * (tm1 + tm2) < qn * qm1


def lower_bound_c(prefix, n: int) -> Fraction:
    """Right-hand side that ``c_n`` must exceed when ``B_n, C_n, C_{n-1}`` meet."""
    pf = _prefix(prefix)
    if n < 2:
        raise ValueError("bound needs n >= 2")
    rc = cf_value(pf.c[n - 2::-1])
    rb = cf_value(pf.b[n - 2::-1])
    return (1 + rc) * (pf.b[n - 1] - 1 + rb)


def lower_bound_b(prefix, n: int) -> Fraction:
    """Right-hand side that ``b_n`` must exceed when ``B_{n-1}, C_n, C_{n-1}`` meet."""
    pf = _prefix(prefix)
    if n < 2:
        raise ValueError("bound needs n >= 2")
    cn = pf.c[n - 1]
    rc = cf_value(pf.c[n - 3::-1]) if n >= 3 else Fraction(0)
    rb = cf_value(pf.b[n - 2::-1])
    return (1 + Fraction(1, cn)) * (pf.c[n - 2] + 1 + rc) * (1 - rb) - 1


def partition_check(prefix, n: int | None = None) -> bool:
    """Both covering inequalities behind the uniqueness of the digit prefix.

    ``C_n`` is tiled by the ``B_{n+1}(b)`` plus the terminating point iff
    ``q_n (q_n + q_{n-1}) <= t_n (t_n + t_{n-1})``; each ``B_{n+1}(b)`` meeting
    ``C_n`` is tiled by the ``C_{n+1}(b, c)`` iff
    ``t_n (t_n + t_{n-1}) < q_{n+1} (q_{n+1} - q_n)``.  The second is monotone
    in ``b``, so it is tested at the smallest ``b`` whose tile meets ``C_n``.
    """
    pf = _prefix(prefix)
    n = len(pf.c) if n is None else n
    qn, qm1, tn, tm1, _ = _qt(pf, n)
    width_c = tn * (tn + tm1)
    if qn * (qn + qm1) > width_c:
        return False
    # smallest b >= 2 with (b q_n + q_{n-1}) q_n > width_c
    b = max(2, (width_c - qm1 * qn) // (qn * qn) + 1)
    q1 = b * qn + qm1
    return width_c < q1 * (q1 - qn)
