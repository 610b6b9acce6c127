"""Exact scalars, continued-fraction expansions and convergent tables.

Rationals are :class:`fractions.Fraction`.  Irrational inputs come in two
flavours: :class:`QuadraticIrrational` (exact) and :class:`DigitStream`
(a digit source with a refinement budget).  Everything here is exact; no
floating point is used outside of ``__float__`` helpers for display.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Iterator, Sequence, Union

from .errors import DigitUnavailable, PrecisionExhausted

__all__ = [
    "CFExpansion",
    "ConvergentTable",
    "DigitStream",
    "QuadraticIrrational",
    "RealInput",
    "as_fraction",
    "cf_expand",
    "cf_value",
    "compare",
    "convergents",
    "format_real",
    "parse_real",
    "partial_quotient",
    "iter_quotients",
    "leading_digits",
    "qi_expand",
    "quotients",
    "sub_rational",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


# --------------------------------------------------------------------------
# finite expansions
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CFExpansion:
    """``[a0; a1, a2, ...]`` with a finite digit tuple."""

    a0: int
    digits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        if any(d < 1 for d in self.digits):
            raise ValueError(f"partial quotients must be positive: {self.digits}")

    def __len__(self) -> int:
        return len(self.digits)

    def is_canonical(self) -> bool:
        if not self.digits or (self.a0, self.digits) == (0, (1,)):
            return True  # (0, (1,)) is the designated expansion of 1
        return self.digits[-1] >= 2

    def __str__(self) -> str:
        return f"[{self.a0};{','.join(map(str, self.digits))}]"

    @classmethod
    def parse(cls, text: str) -> "CFExpansion":
        m = re.fullmatch(r"\s*\[\s*(-?\d+)\s*;\s*([\d\s,]*)\]\s*", text)
        if not m:
            raise ValueError(f"malformed expansion: {text!r}")
        body = m.group(2).strip()
        digits = tuple(int(d) for d in body.split(",")) if body else ()
        return cls(int(m.group(1)), digits)


def quotients(num: int, den: int) -> tuple[int, list[int]]:
    """Euclidean algorithm on ``num/den`` (``den > 0``); canonical digits.

    The value 1 is returned as ``(0, [1])`` so that ``a_1(1) = 1``.
    """
    if den <= 0:
        raise ValueError("denominator must be positive")
    if num == den:
        return 0, [1]
    a0, r = divmod(num, den)
    digits = []
    num, den = den, r
    while den:
        a, r = divmod(num, den)
        digits.append(a)
        num, den = den, r
    return a0, digits


def cf_expand(r) -> CFExpansion:
    r = as_fraction(r)
    a0, digits = quotients(r.numerator, r.denominator)
    return CFExpansion(a0, tuple(digits))


def _fold(a0: int, digits: Sequence[int]) -> Fraction:
    # backward recurrence: value = a0 + 1/(d1 + 1/(d2 + ...))
    num, den = 1, 0
    for d in reversed(digits):
        num, den = d * num + den, num
    return Fraction(a0 * num + den, num)


def cf_value(e: CFExpansion | Sequence[int], up_to: int | None = None) -> Fraction:
    """Exact value of ``e`` truncated after digit ``up_to`` (all digits by default).

    A bare digit sequence is read as ``[0; digits]``.
    """
    if not isinstance(e, CFExpansion):
        e = CFExpansion(0, tuple(e))
    if up_to is None:
        up_to = len(e.digits)
    if up_to < 0 or up_to > len(e.digits):
        raise DigitUnavailable(f"digit {up_to} unavailable (have {len(e.digits)})")
    return _fold(e.a0, e.digits[:up_to])


@dataclass(frozen=True)
class ConvergentTable:
    """Rows ``(n, p_n, q_n)`` for ``n = 0..N`` of ``[a0; a1, ..., aN]``.

    ``p`` and ``q`` are stored with the seed row ``n = -1`` at index 0 so that
    ``p[n + 1]`` is ``p_n``; use :meth:`p_` and :meth:`q_` for clarity.
    """

    a0: int
    digits: tuple[int, ...]
    p: tuple[int, ...]
    q: tuple[int, ...]

    @classmethod
    def build(cls, a0: int, digits: Sequence[int]) -> "ConvergentTable":
        p, q = [1, a0], [0, 1]
        for a in digits:
            p.append(a * p[-1] + p[-2])
            q.append(a * q[-1] + q[-2])
        return cls(a0, tuple(digits), tuple(p), tuple(q))

    def extend(self, a: int) -> "ConvergentTable":
        return ConvergentTable(
            self.a0, self.digits + (a,),
            self.p + (a * self.p[-1] + self.p[-2],),
            self.q + (a * self.q[-1] + self.q[-2],),
        )

    @property
    def n(self) -> int:
        return len(self.digits)

    def p_(self, n: int) -> int:
        return self.p[n + 1]

    def q_(self, n: int) -> int:
        return self.q[n + 1]

    def value(self, n: int | None = None) -> Fraction:
        n = self.n if n is None else n
        return Fraction(self.p_(n), self.q_(n))

    def rows(self) -> list[tuple[int, int, int]]:
        return [(n, self.p_(n), self.q_(n)) for n in range(self.n + 1)]


def convergents(e: CFExpansion | Sequence[int], n: int | None = None) -> ConvergentTable:
    if not isinstance(e, CFExpansion):
        e = CFExpansion(0, tuple(e))
    if n is None:
        n = len(e.digits)
    if n < 0 or n > len(e.digits):
        raise DigitUnavailable(f"digit {n} unavailable (have {len(e.digits)})")
    return ConvergentTable.build(e.a0, e.digits[:n])


# --------------------------------------------------------------------------
# quadratic irrationals
# --------------------------------------------------------------------------

def _surd_sign(a: int, b: int, d: int) -> int:
    """Sign of ``a + b*sqrt(d)`` for nonsquare ``d``."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if (a > 0) == (b > 0):
        return 1 if a > 0 else -1
    # opposite signs: the larger magnitude wins; equality impossible
    if b * b * d > a * a:
        return 1 if b > 0 else -1
    return 1 if a > 0 else -1


@dataclass(frozen=True)
class QuadraticIrrational:
    """``(P + sqrt(D)) / Q`` with ``D`` nonsquare and ``Q | D - P**2``."""

    P: int
    D: int
    Q: int
    _s: int = field(default=0, init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.D > 0:
            object.__setattr__(self, "_s", isqrt(self.D))
        if self.D <= 0 or self._s * self._s == self.D:
            raise ValueError(f"D must be a positive nonsquare, got {self.D}")
        if self.Q == 0:
            raise ValueError("Q must be nonzero")
        if (self.D - self.P * self.P) % self.Q:
            raise ValueError(f"not normalized: {self.Q} does not divide D - P^2")

    @classmethod
    def of(cls, P: int, D: int, Q: int) -> "QuadraticIrrational":
        """Build from any ``(P, D, Q)``, scaling minimally to normalize."""
        if Q == 0:
            raise ValueError("Q must be nonzero")
        k = abs(Q) // gcd(Q, D - P * P)
        P, D, Q = k * P, k * k * D, k * Q
        # strip common factors that keep the normalization
        g = gcd(P, Q)
        if g > 1 and D % (g * g) == 0 and (D // (g * g) - (P // g) ** 2) % (Q // g) == 0:
            P, D, Q = P // g, D // (g * g), Q // g
        return cls(P, D, Q)

    @classmethod
    def _trusted(cls, P: int, D: int, Q: int, s: int) -> "QuadraticIrrational":
        # skips validation; callers guarantee the invariants
        x = object.__new__(cls)
        for k, v in (("P", P), ("D", D), ("Q", Q), ("_s", s)):
            object.__setattr__(x, k, v)
        return x

    def floor(self) -> int:
        s = self._s
        if self.Q > 0:
            return (self.P + s) // self.Q
        return (-self.P - s - 1) // (-self.Q)

    def reciprocal_step(self) -> tuple[int, "QuadraticIrrational"]:
        """Return ``(a, x')`` with ``x = a + 1/x'``."""
        a = self.floor()
        P = a * self.Q - self.P
        Q = (self.D - P * P) // self.Q
        return a, QuadraticIrrational._trusted(P, self.D, Q, self._s)

    def compare(self, r) -> int:
        r = as_fraction(r)
        u, v = r.numerator, r.denominator
        s = _surd_sign(v * self.P - u * self.Q, v, self.D)
        return s if self.Q > 0 else -s

    def __sub__(self, r):
        return sub_rational(self, r)

    def __float__(self) -> float:
        return (self.P + self.D ** 0.5) / self.Q

    def __str__(self) -> str:
        return f"({self.P}+sqrt({self.D}))/{self.Q}"


def qi_expand(x: QuadraticIrrational, n: int):
    """First ``n`` digits of ``x`` after ``a0``, plus the detected period.

    Returns ``(a0, digits, period)`` where ``period`` is the repeating block
    of digits once a complete state ``(P, Q)`` recurs, else ``None``.
    """
    a0, y = x.reciprocal_step()
    digits: list[int] = []
    seen: dict[tuple[int, int], int] = {}
    period = None
    state = y
    # walk far enough to both emit n digits and close a cycle
    while len(digits) < n or period is None:
        key = (state.P, state.Q)
        if period is None and key in seen:
            start = seen[key]
            period = tuple(digits[start:])
            if len(digits) >= n:
                break
        seen.setdefault(key, len(digits))
        a, state = state.reciprocal_step()
        digits.append(a)
    return a0, tuple(digits[:n]), period


# --------------------------------------------------------------------------
# digit streams
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DigitStream:
    """``[a0; d1, d2, ...] + offset`` with at most ``budget`` digits consumed.

    ``source`` is either a finite digit sequence (the value is then exactly
    rational) or a callable ``i -> d_i`` for ``i >= 1``.
    """

    a0: int
    source: Union[tuple[int, ...], Callable[[int], int]]
    budget: int = 64
    offset: Fraction = Fraction(0)
    _cache: list = field(default_factory=list, compare=False, repr=False)

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if not callable(self.source):
            src = tuple(int(d) for d in self.source)
            if any(d < 1 for d in src):
                raise ValueError("stream digits must be positive")
            object.__setattr__(self, "source", src)
        object.__setattr__(self, "offset", as_fraction(self.offset))

    @property
    def finite(self) -> bool:
        return not callable(self.source)

    def digit(self, i: int) -> int | None:
        """``d_i`` (1-based) or ``None`` past the end of a finite source."""
        if self.finite:
            return self.source[i - 1] if i <= len(self.source) else None
        cache = self._cache
        while len(cache) < i:
            d = int(self.source(len(cache) + 1))
            if d < 1:
                raise ValueError(f"stream digit {len(cache) + 1} is {d}")
            cache.append(d)
        return cache[i - 1]

    def exact_value(self) -> Fraction | None:
        """The exact value when the source is finite and within budget."""
        if self.finite and len(self.source) <= self.budget:
            return _fold(self.a0, self.source) + self.offset
        return None

    def enclosure(self, k: int) -> tuple[Fraction, Fraction]:
        """Open interval ``(lo, hi)`` holding the value, from ``k`` digits."""
        digits = [self.digit(i) for i in range(1, k + 1)]
        x = _fold(self.a0, digits) + self.offset
        digits[-1] += 1
        y = _fold(self.a0, digits) + self.offset
        return (x, y) if x < y else (y, x)

    def __sub__(self, r):
        return sub_rational(self, r)

    def __str__(self) -> str:
        shown = self.source if self.finite else tuple(self.digit(i) for i in range(1, 6)) + ("...",)
        body = ",".join(map(str, shown))
        off = ""
        if self.offset:
            off = ("+" if self.offset > 0 else "-") + format_real(abs(self.offset))
        return f"[{self.a0};{body}]{off}"


RealInput = Union[Fraction, QuadraticIrrational, DigitStream]


def _interval_digits(lo: Fraction, hi: Fraction, n: int) -> list[int] | None:
    """Digits ``a_1..a_n`` shared by every real in the open interval ``(lo, hi)``.

    Runs the Gauss map on the interval; ``None`` when an integer falls
    strictly inside, i.e. the interval straddles two cylinders.
    """
    out = []
    for i in range(n + 1):
        if hi is None:
            return None
        a = lo.numerator // lo.denominator
        if hi > a + 1:
            return None
        if i:
            out.append(a)
        if i == n:
            return out
        lo, hi = lo - a, hi - a
        lo, hi = 1 / hi, (1 / lo if lo else None)
    return out


def partial_quotient(x: RealInput, n: int) -> int | None:
    """The ``n``-th partial quotient of ``x``; ``None`` when undefined."""
    if n < 1:
        raise ValueError("index must be >= 1")
    if isinstance(x, (int, Fraction)):
        x = as_fraction(x)
        _, digits = quotients(x.numerator, x.denominator)
        return digits[n - 1] if n <= len(digits) else None
    if isinstance(x, QuadraticIrrational):
        _, y = x.reciprocal_step()
        for _ in range(n - 1):
            _, y = y.reciprocal_step()
        return y.floor()
    if isinstance(x, DigitStream):
        exact = x.exact_value()
        if exact is not None:
            return partial_quotient(exact, n)
        for k in range(1, x.budget + 1):
            if x.finite and k > len(x.source):
                break
            lo, hi = x.enclosure(k)
            digits = _interval_digits(lo, hi, n)
            if digits is not None:
                return digits[-1]
        raise PrecisionExhausted(
            f"digit {n} of {x} not determined within {x.budget} source digits")
    raise TypeError(f"unsupported real input {type(x).__name__}")


def sub_rational(x: RealInput, r) -> RealInput:
    """Exact ``x - r`` in the same representation as ``x``."""
    r = as_fraction(r)
    if isinstance(x, (int, Fraction)):
        return as_fraction(x) - r
    if isinstance(x, QuadraticIrrational):
        if not r:
            return x
        u, v = r.numerator, r.denominator
        return QuadraticIrrational.of(v * x.P - u * x.Q, v * v * x.D, v * x.Q)
    if isinstance(x, DigitStream):
        if not r:
            return x
        return DigitStream(x.a0, x.source, x.budget, x.offset - r, x._cache)
    raise TypeError(f"unsupported real input {type(x).__name__}")


def compare(x: RealInput, r) -> int:
    """Sign of ``x - r`` for rational ``r`` (exact for rationals and surds)."""
    r = as_fraction(r)
    if isinstance(x, (int, Fraction)):
        d = as_fraction(x) - r
        return (d > 0) - (d < 0)
    if isinstance(x, QuadraticIrrational):
        return x.compare(r)
    if isinstance(x, DigitStream):
        exact = x.exact_value()
        if exact is not None:
            return compare(exact, r)
        for k in range(1, x.budget + 1):
            lo, hi = x.enclosure(k)
            if r <= lo:
                return 1
            if r >= hi:
                return -1
        raise PrecisionExhausted(f"cannot order {x} against {r}")
    raise TypeError(f"unsupported real input {type(x).__name__}")


# --------------------------------------------------------------------------
# text formats
# --------------------------------------------------------------------------

_SURD = re.compile(
    r"\s*(?:\(\s*(?P<P>[+-]?\d+)\s*(?P<sign>[+-])\s*sqrt\(\s*(?P<D1>\d+)\s*\)\s*\)\s*/\s*(?P<Q>[+-]?\d+)"
    r"|sqrt\(\s*(?P<D2>\d+)\s*\))\s*")


def parse_real(text: str) -> RealInput:
    """Parse ``p/q``, ``p``, ``[a0;a1,...]``, ``sqrt(D)`` or ``(P+sqrt(D))/Q``."""
    text = text.strip()
    if text.startswith("["):
        return cf_value(CFExpansion.parse(text))
    m = _SURD.fullmatch(text)
    if m:
        if m.group("D2") is not None:
            return QuadraticIrrational.of(0, int(m.group("D2")), 1)
        P, D, Q = int(m.group("P")), int(m.group("D1")), int(m.group("Q"))
        if m.group("sign") == "-":
            P, Q = -P, -Q
        return QuadraticIrrational.of(P, D, Q)
    if re.fullmatch(r"[+-]?\d+(?:\s*/\s*[+-]?\d+)?", text):
        return Fraction(text.replace(" ", ""))
    raise ValueError(f"unrecognized real: {text!r}")


def format_real(x: RealInput) -> str:
    if isinstance(x, (int, Fraction)):
        x = as_fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def iter_quotients(x: RealInput) -> Iterator[int]:
    """Digits ``a_1, a_2, ...`` of ``x`` (finite for rationals)."""
    n = 1
    while True:
        a = partial_quotient(x, n)
        if a is None:
            return
        yield a
        n += 1


def leading_digits(x: RealInput, m: int) -> list[int | None]:
    """``[a_1(x), ..., a_m(x)]`` with ``None`` for undefined positions."""
    if isinstance(x, (int, Fraction)):
        x = as_fraction(x)
        _, digits = quotients(x.numerator, x.denominator)
        return [digits[k] if k < len(digits) else None for k in range(m)]
    if isinstance(x, QuadraticIrrational):
        out = []
        _, y = x.reciprocal_step()
        for _ in range(m):
            a, y = y.reciprocal_step()
            out.append(a)
        return out
    return [partial_quotient(x, k) for k in range(1, m + 1)]
