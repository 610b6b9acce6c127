"""Brute-force reference for the decomposition of a rational.

Deliberately shares nothing with the rest of the package: digits come from
a bare floor/reciprocal loop on ``Fraction`` and values are refolded from
scratch every time.  Slow, but easy to read against the definition.
"""
from __future__ import annotations

from fractions import Fraction

__all__ = ["oracle_decompose"]


def _digit(x: Fraction, n: int):
    # n-th partial quotient of x in [0, 1]; 1 reads as [0; 1]
    if x == 1:
        return 1 if n == 1 else None
    for _ in range(n):
        x -= x.numerator // x.denominator
        if x == 0:
            return None
        x = 1 / x
    return x.numerator // x.denominator


def _value(digits) -> Fraction:
    v = Fraction(0)
    for d in reversed(digits):
        v = 1 / (d + v)
    return v


def oracle_decompose(alpha, max_steps: int = 1000):
    """Return ``(b, c, terminated)`` for rational ``alpha`` in ``[0, 1]``."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    b: list[int] = []
    c: list[int] = []
    while True:
        if alpha == _value(b) + _value(c):
            return tuple(b), tuple(c), True
        if len(c) >= max_steps:
            return tuple(b), tuple(c), False
        n = len(c) + 1
        a = _digit(alpha - _value(c), n)
        if a is None:
            raise ArithmeticError(f"b_{n} undefined for {alpha}")
        b.append(a + 1)
        a = _digit(alpha - _value(b), n)
        if a is None:
            raise ArithmeticError(f"c_{n} undefined for {alpha}")
        c.append(a)
