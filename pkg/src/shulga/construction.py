"""An explicit irrational whose decomposition digits grow linearly.

Seeds ``b_1 = 2``, ``c_1 = 4``; then ``b_{n+1} = c_n + 2`` and ``c_{n+1}`` is
``b_{n+1} + 2`` when that candidate keeps ``0 < c - (t/q)^2 < 1`` and
``b_{n+1} + 3`` otherwise.  The verifiers below re-check every property the
construction relies on instead of assuming it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .engine import decompose
from .intervals import DigitPrefix, b_interval, c_interval, feasible_region
from .rational import ConvergentTable, DigitStream

__all__ = [
    "Candidate",
    "ConstructionState",
    "Verification",
    "as_real_input",
    "extend",
    "generate",
    "verify_growth_bounds",
    "verify_nesting",
    "verify_window",
]


@dataclass(frozen=True)
class Candidate:
    """Both candidates for ``c_n`` and which one was taken."""

    n: int
    c2: int
    t2: int
    c3: int
    t3: int
    q: int
    chosen: int  # 2 or 3

    def margin(self, m: int) -> int:
        """``c q^2 - t^2`` for candidate ``m``; the window is ``(0, q^2)``."""
        c, t = (self.c2, self.t2) if m == 2 else (self.c3, self.t3)
        return c * self.q * self.q - t * t


@dataclass(frozen=True)
class ConstructionState:
    b: tuple[int, ...]
    c: tuple[int, ...]
    beta_table: ConvergentTable
    gamma_table: ConvergentTable
    candidates: tuple[Candidate, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.c)

    @classmethod
    def from_digits(cls, b, c) -> "ConstructionState":
        """A state with arbitrary digits, for verifying tampered sequences."""
        b, c = tuple(b), tuple(c)
        return cls(b, c, ConvergentTable.build(0, b), ConvergentTable.build(0, c))

    def alpha(self) -> Fraction:
        """The truncation ``[0; b_1..b_n] + [0; c_1..c_n]``."""
        return self.beta_table.value() + self.gamma_table.value()


def _seed() -> ConstructionState:
    return ConstructionState.from_digits((2,), (4,))


def extend(state: ConstructionState) -> ConstructionState:
    b_next = state.c[-1] + 2
    bt = state.beta_table.extend(b_next)
    q = bt.q_(bt.n)
    t1, t0 = state.gamma_table.q_(state.n), state.gamma_table.q_(state.n - 1)
    c2, c3 = b_next + 2, b_next + 3
    t2, t3 = c2 * t1 + t0, c3 * t1 + t0
    chosen = 2 if 0 < c2 * q * q - t2 * t2 < q * q else 3
    c_next = c2 if chosen == 2 else c3
    cand = Candidate(state.n + 1, c2, t2, c3, t3, q, chosen)
    return ConstructionState(state.b + (b_next,), state.c + (c_next,), bt,
                             state.gamma_table.extend(c_next), state.candidates + (cand,))


def generate(n_terms: int) -> ConstructionState:
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    s = _seed()
    while s.n < n_terms:
        s = extend(s)
    return s


@dataclass
class Verification:
    ok: bool
    failures: list[dict] = field(default_factory=list)
    rows: list[dict] = field(default_factory=list)

    @property
    def first_failure(self) -> int | None:
        return int(self.failures[0]["level"]) if self.failures else None

    def __bool__(self) -> bool:
        return self.ok


def verify_window(state: ConstructionState) -> Verification:
    """``0 < c_k q_k^2 - t_k^2 < q_k^2`` for ``2 <= k <= n``.

    For every step that took the ``m = 3`` candidate the rejected ``m = 2``
    margin is recorded too, so the selection can be inspected.
    """
    q, t = state.beta_table.q_, state.gamma_table.q_
    res = Verification(True)
    by_n = {cd.n: cd for cd in state.candidates}
    for k in range(2, state.n + 1):
        qk, tk = q(k), t(k)
        margin = state.c[k - 1] * qk * qk - tk * tk
        row = {"level": str(k), "margin": str(margin), "q_squared": str(qk * qk)}
        cd = by_n.get(k)
        if cd is not None:
            row["chosen"] = str(cd.chosen)
            row["margin_m2"] = str(cd.margin(2))
        res.rows.append(row)
        if not 0 < margin < qk * qk:
            res.ok = False
            res.failures.append(row)
    return res


def verify_nesting(state: ConstructionState) -> Verification:
    """``B_k ⊇ C_k`` and ``C_k ⊇ B_{k+1}`` at every level, two ways.

    Geometrically by interval containment with closure flags, and via the
    integer forms ``q_k (q_k - q_{k-1}) < t_k t_{k-1}`` and
    ``t_k (t_k + t_{k-1}) < q_k (q_{k+1} - q_k)``.  ``B_{n+1}`` uses the
    forced ``b_{n+1} = c_n + 2``.  A disagreement between the two methods is
    itself a failure.
    """
    b = state.b[:state.n] + (state.c[-1] + 2,)
    pf = DigitPrefix(b, state.c)
    q, t = ConvergentTable.build(0, b).q_, state.gamma_table.q_
    res = Verification(True)
    for k in range(1, state.n + 1):
        Bk = b_interval(pf, k).as_interval()
        Ck = c_interval(pf, k).as_interval()
        Bk1 = b_interval(pf, k + 1).as_interval()
        qk, qm, qn = q(k), q(k - 1), q(k + 1)
        tk, tm = t(k), t(k - 1)
        pairs = (
            ("B_k ⊇ C_k", Ck.issubset(Bk), qk * (qk - qm) < tk * tm),
            ("C_k ⊇ B_k+1", Bk1.issubset(Ck), tk * (tk + tm) < qk * (qn - qk)),
        )
        for what, geo, alg in pairs:
            if not (geo and alg):
                res.ok = False
                res.failures.append({"level": str(k), "containment": what,
                                     "geometric": geo, "algebraic": alg})
    return res


def verify_growth_bounds(state: ConstructionState) -> Verification:
    """``4n - 2 <= b_n < c_n < 5n`` at every index."""
    res = Verification(True)
    for n in range(1, state.n + 1):
        bn, cn = state.b[n - 1], state.c[n - 1]
        row = {"level": str(n), "b_slack": str(bn - (4 * n - 2)), "c_slack": str(5 * n - cn)}
        res.rows.append(row)
        if not 4 * n - 2 <= bn < cn < 5 * n:
            res.ok = False
            res.failures.append(row)
    return res


class _Digits:
    """Callable ``i -> digit`` that grows a private construction on demand."""

    def __init__(self, which: str):
        self.which = which
        self.state = _seed()

    def __call__(self, i: int) -> int:
        while self.state.n < i:
            self.state = extend(self.state)
        return getattr(self.state, self.which)[i - 1]


@dataclass
class RealInputAudit:
    beta: DigitStream
    gamma: DigitStream
    alpha_n: Fraction
    in_region: bool
    reproduced: bool
    decomposed_b: tuple[int, ...]
    decomposed_c: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.in_region and self.reproduced


def as_real_input(state: ConstructionState, budget: int = 64) -> RealInputAudit:
    """Streams for ``beta`` and ``gamma`` plus a check of the truncation.

    ``alpha_n`` must lie in the depth-``n`` feasible region, and the
    decomposition of the next truncation ``alpha_{n+1}`` must start with the
    constructed digits.  The truncations are rational, so only the shared
    prefix is compared.
    """
    if state.n < 2:
        raise ValueError("need n >= 2")
    n = state.n
    alpha_n = state.alpha()
    region = feasible_region((state.b, state.c), n)
    in_region = region is not None and region.contains(alpha_n)
    deeper = extend(state)
    r = decompose(deeper.alpha(), max_steps=n + 8)
    reproduced = r.b[:n] == state.b and r.c[:n] == state.c
    return RealInputAudit(
        DigitStream(0, _Digits("b"), budget), DigitStream(0, _Digits("c"), budget),
        alpha_n, in_region, reproduced, r.b, r.c)
