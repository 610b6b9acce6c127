"""The staggered decomposition algorithm.

Starting from empty digit lists, each round first tests whether
``alpha = [0; b_1..b_n] + [0; c_1..c_n]`` and stops if so; otherwise

    b_{n+1} = a_{n+1}(alpha - [0; c_1..c_n]) + 1
    c_{n+1} = a_{n+1}(alpha - [0; b_1..b_{n+1}])

States are immutable; :func:`step` returns a new one.  Rational inputs go
through the integer kernels in :func:`decompose`, everything else through
the generic stepper.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, log2

from . import kernels
from .errors import InvariantViolation, OutOfRange, PrecisionExhausted
from .rational import (
    ConvergentTable,
    DigitStream,
    QuadraticIrrational,
    RealInput,
    as_fraction,
    compare,
    format_real,
    parse_real,
    partial_quotient,
    sub_rational,
)

log = logging.getLogger(__name__)

__all__ = [
    "DecompositionResult",
    "ShulgaState",
    "Status",
    "StopReason",
    "decompose",
    "decompose_real",
    "default_max_steps",
    "from_record",
    "init",
    "run",
    "step",
    "to_record",
]


class Status(enum.Enum):
    ONGOING = "ongoing"
    TERMINATED = "terminated"


class StopReason(str, enum.Enum):
    TERMINATED = "terminated"
    STEP_CAP = "step_cap_reached"
    PRECISION = "precision_exhausted"


def _normalize(alpha) -> RealInput:
    if isinstance(alpha, str):
        return parse_real(alpha)
    if isinstance(alpha, (int, Fraction)):
        return as_fraction(alpha)
    if isinstance(alpha, (QuadraticIrrational, DigitStream)):
        return alpha
    raise TypeError(f"unsupported input {alpha!r}")


@dataclass(frozen=True)
class ShulgaState:
    alpha: RealInput
    b: tuple[int, ...] = ()
    c: tuple[int, ...] = ()
    beta_table: ConvergentTable = field(default_factory=lambda: ConvergentTable.build(0, ()))
    gamma_table: ConvergentTable = field(default_factory=lambda: ConvergentTable.build(0, ()))
    status: Status = Status.ONGOING

    @property
    def n(self) -> int:
        return len(self.c)

    @property
    def beta(self) -> Fraction:
        return self.beta_table.value()

    @property
    def gamma(self) -> Fraction:
        return self.gamma_table.value()


def _sum_test(alpha: RealInput, beta: Fraction, gamma: Fraction) -> bool:
    # surds never equal a rational; streams are undecidable and never stop
    if isinstance(alpha, Fraction):
        return alpha == beta + gamma
    return False


def init(alpha) -> ShulgaState:
    alpha = _normalize(alpha)
    if compare(alpha, 0) < 0 or compare(alpha, 1) > 0:
        raise OutOfRange(f"alpha = {format_real(alpha)} is outside [0, 1]")
    state = ShulgaState(alpha)
    if _sum_test(alpha, Fraction(0), Fraction(0)):
        state = ShulgaState(alpha, status=Status.TERMINATED)
    return state


def step(state: ShulgaState) -> ShulgaState:
    if state.status is not Status.ONGOING:
        raise ValueError("cannot step a terminated state")
    n = state.n
    try:
        a = partial_quotient(sub_rational(state.alpha, state.gamma), n + 1)
        if a is None:
            raise InvariantViolation(f"a_{n + 1}(alpha - gamma_{n}) undefined while ongoing")
        bt = state.beta_table.extend(a + 1)
        cn = partial_quotient(sub_rational(state.alpha, bt.value()), n + 1)
        if cn is None:
            raise InvariantViolation(f"a_{n + 1}(alpha - beta_{n + 1}) undefined while ongoing")
    except PrecisionExhausted as exc:
        exc.step = n + 1
        raise
    ct = state.gamma_table.extend(cn)
    done = _sum_test(state.alpha, bt.value(), ct.value())
    return ShulgaState(state.alpha, state.b + (a + 1,), state.c + (cn,), bt, ct,
                       Status.TERMINATED if done else Status.ONGOING)


@dataclass(frozen=True)
class DecompositionResult:
    alpha: RealInput
    b: tuple[int, ...]
    c: tuple[int, ...]
    terminated: bool
    steps: int
    stop_reason: StopReason
    beta: Fraction | None = None
    gamma: Fraction | None = None

    @property
    def anomaly(self) -> bool:
        """A rational run that hit the step cap (rationals always terminate)."""
        return isinstance(self.alpha, Fraction) and not self.terminated

    def state(self) -> ShulgaState:
        return ShulgaState(
            self.alpha, self.b, self.c,
            ConvergentTable.build(0, self.b), ConvergentTable.build(0, self.c),
            Status.TERMINATED if self.terminated else Status.ONGOING)


def default_max_steps(alpha) -> int:
    if isinstance(alpha, Fraction):
        return 10 * ceil(log2(alpha.denominator)) + 64 if alpha.denominator > 1 else 64
    return 64


def _result(state: ShulgaState, reason: StopReason) -> DecompositionResult:
    done = state.status is Status.TERMINATED
    return DecompositionResult(
        state.alpha, state.b, state.c, done, state.n, reason,
        state.beta if done else None, state.gamma if done else None)


def run(state: ShulgaState, max_steps: int) -> DecompositionResult:
    """Step ``state`` until it terminates, hits ``max_steps`` or runs dry."""
    while state.status is Status.ONGOING and state.n < max_steps:
        try:
            state = step(state)
        except PrecisionExhausted:
            log.info("precision exhausted at step %d", state.n + 1)
            return _result(state, StopReason.PRECISION)
    if state.status is Status.TERMINATED:
        return _result(state, StopReason.TERMINATED)
    return _result(state, StopReason.STEP_CAP)


def decompose(alpha, max_steps: int | None = None, *, use_kernel: bool = True) -> DecompositionResult:
    alpha = _normalize(alpha)
    if max_steps is None:
        max_steps = default_max_steps(alpha)
    if max_steps < 1:
        raise ValueError("max_steps must be >= 1")
    if isinstance(alpha, Fraction) and use_kernel:
        init(alpha)  # range check
        b, c, status = kernels.decompose_pq(alpha.numerator, alpha.denominator, max_steps)
        if status == kernels.UNDEFINED:
            raise InvariantViolation(f"undefined digit while decomposing {format_real(alpha)}")
        b, c = tuple(b), tuple(c)
        if status == kernels.DONE:
            res = DecompositionResult(alpha, b, c, True, len(c), StopReason.TERMINATED,
                                      ConvergentTable.build(0, b).value(),
                                      ConvergentTable.build(0, c).value())
        else:
            res = DecompositionResult(alpha, b, c, False, len(c), StopReason.STEP_CAP)
    else:
        res = run(init(alpha), max_steps)
    if res.anomaly:
        log.warning("rational %s hit the step cap %d without terminating",
                    format_real(alpha), max_steps)
    return res


def decompose_real(alpha, max_steps: int | None = None) -> tuple[int, DecompositionResult]:
    """Split off ``m = floor(alpha)`` and decompose the fractional part.

    The returned result has ``beta`` shifted by ``m``; ``alpha`` in the
    result is the fractional part.
    """
    alpha = _normalize(alpha)
    if isinstance(alpha, Fraction):
        m = alpha.numerator // alpha.denominator
    elif isinstance(alpha, QuadraticIrrational):
        m = alpha.floor()
    else:
        raise TypeError("decompose_real takes a rational or quadratic irrational")
    frac = sub_rational(alpha, m)
    res = decompose(frac, max_steps)
    if res.terminated:
        res = DecompositionResult(res.alpha, res.b, res.c, True, res.steps,
                                  res.stop_reason, res.beta + m, res.gamma)
    return m, res


# ---------------------------------------------------------------------------
# JSON records
# ---------------------------------------------------------------------------

def _s(x) -> str | None:
    return None if x is None else format_real(x)


def to_record(result: DecompositionResult, audit=None, integer_part: int = 0) -> dict:
    """Stable JSON-ready record; every number is a string."""
    rec = {
        "alpha": format_real(result.alpha),
        "integer_part": str(integer_part),
        "b": [str(d) for d in result.b],
        "c": [str(d) for d in result.c],
        "terminated": result.terminated,
        "steps": str(result.steps),
        "beta": _s(result.beta),
        "gamma": _s(result.gamma),
        "stop_reason": result.stop_reason.value,
    }
    if audit is not None:
        rec["audit"] = audit.flags()
    return rec


def from_record(rec: dict) -> DecompositionResult:
    alpha = _normalize(rec["alpha"])
    beta = Fraction(rec["beta"]) if rec.get("beta") else None
    gamma = Fraction(rec["gamma"]) if rec.get("gamma") else None
    m = int(rec.get("integer_part", "0"))
    if beta is not None:
        beta -= m
    return DecompositionResult(
        alpha, tuple(int(x) for x in rec["b"]), tuple(int(x) for x in rec["c"]),
        bool(rec["terminated"]), int(rec["steps"]), StopReason(rec["stop_reason"]),
        beta, gamma)
