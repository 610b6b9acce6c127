"""Exact decomposition of reals into two sums with diverging partial quotients."""
from .construction import generate, verify_growth_bounds, verify_nesting, verify_window
from .engine import DecompositionResult, ShulgaState, decompose, decompose_real, init, step
from .errors import DigitUnavailable, InvariantViolation, OutOfRange, PrecisionExhausted, ShulgaError
from .growth import audit, enumerate_prefixes, find_c_drop, scan
from .kernels import BACKEND
from .oracle import oracle_decompose
from .rational import (
    CFExpansion,
    ConvergentTable,
    DigitStream,
    QuadraticIrrational,
    cf_expand,
    cf_value,
    parse_real,
    partial_quotient,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CFExpansion",
    "ConvergentTable",
    "DecompositionResult",
    "DigitStream",
    "DigitUnavailable",
    "InvariantViolation",
    "OutOfRange",
    "PrecisionExhausted",
    "QuadraticIrrational",
    "ShulgaError",
    "ShulgaState",
    "audit",
    "cf_expand",
    "cf_value",
    "decompose",
    "decompose_real",
    "enumerate_prefixes",
    "find_c_drop",
    "generate",
    "init",
    "oracle_decompose",
    "parse_real",
    "partial_quotient",
    "scan",
    "step",
    "verify_growth_bounds",
    "verify_nesting",
    "verify_window",
]
