"""Backend selection for the integer kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` twin.  Set ``SHULGA_PURE_PYTHON=1`` to force the
fallback.
"""
import os

from . import _pykernels
from ._pykernels import CAPPED, CHECKS, DONE, SCAN_FIELDS, UNDEFINED

BACKEND = "python"
_impl = _pykernels
if os.environ.get("SHULGA_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _kernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

decompose_pq = _impl.decompose_pq
audit_pq = _impl.audit_pq
scan_q = _impl.scan_q


def failed_checks(mask):
    """Names of the checks whose bits are set in ``mask``."""
    if mask < 0:
        return ["undefined_digit"]
    return [name for i, name in enumerate(CHECKS) if mask >> i & 1]


__all__ = ["BACKEND", "CAPPED", "CHECKS", "DONE", "SCAN_FIELDS", "UNDEFINED",
           "audit_pq", "decompose_pq", "failed_checks", "scan_q"]
