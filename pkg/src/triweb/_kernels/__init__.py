"""Kernel backend selection.

The compiled extension (`_ckern`, Cython) is used when importable; the
pure-Python twin (`_pykern`) is the fallback. Setting TRIWEB_PURE=1 in the
environment forces the fallback, which the benchmark harness uses to
compare the two.
"""
import os

from . import _pykern

_FORCED_PURE = os.environ.get("TRIWEB_PURE", "").strip() not in ("", "0")

if _FORCED_PURE:
    _impl = _pykern
else:
    try:
        from . import _ckern as _impl
    except ImportError:
        _impl = _pykern

BACKEND = _impl.BACKEND_NAME


def get_backend(name: str = None):
    """Return the kernel module for `name` ('pure', 'compiled', or None
    for the active one). Raises ImportError if compiled was requested but
    is not built."""
    if name is None or name == BACKEND:
        return _impl
    if name == "pure":
        return _pykern
    if name == "compiled":
        from . import _ckern
        return _ckern
    raise ValueError(f"unknown backend {name!r}")


threesum_pairscan = _impl.threesum_pairscan
threexor_pairscan = _impl.threexor_pairscan
triangle_detect = _impl.triangle_detect
triangle_list_forward = _impl.triangle_list_forward
triangle_phase1_lowdeg = _impl.triangle_phase1_lowdeg
stage1_high_scan = _impl.stage1_high_scan
c3xor_scan = _impl.c3xor_scan
six_sum_mitm = _impl.six_sum_mitm
wht_inplace = _impl.wht_inplace
smallbias_fill = _impl.smallbias_fill
hash_apply_batch = _impl.hash_apply_batch
