"""Kernel backend selection.

Prefers the compiled Cython kernels, falls back to the pure-Python twin.
Set TIGHTWP_PURE_PY=1 to force the fallback (used by the benchmark and
the equivalence tests).
"""

import os

if os.environ.get("TIGHTWP_PURE_PY"):
    from tightwp import _termops_py as _impl

    BACKEND = "python"
else:
    try:
        from tightwp import _termops_cy as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from tightwp import _termops_py as _impl

        BACKEND = "python"

conv_dicts = _impl.conv_dicts
add_dicts = _impl.add_dicts
scale_dict = _impl.scale_dict
tp_mul = _impl.tp_mul
tp_dm = _impl.tp_dm
tp_int_ell = _impl.tp_int_ell
tp_permute = _impl.tp_permute
tp_eval = _impl.tp_eval
