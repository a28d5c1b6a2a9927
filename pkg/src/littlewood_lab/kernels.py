"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``LITTLEWOOD_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("LITTLEWOOD_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _pykernels

TRUE, FALSE, UNSURE = _pykernels.TRUE, _pykernels.FALSE, _pykernels.UNSURE

littlewood_mask = _impl.littlewood_mask
littlewood_scan = _impl.littlewood_scan
xeps_rows = _impl.xeps_rows


def backends():
    """Available implementations keyed by name (for benchmarks and equivalence tests)."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:  # pragma: no cover
        pass
    return out
