"""Kernel lane selection.

The compiled extension is preferred when present; set WAVESPLIT_BACKEND=numpy
to force the pure-numpy lane (used by the backend benchmark), or =cython to
fail loudly if the extension did not build.
"""

import os

_requested = os.environ.get("WAVESPLIT_BACKEND", "auto").strip().lower()

if _requested in ("auto", ""):
    try:
        from wavesplit import _speedups as kernels
    except ImportError:
        from wavesplit import _speedups_np as kernels
elif _requested in ("cython", "c"):
    from wavesplit import _speedups as kernels
elif _requested in ("numpy", "python", "py"):
    from wavesplit import _speedups_np as kernels
else:
    raise ImportError(f"unknown WAVESPLIT_BACKEND value: {_requested!r}")

BACKEND = kernels.NAME
