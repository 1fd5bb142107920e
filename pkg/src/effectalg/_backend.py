"""Kernel backend selection.

The compiled Cython kernels are preferred when importable; otherwise the
numpy fallback is used.  ``EFFECTALG_BACKEND=python`` or
``EFFECTALG_BACKEND=cython`` forces a choice (forcing ``cython`` raises if
the extension is missing, so CI can assert the build happened).
"""

from __future__ import annotations

import os

from . import _kernels_py

_requested = os.environ.get("EFFECTALG_BACKEND", "").strip().lower()

if _requested in ("", "auto"):
    try:
        from . import _kernels_cy as kernels  # type: ignore[attr-defined]
    except ImportError:
        kernels = _kernels_py
elif _requested in ("python", "py"):
    kernels = _kernels_py
elif _requested in ("cython", "cy", "c"):
    from . import _kernels_cy as kernels  # type: ignore[attr-defined]
else:
    raise RuntimeError(
        f"unknown EFFECTALG_BACKEND={_requested!r} (use 'python', 'cython' or 'auto')"
    )

BACKEND: str = kernels.NAME
