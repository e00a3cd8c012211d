"""Backend selection for the boundary-reduction kernel.

The compiled Cython kernel is preferred when it is importable; otherwise the
pure-Python kernel takes over with identical semantics. Setting the
environment variable ``RIPSCALE_PURE_PYTHON`` to a non-empty value forces
the pure backend (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

if os.environ.get("RIPSCALE_PURE_PYTHON"):
    from . import _reduction_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _reduction as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _reduction_py as _impl

        BACKEND = "python"

reduce_boundary = _impl.reduce_boundary


def backend() -> str:
    """Name of the active reduction backend ('cython' or 'python')."""
    return BACKEND
