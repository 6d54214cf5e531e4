"""Backend selection for the hot sampling kernels.

The inner Monte Carlo loops ship in two implementations: numba-compiled
scalar loops (default whenever numba imports) and a vectorized pure-numpy
fallback. Selection order: an explicit :func:`set_backend` call, then the
``EXTREMAL_BACKEND`` environment variable (``"numba"`` or ``"numpy"``),
then autodetection.

Results are deterministic per backend for a fixed seed; the two backends
consume random streams in different orders, so they agree in distribution
but not draw for draw.
"""

from __future__ import annotations

import os

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

VALID_BACKENDS = ("numba", "numpy")

_backend: str | None = None


def _resolve_from_env() -> str:
    want = os.environ.get("EXTREMAL_BACKEND", "").strip().lower()
    if want:
        if want not in VALID_BACKENDS:
            raise ValueError(
                f"EXTREMAL_BACKEND={want!r}: expected one of {VALID_BACKENDS}"
            )
        if want == "numba" and not HAVE_NUMBA:
            raise RuntimeError("EXTREMAL_BACKEND=numba but numba is not importable")
        return want
    return "numba" if HAVE_NUMBA else "numpy"


def get_backend() -> str:
    """Return the active kernel backend name ("numba" or "numpy")."""
    global _backend
    if _backend is None:
        _backend = _resolve_from_env()
    return _backend


def set_backend(name: str) -> None:
    """Force the kernel backend. Raises if the backend is unavailable."""
    global _backend
    if name not in VALID_BACKENDS:
        raise ValueError(f"unknown backend {name!r}: expected one of {VALID_BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not importable")
    _backend = name
