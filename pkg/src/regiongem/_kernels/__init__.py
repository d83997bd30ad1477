"""Kernel backend selection.

The compiled Cython extension is preferred when importable; otherwise the
numpy fallback is used. Set REGIONGEM_BACKEND=numpy or =compiled to force a
choice (forcing the compiled backend raises if the extension is missing).
"""

from __future__ import annotations

import os

from regiongem._kernels import numpy_backend


def _load_compiled():
    try:
        from regiongem._kernels import _core
    except ImportError:
        return None
    return _core


_COMPILED = _load_compiled()


def available_backends() -> dict[str, object]:
    """Name -> module for every backend importable in this environment."""
    backends: dict[str, object] = {"numpy": numpy_backend}
    if _COMPILED is not None:
        backends["compiled"] = _COMPILED
    return backends


def _select():
    requested = os.environ.get("REGIONGEM_BACKEND")
    if requested:
        backends = available_backends()
        if requested not in backends:
            raise RuntimeError(
                f"REGIONGEM_BACKEND={requested!r} is not available; "
                f"choices: {sorted(backends)}"
            )
        return requested, backends[requested]
    if _COMPILED is not None:
        return "compiled", _COMPILED
    return "numpy", numpy_backend


BACKEND_NAME, _active = _select()

region_histograms = _active.region_histograms
chi_square_batch = _active.chi_square_batch
