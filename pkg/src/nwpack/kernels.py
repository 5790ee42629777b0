"""Kernel backend selection.

Prefers the compiled extension (`nwpack._core`, Cython); falls back to the
pure-Python mirror (`nwpack._purepy`). Both implement the same API with
bit-identical results and work-unit accounting, so the backend only changes
real speed, never solver output.

Override with NWPACK_BACKEND=python or NWPACK_BACKEND=compiled.
"""

from __future__ import annotations

import os

from . import _purepy

_choice = os.environ.get("NWPACK_BACKEND", "").strip().lower()

if _choice in ("python", "py", "pure"):
    _impl = _purepy
elif _choice in ("compiled", "c", "cython"):
    from . import _core as _impl  # raises if the extension was not built
else:
    try:
        from . import _core as _impl
    except ImportError:
        _impl = _purepy

BACKEND = _impl.BACKEND_NAME
WorkMeter = _impl.WorkMeter
SpaceBuffer = _impl.SpaceBuffer
BlockKernel = _impl.BlockKernel
max_combination = _impl.max_combination
update_space_list = _impl.update_space_list
select_space_index = _impl.select_space_index


def get_backend(name: str):
    """Explicit backend module by name (used by tests and the benchmark)."""
    if name in ("python", "py", "pure"):
        return _purepy
    if name in ("compiled", "c", "cython"):
        from . import _core
        return _core
    raise ValueError(f"unknown backend {name!r}")
