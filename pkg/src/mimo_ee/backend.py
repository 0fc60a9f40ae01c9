"""Kernel backend selection.

The compiled extension is preferred; the pure-numpy fallback keeps the
package fully functional without it.  Set ``MIMO_EE_BACKEND=python`` or
``MIMO_EE_BACKEND=c`` to force a choice (forcing ``c`` raises if the
extension is unavailable).
"""

import os

from . import _core_py

_requested = os.environ.get("MIMO_EE_BACKEND", "").strip().lower()

if _requested in ("", "c", "compiled"):
    try:
        from . import _core as active
    except ImportError:
        if _requested:
            raise
        active = _core_py
elif _requested in ("python", "py", "pure"):
    active = _core_py
else:
    raise ImportError(f"unknown MIMO_EE_BACKEND value: {_requested!r}")

BACKEND_NAME = active.NAME


def available_backends():
    """All importable kernel modules, compiled first."""
    mods = []
    try:
        from . import _core
        mods.append(_core)
    except ImportError:
        pass
    mods.append(_core_py)
    return mods
