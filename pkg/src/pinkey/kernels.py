"""Kernel backend selection.

The compiled module is used when it was built; ``PINKEY_PURE=1`` forces
the pure-Python kernels.
"""

from __future__ import annotations

import os

from . import _pykernels as python

compiled = None
if os.environ.get("PINKEY_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as compiled
    except ImportError:
        compiled = None

_active = compiled if compiled is not None else python

BACKEND = _active.BACKEND
gf2_rref = _active.gf2_rref
linear_codes = _active.linear_codes
pack_search = _active.pack_search


def backends() -> dict:
    """Available kernel modules keyed by name."""
    out = {"python": python}
    if compiled is not None:
        out["cython"] = compiled
    return out
