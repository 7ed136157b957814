"""Kernel backend selection.

The hot kernels (cell-selection counting/search and the sub-multiset
reachability DP) exist twice: a compiled Cython extension ``_speed`` and
a pure-Python twin ``_pure`` with identical semantics. The compiled one
is preferred when importable; set ``LOOPPLEX_PURE=1`` to force the pure
implementation. Witness-recording reachability always runs pure: it
builds Python structures anyway and is only used on desk-scale inputs.
"""

import os

from . import _pure

if os.environ.get("LOOPPLEX_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speed as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

count_selections = _impl.count_selections
find_selection = _impl.find_selection
reach_table = _impl.reach_table
reach_table_with_witness = _pure.reach_table_with_witness

__all__ = [
    "BACKEND",
    "count_selections",
    "find_selection",
    "reach_table",
    "reach_table_with_witness",
]
