"""Backend selection for the hot kernels.

The compiled extension is used when it imports; set ``LMTOPO_PURE_PYTHON=1``
to force the fallback.  Both backends expose ``rank_mod_p``,
``rank_integer`` and the growth engine, with identical results (the growth
engines also visit sets in the same order).
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LMTOPO_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"


def rank_mod_p(indptr, indices, data, nrows: int, ncols: int, p: int) -> int:
    return _impl.rank_mod_p(indptr, indices, data, nrows, ncols, p)


def rank_integer(indptr, indices, data, nrows: int, ncols: int) -> int:
    r = _impl.rank_integer(indptr, indices, data, nrows, ncols)
    if r < 0:
        # int64 overflow in the compiled path; redo with unbounded integers
        r = _kernels_py.rank_integer(indptr, indices, data, nrows, ncols)
    return r


def rank_gf2(rows: list[int]) -> int:
    """Rank over F_2 of rows given as integer bitmasks."""
    basis: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            top = row.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = row
                rank += 1
                break
            row ^= b
    return rank


def growth(fedges, fverts, eptr, eface, target, banned, min_index: int, budget: int, va: int, vb: int,
           nvertices: int, callback):
    """Growth engine used by the witness search (see ``asphericity``)."""
    return _impl._Growth(fedges, fverts, eptr, eface, target, banned, min_index, budget, va, vb, nvertices, callback)
