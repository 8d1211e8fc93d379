"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  Setting ``CHROMALAB_PURE_PYTHON=1``
forces the fallback.
"""

import os

if os.environ.get("CHROMALAB_PURE_PYTHON", "") not in ("", "0"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        from . import _pykernels as _impl

BACKEND = _impl.BACKEND
BUILD_ID = _impl.BUILD_ID
# both backends raise their own class; callers catch either through this tuple
from ._pykernels import LimitExceeded as _PyLimit  # noqa: E402

LIMIT_ERRORS = (_PyLimit, _impl.LimitExceeded)

min_degree_vertex = _impl.min_degree_vertex
greedy_independent_set = _impl.greedy_independent_set
degeneracy_order = _impl.degeneracy_order
color_in_order = _impl.color_in_order
max_matching = _impl.max_matching
count_independent_sets = _impl.count_independent_sets
independent_set_packing = _impl.independent_set_packing
list_independent_sets = _impl.list_independent_sets
improve_packing = _impl.improve_packing
