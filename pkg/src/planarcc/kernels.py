"""Kernel selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  Setting ``PLANARCC_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("PLANARCC_PURE_PYTHON"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "compiled" if _impl is not _pykernels else "python"

dijkstra = _impl.dijkstra
bottleneck_widths = _impl.bottleneck_widths
bfs_hops = _impl.bfs_hops
min_bipartition = _impl.min_bipartition
min_partition = _impl.min_partition
max_weight_matching = _impl.max_weight_matching

__all__ = [
    "BACKEND",
    "bfs_hops",
    "bottleneck_widths",
    "dijkstra",
    "max_weight_matching",
    "min_bipartition",
    "min_partition",
]
