"""Hot-kernel dispatch: compiled extension when built, numpy fallback otherwise.

Both backends expose identical signatures; tests cross-check them against the
scalar predicates in geom.py. Set DISCPLAN_FORCE_PY=1 to skip the extension.
"""

from __future__ import annotations

import os

from . import kernels_py

if os.environ.get("DISCPLAN_FORCE_PY"):
    _impl = kernels_py
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = kernels_py

BACKEND: str = _impl.BACKEND

point_dist_to_segs = _impl.point_dist_to_segs
points_min_dist_to_segs = _impl.points_min_dist_to_segs
segs_min_clearance_batch = _impl.segs_min_clearance_batch
points_in_polygon_batch = _impl.points_in_polygon_batch
min_pairwise_dist = _impl.min_pairwise_dist
