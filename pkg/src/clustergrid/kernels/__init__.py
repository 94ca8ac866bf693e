"""Numeric kernels with a compiled core and a pure-Python fallback.

The compiled extension (kernels._native, Cython) is preferred when importable;
otherwise the numpy implementation (kernels._py) is used. Set the environment
variable CLUSTERGRID_KERNELS to "native" or "py" before import to force one.

Both backends expose the same four functions with identical semantics:

    pairwise_sq_dists(x)             -> (n, n) squared Euclidean distances
    assign_nearest(x, centers)       -> (labels, squared distance to winner)
    dist_sums_by_cluster(x, labels, k) -> (n, k) plain-distance sums
    lance_williams_merge(dist, linkage, k) -> (row cluster ids, merge heights)
"""

from __future__ import annotations

import os

from . import _py

try:
    from . import _native
except ImportError:
    _native = None  # type: ignore[assignment]

LINKAGE_SINGLE = _py.LINKAGE_SINGLE
LINKAGE_COMPLETE = _py.LINKAGE_COMPLETE
LINKAGE_AVERAGE = _py.LINKAGE_AVERAGE
LINKAGE_WARD = _py.LINKAGE_WARD


def available_backends() -> tuple[str, ...]:
    return ("native", "py") if _native is not None else ("py",)


def get_backend(name: str):
    """Return the backend module for an explicit name ("native" or "py")."""
    if name == "py":
        return _py
    if name == "native":
        if _native is None:
            raise ImportError(
                "clustergrid.kernels._native is not built; reinstall the package "
                "or set CLUSTERGRID_KERNELS=py"
            )
        return _native
    raise ValueError(f"unknown kernel backend {name!r} (expected 'native' or 'py')")


_requested = os.environ.get("CLUSTERGRID_KERNELS", "auto").strip().lower()
if _requested in ("", "auto"):
    _impl = _native if _native is not None else _py
else:
    _impl = get_backend(_requested)

BACKEND = _impl.BACKEND_NAME

pairwise_sq_dists = _impl.pairwise_sq_dists
assign_nearest = _impl.assign_nearest
dist_sums_by_cluster = _impl.dist_sums_by_cluster
lance_williams_merge = _impl.lance_williams_merge
