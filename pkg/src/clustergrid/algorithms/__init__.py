"""The three clustering algorithm families behind a uniform fit -> labels contract."""

from .agglomerative import LINKAGES, agglomerative
from .assignment import ClusterAssignment
from .kmeans import kmeans
from .nmf import nmf

__all__ = ["ClusterAssignment", "LINKAGES", "agglomerative", "kmeans", "nmf"]
