"""clustergrid: deterministic grid search and triage reports for clustering
hyperparameter tuning.

Pipeline: load a numeric CSV, expand an exhaustive algorithm/parameter grid,
fit every candidate (k-means, agglomerative, NMF), collect internal metrics
and per-cluster feature statistics, gate out unusable candidates, and emit
CSV/SVG/manifest artifacts for human triage.
"""

from .algorithms import ClusterAssignment, agglomerative, kmeans, nmf
from .dataset import Dataset, load_csv, minmax_scale, standardize
from .errors import ClusterGridError
from .grid import (
    CandidateReport,
    CandidateSpec,
    RunConfig,
    RunResult,
    expand_grid,
    load_config,
    run_all,
    run_candidate,
)
from .metrics import MetricsRecord, calinski_harabasz, davies_bouldin, silhouette
from .profiling import (
    FeatureStat,
    GateOutcome,
    meta_gate,
    profile_clusters,
    regularized_incomplete_beta,
    student_t_two_sided_p,
    welch_t_test,
)
from .reporting import write_run_outputs

__version__ = "0.1.0"

__all__ = [
    "ClusterAssignment",
    "ClusterGridError",
    "CandidateReport",
    "CandidateSpec",
    "Dataset",
    "FeatureStat",
    "GateOutcome",
    "MetricsRecord",
    "RunConfig",
    "RunResult",
    "__version__",
    "agglomerative",
    "calinski_harabasz",
    "davies_bouldin",
    "expand_grid",
    "kmeans",
    "load_config",
    "load_csv",
    "meta_gate",
    "minmax_scale",
    "nmf",
    "profile_clusters",
    "regularized_incomplete_beta",
    "run_all",
    "run_candidate",
    "silhouette",
    "standardize",
    "student_t_two_sided_p",
    "welch_t_test",
    "write_run_outputs",
]
