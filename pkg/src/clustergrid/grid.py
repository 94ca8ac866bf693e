"""Grid expansion and deterministic candidate evaluation.

A run configuration maps identifier keys to exhaustive parameter maps. Every
combination becomes a uniquely identified candidate (<key>_v<index>), each
evaluated independently over the shared immutable dataset, so any degree of
parallelism yields the same RunResult.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import itertools
import json
import time
import uuid
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path

from .algorithms import LINKAGES, ClusterAssignment, agglomerative, kmeans, nmf
from .dataset import Dataset, load_csv, minmax_scale, standardize
from .errors import ClusterGridError, ConfigError
from .metrics import MetricsRecord, compute_metrics
from .profiling import FeatureStat, GateOutcome, meta_gate, profile_clusters

ALGORITHM_TAGS = ("kmeans", "ahc", "nmf")

SCALING_FOR_ALGORITHM = {
    "kmeans": "standardized",
    "ahc": "standardized",
    "nmf": "minmax",
}

_ALLOWED_PARAMS = {
    "kmeans": {"k", "n_init", "max_iter", "tol"},
    "ahc": {"k", "linkage"},
    "nmf": {"rank", "max_iter", "tol"},
}
_REQUIRED_PARAMS = {
    "kmeans": {"k"},
    "ahc": {"k", "linkage"},
    "nmf": {"rank"},
}
# Conventional fallbacks for grid entries that omit a tuning knob; they are
# materialized into each candidate's params so the manifest shows what ran.
_DEFAULT_PARAMS = {
    "kmeans": {"n_init": 10, "max_iter": 300, "tol": 0.0},
    "ahc": {},
    "nmf": {"max_iter": 500, "tol": 1e-5},
}


@dataclass(frozen=True)
class DatasetConfig:
    path: Path
    drop_na: bool = False
    key_features: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    seed: int
    alpha: float
    min_cluster_fraction: float
    bonferroni: bool
    dataset: DatasetConfig
    algorithms: dict[str, dict]


@dataclass(frozen=True)
class CandidateSpec:
    candidate_id: str
    algorithm: str  # kmeans | ahc | nmf
    params: dict
    seed: int


@dataclass
class CandidateReport:
    """Everything recorded for one candidate; exactly one of results or error."""

    spec: CandidateSpec
    k: int | None = None
    sizes: tuple[int, ...] | None = None
    objective: float | None = None
    metrics: MetricsRecord | None = None
    profile: list[FeatureStat] | None = None
    gate: GateOutcome | None = None
    notes: tuple[str, ...] = ()
    timing_ms: float = 0.0
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @property
    def n_significant(self) -> int:
        """Significant (cluster, feature) pairs tracked for this candidate."""
        return sum(1 for s in self.profile or [] if s.significant)


@dataclass
class RunResult:
    run_id: str
    created_at: str
    config: RunConfig
    dataset: Dataset
    dropped_rows: int
    candidates: list[CandidateReport]
    elapsed_ms: float = 0.0


def _stable_hash64(text: str) -> int:
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "big")


def candidate_seed(global_seed: int, candidate_id: str) -> int:
    """Per-candidate seed; stable under grid growth since it ignores the rest
    of the config."""
    return (global_seed ^ _stable_hash64(candidate_id)) % 2**64


def _require(condition: bool, message: str):
    if not condition:
        raise ConfigError(message)


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_number(value) -> bool:
    return _is_int(value) or isinstance(value, float)


def parse_config(raw: dict, base_dir: Path | None = None) -> RunConfig:
    """Validate a decoded JSON run configuration.

    Relative dataset paths resolve against base_dir (the config file's
    directory) so a config travels with its data.
    """
    _require(isinstance(raw, dict), "config must be a JSON object")
    known = {"seed", "alpha", "min_cluster_fraction", "bonferroni", "dataset", "algorithms"}
    unknown = sorted(set(raw) - known)
    _require(not unknown, f"unknown config keys: {', '.join(unknown)}")

    seed = raw.get("seed", 0)
    _require(_is_int(seed) and seed >= 0, "seed must be a nonnegative integer")
    alpha = raw.get("alpha", 0.05)
    _require(_is_number(alpha) and 0.0 < alpha < 1.0, "alpha must be in (0, 1)")
    min_fraction = raw.get("min_cluster_fraction", 0.05)
    _require(
        _is_number(min_fraction) and 0.0 <= min_fraction < 0.5,
        "min_cluster_fraction must be in [0, 0.5)",
    )
    bonferroni = raw.get("bonferroni", False)
    _require(isinstance(bonferroni, bool), "bonferroni must be a boolean")

    _require("dataset" in raw, "config needs a 'dataset' section")
    ds = raw["dataset"]
    _require(isinstance(ds, dict), "'dataset' must be an object")
    ds_unknown = sorted(set(ds) - {"path", "drop_na", "key_features"})
    _require(not ds_unknown, f"unknown dataset keys: {', '.join(ds_unknown)}")
    _require(isinstance(ds.get("path"), str) and ds["path"], "dataset.path is required")
    drop_na = ds.get("drop_na", False)
    _require(isinstance(drop_na, bool), "dataset.drop_na must be a boolean")
    key_features = ds.get("key_features", [])
    _require(
        isinstance(key_features, list) and all(isinstance(f, str) for f in key_features),
        "dataset.key_features must be a list of column names",
    )
    path = Path(ds["path"])
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path

    algorithms = raw.get("algorithms")
    _require(
        isinstance(algorithms, dict) and algorithms,
        "config needs a nonempty 'algorithms' section",
    )

    config = RunConfig(
        seed=seed,
        alpha=float(alpha),
        min_cluster_fraction=float(min_fraction),
        bonferroni=bonferroni,
        dataset=DatasetConfig(
            path=path, drop_na=drop_na, key_features=tuple(key_features)
        ),
        algorithms=algorithms,
    )
    expand_grid(config)  # surfaces grid errors at parse time
    return config


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from None
    return parse_config(raw, base_dir=path.parent)


def _validate_param_value(key: str, algorithm: str, name: str, value):
    if name in ("k", "rank", "n_init", "max_iter"):
        _require(
            _is_int(value) and value >= 1,
            f"grid key {key!r}: parameter {name!r} values must be integers >= 1",
        )
    elif name == "tol":
        _require(
            _is_number(value) and value >= 0,
            f"grid key {key!r}: parameter 'tol' values must be nonnegative numbers",
        )
    elif name == "linkage":
        _require(
            value in LINKAGES,
            f"grid key {key!r}: linkage must be one of {', '.join(LINKAGES)}, got {value!r}",
        )


def expand_grid(config: RunConfig) -> list[CandidateSpec]:
    """Cartesian-product expansion of every grid entry, in config order.

    Parameter names iterate lexicographically, values in listed order; the
    index in that ordering joins the entry key as '<key>_v<index>'.
    """
    specs: list[CandidateSpec] = []
    for key, entry in config.algorithms.items():
        _require(isinstance(entry, dict), f"grid key {key!r}: entry must be an object")
        entry = dict(entry)
        algorithm = entry.pop("algorithm", key)
        _require(
            algorithm in ALGORITHM_TAGS,
            f"grid key {key!r}: unknown algorithm {algorithm!r} "
            f"(expected one of {', '.join(ALGORITHM_TAGS)})",
        )
        allowed = _ALLOWED_PARAMS[algorithm]
        for name in entry:
            _require(
                name in allowed,
                f"grid key {key!r}: parameter {name!r} does not apply to {algorithm}",
            )
        missing = sorted(_REQUIRED_PARAMS[algorithm] - set(entry))
        _require(
            not missing,
            f"grid key {key!r}: missing required parameter(s) {', '.join(missing)}",
        )
        for name, values in entry.items():
            _require(
                isinstance(values, list) and values,
                f"grid key {key!r}: parameter {name!r} must be a nonempty list of values",
            )
            for value in values:
                _validate_param_value(key, algorithm, name, value)

        names = sorted(entry)
        for index, combo in enumerate(
            itertools.product(*(entry[name] for name in names))
        ):
            params = dict(_DEFAULT_PARAMS[algorithm])
            params.update(zip(names, combo))
            candidate_id = f"{key}_v{index}"
            specs.append(
                CandidateSpec(
                    candidate_id=candidate_id,
                    algorithm=algorithm,
                    params=dict(sorted(params.items())),
                    seed=candidate_seed(config.seed, candidate_id),
                )
            )
    return specs


@dataclass(frozen=True)
class ScaledViews:
    """The raw dataset plus the per-algorithm scaled matrices, computed once."""

    raw: Dataset
    standardized: Dataset = field(init=False)
    minmax: Dataset = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "standardized", standardize(self.raw))
        object.__setattr__(self, "minmax", minmax_scale(self.raw))

    def for_algorithm(self, algorithm: str) -> Dataset:
        return getattr(self, SCALING_FOR_ALGORITHM[algorithm])


def _fit(views: ScaledViews, spec: CandidateSpec) -> ClusterAssignment:
    data = views.for_algorithm(spec.algorithm).values
    p = spec.params
    if spec.algorithm == "kmeans":
        return kmeans(
            data,
            p["k"],
            seed=spec.seed,
            n_init=p["n_init"],
            max_iter=p["max_iter"],
            tol=p["tol"],
        )
    if spec.algorithm == "ahc":
        return agglomerative(data, p["k"], linkage=p["linkage"])
    return nmf(
        data, p["rank"], seed=spec.seed, max_iter=p["max_iter"], tol=p["tol"]
    )


def run_candidate(
    data: Dataset | ScaledViews,
    spec: CandidateSpec,
    *,
    alpha: float = 0.05,
    min_fraction: float = 0.05,
    bonferroni: bool = False,
) -> CandidateReport:
    """Fit, score, profile, and gate one candidate.

    Per-candidate problems (k > rows, domain violations) land in
    report.error instead of raising: the grid must report every candidate
    the human asked for.
    """
    views = data if isinstance(data, ScaledViews) else ScaledViews(data)
    report = CandidateReport(spec=spec)
    start = time.perf_counter()
    try:
        assignment = _fit(views, spec)
        metrics, metric_notes = compute_metrics(
            views.for_algorithm(spec.algorithm).values, assignment
        )
        stats, profile_notes = profile_clusters(
            views.raw, assignment.labels, assignment.k, alpha, bonferroni=bonferroni
        )
        gate = meta_gate(
            stats,
            metrics.cluster_sizes,
            views.raw.rows,
            min_fraction,
            metric_notes,
        )
        report.k = assignment.k
        report.sizes = metrics.cluster_sizes
        report.objective = assignment.objective
        report.metrics = metrics
        report.profile = stats
        report.gate = gate
        report.notes = tuple(metric_notes + profile_notes)
    except ClusterGridError as exc:
        report.error = str(exc)
    report.timing_ms = (time.perf_counter() - start) * 1000.0
    return report


def run_all(data: Dataset, config: RunConfig, *, jobs: int = 1, dropped_rows: int = 0) -> RunResult:
    """Evaluate every expanded candidate; results keep expansion order."""
    specs = expand_grid(config)
    views = ScaledViews(data)
    start = time.perf_counter()

    def evaluate(spec: CandidateSpec) -> CandidateReport:
        return run_candidate(
            views,
            spec,
            alpha=config.alpha,
            min_fraction=config.min_cluster_fraction,
            bonferroni=config.bonferroni,
        )

    if jobs > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(evaluate, specs))
    else:
        reports = [evaluate(spec) for spec in specs]

    return RunResult(
        run_id=uuid.uuid4().hex[:12],
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        config=config,
        dataset=data,
        dropped_rows=dropped_rows,
        candidates=reports,
        elapsed_ms=(time.perf_counter() - start) * 1000.0,
    )


def load_dataset(config: RunConfig) -> tuple[Dataset, int]:
    """Load the configured CSV; omitted key_features default to all columns."""
    dataset, dropped = load_csv(config.dataset.path, drop_na=config.dataset.drop_na)
    keys = config.dataset.key_features or dataset.columns
    return replace(dataset, key_features=tuple(keys)), dropped
