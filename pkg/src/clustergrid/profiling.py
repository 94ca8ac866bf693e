"""Per-cluster feature statistics, p-values, and the acceptability gate.

Profiling always runs on the raw (unscaled) dataset so cluster means stay in
human-interpretable units. z-scores use the population standard deviation
(divisor n): the dataset is treated as the whole population. p-values come
from a two-sided Welch's t-test of each cluster's members against all
non-members, evaluated through the regularized incomplete beta function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, population_stats
from .errors import ParameterError, StatTestUndefinedError

GATE_PASS = "pass"
GATE_RULED_OUT = "ruled_out"

REASON_NO_SIGNIFICANT = "no_significant_features"
REASON_EMPTY_CLUSTER = "empty_cluster"
REASON_BELOW_MIN_FRACTION = "cluster_below_min_fraction"
REASON_METRIC_DEGENERATE = "metric_degenerate"

_REASON_ORDER = (
    REASON_NO_SIGNIFICANT,
    REASON_EMPTY_CLUSTER,
    REASON_BELOW_MIN_FRACTION,
    REASON_METRIC_DEGENERATE,
)


@dataclass(frozen=True)
class FeatureStat:
    """How far one cluster's mean for one feature sits from the population."""

    cluster_id: int
    feature: str
    cluster_mean: float
    population_mean: float
    z_score: float  # population standard deviations from the population mean
    p_value: float
    significant: bool


@dataclass(frozen=True)
class GateOutcome:
    status: str  # pass | ruled_out
    reasons: tuple[str, ...]

    def __post_init__(self):
        if (self.status == GATE_RULED_OUT) != bool(self.reasons):
            raise ValueError("status must be ruled_out exactly when reasons exist")


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) via the continued fraction, accurate to ~1e-13 absolute."""
    if not (a > 0 and b > 0):
        raise ParameterError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise ParameterError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # Symmetry switch keeps the continued fraction in its fast-converging region.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta (modified Lentz iteration)."""
    max_iter = 300
    eps = 1e-16
    fpmin = 1e-300

    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < fpmin:
        d = fpmin
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < fpmin:
            d = fpmin
        c = 1.0 + aa / c
        if abs(c) < fpmin:
            c = fpmin
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < eps:
            break
    return h


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T_df| >= |t|) through the incomplete beta: I_x(df/2, 1/2),
    x = df / (df + t^2)."""
    if df <= 0:
        raise ParameterError(f"degrees of freedom must be positive, got {df}")
    p = regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
    return min(1.0, max(0.0, p))


def welch_t_test(
    mean_a: float, var_a: float, n_a: int, mean_b: float, var_b: float, n_b: int
) -> float:
    """Two-sided p-value for Welch's unequal-variance t-test.

    Variances are sample variances (divisor n-1). Degenerate zero-variance
    inputs short-circuit: equal means give p = 1, differing means p = 0.
    """
    if n_a < 2 or n_b < 2:
        raise StatTestUndefinedError(f"both samples need n >= 2, got {n_a} and {n_b}")
    if var_a < 0 or var_b < 0:
        raise ParameterError("variances must be nonnegative")
    if var_a == 0.0 and var_b == 0.0:
        return 1.0 if mean_a == mean_b else 0.0

    se_a = var_a / n_a
    se_b = var_b / n_b
    se2 = se_a + se_b
    t = (mean_a - mean_b) / math.sqrt(se2)
    df = se2 * se2 / (se_a * se_a / (n_a - 1) + se_b * se_b / (n_b - 1))
    return student_t_two_sided_p(t, df)


def profile_clusters(
    raw: Dataset,
    labels: np.ndarray,
    k: int,
    alpha: float,
    *,
    bonferroni: bool = False,
) -> tuple[list[FeatureStat], list[str]]:
    """One FeatureStat per (nonempty cluster, feature), in cluster/column order.

    Returns the stats plus notes for clusters where the location test was
    undefined (fewer than 2 members on either side; their p-values are 1).
    Bonferroni divides alpha by the number of (cluster, feature) tests.
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must be in (0, 1), got {alpha}")
    labels = np.asarray(labels)
    if labels.shape[0] != raw.rows:
        raise ParameterError("labels length must match dataset rows")

    pop_mean, pop_std = population_stats(raw)
    # Exact constancy, not std == 0: fp noise on a constant column must not
    # let it masquerade as signal.
    constant = raw.values.max(axis=0) == raw.values.min(axis=0)
    sizes = np.bincount(labels, minlength=k)
    nonempty = [c for c in range(k) if sizes[c] > 0]
    n_tests = len(nonempty) * raw.n_features
    alpha_eff = alpha / n_tests if bonferroni else alpha

    stats: list[FeatureStat] = []
    notes: list[str] = []
    for c in nonempty:
        members = raw.values[labels == c]
        others = raw.values[labels != c]
        testable = len(members) >= 2 and len(others) >= 2
        if not testable:
            notes.append(
                f"cluster {c}: location test undefined "
                f"({len(members)} members vs {len(others)} others); p forced to 1"
            )
        member_mean = members.mean(axis=0)
        member_var = members.var(axis=0, ddof=1) if len(members) >= 2 else None
        other_var = others.var(axis=0, ddof=1) if len(others) >= 2 else None

        for j, feature in enumerate(raw.columns):
            if constant[j]:
                z, p = 0.0, 1.0  # constant feature carries no signal
            else:
                z = (member_mean[j] - pop_mean[j]) / pop_std[j]
                if not testable:
                    p = 1.0
                else:
                    p = welch_t_test(
                        float(member_mean[j]),
                        float(member_var[j]),
                        len(members),
                        float(others[:, j].mean()),
                        float(other_var[j]),
                        len(others),
                    )
            stats.append(
                FeatureStat(
                    cluster_id=c,
                    feature=feature,
                    cluster_mean=float(member_mean[j]),
                    population_mean=float(pop_mean[j]),
                    z_score=float(z),
                    p_value=p,
                    significant=p < alpha_eff,
                )
            )
    return stats, notes


def meta_gate(
    stats: list[FeatureStat],
    sizes,
    rows: int,
    min_fraction: float,
    metric_notes: list[str] | tuple[str, ...] = (),
) -> GateOutcome:
    """Rule a candidate out when the meta-criteria make it unusable."""
    if not 0.0 <= min_fraction < 0.5:
        raise ParameterError(f"min_fraction must be in [0, 0.5), got {min_fraction}")
    sizes = list(sizes)
    reasons = []
    if not any(s.significant for s in stats):
        reasons.append(REASON_NO_SIGNIFICANT)
    if any(size == 0 for size in sizes):
        reasons.append(REASON_EMPTY_CLUSTER)
    if any(size < min_fraction * rows for size in sizes):
        reasons.append(REASON_BELOW_MIN_FRACTION)
    if metric_notes:
        reasons.append(REASON_METRIC_DEGENERATE)
    reasons.sort(key=_REASON_ORDER.index)
    status = GATE_RULED_OUT if reasons else GATE_PASS
    return GateOutcome(status=status, reasons=tuple(reasons))
