"""Run artifacts: per-candidate profile CSVs, running summary CSVs, z-score
charts, and the machine-readable manifest consumed by the triage UI.

Everything here is byte-deterministic for a fixed RunResult: fixed numeric
formatting (6 significant digits), fixed row ordering, hand-rolled SVG with
no timestamps. Only manifest.json carries volatile fields (run_id,
created_at, timings).
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

from .errors import ConfigError
from .grid import SCALING_FOR_ALGORITHM, CandidateReport, RunResult

MANIFEST_SCHEMA_VERSION = 1

# Matplotlib's tab10, a palette most reviewers already read fluently.
_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def format_real(value: float | None) -> str:
    """6-significant-digit rendering with trailing zeros; '' for absent."""
    if value is None:
        return ""
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        value = 0.0  # normalize -0.0
    text = format(value, "#.6g")
    return text[:-1] if text.endswith(".") else text


def _format_param(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def format_params(params: dict) -> str:
    return " ".join(f"{name}={_format_param(value)}" for name, value in params.items())


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_candidate_csv(report: CandidateReport, out_dir: str | Path) -> Path:
    """candidates/<id>/profile.csv with one row per (cluster, feature)."""
    if not report.ok:
        raise ValueError(f"candidate {report.spec.candidate_id} has no results")
    path = Path(out_dir) / "candidates" / report.spec.candidate_id / "profile.csv"
    path.parent.mkdir(parents=True, exist_ok=True)
    sizes = report.sizes or ()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        out = _writer(fh)
        out.writerow(
            [
                "cluster_id", "cluster_size", "feature", "cluster_mean",
                "population_mean", "z_score", "p_value", "significant",
            ]
        )
        for stat in report.profile:
            out.writerow(
                [
                    stat.cluster_id,
                    sizes[stat.cluster_id],
                    stat.feature,
                    format_real(stat.cluster_mean),
                    format_real(stat.population_mean),
                    format_real(stat.z_score),
                    format_real(stat.p_value),
                    "true" if stat.significant else "false",
                ]
            )
    return path


def write_summary_csvs(result: RunResult, out_dir: str | Path) -> list[Path]:
    """The three running CSVs: metrics, significant features, sizes."""
    summary_dir = Path(out_dir) / "summary"
    summary_dir.mkdir(parents=True, exist_ok=True)

    metrics_path = summary_dir / "metrics.csv"
    with open(metrics_path, "w", encoding="utf-8", newline="") as fh:
        out = _writer(fh)
        out.writerow(
            [
                "candidate_id", "algorithm", "params", "status", "silhouette",
                "calinski_harabasz", "davies_bouldin", "n_clusters", "min_size",
                "max_size", "n_significant_features", "gate_status", "gate_reasons",
            ]
        )
        for report in result.candidates:
            if report.ok:
                out.writerow(
                    [
                        report.spec.candidate_id,
                        report.spec.algorithm,
                        format_params(report.spec.params),
                        "ok",
                        format_real(report.metrics.silhouette),
                        format_real(report.metrics.calinski_harabasz),
                        format_real(report.metrics.davies_bouldin),
                        report.k,
                        min(report.sizes),
                        max(report.sizes),
                        report.n_significant,
                        report.gate.status,
                        "|".join(report.gate.reasons),
                    ]
                )
            else:
                out.writerow(
                    [
                        report.spec.candidate_id,
                        report.spec.algorithm,
                        format_params(report.spec.params),
                        "error", "", "", "", "", "", "", "", "",
                    ]
                )

    significant_path = summary_dir / "significant_features.csv"
    with open(significant_path, "w", encoding="utf-8", newline="") as fh:
        out = _writer(fh)
        out.writerow(["candidate_id", "cluster_id", "feature", "z_score", "p_value"])
        for report in result.candidates:
            for stat in report.profile or []:
                if stat.significant:
                    out.writerow(
                        [
                            report.spec.candidate_id,
                            stat.cluster_id,
                            stat.feature,
                            format_real(stat.z_score),
                            format_real(stat.p_value),
                        ]
                    )

    sizes_path = summary_dir / "sizes.csv"
    with open(sizes_path, "w", encoding="utf-8", newline="") as fh:
        out = _writer(fh)
        out.writerow(["candidate_id", "cluster_id", "size"])
        for report in result.candidates:
            for cluster_id, size in enumerate(report.sizes or ()):
                out.writerow([report.spec.candidate_id, cluster_id, size])

    return [metrics_path, significant_path, sizes_path]


def _f(value: float) -> str:
    """Fixed two-decimal coordinates keep the SVG byte-stable."""
    return f"{value:.2f}"


def render_zscore_chart(
    report: CandidateReport, key_features: tuple[str, ...], out_dir: str | Path
) -> Path:
    """plots/<id>.svg: grouped bars of z-scores per key feature per cluster.

    Significant bars are starred. The canvas is a fixed 960x480; output bytes
    are a pure function of the report.
    """
    if not report.ok:
        raise ValueError(f"candidate {report.spec.candidate_id} has no results")
    if not key_features:
        raise ConfigError("key_features must be nonempty")
    by_key = {(s.cluster_id, s.feature): s for s in report.profile}
    clusters = sorted({s.cluster_id for s in report.profile})
    missing = [f for f in key_features if (clusters[0], f) not in by_key]
    if missing:
        raise ConfigError(
            f"key feature(s) not in profile for {report.spec.candidate_id}: "
            + ", ".join(missing)
        )
    # Chart axis follows dataset column order (the profile's order), not the
    # order key features happened to be listed in.
    profile_order = [s.feature for s in report.profile if s.cluster_id == clusters[0]]
    wanted = set(key_features)
    key_features = tuple(f for f in profile_order if f in wanted)

    left, right, top, bottom = 60.0, 820.0, 50.0, 420.0
    width, height = right - left, bottom - top
    mid_y = top + height / 2.0

    z_top = max(1.0, math.ceil(max(
        abs(by_key[(c, f)].z_score) for c in clusters for f in key_features
    )))
    scale = (height / 2.0) / z_top

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="960" height="480" '
        'viewBox="0 0 960 480" font-family="sans-serif">',
        '<rect x="0" y="0" width="960" height="480" fill="white"/>',
        f'<text x="{_f((left + right) / 2)}" y="24" text-anchor="middle" '
        f'font-size="16">{report.spec.candidate_id}</text>',
        f'<text x="16" y="{_f(mid_y)}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 16 {_f(mid_y)})">std devs from population mean</text>',
    ]

    # Horizontal gridlines and tick labels at integer z values.
    tick_step = max(1, int(z_top) // 4)
    z = -int(z_top)
    while z <= int(z_top):
        y = mid_y - z * scale
        stroke = "#333333" if z == 0 else "#dddddd"
        parts.append(
            f'<line x1="{_f(left)}" y1="{_f(y)}" x2="{_f(right)}" y2="{_f(y)}" '
            f'stroke="{stroke}" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_f(left - 8)}" y="{_f(y + 4)}" text-anchor="end" '
            f'font-size="11">{z}</text>'
        )
        z += tick_step

    group_w = width / len(key_features)
    bar_w = group_w * 0.8 / len(clusters)
    rotate_labels = len(key_features) > 6

    for fi, feature in enumerate(key_features):
        gx = left + fi * group_w
        for ci, cluster in enumerate(clusters):
            stat = by_key[(cluster, feature)]
            color = _PALETTE[ci % len(_PALETTE)]
            x = gx + group_w * 0.1 + ci * bar_w
            z_val = stat.z_score
            bar_h = abs(z_val) * scale
            y = mid_y - bar_h if z_val >= 0 else mid_y
            parts.append(
                f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(bar_w)}" '
                f'height="{_f(bar_h)}" fill="{color}"/>'
            )
            if stat.significant:
                star_y = y - 4 if z_val >= 0 else y + bar_h + 14
                parts.append(
                    f'<text x="{_f(x + bar_w / 2)}" y="{_f(star_y)}" '
                    f'text-anchor="middle" font-size="14">*</text>'
                )
        label_x = gx + group_w / 2
        label_y = bottom + 20
        transform = (
            f' transform="rotate(-35 {_f(label_x)} {_f(label_y)})"' if rotate_labels else ""
        )
        anchor = "end" if rotate_labels else "middle"
        parts.append(
            f'<text x="{_f(label_x)}" y="{_f(label_y)}" text-anchor="{anchor}" '
            f'font-size="12"{transform}>{_escape(feature)}</text>'
        )

    for ci, cluster in enumerate(clusters):
        color = _PALETTE[ci % len(_PALETTE)]
        swatch_y = top + ci * 20
        parts.append(
            f'<rect x="836" y="{_f(swatch_y)}" width="12" height="12" fill="{color}"/>'
        )
        parts.append(
            f'<text x="854" y="{_f(swatch_y + 10)}" font-size="12">cluster {cluster}</text>'
        )

    parts.append("</svg>")
    path = Path(out_dir) / "plots" / f"{report.spec.candidate_id}.svg"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    return path


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _metric_json(value: float | None):
    if value is None:
        return None
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def manifest_entry(report: CandidateReport) -> dict:
    entry = {
        "candidate_id": report.spec.candidate_id,
        "algorithm": report.spec.algorithm,
        "params": report.spec.params,
        "scaling": SCALING_FOR_ALGORITHM[report.spec.algorithm],
        "status": "ok" if report.ok else "error",
        "gate": None,
        "metrics": None,
        "sizes": None,
        "n_significant_features": None,
        "files": None,
        "error": report.error,
        "timing_ms": round(report.timing_ms, 3),
    }
    if report.ok:
        entry["gate"] = {"status": report.gate.status, "reasons": list(report.gate.reasons)}
        entry["metrics"] = {
            "silhouette": _metric_json(report.metrics.silhouette),
            "calinski_harabasz": _metric_json(report.metrics.calinski_harabasz),
            "davies_bouldin": _metric_json(report.metrics.davies_bouldin),
        }
        entry["sizes"] = list(report.sizes)
        entry["n_significant_features"] = report.n_significant
        entry["files"] = {
            "profile": f"candidates/{report.spec.candidate_id}/profile.csv",
            "chart": f"plots/{report.spec.candidate_id}.svg",
        }
    return entry


def write_manifest(result: RunResult, out_dir: str | Path) -> Path:
    """manifest.json indexing the whole run; paths relative to out_dir."""
    config = result.config
    document = {
        "schema_version": MANIFEST_SCHEMA_VERSION,
        "run_id": result.run_id,
        "created_at": result.created_at,
        "elapsed_ms": round(result.elapsed_ms, 3),
        "dataset": {
            "rows": result.dataset.rows,
            "columns": list(result.dataset.columns),
            "key_features": list(result.dataset.key_features),
            "dropped_rows": result.dropped_rows,
            "scaling": dict(SCALING_FOR_ALGORITHM),
        },
        "settings": {
            "seed": config.seed,
            "alpha": config.alpha,
            "min_cluster_fraction": config.min_cluster_fraction,
            "bonferroni": config.bonferroni,
        },
        "candidates": [manifest_entry(report) for report in result.candidates],
    }
    path = Path(out_dir) / "manifest.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(document, fh, indent=2)
        fh.write("\n")
    return path


def write_run_outputs(result: RunResult, out_dir: str | Path) -> Path:
    """Write the full output tree and return the manifest path.

    Layout:
        <out_dir>/manifest.json
        <out_dir>/summary/{metrics.csv, significant_features.csv, sizes.csv}
        <out_dir>/candidates/<candidate_id>/profile.csv
        <out_dir>/plots/<candidate_id>.svg
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for report in result.candidates:
        if report.ok:
            write_candidate_csv(report, out_dir)
            render_zscore_chart(report, result.dataset.key_features, out_dir)
    write_summary_csvs(result, out_dir)
    return write_manifest(result, out_dir)
