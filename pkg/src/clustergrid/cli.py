"""Command-line entry point: run, gate, summary, serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ClusterGridError
from .grid import load_config, load_dataset, run_all
from .reporting import format_params, format_real, write_run_outputs
from .server import make_server

EXIT_OK = 0
EXIT_USAGE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clustergrid",
        description="Exhaustive clustering grid search with triage-ready reports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a grid search and write the output tree")
    run.add_argument("--config", required=True, help="run configuration JSON")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="parallel candidate evaluations (default: available cores)",
    )
    run.add_argument("--seed", type=int, default=None, help="override the config seed")

    gate = sub.add_parser("gate", help="show gate outcomes for a finished run")
    gate.add_argument("--run", required=True, help="run output directory")

    summary = sub.add_parser("summary", help="show the metrics summary for a finished run")
    summary.add_argument("--run", required=True, help="run output directory")

    serve = sub.add_parser("serve", help="serve the triage UI and decisions API")
    serve.add_argument("--run", required=True, help="run output directory")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument(
        "--ui",
        default=None,
        help="static UI bundle directory (default: $CLUSTERGRID_UI)",
    )
    return parser


def cmd_run(args) -> int:
    try:
        config = load_config(args.config)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
        dataset, dropped = load_dataset(config)
    except ClusterGridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if dropped:
        print(f"dropped {dropped} rows with missing/unparseable cells")
    result = run_all(dataset, config, jobs=max(1, args.jobs), dropped_rows=dropped)
    try:
        manifest = write_run_outputs(result, args.out)
    except OSError as exc:
        print(f"error: cannot write output tree: {exc}", file=sys.stderr)
        return EXIT_USAGE

    ruled_out = 0
    for report in result.candidates:
        if not report.ok:
            status = "error"
            detail = report.error
        else:
            status = report.gate.status
            ruled_out += status == "ruled_out"
            detail = f"silhouette={format_real(report.metrics.silhouette) or 'n/a'}"
        print(f"{report.spec.candidate_id:<24} {status:<10} {detail}")
    print(f"{len(result.candidates)} candidates, {ruled_out} ruled out by meta-criteria")
    print(f"wrote {manifest}")
    return EXIT_OK


def _load_manifest(run_dir: str) -> dict:
    path = Path(run_dir) / "manifest.json"
    try:
        with open(path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError:
        raise ClusterGridError(f"no manifest at {path}") from None
    except json.JSONDecodeError as exc:
        raise ClusterGridError(f"corrupt manifest at {path}: {exc}") from None
    if not isinstance(manifest, dict) or "candidates" not in manifest:
        raise ClusterGridError(f"corrupt manifest at {path}: missing candidates")
    return manifest


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    return "\n".join(
        "  ".join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip()
        for row in rows
    )


def cmd_gate(args) -> int:
    try:
        manifest = _load_manifest(args.run)
    except ClusterGridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = [["candidate_id", "gate", "reasons"]]
    for entry in manifest["candidates"]:
        if entry["status"] != "ok":
            rows.append([entry["candidate_id"], "error", entry.get("error") or ""])
        else:
            rows.append(
                [
                    entry["candidate_id"],
                    entry["gate"]["status"],
                    ", ".join(entry["gate"]["reasons"]),
                ]
            )
    print(_table(rows))
    return EXIT_OK


def _metric_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value  # "inf" sentinel
    return format_real(value)


def cmd_summary(args) -> int:
    try:
        manifest = _load_manifest(args.run)
    except ClusterGridError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows = [
        [
            "candidate_id", "algorithm", "params", "gate", "silhouette",
            "calinski_harabasz", "davies_bouldin", "sizes", "n_signif",
        ]
    ]
    for entry in manifest["candidates"]:
        if entry["status"] != "ok":
            rows.append(
                [entry["candidate_id"], entry["algorithm"],
                 format_params(entry["params"]), "error", "", "", "", "", ""]
            )
            continue
        metrics = entry["metrics"]
        rows.append(
            [
                entry["candidate_id"],
                entry["algorithm"],
                format_params(entry["params"]),
                entry["gate"]["status"],
                _metric_cell(metrics["silhouette"]),
                _metric_cell(metrics["calinski_harabasz"]),
                _metric_cell(metrics["davies_bouldin"]),
                "/".join(str(s) for s in entry["sizes"]),
                str(entry["n_significant_features"]),
            ]
        )
    print(_table(rows))
    return EXIT_OK


def cmd_serve(args) -> int:
    run_dir = Path(args.run)
    if not (run_dir / "manifest.json").is_file():
        print(f"error: no manifest at {run_dir / 'manifest.json'}", file=sys.stderr)
        return EXIT_USAGE
    ui_dir = args.ui or os.environ.get("CLUSTERGRID_UI") or None
    try:
        server = make_server(run_dir, args.port, ui_dir, quiet=False)
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    host, port = server.server_address[:2]
    print(f"serving {run_dir} on http://{host}:{port}/ (ctrl-c to stop)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "gate": cmd_gate,
        "summary": cmd_summary,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
