"""Generate the bundled demo: a 519x20 synthetic survey-scale dataset and a
16-candidate grid configuration.

Usage: python -m clustergrid.demo [--out DIR] [--seed N]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from .synth import write_blob_csv

DEMO_ROWS = 519
DEMO_DIMS = 20
DEMO_BLOBS = 3


def write_demo(out_dir: str | Path, seed: int = 7) -> Path:
    """Write data.csv and config.json; returns the config path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    names = write_blob_csv(
        out_dir / "data.csv", DEMO_ROWS, DEMO_DIMS, DEMO_BLOBS, seed=seed
    )
    config = {
        "seed": 42,
        "alpha": 0.05,
        "min_cluster_fraction": 0.05,
        "bonferroni": False,
        "dataset": {
            "path": "data.csv",
            "drop_na": False,
            "key_features": names[:6],
        },
        # 4 + 8 + 4 = 16 candidates.
        "algorithms": {
            "kmeans": {"k": [2, 3, 4, 5]},
            "ahc": {"k": [2, 3, 4, 5], "linkage": ["ward", "average"]},
            "nmf": {"rank": [2, 3, 4, 5]},
        },
    }
    config_path = out_dir / "config.json"
    with open(config_path, "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2)
        fh.write("\n")
    return config_path


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="demo", help="output directory")
    parser.add_argument("--seed", type=int, default=7, help="dataset seed")
    args = parser.parse_args(argv)
    config_path = write_demo(args.out, seed=args.seed)
    print(f"wrote {config_path}")
    print(f"run it:  clustergrid run --config {config_path} --out {Path(args.out) / 'run'}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
