from __future__ import annotations

import hashlib
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for `oracles`

from clustergrid.synth import make_blobs


@pytest.fixture(scope="session")
def blobs300():
    """The 3-blob recovery fixture: 300 rows, 5 dims, centers >= 20 apart."""
    values, labels = make_blobs(300, 5, 3, block_value=12.0, cluster_std=1.0, seed=11)
    return values, labels


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)


def tree_digest(root: Path, *, skip: tuple[str, ...] = ("manifest.json",)) -> dict[str, str]:
    """Relative path -> sha256 for every file under root (minus skips)."""
    digests = {}
    for path in sorted(root.rglob("*")):
        if path.is_file() and path.name not in skip:
            digests[str(path.relative_to(root))] = hashlib.sha256(
                path.read_bytes()
            ).hexdigest()
    return digests
