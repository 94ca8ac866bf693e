import numpy as np
import pytest

from clustergrid import nmf
from clustergrid.errors import DomainError, ParameterError


def test_exact_rank_one_factorization():
    v = np.array([[1.0, 2.0], [2.0, 4.0]])
    result = nmf(v, 1, seed=0, max_iter=2000, tol=0.0)
    assert result.objective < 1e-6
    assert list(result.labels) == [0, 0]


def test_rank_one_outer_product_check():
    # Oracle: any rank-1 nonnegative matrix is an outer product w h^T.
    rng = np.random.default_rng(4)
    w = rng.uniform(0.5, 2.0, size=6)
    h = rng.uniform(0.5, 2.0, size=3)
    v = np.outer(w, h)
    result = nmf(v, 1, seed=1, max_iter=2000, tol=0.0)
    assert result.objective < 1e-8


def test_negative_cell_rejected():
    with pytest.raises(DomainError):
        nmf(np.array([[1.0, -1.0], [2.0, 3.0]]), 1)


@pytest.mark.parametrize("bad_rank", [0, 3])
def test_rank_out_of_range(bad_rank):
    with pytest.raises(ParameterError):
        nmf(np.array([[1.0, 2.0], [3.0, 4.0]]), bad_rank)


def test_deterministic_for_fixed_seed(rng):
    v = rng.uniform(0.0, 3.0, size=(25, 6))
    a = nmf(v, 3, seed=9)
    b = nmf(v, 3, seed=9)
    assert np.array_equal(a.labels, b.labels)
    assert a.objective == b.objective


def test_objective_decreases_with_more_iterations(rng):
    v = rng.uniform(0.0, 3.0, size=(20, 5))
    short = nmf(v, 2, seed=3, max_iter=5, tol=0.0)
    long = nmf(v, 2, seed=3, max_iter=200, tol=0.0)
    assert long.objective <= short.objective + 1e-10


def test_labels_form_partition(rng):
    v = rng.uniform(0.0, 1.0, size=(30, 4))
    result = nmf(v, 3, seed=7)
    assert result.sizes.sum() == 30
    assert result.labels.max() < 3


def test_block_structure_recovered():
    # Two disjoint nonnegative patterns; argmax(W) should separate them.
    v = np.zeros((20, 6))
    v[:10, :3] = 5.0
    v[10:, 3:] = 5.0
    v += np.random.default_rng(0).uniform(0.0, 0.1, size=v.shape)
    result = nmf(v, 2, seed=5)
    first, second = set(result.labels[:10]), set(result.labels[10:])
    assert len(first) == 1 and len(second) == 1 and first != second
