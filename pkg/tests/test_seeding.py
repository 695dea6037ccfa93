import numpy as np
import pytest

import oracles
from exprclust.errors import AlgorithmError
from exprclust.matrix_io import generate_synthetic
from exprclust.seeding import ccia_groups, ccia_seed, group_target

SIX = np.array([(0, 0), (0, 1), (10, 0), (10, 1), (5, 5), (5, 6)], dtype=float)


def test_group_target():
    assert group_target(6, 3) == 2
    assert group_target(300, 10) == 23
    assert group_target(8, 1) == 6
    assert group_target(4, 1) == 3


def test_three_natural_pairs(backend):
    seeds = ccia_groups(SIX, 3)
    assert [sorted(g.tolist()) for g in seeds.groups] == [[0, 1], [2, 3], [4, 5]]
    np.testing.assert_array_equal(ccia_seed(SIX, 3), [(0, 0.5), (10, 0.5), (5, 5.5)])


def test_single_group(backend):
    x = np.array([(0.0,), (1.0,), (3.0,), (7.0,), (20.0,)])
    seeds = ccia_groups(x, 1)
    # target ceil(3.75) = 4: pair (0,1), then 3, then 7
    assert seeds.groups[0].tolist() == [0, 1, 2, 3]
    np.testing.assert_allclose(ccia_seed(x, 1), [[11.0 / 4]])


def test_duplicated_points_terminate(backend):
    base = np.array([(0.0, 0.0), (4.0, 0.0)])
    x = np.repeat(base, 2, axis=0)  # rows 0,1 and 2,3 coincide
    seeds = ccia_groups(x, 2)
    assert [g.tolist() for g in seeds.groups] == [[0, 1], [2, 3]]
    np.testing.assert_array_equal(ccia_seed(x, 2), base)


@pytest.mark.parametrize("seed", range(8))
def test_matches_literal_trace(seed, backend):
    rng = np.random.default_rng(seed)
    n, k = int(rng.integers(4, 40)), int(rng.integers(1, 5))
    k = min(k, n // 2)
    x = np.round(rng.standard_normal((n, 3)), 1)
    groups, centers = oracles.ccia(x.tolist(), k)
    assert [g.tolist() for g in ccia_groups(x, k).groups] == groups
    np.testing.assert_allclose(ccia_seed(x, k), centers, atol=1e-12)


def test_groups_disjoint_and_bounded(rng):
    x = rng.standard_normal((97, 4))
    seeds = ccia_groups(x, 7)
    flat = np.concatenate(seeds.groups)
    assert len(set(flat.tolist())) == flat.size == seeds.consumed <= 97
    assert seeds.k == 7
    assert all(len(g) == group_target(97, 7) for g in seeds.groups)


def test_deterministic(rng):
    x = rng.standard_normal((120, 6))
    assert ccia_seed(x, 5).tobytes() == ccia_seed(x, 5).tobytes()


@pytest.mark.parametrize("n,k", [(5, 3), (1, 1)])
def test_needs_two_points_per_group(n, k):
    with pytest.raises(AlgorithmError, match=f"n={n}, K={k}"):
        ccia_seed(np.zeros((n, 2)), k)


def test_k_zero():
    with pytest.raises(AlgorithmError):
        ccia_seed(np.zeros((4, 2)), 0)


def test_centroids_near_true_centers():
    spread = 0.5
    mat, truth = generate_synthetic(4, 50, 6, separation=20 * spread, spread=spread, seed=5)
    true_centers = np.vstack([mat.data[truth == c].mean(axis=0) for c in range(4)])
    for c in ccia_seed(mat, 4):
        assert np.sqrt(((true_centers - c) ** 2).sum(axis=1)).min() < 2 * spread
