import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from utterancesmith.cluster import SeededKMeans, kmeans
from utterancesmith.errors import KNonPositive, KTooLarge


def test_two_separated_clusters():
    pts = np.array([[0.0], [0.1], [10.0], [10.1]])
    result = kmeans(pts, 2, seed=7)
    groups = {}
    for i, a in enumerate(result.assignments):
        groups.setdefault(a, set()).add(i)
    assert set(map(frozenset, groups.values())) == {frozenset({0, 1}), frozenset({2, 3})}
    assert sorted(float(c[0]) for c in result.centers) == [0.05, 10.05]
    assert result.sizes == (2, 2)


def test_k_equals_one_gives_mean():
    pts = np.array([[1.0, 0.0], [3.0, 0.0], [5.0, 6.0]])
    result = kmeans(pts, 1, seed=0)
    assert result.sizes == (3,)
    assert np.allclose(result.centers[0], pts.mean(axis=0))


def test_k_too_large():
    with pytest.raises(KTooLarge):
        kmeans(np.zeros((3, 2)), 5, seed=0)


def test_k_non_positive():
    with pytest.raises(KNonPositive):
        kmeans(np.zeros((3, 2)), 0, seed=0)


def test_same_seed_bit_reproducible():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(40, 8))
    a = kmeans(pts, 5, seed=99)
    b = kmeans(pts, 5, seed=99)
    assert a.assignments == b.assignments
    assert np.array_equal(a.centers, b.centers)


def test_duplicate_points_still_fill_all_clusters():
    pts = np.zeros((6, 3))
    result = kmeans(pts, 3, seed=1)
    assert sum(result.sizes) == 6
    assert all(size >= 1 for size in result.sizes)


@settings(deadline=None, max_examples=30)
@given(
    st.integers(min_value=0, max_value=2**32),
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=5, max_value=20),
)
def test_convergence_invariants(seed, k, n_points):
    rng = np.random.default_rng(seed % (2**31))
    pts = rng.normal(size=(n_points, 4))
    result = kmeans(pts, k, seed=seed)

    assert sum(result.sizes) == n_points
    assert len(result.centers) == k
    labels = np.asarray(result.assignments)
    for j in range(k):
        members = pts[labels == j]
        assert len(members) == result.sizes[j]
        assert np.allclose(result.centers[j], members.mean(axis=0), atol=1e-9)
    # no point sits closer to a foreign center than to its own
    d = ((pts[:, None, :] - result.centers[None, :, :]) ** 2).sum(axis=2)
    own = d[np.arange(n_points), labels]
    assert np.all(own <= d.min(axis=1) + 1e-9)


def test_estimator_wrapper():
    pts = np.array([[0.0], [0.2], [9.0], [9.2]])
    est = SeededKMeans(n_clusters=2, seed=3).fit(pts)
    assert est.labels_.shape == (4,)
    assert est.cluster_centers_.shape == (2, 1)
    assert est.get_params() == {"n_clusters": 2, "seed": 3}
    assert np.array_equal(SeededKMeans(n_clusters=2, seed=3).fit_predict(pts), est.labels_)
