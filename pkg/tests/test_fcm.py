import itertools
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fcmqr import fcm
from fcmqr.fcm import DegenerateClusterError, FcmConfig


def test_init_single_cluster_all_ones():
    mu = fcm.init_membership(7, 1, seed=3)
    assert np.array_equal(mu, np.ones((1, 7)))


def test_init_columns_sum_to_one_and_deterministic():
    a = fcm.init_membership(3, 2, seed=11)
    b = fcm.init_membership(3, 2, seed=11)
    assert a.shape == (2, 3)
    np.testing.assert_allclose(a.sum(axis=0), 1.0, atol=1e-9)
    assert np.all(a > 0)
    assert a.tobytes() == b.tobytes()


def test_init_too_many_clusters():
    with pytest.raises(ValueError):
        fcm.init_membership(2, 3, seed=0)


def test_centroid_single_cluster_is_mean():
    pts = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, -1.0]])
    c = fcm.compute_centroids(pts, np.ones((1, 3)), 2.0)
    np.testing.assert_allclose(c[0], pts.mean(axis=0))


def test_centroid_one_hot():
    pts = np.array([[0.0, 1.0], [2.0, 3.0], [4.0, -1.0]])
    mu = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
    c = fcm.compute_centroids(pts, mu, 2.0)
    np.testing.assert_array_equal(c[0], pts[1])


def test_centroid_matches_loop_recomputation():
    rng = np.random.default_rng(5)
    pts = rng.normal(size=(4, 2))
    mu = fcm.init_membership(4, 3, seed=9)
    got = fcm.compute_centroids(pts, mu, 2.0)
    for j in range(3):
        num = [0.0, 0.0]
        den = 0.0
        for i in range(4):
            w = mu[j, i] ** 2
            den += w
            num[0] += w * pts[i, 0]
            num[1] += w * pts[i, 1]
        assert got[j, 0] == pytest.approx(num[0] / den, abs=1e-12)
        assert got[j, 1] == pytest.approx(num[1] / den, abs=1e-12)


def test_centroid_degenerate():
    with pytest.raises(DegenerateClusterError):
        fcm.compute_centroids(np.zeros((2, 1)), np.array([[1.0, 1.0], [0.0, 0.0]]), 2.0)


def test_membership_equidistant():
    mu = fcm.update_membership(np.array([[0.0, 0.0]]), np.array([[1.0, 0.0], [-1.0, 0.0]]), 2.0)
    np.testing.assert_allclose(mu[:, 0], [0.5, 0.5])


def test_membership_zero_distance():
    mu = fcm.update_membership(
        np.array([[1.0, 1.0]]), np.array([[1.0, 1.0], [5.0, 5.0], [1.0, 1.0]]), 2.0
    )
    assert mu[:, 0].tolist() == [1.0, 0.0, 0.0]


def test_membership_matches_closed_form():
    pts = [(0.0, 0.0), (1.0, 2.0), (3.0, -1.0)]
    cents = [(0.5, 0.5), (2.0, 0.0)]
    m = 1.5
    got = fcm.update_membership(np.array(pts), np.array(cents), m)
    for i, p in enumerate(pts):
        d = [math.dist(p, c) for c in cents]
        for j in range(2):
            expect = 1.0 / sum((d[j] / d[k]) ** (2.0 / (m - 1.0)) for k in range(2))
            assert got[j, i] == pytest.approx(expect, rel=1e-12)


def test_membership_dimension_mismatch():
    with pytest.raises(ValueError):
        fcm.update_membership(np.zeros((3, 2)), np.zeros((2, 3)), 2.0)


def _best_two_partition(points):
    best = None
    n = len(points)
    for mask in range(1, 2 ** (n - 1)):
        a = [p for i, p in enumerate(points) if mask >> i & 1]
        b = [p for i, p in enumerate(points) if not mask >> i & 1]
        sse = sum(np.sum((np.array(g) - np.mean(g, axis=0)) ** 2) for g in (a, b))
        if best is None or sse < best[0]:
            best = (sse, frozenset(i for i in range(n) if mask >> i & 1))
    return best[1]


def test_fit_separates_groups_like_brute_force():
    pts = np.array([[0.0, 0.0], [0.1, 0.0], [10.0, 0.0], [10.1, 0.0]])
    res = fcm.fit(pts, FcmConfig(c=2, seed=4))
    group = _best_two_partition(pts.tolist())
    side = {int(res.hard_assignment[i]) for i in group}
    other = {int(res.hard_assignment[i]) for i in range(4) if i not in group}
    assert len(side) == 1 and len(other) == 1 and side != other
    assert res.converged


def test_fit_single_cluster_converges_fast():
    pts = np.random.default_rng(0).normal(size=(20, 3))
    res = fcm.fit(pts, FcmConfig(c=1))
    assert res.iterations <= 2
    np.testing.assert_allclose(res.centroids[0], pts.mean(axis=0))


def test_fit_reports_non_convergence():
    pts = np.random.default_rng(1).normal(size=(50, 4))
    res = fcm.fit(pts, FcmConfig(c=3, max_iters=2, epsilon=1e-15))
    assert not res.converged
    assert res.iterations == 2


def test_config_validation_and_warning():
    with pytest.raises(ValueError):
        FcmConfig(c=2, m=1.0)
    with pytest.raises(ValueError):
        FcmConfig(c=0)
    with pytest.warns(UserWarning):
        FcmConfig(c=2, m=3.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        FcmConfig(c=2, m=1.25)


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(0, 2**31),
    n=st.integers(3, 60),
    d=st.integers(1, 5),
    c=st.integers(1, 3),
    m=st.sampled_from([1.25, 1.5, 2.0]),
)
def test_fit_properties(seed, n, d, c, m):
    pts = np.random.default_rng(seed).normal(size=(n, d))
    res = fcm.fit(pts, FcmConfig(c=c, m=m, seed=seed, max_iters=100))
    np.testing.assert_allclose(res.memberships.sum(axis=0), 1.0, atol=1e-9)
    trace = res.objective_trace
    assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))
    assert np.array_equal(res.hard_assignment, np.argmax(res.memberships, axis=0))


def test_permuted_init_gives_permuted_assignment():
    rng = np.random.default_rng(2)
    pts = np.vstack([rng.normal(loc, 0.2, size=(10, 2)) for loc in (0.0, 5.0, 10.0)])
    init = fcm.init_membership(30, 3, seed=1)
    perm = [2, 0, 1]
    a = fcm.fit(pts, FcmConfig(c=3), init=init)
    b = fcm.fit(pts, FcmConfig(c=3), init=init[perm])
    # cluster perm[j] of run a became cluster j of run b
    np.testing.assert_array_equal(np.array(perm)[b.hard_assignment], a.hard_assignment)


def test_leukemia_scale_smoke():
    rng = np.random.default_rng(0)
    pts = rng.gamma(2.0, 500.0, size=(300, 38))
    res = fcm.fit(pts, FcmConfig(c=5, seed=7))
    assert sum(res.sizes()) == 300
    assert len(res.sizes()) == 5
