"""Smoke tests for the rwot Python bindings."""

import math

import pytest

import rwot


def diracs(points, weights):
    return rwot.Measure([list(p) for p in points], list(weights))


def test_dist_between_diracs():
    mu = diracs([[0.0]], [1.0])
    nu = diracs([[3.0]], [1.0])
    sol = rwot.dist(mu, nu, p=2.0)
    assert sol.value == pytest.approx(3.0, abs=1e-12)
    assert sol.value_p == pytest.approx(9.0, abs=1e-12)


def test_robust_recovers_clean_distance():
    # clean parts at 0 and 1, outliers far away on both sides
    mu = diracs([[0.0], [100.0]], [0.8, 0.2])
    nu = diracs([[1.0], [-100.0]], [0.8, 0.2])
    sol = rwot.robust(mu, nu, p=1.0, eps=0.2)
    assert sol.value == pytest.approx(0.8, abs=1e-10)
    removed_pts = sol.removed_mu.points
    assert removed_pts == [[100.0]]


def test_plan_marginals():
    mu = diracs([[0.0], [1.0]], [0.5, 0.5])
    nu = diracs([[0.5]], [1.0])
    sol = rwot.dist(mu, nu, p=2.0)
    total = sum(mass for _, _, mass in sol.plan)
    assert total == pytest.approx(1.0, abs=1e-12)


def test_empirical_and_sinkhorn():
    mu = rwot.empirical([[0.0], [1.0], [2.0]])
    nu = rwot.empirical([[0.5], [1.5], [2.5]])
    exact = rwot.robust(mu, nu, p=1.0, eps=0.1)
    approx = rwot.sinkhorn(mu, nu, p=1.0, eps=0.1, reg=0.001)
    assert approx.approximate
    assert approx.value_p == pytest.approx(exact.value_p, rel=0.02)


def test_sliced_point_masses():
    mu = diracs([[0.0, 0.0]], [1.0])
    nu = diracs([[1.0, 0.0]], [1.0])
    value, std_error = rwot.sliced(
        mu, nu, p=2.0, k=2, eps=0.0, mode="avg", num_projections=8, seed=1
    )
    # k = d: projections are isometries, so the sliced value is the distance
    assert value == pytest.approx(1.0, abs=1e-10)
    assert std_error == pytest.approx(0.0, abs=1e-12)


def test_sweep_and_elbow():
    mu = diracs([[0.0], [100.0]], [0.8, 0.2])
    nu = diracs([[1.0], [-100.0]], [0.8, 0.2])
    taus = [0.02 * i for i in range(21)]
    got_taus, values_p, slopes = rwot.sweep(mu, nu, p=1.0, taus=taus)
    assert got_taus == pytest.approx(taus)
    assert all(a >= b - 1e-12 for a, b in zip(values_p, values_p[1:]))
    assert rwot.detect_elbow(taus, values_p) == pytest.approx(0.2, abs=1e-12)


def test_mde_picks_the_generating_member():
    sample = diracs([[2.0], [50.0]], [0.8, 0.2])
    members = [diracs([[t]], [1.0]) for t in (0.0, 2.0, 5.0)]
    index, value, minimum = rwot.mde(sample, members, p=1.0, eps=0.2)
    assert index == 1
    assert value == pytest.approx(0.0, abs=1e-10)
    assert minimum == pytest.approx(0.0, abs=1e-10)


def test_resilience_and_tests():
    rho = rwot.resilience_bound(sigma=1.0, q=2.0, p=1.0, eps=0.04)
    assert rho == pytest.approx(2 * 4 * math.sqrt(0.04) + 2 * 0.04, abs=1e-12)

    mu = diracs([[0.0]], [1.0])
    statistic, threshold, reject, warnings = rwot.two_sample_test(
        mu, mu, p=1.0, eps=0.1, rho=0.5
    )
    assert statistic == pytest.approx(0.0, abs=1e-12)
    assert threshold == pytest.approx(1.5, abs=1e-12)
    assert not reject
    assert warnings == []


def test_errors_surface_as_rwot_error():
    mu = diracs([[0.0]], [1.0])
    with pytest.raises(rwot.RwotError):
        rwot.robust(mu, mu, p=1.0, eps=1.5)
