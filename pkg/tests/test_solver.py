import json

import numpy as np
import pytest

from equipart.model import (
    AffineHyperplane,
    Arrangement,
    DimensionError,
    GroupElement,
    MomentIntervals,
    PointCloud,
    act_on_arrangement,
    is_equipartition,
)
from equipart.moment import enumerate_standard
from equipart.solver import (
    FOUND,
    NOT_FOUND,
    SolverConfig,
    gaussian_clouds,
    ham_sandwich,
    objective,
    solve,
)


def square_cloud():
    return PointCloud(np.array([[1.0, 1], [1, -1], [-1, 1], [-1, -1]]))


def axes():
    return Arrangement((AffineHyperplane((1.0, 0.0), 0.0), AffineHyperplane((0.0, 1.0), 0.0)))


def test_objective_zero_on_square():
    assert objective([square_cloud()], axes()) == 0


def test_objective_non_negative():
    rng = np.random.default_rng(0)
    for _ in range(20):
        cloud = PointCloud(rng.standard_normal((100, 2)))
        arr = Arrangement(
            tuple(AffineHyperplane(tuple(rng.standard_normal(2)), float(rng.standard_normal())) for _ in range(2))
        )
        assert objective([cloud], arr) >= 0


def test_objective_on_sampled_certificate():
    (cert,) = enumerate_standard(1)
    cloud = MomentIntervals(2, ((1, 2),)).sample(10**4)
    assert len(cloud) == 10**4
    assert objective([cloud], cert.arrangement.to_float()) <= 1e-4


def test_objective_invariant_under_group():
    rng = np.random.default_rng(1)
    masses = gaussian_clouds(2, 3, 200, rng)
    for _ in range(20):
        arr = Arrangement(
            tuple(AffineHyperplane(tuple(rng.standard_normal(3)), float(rng.standard_normal())) for _ in range(2))
        )
        base = objective(masses, arr)
        for g in GroupElement.all(2):
            assert abs(objective(masses, act_on_arrangement(g, arr)) - base) <= 1e-12


def test_config_validation():
    cloud = [PointCloud(np.random.default_rng(0).standard_normal((50, 2)))]
    with pytest.raises(ValueError):
        solve(cloud, 2, SolverConfig(eps=0.25))
    with pytest.raises(ValueError):
        solve(cloud, 1, SolverConfig(restarts=0))
    with pytest.raises(DimensionError):
        solve(cloud, 3)
    with pytest.raises(TypeError):
        solve([MomentIntervals(2, ((1, 2),))], 1)


def test_single_gaussian_bisected():
    cloud = PointCloud(np.random.default_rng(0).standard_normal((1000, 2)))
    res = solve([cloud], 1, SolverConfig(eps=0.02))
    assert res.status == FOUND
    assert res.residual <= 0.02
    assert is_equipartition([cloud], res.arrangement, 0.02)


def test_far_apart_clouds_in_plane_not_required():
    rng = np.random.default_rng(4)
    masses = [PointCloud(np.array([30.0 * i, 0.0]) + rng.standard_normal((200, 2))) for i in range(3)]
    res = solve(masses, 2, SolverConfig(eps=0.005, restarts=2, max_iters=400))
    assert res.status in (FOUND, NOT_FOUND)
    if res.found:
        assert is_equipartition(masses, res.arrangement, 0.005)


def test_ham_sandwich_examples():
    rng = np.random.default_rng(42)
    one = [PointCloud(rng.standard_normal((300, 1)))]
    assert ham_sandwich(one).found
    two = gaussian_clouds(2, 2, 500, np.random.default_rng(42))
    assert ham_sandwich(two, SolverConfig(seed=42)).found
    three = gaussian_clouds(3, 3, 500, np.random.default_rng(42))
    assert ham_sandwich(three, SolverConfig(seed=42)).found


def test_ham_sandwich_dimension_check():
    with pytest.raises(DimensionError):
        ham_sandwich(gaussian_clouds(2, 3, 50, np.random.default_rng(0)))


def test_hadwiger_instance():
    masses = gaussian_clouds(2, 3, 1000, np.random.default_rng(0))
    res = solve(masses, 2, SolverConfig(eps=0.02, restarts=64))
    assert res.found
    assert res.arrangement.k == 2
    assert is_equipartition(masses, res.arrangement, 0.02)


def test_deterministic_and_parallel_invariant():
    masses = gaussian_clouds(2, 3, 400, np.random.default_rng(3))
    cfg = SolverConfig(eps=0.02, restarts=8, seed=5)
    a = solve(masses, 2, cfg)
    b = solve(masses, 2, cfg)
    c = solve(masses, 2, SolverConfig(eps=0.02, restarts=8, seed=5, workers=4))
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert a.restart_index == c.restart_index
    assert a.arrangement == c.arrangement and a.residual == c.residual


def test_monotone_restarts():
    masses = gaussian_clouds(3, 3, 300, np.random.default_rng(8))
    found_at = None
    for r in (1, 2, 4, 8):
        res = solve(masses, 1, SolverConfig(eps=0.01, restarts=r, max_iters=300, seed=2))
        if found_at is not None:
            assert res.found and res.restart_index == found_at
        elif res.found:
            found_at = res.restart_index


def test_not_found_reports_best():
    rng = np.random.default_rng(4)
    masses = [PointCloud(np.array([30.0 * i, 0.0]) + rng.standard_normal((100, 2))) for i in range(3)]
    res = solve(masses, 2, SolverConfig(eps=1e-6, restarts=1, max_iters=50))
    assert res.status == NOT_FOUND
    assert res.restart_index is None
    assert res.residual > 1e-6 and res.arrangement is not None


def test_result_json():
    res = solve([square_cloud()], 1, SolverConfig(eps=0.1, restarts=2))
    obj = json.loads(json.dumps(res.to_json()))
    assert set(obj) == {"status", "residual", "arrangement", "evaluations", "restart_index"}
