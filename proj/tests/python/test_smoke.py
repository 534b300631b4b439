"""Smoke tests for the Python bindings."""

import math

import numpy as np
import pytest

import odisal

FOV = math.radians(100.0)


def test_view_grid_counts():
    assert len(odisal.view_grid(90.0, FOV).frames) == 6
    assert len(odisal.view_grid(45.0, FOV).frames) == 26
    assert len(odisal.view_grid(30.0, FOV).frames) == 62
    assert len(odisal.view_grid(22.5, FOV).frames) == 114
    with pytest.raises(odisal.OdisalError):
        odisal.view_grid(50.0, FOV)


def test_frame_basis():
    frame = odisal.view_frame(0.0, 0.0, FOV)
    assert frame.x_axis.y == pytest.approx(-1.0)
    assert frame.y_axis.z == pytest.approx(1.0)
    d = odisal.spherical_to_direction(odisal.SphericalCoord(0.0, 0.0))
    assert (d.x, d.y, d.z) == pytest.approx((-1.0, 0.0, 0.0))
    u, v, covered = odisal.project_to_view(d, frame)
    assert covered
    assert (u, v) == pytest.approx((0.0, 0.0))


def test_normalize_and_blur():
    rng = np.random.default_rng(0)
    m = rng.random((20, 40)) + 0.1
    n = odisal.normalize_sum(m)
    assert n.sum() == pytest.approx(1.0)
    blurred = odisal.gaussian_blur(m, 3.0)
    assert blurred.sum() == pytest.approx(m.sum(), rel=1e-6)
    assert blurred.shape == (20, 40)


def test_estimate_pipeline():
    rng = np.random.default_rng(1)
    odi = rng.random((32, 64)) + 0.1
    grid = odisal.view_grid(45.0, FOV)
    fused = odisal.estimate(odi, odisal.ConstantBackend(), grid, view_side=32)
    assert fused.map.shape == (32, 64)
    assert fused.map.sum() == pytest.approx(1.0)
    assert fused.uncovered_count == 0
    assert fused.coverage.min() >= 1
    # Constant backend with no prior: uniform over full coverage.
    assert fused.map.std() < 1e-9


def test_metrics_reference_values():
    gt = np.array([[1.0, 0.0]])
    pred = np.array([[0.5, 0.5]])
    assert odisal.kl_div(gt, pred) == pytest.approx(math.log(2.0), rel=1e-5)

    small = np.array([[0.9, 0.1], [0.2, 0.3]])
    assert odisal.auc_judd(small, [(0, 0)]) == pytest.approx(0.875)

    report = odisal.MetricReport()
    report.kl, report.cc, report.nss, report.auc = 0.458, 0.548, 0.755, 0.701
    assert odisal.integrated_metric(report) == pytest.approx(-1.116, abs=0.05)


def test_method_a_identity():
    rng = np.random.default_rng(2)
    odi = rng.random((40, 80)) + 0.1
    bias = rng.random((40, 80)) + 0.1
    grid = odisal.view_grid(45.0, FOV)
    est = odisal.estimate(
        odi, odisal.ConstantBackend(), grid, prior=odisal.EquatorBias(bias),
        sigma=4.0, view_side=32,
    )
    expect = odisal.normalize_sum(odisal.gaussian_blur(bias, 4.0))
    np.testing.assert_allclose(est.map, expect, atol=1e-9)


def test_fit_and_compose(tmp_path):
    rng = np.random.default_rng(3)
    grid = odisal.view_grid(90.0, FOV)
    train = []
    for _ in range(2):
        odi = rng.random((16, 32)) + 0.1
        gt = rng.random((16, 32)) + 0.1
        train.append((odi, gt / gt.sum()))
    config = odisal.FitConfig()
    config.iterations = 3
    config.bias_resolution = 4
    config.view_side = 32
    biases, trace = odisal.fit_latitude_bias(train, odisal.ConstantBackend(), grid, config)
    assert len(biases.entries) == 3
    assert len(trace) == 4
    assert trace[-1] <= trace[0]

    composed = odisal.compose_bias_equirect(biases, grid, 32, 16)
    assert composed.shape == (16, 32)

    path = tmp_path / "bias.fmap"
    odisal.save_map(path, composed)
    loaded = odisal.load_map(path)
    np.testing.assert_allclose(loaded, composed, rtol=1e-6)
