import math

import numpy as np
import pytest

import tapgp


def test_rbf_and_kernel_matrix():
    assert tapgp.rbf((0.3, 0.7), (0.3, 0.7)) == 1.0
    d = math.sqrt(0.017)
    assert tapgp.rbf((0.0, 0.0), (d, 0.0)) == pytest.approx(math.exp(-0.5), rel=1e-12)
    pts = np.array([[0.1, 0.2], [0.5, 0.5], [0.9, 0.1]])
    k = tapgp.kernel_matrix(pts, pts)
    assert k.shape == (3, 3)
    np.testing.assert_allclose(np.diag(k), 1.0)
    np.testing.assert_allclose(k, k.T)


def test_fit_predict_matches_numpy_solve():
    rng = np.random.default_rng(0)
    x = rng.uniform(size=(8, 2))
    y = rng.uniform(size=8)
    params = tapgp.KernelParams(0.017, 1e-6, 0.0)
    gp = tapgp.FittedGP.fit(x, y.tolist(), params)
    q = rng.uniform(size=(5, 2))
    mean, var = gp.predict(q)

    def k(a, b):
        d2 = ((a[:, None, :] - b[None, :, :]) ** 2).sum(-1)
        return np.exp(-d2 / (2 * 0.017))

    kxx = k(x, x) + 1e-6 * np.eye(8)
    kqx = k(q, x)
    np.testing.assert_allclose(mean, kqx @ np.linalg.solve(kxx, y), atol=1e-8)
    np.testing.assert_allclose(var, 1 - np.einsum("ij,ji->i", kqx, np.linalg.solve(kxx, kqx.T)), atol=1e-8)


def test_duplicate_points_without_noise_fail():
    x = np.array([[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(tapgp.FactorizationFailure):
        tapgp.FittedGP.fit(x, [0.1, 0.1], tapgp.KernelParams(0.017, 0.0, 0.0))


def test_exploration_state_maps_and_suggestion():
    cfg = tapgp.SurfaceModelConfig()
    cfg.weight_kernel = tapgp.KernelParams(0.017, 1e-6, 0.5)
    state = tapgp.ExplorationState(cfg, 9)
    maps = state.maps()
    np.testing.assert_array_equal(maps["exploration"], 0.5)
    assert state.suggest_next() == 0
    state.ingest((0.5, 0.5), 0.6, True)
    maps = state.maps()
    np.testing.assert_array_equal(maps["exploration"], maps["uncertainty"] * maps["weight"])
    assert state.suggest_next(tapgp.SuggestMode.UncertaintyOnly) != 40


def test_scene_tap():
    scene = tapgp.Scene("wave")
    desk = scene.tap((0.0, 0.0))
    assert not desk.on_surface and desk.raw_height_cm == 0.0
    peak = scene.tap((7.0 / 23.0, 10.0 / 23.0))
    assert peak.on_surface
    assert peak.raw_height_cm == pytest.approx(11.0)
    assert peak.height == pytest.approx(11.0 / 15.0)


def test_run_is_deterministic_and_beats_uncertainty_only():
    scene = tapgp.Scene("wave")
    cfg = tapgp.RunConfig()
    cfg.seed = 4
    cfg.snapshot_every = 1
    a = tapgp.run(cfg, scene)
    b = tapgp.run(cfg, scene)
    assert a.taps == b.taps
    assert len(a.taps) == 17
    curve = a.mean_variance_curve()
    assert curve[0] == 1.0
    assert all(later <= earlier + 1e-9 for earlier, later in zip(curve, curve[1:]))

    cfg.strategy = tapgp.Strategy.UncertaintyOnly
    baseline = tapgp.run(cfg, scene)
    assert [t["grid_index"] for t in baseline.taps[:3]] == [t["grid_index"] for t in a.taps[:3]]
    assert tapgp.effective_tap_improvement(a, baseline) > 0


def test_compare_and_cli(tmp_path):
    summary = tapgp.compare("[run]\nseeds = 0-4\n")
    assert len(summary["rows"]) == 5
    assert summary["min_improvement"] <= summary["mean_improvement"] <= summary["max_improvement"]

    with pytest.raises(tapgp.ConfigError):
        tapgp.compare("[run]\nbandwith = 1\n")

    cfg = tmp_path / "run.ini"
    cfg.write_text("[run]\nbudget = 5\ngrid_resolution = 11\n")
    out = tmp_path / "out"
    assert tapgp.cli(["run", str(cfg), "--output-dir", str(out), "--quiet"]) == 0
    lines = (out / "trace.csv").read_text().splitlines()
    assert len(lines) == 6
