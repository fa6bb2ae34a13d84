"""End-to-end smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import autotandemml as atm


def test_version_and_registry():
    assert atm.__version__
    assert set(atm.problem_names()) == {"sbr", "aidlike", "psidlike"}


def test_metrics_known_values():
    y = np.array([[0.0, 0.0], [1.0, 1.0]])
    yhat = np.ones((2, 2))
    assert atm.rmse(y, yhat) == pytest.approx(math.sqrt(0.5), abs=1e-15)
    assert atm.rmse(y, y) == 0.0
    mean_pred = np.tile(y.mean(axis=0), (2, 1))
    assert atm.r2(y, mean_pred) == pytest.approx(0.0, abs=1e-15)
    assert atm.nmae(y, mean_pred) == pytest.approx(1.0, abs=1e-15)


def test_problem_dims_and_eval():
    for name, d, p in [("sbr", 20, 30), ("aidlike", 5, 75), ("psidlike", 3, 822)]:
        prob = atm.get_problem(name)
        assert (prob.design_dim, prob.response_dim) == (d, p)
        x = (np.asarray(prob.lower) + np.asarray(prob.upper)) / 2.0
        y = prob.evaluate(x)
        assert y.shape == (p,)
        assert np.all(np.isfinite(y))


def test_sbr_solver():
    field = atm.solve_sbr(np.zeros(20))
    assert field.shape == (20, 20)
    assert np.all(field == 0.0)
    measured = atm.measure_sbr(np.full((20, 20), 7.0))
    assert measured.shape == (30,)
    assert np.allclose(measured, 7.0)


def test_lhs_stratification():
    prob = atm.get_problem("aidlike")
    n = 8
    pts = atm.sample("lhs", prob, n, seed=3)
    assert pts.shape == (n, 5)
    lower, upper = np.asarray(prob.lower), np.asarray(prob.upper)
    for j in range(5):
        strata = np.floor((pts[:, j] - lower[j]) / (upper[j] - lower[j]) * n)
        assert sorted(strata.astype(int)) == list(range(n))
    again = atm.sample("lhs", prob, n, seed=3)
    np.testing.assert_array_equal(pts, again)


def test_sample_bounds_and_unknown_method():
    pts = atm.sample_bounds("random", np.zeros(2), np.ones(2), 50, seed=1)
    assert pts.shape == (50, 2)
    assert pts.min() >= 0.0 and pts.max() <= 1.0
    with pytest.raises(ValueError):
        atm.sample_bounds("sobol", np.zeros(2), np.ones(2), 5)


def test_active_learn_budget():
    prob = atm.get_problem("aidlike")
    x, y = atm.active_learn(
        prob, n_max=30, model="forest", seed=5, forest_trees=10, pso_max_evals=20
    )
    assert x.shape == (30, 5)
    assert y.shape == (30, 75)


def test_tandem_fit_and_validate_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    a = np.array([[1.0, 0.3], [0.1, 0.8]])
    x = rng.uniform(0.0, 1.0, size=(120, 2))
    y = x @ a.T

    model = atm.TandemModel.fit(x, y, seed=1, hidden=[16, 16], epochs=120)
    assert model.design_dim == 2 and model.response_dim == 2

    path = tmp_path / "tandem.json"
    model.save(path)
    loaded = atm.TandemModel.load(path)
    probe = y[0]
    np.testing.assert_array_equal(
        model.predict_design(probe), loaded.predict_design(probe)
    )

    batch = model.predict_design_batch(y[:10])
    assert batch.shape == (10, 2)


def test_run_experiment(tmp_path):
    config = """{
        "benchmark": "aidlike",
        "methods": ["lhs"],
        "n_max": 25,
        "repetitions": 1,
        "seed": 3,
        "test_size": 25,
        "tandem": {"hidden": [8, 8], "epochs": 20}
    }"""
    out = atm.run_experiment(config, tmp_path / "exp")
    assert out["records"] == 1
    assert out["failed"] == 0
    assert (tmp_path / "exp" / "records.jsonl").exists()
    assert (tmp_path / "exp" / "summary.csv").exists()
