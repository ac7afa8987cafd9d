from pathlib import Path

import numpy as np
import pytest

import adaagc

DATA = Path(__file__).resolve().parent.parent / "data"


def collinear_lasso(seed=0):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(20, 2)) @ rng.normal(size=(2, 5)) + 0.01 * rng.normal(size=(20, 5))
    b = A @ np.ones(5) + 0.1 * rng.normal(size=20)
    data = adaagc.Dataset.from_dense(A, b)
    return adaagc.Problem(data, adaagc.Loss.square(), adaagc.Regularizer.l1(1 / 20))


def test_prox_operators():
    v = np.array([3.0, -0.5, 1.0])
    np.testing.assert_allclose(adaagc.prox_l1(v, 1.0), [2.0, 0.0, 0.0])
    p = adaagc.project_l1_ball(v, 1.0)
    assert np.abs(p).sum() == pytest.approx(1.0)
    np.testing.assert_allclose(adaagc.prox_linf(v, 10.0), 0.0)
    assert adaagc.prox_l1inf_groups(v, 0.5, [0, 2, 3]).shape == (3,)
    assert adaagc.prox_huber_norm(v, 0.5, 1.0).shape == (3,)


def test_moreau_identity_for_l1():
    rng = np.random.default_rng(1)
    for _ in range(20):
        v = rng.normal(size=6) * 3
        dual = np.clip(v, -0.7, 0.7)
        np.testing.assert_allclose(adaagc.prox_l1(v, 0.7) + dual, v, atol=1e-12)


def test_libsvm_round_trip():
    data = adaagc.parse_libsvm("+1 1:0.5 3:2\n-1 2:1\n")
    assert (data.n, data.d, data.nnz) == (2, 3, 3)
    np.testing.assert_array_equal(data.to_dense(), [[0.5, 0, 2], [0, 1, 0]])
    back = adaagc.parse_libsvm(data.to_libsvm())
    np.testing.assert_array_equal(back.to_dense(), data.to_dense())
    np.testing.assert_array_equal(back.labels, [1, -1])
    assert adaagc.load_libsvm(DATA / "tiny.libsvm").n == 5


def test_parse_error_carries_message():
    with pytest.raises(adaagc.ParseError, match="line 2"):
        adaagc.parse_libsvm("1 1:1\nabc 1:1\n")
    assert issubclass(adaagc.ParseError, adaagc.Error)


def test_solvers_agree_on_lasso():
    problem = collinear_lasso()
    x0 = np.zeros(problem.dimension)
    results = {
        "pg": adaagc.pg(problem, eps=1e-8),
        "apg": adaagc.apg(problem, eps=1e-8),
        "adaagc": adaagc.adaagc(problem, eps=1e-8, c0=10, gamma=2),
    }
    objectives = {k: problem.objective(t.solution) for k, t in results.items()}
    for name, trace in results.items():
        assert trace.status == "converged", name
        assert trace.prox_grad_norm <= 1e-8
        assert trace.prox_calls > 0
    ref = objectives["pg"]
    for value in objectives.values():
        assert value == pytest.approx(ref, rel=1e-9, abs=1e-12)
    assert problem.objective(results["adaagc"].solution) <= problem.objective(x0)


def test_adaagc_stage_events_halve():
    trace = adaagc.adaagc(collinear_lasso(3), eps=1e-6)
    advances = [s for s in trace.stages if s["kind"] == "advance"]
    assert advances
    for s in advances:
        assert s["eps"] == s["eps_prev"] / 2
        assert s["prox_grad_norm"] <= s["eps_prev"] / 2
    records = trace.records
    assert records.shape[1] == 4
    assert np.all(np.diff(records[:, 3]) >= 0)


def test_pg_option_one_is_monotone():
    trace = adaagc.pg(collinear_lasso(2), eps=1e-6, option="I")
    F = trace.records[:, 1]
    assert np.all(np.diff(F) <= 1e-14 * np.maximum(1, np.abs(F[:-1])))


def test_budget_and_config_errors():
    problem = collinear_lasso()
    trace = adaagc.pg(problem, eps=1e-12, max_prox_calls=5)
    assert trace.status == "budget_exhausted"
    with pytest.raises(adaagc.InvalidConfiguration):
        adaagc.adaagc(problem, gamma=1.0)
    with pytest.raises(adaagc.InvalidConfiguration):
        adaagc.pg(problem, option="III")
    with pytest.raises(adaagc.DimensionMismatch):
        adaagc.Dataset.from_dense(np.ones((3, 2)), np.ones(4))


def test_run_experiment():
    rows = adaagc.run_experiment(DATA / "tiny_experiment.json", jobs=2)
    assert len(rows) == 12
    assert {r["solver"] for r in rows} == {"PG", "APG", "adaAGC"}
    assert all(r["status"] == "converged" for r in rows)
    assert adaagc.format_number(1e-4) == "1e-4"
