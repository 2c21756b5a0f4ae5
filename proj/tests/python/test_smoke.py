import math

import pytest

import diffsearch as ds


def fig2a():
    return ds.SearchParams(b=0.2, c=1.0, lambda_=0.01, r=0.1, mu=0.05, D=10.0)


def fig5():
    return ds.SearchParams(b=0.0, c=1.0, lambda_=0.0025, r=1 / 78, mu=0.1, D=10.0)


def test_closed_form():
    assert ds.mean_time(fig2a()) == pytest.approx(36293.380188724323, rel=1e-12)
    assert ds.mean_energy(fig2a()) == pytest.approx(10997.993996583128, rel=1e-12)
    fp = ds.mean_time_fixed_point(fig2a(), 10)
    assert fp.mean_time == pytest.approx(3626.0447248121716, rel=1e-8)
    assert ds.classify_finiteness(fig2a()) == "Finite"


def test_validation_raises():
    with pytest.raises(ds.SearchError, match="mu"):
        ds.SearchParams(b=0.0, c=1.0, lambda_=0.0, r=0.1, mu=0.0, D=1.0)


def test_distribution():
    g = ds.cdf(fig5(), [100.0, 1000.0])
    assert g[0] == pytest.approx(0.228480316987440, rel=1e-6)
    assert g[1] == pytest.approx(0.905097479651140, rel=1e-6)
    assert ds.cdf(fig5(), [ds.quantile(fig5(), 0.5)])[0] == pytest.approx(0.5, rel=1e-5)
    exact, asym = ds.searchers_needed(fig5(), 300.0, 3)
    assert abs(exact - asym) <= 2


def test_simulation_is_deterministic():
    a = ds.simulate_race(fig5(), N=3, replications=200, seed=4, workers=1)
    b = ds.simulate_race(fig5(), N=3, replications=200, seed=4, workers=2)
    assert a["samples"] == b["samples"]
    single = ds.simulate_race(fig5(), replications=5000, seed=2)
    est = single["t_k"]
    assert abs(est["mean"] - ds.mean_time(fig5())) <= 4 * est["ci_half_width"]


def test_segments_and_sweep():
    p = fig2a()
    t = ds.segmented_mean_time([(math.inf, p.b, p.c, p.lambda_)], p.r, p.mu, p.D)
    assert t == pytest.approx(ds.mean_time(p), rel=1e-8)
    rows = ds.phase_sweep([1.0, 10.0], [0.0, 1.0])
    assert len(rows) == 4
    assert all(status == "ok" for *_, status in rows)


def test_optimal_timeout():
    r_star, value = ds.optimal_timeout(fig5(), 1, "mean_time", 1e-3, 1.0)
    # the caption time-out 1/r = 78 is the time-optimal one
    assert 1 / r_star == pytest.approx(78.0, rel=1e-3)
    assert value == pytest.approx(ds.mean_time(fig5()), rel=1e-9)
