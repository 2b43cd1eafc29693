import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonator_net.network import scenario_catalog
from resonator_net.optimize import (
    FreeParam,
    OptimizeSpec,
    _decode,
    apply_params,
    maximize_concurrence,
    pair_concurrence,
    spec_from_dict,
)
from resonator_net.sweeps import crossover, evaluate_point, phase_sweep, ratio_scan, set_drive

TWO_PI = 2 * math.pi


def ring_spec(**kw):
    net = scenario_catalog("config_iii")
    free = (FreeParam("abs_x", (0, 2), 0.0, 5.0), FreeParam("arg_x", (2,), 0.0, TWO_PI))
    return OptimizeSpec(net, free, pair=(1, 2), **kw)


def test_free_param_validation():
    with pytest.raises(ValueError):
        FreeParam("colour", (0,), 0, 1)
    with pytest.raises(ValueError):
        FreeParam("y", (0,), 2, 1)
    assert FreeParam("arg_x", (0,), 0, TWO_PI).circular
    assert not FreeParam("arg_x", (0,), 0, 1).circular
    assert FreeParam("abs_x", (0, 2), 0, 1).name == "abs_x[1,3]"


def test_apply_params_keeps_phase_and_magnitude():
    net = scenario_catalog("config_iii")
    out = apply_params(net, [FreeParam("abs_x", (0, 2), 0, 5)], [3.0])
    assert out.links[0].x == pytest.approx(3.0)
    assert out.links[2].x == pytest.approx(-3.0)
    out = apply_params(net, [FreeParam("arg_x", (2,), 0, TWO_PI)], [math.pi / 2])
    assert out.links[2].x == pytest.approx(1.67j)


@settings(max_examples=50, deadline=None)
@given(a=st.floats(0, TWO_PI, exclude_max=True), r=st.floats(0.1, 3))
def test_circular_decode(a, r):
    p = FreeParam("arg_x", (0,), 0, TWO_PI)
    got = _decode([p], np.array([r * math.cos(a), r * math.sin(a)]))[0]
    assert math.isclose(math.cos(got), math.cos(a), abs_tol=1e-9)
    assert math.isclose(math.sin(got), math.sin(a), abs_tol=1e-9)


def test_seeded_runs_are_reproducible():
    a = maximize_concurrence(ring_spec(restarts=2, seed=7, max_evals=150))
    b = maximize_concurrence(ring_spec(restarts=2, seed=7, max_evals=150))
    assert a.to_dict() == b.to_dict()
    assert len(a.per_restart) == 2


def test_optimum_is_at_least_every_restart_and_matches_params():
    res = maximize_concurrence(ring_spec(restarts=3, seed=1, max_evals=300))
    assert res.best_C == max(r["best_C"] for r in res.per_restart)
    spec = ring_spec()
    net = apply_params(spec.scenario, spec.free, [res.best_params[p.name] for p in spec.free])
    assert pair_concurrence(net, (1, 2)) == pytest.approx(res.best_C, abs=1e-12)
    assert res.evaluations == len(res.history)


def test_finds_phase_law():
    res = maximize_concurrence(ring_spec(restarts=4, seed=0))
    assert res.best_C > 0.40
    assert math.cos(res.best_params["arg_x[3]"]) < -0.99


def test_zero_drive_bounds_give_zero():
    net = scenario_catalog("config_iii")
    spec = OptimizeSpec(net, (FreeParam("abs_x", (0, 2), 0.0, 0.0),), pair=(1, 2), restarts=2)
    assert maximize_concurrence(spec).best_C == 0.0


def test_failed_points_score_zero():
    # lossless single waveguide without drive has a dark singlet: every point is degenerate
    net = scenario_catalog("config_i").with_gamma(0.0)
    spec = OptimizeSpec(net, (FreeParam("abs_x", (0,), 0.0, 0.0),), pair=(0, 1), restarts=1)
    res = maximize_concurrence(spec)
    assert res.best_C == 0.0
    assert res.failures == res.evaluations > 0


def test_spec_from_dict():
    net = scenario_catalog("config_iii")
    spec = spec_from_dict(net, {"free": [{"kind": "abs_x", "links": [1, 3], "lower": 0, "upper": 4}],
                                "pair": [2, 3], "restarts": 2, "seed": 5})
    assert spec.free[0].links == (0, 2)
    assert spec.pair == (1, 2)
    assert (spec.restarts, spec.seed) == (2, 5)
    with pytest.raises(ValueError):
        spec_from_dict(net, {"free": [], "bogus": 1})


def test_threads_do_not_change_results():
    a = maximize_concurrence(ring_spec(restarts=2, seed=3, max_evals=100), threads=1)
    b = maximize_concurrence(ring_spec(restarts=2, seed=3, max_evals=100), threads=2)
    assert a.to_dict() == b.to_dict()


# ---------------------------------------------------------------------------
# sweeps


def test_single_cell_phase_sweep():
    res = phase_sweep(scenario_catalog("config_iii"), 1)
    assert len(res) == 1
    assert list(res.columns)[:3] == ["phi_a", "phi_b", "dphi"]
    assert res.columns["status"] == ["ok"]


def test_phase_sweep_depends_only_on_difference():
    res = phase_sweep(scenario_catalog("config_iii"), 4)
    c = res.column("concurrence").reshape(4, 4)
    for shift in range(4):
        diag = [c[i, (i + shift) % 4] for i in range(4)]
        assert np.ptp(diag) < 1e-10


def test_evaluate_point_reports_failures():
    net = scenario_catalog("config_i").with_gamma(0.0)
    net = set_drive(net, 0, 0.0, 0.0)
    row = evaluate_point(net, (0, 1))
    assert row["status"] == "NonUniqueSteadyState"
    assert row["concurrence"] == 0.0
    assert math.isnan(row["n1"])


def test_ratio_scan_axis_points():
    res = ratio_scan(scenario_catalog("config_iii"), [0.0, math.pi / 2, 3 * math.pi / 4])
    r = res.column("concurrence")
    assert r[2] > r[0]
    # tan(theta) = x_b / x_a, so theta = pi/2 switches the first drive off
    assert res.column("x_a")[1] == pytest.approx(0.0, abs=1e-12)


def test_crossover_interpolation():
    assert crossover([1, 2, 3], [3, 2, 1], [1, 1.5, 2]) == pytest.approx(2.0 + 0.5 / 1.5)
    assert crossover([1, 2], [2, 3], [1, 1]) is None
