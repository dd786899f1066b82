import os
from pathlib import Path

import pytest

import locomanip as lm

FIXTURES = Path(os.environ.get("LOCOMANIP_FIXTURES", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))


def fixture(name):
    return FIXTURES / name


def small_map():
    m = lm.GridMap()
    m.n_grid = 5
    m.start = lm.Cell(0, 0)
    m.goal = lm.Cell(4, 4)
    return m


def test_solver_matches_oracle():
    cfg = lm.PlanConfig()
    cfg.horizon = 4
    inst = lm.encode(small_map(), cfg)
    res = lm.solve(inst)
    oracle = lm.brute_force_solve(inst)
    assert res.status == lm.SolveStatus.OPTIMAL
    assert res.objective == pytest.approx(oracle.objective)
    report = lm.validate_plan(res.plan, inst.map, cfg)
    assert report["ok"]
    assert lm.objective_value(res.plan, cfg, inst.map.goal) == pytest.approx(res.objective)


def test_fixture_plan_and_evc():
    m = lm.load_map_file(fixture("fig5.json"))
    cfg = lm.PlanConfig()
    cfg.horizon = 6
    res = lm.solve(lm.encode(m, cfg))
    assert res.plan is not None and res.plan.horizon == 6
    report = lm.evc(res.plan, m)
    assert report["cells_visited"] > 0 and report["energy_j"] > 0
    text = lm.save_plan(res.plan, m, cfg)
    assert lm.load_plan(text).positions == res.plan.positions


def test_validator_flags_stride():
    m = small_map()
    cfg = lm.PlanConfig()
    cfg.horizon = 1
    plan = lm.make_plan(5, m.start, [lm.Cell(2, 0)], [lm.Mode.BIPED])
    report = lm.validate_plan(plan, m, cfg)
    assert not report["ok"]
    assert report["counts"]["step_set"] == 1


def test_single_mode_sweep():
    m = lm.load_map_file(fixture("corridor.json"))
    rows = {r.mode: r for r in lm.evc_sweep(m)}
    assert rows[lm.Mode.ROLL].min_horizon < rows[lm.Mode.CRAWL].min_horizon < rows[lm.Mode.BIPED].min_horizon


def test_bad_map_raises():
    with pytest.raises(lm.ParseError):
        lm.load_map("not json")
    with pytest.raises(lm.Error):
        lm.load_map_file(fixture("no_such_map.json"))


def test_admittance_step():
    g = lm.AdmittanceGains()
    g.d_d, g.k_d = 8.0, 16.0
    s = lm.AxisState(0.01, 0.0, 0.0)
    out = lm.governed_control(s, lm.AxisReference(0.0), g, 5.0)
    assert out.u == pytest.approx(lm.admittance_accel(s, lm.AxisReference(0.0), g))
    nxt = lm.integrate_axis(s, out.u)
    assert nxt.x == pytest.approx(0.01)
    assert nxt.v == pytest.approx(out.u * lm.DEFAULT_DT)


def test_governed_scenario_stays_in_bounds(tmp_path):
    scenario, grid = lm.load_scenario(fixture("pull_governed.json").read_text())
    grid.counts = [7, 7, 7, 7, 7]
    index, summary = lm.build_moas(scenario.gains, scenario.bounds, scenario.contact, grid, workers=2)
    assert 0 < summary.retained <= summary.total
    assert len(index) == summary.retained

    path = tmp_path / "moas.bin"
    fp = lm.save_moas(path, scenario.gains, scenario.bounds, scenario.contact, grid, index)
    loaded = lm.load_moas(path, fp)
    assert len(loaded) == len(index)
    with pytest.raises(lm.FingerprintMismatch):
        lm.load_moas(path, fp ^ 1)

    scenario.index = loaded
    trace = lm.run_scenario(scenario)
    report = lm.check_trace(trace, scenario.bounds)
    assert report["consistent"]
    assert report["total"] == 0
    assert any(r.governor_modified for r in trace.rows)

    scenario.governed = False
    report = lm.check_trace(lm.run_scenario(scenario), scenario.bounds)
    assert report["total"] > 0


def test_govern_leaves_members_alone():
    bounds = lm.AxisBounds()
    sample = lm.MoasSample(0.0, 0.0, 0.0, 0.0, 0.0)
    index = lm.MoasIndex([sample], bounds)
    assert index.nearest(lm.MoasSample(0.001, 0.0, 0.0, 0.0, 0.0)) == sample
    res = lm.govern(index, sample, 0.1)
    assert not res.modified
