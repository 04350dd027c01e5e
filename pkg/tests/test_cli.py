"""CLI contract: subcommands, exit codes, byte-stable outputs."""

import json

import pytest

from rechain.cli import main
from rechain.documents import save_model, save_scenario
from rechain.disruption import DisruptionEvent, InjectedOrder, Scenario
from rechain.formulation import ExtensionConfig

from _oracles import instance_from_mps, read_mps
from fixtures import dual_site, minimal_chain

GAP0 = ["--gap", "0"]


@pytest.fixture()
def chain_path(tmp_path):
    path = tmp_path / "chain.model.json"
    save_model(minimal_chain(), path)
    return path


@pytest.fixture()
def site_path(tmp_path):
    path = tmp_path / "site.model.json"
    save_model(dual_site(), path)
    return path


def scenario_file(tmp_path, scenario, name="scenario.json"):
    path = tmp_path / name
    save_scenario(scenario, path)
    return path


def test_validate_ok_and_exit_codes(chain_path, capsys):
    assert main(["validate", "--model", str(chain_path)]) == 0
    out = capsys.readouterr().out
    assert "0 error(s)" in out


def test_usage_error_is_exit_1():
    assert main(["validate"]) == 1  # missing --model
    assert main(["frobnicate"]) == 1


def test_data_error_is_exit_2(tmp_path):
    missing = tmp_path / "nope.json"
    assert main(["validate", "--model", str(missing)]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["validate", "--model", str(bad)]) == 2


def test_solve_prints_kpi_line_with_zero_cancellations(site_path, capsys):
    code = main(["solve", "--model", str(site_path)] + GAP0)
    assert code == 0
    out = capsys.readouterr().out
    assert "canceled_orders=0" in out
    assert "delayed_material=0" in out
    assert "profit=" in out


def test_solve_infeasible_is_exit_3(tmp_path, chain_path, capsys):
    scen = Scenario(
        events=(DisruptionEvent(target=("flow_upper", "a2", "PROD"),
                                fraction=0.0, start=1, end=4, shape="scheduled"),),
        injected_orders=(InjectedOrder(material="PROD", customer="C1", period=2,
                                       quantity=5, late_cost=1.0, cancel_cost=9.0,
                                       no_late=True, no_cancel=True),),
        config=ExtensionConfig(terminal="fid"),
    )
    path = scenario_file(tmp_path, scen)
    code = main(["solve", "--model", str(chain_path), "--scenario", str(path)])
    assert code == 3
    assert "infeasible" in capsys.readouterr().err


def test_solve_writes_results_and_exports_mps(tmp_path, chain_path):
    out_dir = tmp_path / "out"
    mps_path = tmp_path / "model.mps"
    code = main(["solve", "--model", str(chain_path), "--out", str(out_dir),
                 "--export-mps", str(mps_path), "--no-timestamps"] + GAP0)
    assert code == 0
    assert (out_dir / "results.json").exists()
    assert mps_path.exists()
    assert (tmp_path / "model.mps.names.json").exists()  # long names get a map


def test_solve_byte_identical_with_no_timestamps(tmp_path, chain_path):
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    for out in (out1, out2):
        assert main(["solve", "--model", str(chain_path), "--out", str(out),
                     "--format", "tabular", "--no-timestamps"] + GAP0) == 0
    for name in ("inventory.csv", "kpis.csv", "procurement.csv"):
        assert (out1 / "tables" / name).read_bytes() == (out2 / "tables" / name).read_bytes()


def test_export_mps_resolves_to_same_objective(tmp_path, chain_path, capsys):
    out = tmp_path / "instance.mps"
    assert main(["export", "--model", str(chain_path), "--format", "mps",
                 "--out", str(out)]) == 0
    from rechain.milp import SolveOptions, solve
    from rechain.formulation import build

    parsed = instance_from_mps(read_mps(out.read_text()))
    embedded = solve(build(minimal_chain())[0], SolveOptions(mip_gap=0.0))
    external = solve(parsed, SolveOptions(mip_gap=0.0))
    assert external.objective == pytest.approx(embedded.objective, rel=1e-6)


def test_solver_limit_is_exit_4(tmp_path, site_path):
    code = main(["solve", "--model", str(site_path), "--time-limit", "1e-9"])
    assert code == 4


def test_export_lp(tmp_path, chain_path):
    out = tmp_path / "instance.lp"
    assert main(["export", "--model", str(chain_path), "--format", "lp",
                 "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1] == "Maximize"


def test_sweep_writes_grid_and_cells(tmp_path, site_path):
    scen = Scenario(events=(DisruptionEvent(
        target=("production_upper", "PL1", "MAKE_INT"), start=0, fraction=0.0),))
    spath = scenario_file(tmp_path, scen)
    out = tmp_path / "sweep"
    code = main(["sweep", "--model", str(site_path), "--scenario", str(spath),
                 "--axis1", "0.5:1:2", "--axis2", "0.5:1:2",
                 "--out", str(out), "--workers", "2", "--no-timestamps"])
    assert code == 0
    grid = (out / "grid.csv").read_text().splitlines()
    assert grid[0].startswith("capacity_fraction,duration_fraction,status,profit")
    assert len(grid) == 5
    cells = json.loads((out / "cells.json").read_text())
    assert set(cells) == {"0,0", "0,1", "1,0", "1,1"}


def test_sweep_axis_spec_validation(tmp_path, site_path):
    scen = Scenario(events=(DisruptionEvent(
        target=("production_upper", "PL1", "MAKE_INT"), start=0, fraction=0.0),))
    spath = scenario_file(tmp_path, scen)
    assert main(["sweep", "--model", str(site_path), "--scenario", str(spath),
                 "--axis1", "oops", "--axis2", "0:1:2", "--out", str(tmp_path / "x")]) == 1


def test_roll_writes_summary(tmp_path, site_path):
    out = tmp_path / "roll"
    code = main(["roll", "--model", str(site_path), "--window", "5", "--steps", "3",
                 "--out", str(out), "--no-timestamps"])
    assert code == 0
    payload = json.loads((out / "roll.json").read_text())
    assert payload["steps"] == 3
    assert payload["halted"] is False
    assert payload["stitched_residual"] <= 1e-6
