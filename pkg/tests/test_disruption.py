"""Bound profiles, scenario application, change audits."""

import pytest
from hypothesis import given, strategies as st

from rechain.disruption import (
    BoundProfile,
    DisruptionEvent,
    InjectedOrder,
    Scenario,
    ScenarioError,
    apply_scenario,
    diff_models,
    make_profile,
)
from rechain.documents import model_from_dict
from rechain.formulation import ExtensionConfig, build
from rechain.runner import run

from fixtures import dual_site, minimal_chain, minimal_chain_doc

TARGET = ("production_upper", "P1", "R1")


def test_immediate_profile_cuts_capacity_by_fraction():
    event = DisruptionEvent(target=TARGET, shape="immediate", start=0, end=30, fraction=0.25)
    profile = make_profile(100.0, event, horizon=40)
    assert profile.values[0] == 25.0
    assert profile.values[29] == 25.0
    assert profile.values[30] == 100.0


def test_fraction_one_is_identity():
    event = DisruptionEvent(target=TARGET, shape="immediate", start=0, end=10, fraction=1.0)
    assert make_profile(64.0, event, horizon=12).values == (64.0,) * 12


def test_permanent_shutdown_zeroes_out():
    event = DisruptionEvent(target=TARGET, shape="permanent", start=0, end=None, fraction=0.0)
    assert make_profile(64.0, event, horizon=8).values == (0.0,) * 8


def test_ramps_interpolate_linearly():
    event = DisruptionEvent(target=TARGET, shape="scheduled", start=2, end=10,
                            fraction=0.5, ramp_in=2, ramp_out=2)
    g = event.multipliers(12)
    assert g[1] == 1.0
    assert g[2] == 1.0  # decay begins at the window start
    assert g[3] == 0.75
    assert g[4] == 0.5  # plateau
    assert g[7] == 0.5
    assert g[8] == 0.5  # recovery over the final ramp
    assert g[9] == 0.75
    assert g[10] == 1.0


def test_ramp_overrun_rejected():
    event = DisruptionEvent(target=TARGET, start=2, end=5, fraction=0.5, ramp_in=2, ramp_out=2)
    with pytest.raises(ScenarioError, match="ramp"):
        event.check(12)


def test_event_window_and_shape_validation():
    with pytest.raises(ScenarioError):
        DisruptionEvent(target=TARGET, shape="scheduled", start=0, end=3).check(8)
    with pytest.raises(ScenarioError):
        DisruptionEvent(target=TARGET, shape="permanent", start=1, end=3).check(8)
    with pytest.raises(ScenarioError):
        DisruptionEvent(target=TARGET, start=5, end=3).check(8)
    with pytest.raises(ScenarioError):
        DisruptionEvent(target=TARGET, fraction=1.5).check(8)
    with pytest.raises(ScenarioError):
        DisruptionEvent(target=("nonsense", "P1"), fraction=0.5).check(8)


@given(
    f1=st.floats(0, 1, allow_nan=False),
    f2=st.floats(0, 1, allow_nan=False),
    start=st.integers(0, 6),
    length=st.integers(0, 6),
)
def test_tightening_is_monotone_in_fraction(f1, f2, start, length):
    lo, hi = sorted((f1, f2))
    horizon = 12
    end = min(horizon, start + length)
    e_lo = DisruptionEvent(target=TARGET, start=start, end=end, fraction=lo)
    e_hi = DisruptionEvent(target=TARGET, start=start, end=end, fraction=hi)
    p_lo = make_profile(64.0, e_lo, horizon=horizon)
    p_hi = make_profile(64.0, e_hi, horizon=horizon)
    assert all(a <= b for a, b in zip(p_lo.values, p_hi.values))
    assert all(v <= 64.0 for v in p_hi.values)


def test_profiles_must_be_nonnegative():
    with pytest.raises(ScenarioError):
        BoundProfile(values=(1.0, -0.5))


def test_apply_scenario_scales_targeted_table_only():
    model = minimal_chain()
    event = DisruptionEvent(target=TARGET, start=1, end=3, fraction=0.5, shape="scheduled")
    disrupted = apply_scenario(model, Scenario(events=(event,)))
    plant = disrupted.node("P1")
    assert plant.recipes[0].upper == (32.0, 16.0, 16.0, 32.0)
    # untouched input model
    assert model.node("P1").recipes[0].upper == (32.0,) * 4
    changes = diff_models(model, disrupted)
    assert changes == [type(changes[0])(("production_upper", "P1", "R1"), 1, 3, 32.0, 16.0)]


def test_empty_scenario_is_identity():
    model = minimal_chain()
    assert apply_scenario(model, Scenario()) == model
    assert diff_models(model, apply_scenario(model, Scenario())) == []


def test_fraction_one_events_are_noops():
    model = dual_site()
    event = DisruptionEvent(target=("production_upper", "PL1", "MAKE_INT"),
                            start=0, end=10, fraction=1.0)
    assert apply_scenario(model, Scenario(events=(event,))) == model


def test_disjoint_events_compose():
    model = dual_site()
    e1 = DisruptionEvent(target=("production_upper", "PL1", "MAKE_INT"), start=0, end=5, fraction=0.5)
    e2 = DisruptionEvent(target=("flow_upper", "w1-c1", "INT"), start=2, end=6, fraction=0.25)
    both = apply_scenario(model, Scenario(events=(e1, e2)))
    sequential = apply_scenario(apply_scenario(model, Scenario(events=(e1,))), Scenario(events=(e2,)))
    assert both == sequential


def test_same_parameter_events_multiply():
    model = minimal_chain()
    e1 = DisruptionEvent(target=TARGET, start=1, end=4, fraction=0.5, shape="scheduled")
    e2 = DisruptionEvent(target=TARGET, start=2, end=4, fraction=0.5, shape="scheduled")
    disrupted = apply_scenario(model, Scenario(events=(e1, e2)))
    assert disrupted.node("P1").recipes[0].upper == (32.0, 16.0, 8.0, 8.0)
    changes = diff_models(model, disrupted)
    assert [(c.start, c.end, c.new) for c in changes] == [(1, 2, 16.0), (2, 4, 8.0)]


def test_lead_time_override_replaces_window():
    model = minimal_chain()
    event = DisruptionEvent(target=("lead_time", "a1", "RAW"), start=1, end=3,
                            shape="scheduled", override=2)
    disrupted = apply_scenario(model, Scenario(events=(event,)))
    assert disrupted.arc("a1").lead_time["RAW"] == (1, 2, 2, 1)


def test_lead_time_override_requires_value():
    event = DisruptionEvent(target=("lead_time", "a1", "RAW"), start=1, end=3, shape="scheduled")
    with pytest.raises(ScenarioError, match="override"):
        event.check(4)


def test_economic_override_replaces_cost_tables():
    model = minimal_chain()
    event = DisruptionEvent(target=("buy_cost", "S1", "RAW"), start=0, end=4, override=3.0)
    disrupted = apply_scenario(model, Scenario(events=(event,)))
    assert disrupted.node("S1").buy_cost["RAW"] == (3.0,) * 4
    event2 = DisruptionEvent(target=("late_cost", "C1", "PROD"), start=2, end=4,
                             shape="scheduled", override=9.0)
    disrupted2 = apply_scenario(model, Scenario(events=(event2,)))
    assert disrupted2.orders.get("PROD", "C1").late_cost == (1.0, 1.0, 9.0, 9.0)


def test_unknown_targets_fail():
    model = minimal_chain()
    bad = DisruptionEvent(target=("production_upper", "P1", "NOPE"), fraction=0.5)
    with pytest.raises(ScenarioError, match="unknown recipe"):
        apply_scenario(model, Scenario(events=(bad,)))
    bad2 = DisruptionEvent(target=("flow_upper", "axx", None), fraction=0.5)
    with pytest.raises(ScenarioError, match="unknown arc"):
        apply_scenario(model, Scenario(events=(bad2,)))


def test_injected_order_lands_in_book():
    model = minimal_chain()
    order = InjectedOrder(material="PROD", customer="C1", period=2, quantity=5,
                          late_cost=2.0, cancel_cost=99.0)
    disrupted = apply_scenario(model, Scenario(injected_orders=(order,)))
    series = disrupted.orders.get("PROD", "C1")
    assert series.quantity == (10.0, 10.0, 15.0, 10.0)
    assert series.late_cost == (2.0,) * 4
    assert series.cancel_cost == (99.0,) * 4


def test_no_cancel_flag_pins_binary_to_zero():
    model = minimal_chain()
    order = InjectedOrder(material="PROD", customer="C1", period=2, quantity=5,
                          late_cost=2.0, cancel_cost=99.0, no_cancel=True)
    scenario = Scenario(injected_orders=(order,), config=ExtensionConfig(terminal="fid"))
    disrupted = apply_scenario(model, scenario)
    instance, catalog = build(disrupted, scenario.config)
    j = catalog.index(("y", "PROD", "C1", 2))
    assert instance.lower[j] == instance.upper[j] == 0.0


def test_flags_require_soft_terminal():
    model = minimal_chain()
    order = InjectedOrder(material="PROD", customer="C1", period=2, quantity=5,
                          late_cost=2.0, cancel_cost=99.0, no_late=True)
    scenario = Scenario(injected_orders=(order,), config=ExtensionConfig(terminal="hard"))
    with pytest.raises(ScenarioError, match="soft terminal"):
        apply_scenario(model, scenario)


def test_hard_order_flags_can_make_instance_infeasible():
    # block the only route, demand on-time delivery: infeasibility is the answer
    doc = minimal_chain_doc()
    model = model_from_dict(doc)
    config = ExtensionConfig(terminal="fid")
    order = InjectedOrder(material="PROD", customer="C1", period=2, quantity=5,
                          late_cost=2.0, cancel_cost=99.0, no_late=True, no_cancel=True)
    block = DisruptionEvent(target=("flow_upper", "a2", "PROD"), start=1, end=4,
                            fraction=0.0, shape="scheduled")
    result = run(model, Scenario(events=(block,), injected_orders=(order,), config=config))
    assert result.solution.status == "infeasible"
    assert result.changes  # diagnosis carries the applied changes


def test_diff_requires_same_topology():
    a = minimal_chain()
    doc = minimal_chain_doc()
    doc["arcs"][0]["id"] = "other"
    b = model_from_dict(doc)
    with pytest.raises(ScenarioError, match="topology"):
        diff_models(a, b)
