"""Disruption scenarios: bound profiles, parameter overrides, injected orders.

A scenario never mutates its input model; applying one returns a new model
with the targeted parameter tables replaced. Capacity-style events scale a
bound by a severity fraction over a window (with optional linear decay and
recovery ramps); lead-time and economic events replace the targeted table
with an absolute value over the window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .formulation import ExtensionConfig
from .network import CUSTOMER, SUPPLIER, NetworkModel, OrderBook, OrderSeries, expand

SHAPES = ("immediate", "scheduled", "permanent", "custom")

# Parameter paths that scale by the severity fraction (tightening a bound).
BOUND_TARGETS = (
    "production_upper",
    "flow_upper",
    "buy_upper",
    "inventory_upper",
    "demand_upper",
)
# Parameter paths that take an absolute replacement value.
OVERRIDE_TARGETS = (
    "lead_time",
    "production_lead",
    "flow_cost",
    "buy_cost",
    "production_cost",
    "price",
    "late_cost",
    "cancel_cost",
)


class ScenarioError(ValueError):
    """Bad event definitions or unresolvable targets."""


@dataclass(frozen=True)
class BoundProfile:
    """A per-period capacity curve replacing a nominal bound."""

    values: tuple
    relaxation: bool = False

    def __post_init__(self):
        if any(v < 0 for v in self.values):
            raise ScenarioError("bound profiles must be nonnegative")


@dataclass(frozen=True)
class DisruptionEvent:
    """One disrupted parameter: where, when, and how severely.

    ``fraction`` scales bound targets (0 = full loss, 1 = nominal);
    ``override`` is the absolute replacement for lead-time/economic targets.
    ``end`` is exclusive; None means the end of the horizon.
    """

    target: tuple
    shape: str = "immediate"
    start: int = 0
    end: Optional[int] = None
    fraction: float = 1.0
    ramp_in: int = 0
    ramp_out: int = 0
    override: Optional[float] = None
    profile: Optional[tuple] = None  # explicit multipliers, shape == "custom"

    def check(self, horizon: int) -> None:
        if self.shape not in SHAPES:
            raise ScenarioError(f"unknown event shape {self.shape!r}")
        end = horizon if self.end is None else self.end
        if not 0 <= self.start <= end <= horizon:
            raise ScenarioError(f"event window [{self.start}, {end}) outside [0, {horizon}]")
        if not 0.0 <= self.fraction <= 1.0:
            raise ScenarioError(f"severity fraction {self.fraction} outside [0, 1]")
        if self.shape == "scheduled" and self.start == 0:
            raise ScenarioError("scheduled events start after period 0")
        if self.shape == "permanent" and end != horizon:
            raise ScenarioError("permanent events run to the end of the horizon")
        if self.shape == "custom":
            if self.profile is None or len(self.profile) != horizon:
                raise ScenarioError("custom events need one multiplier per period")
            if any(not 0.0 <= g <= 1.0 for g in self.profile):
                raise ScenarioError("custom multipliers must lie in [0, 1]")
        if self.ramp_in < 0 or self.ramp_out < 0 or self.ramp_in + self.ramp_out > end - self.start:
            raise ScenarioError("ramp lengths exceed the disrupted window")
        kind = self.target[0] if self.target else None
        if kind in OVERRIDE_TARGETS:
            if self.override is None:
                raise ScenarioError(f"target {kind} needs an absolute override value")
        elif kind in BOUND_TARGETS:
            if self.override is not None:
                raise ScenarioError(f"bound target {kind} uses a fraction, not an override")
        else:
            raise ScenarioError(f"unknown target path {self.target!r}")

    def multipliers(self, horizon: int) -> tuple:
        """Per-period multiplier curve in [0, 1]; 1 outside the window."""
        if self.shape == "custom":
            return tuple(self.profile)
        end = horizon if self.end is None else self.end
        g = [1.0] * horizon
        f = self.fraction
        for t in range(self.start, end):
            if self.ramp_in and t < self.start + self.ramp_in:
                g[t] = 1.0 + (f - 1.0) * (t - self.start) / self.ramp_in
            elif self.ramp_out and t >= end - self.ramp_out:
                g[t] = f + (1.0 - f) * (t - (end - self.ramp_out)) / self.ramp_out
            else:
                g[t] = f
        return tuple(g)


@dataclass(frozen=True)
class InjectedOrder:
    """An unexpected order arriving with the disruption.

    Late-delivery and cancellation costs must be given explicitly; there is
    no sensible default for a brand-new order. The hard flags pin the
    order's unmet balance (never late) and its cancellation variable.
    """

    material: str
    customer: str
    period: int
    quantity: float
    late_cost: object  # scalar or per-period profile
    cancel_cost: float
    price: Optional[object] = None
    no_late: bool = False
    no_cancel: bool = False


@dataclass(frozen=True)
class Scenario:
    events: tuple = ()
    injected_orders: tuple = ()
    label: str = ""
    config: Optional[ExtensionConfig] = None

    @property
    def empty(self) -> bool:
        return not self.events and not self.injected_orders


def make_profile(nominal, event: DisruptionEvent, horizon: Optional[int] = None) -> BoundProfile:
    """Apply an event's multiplier curve to a nominal bound series."""
    if horizon is None:
        horizon = len(nominal) if not isinstance(nominal, (int, float)) else None
        if horizon is None:
            raise ScenarioError("pass horizon when nominal is a scalar")
    nominal_series = expand(nominal, horizon)
    event.check(horizon)
    g = event.multipliers(horizon)
    return BoundProfile(values=tuple(n * m for n, m in zip(nominal_series, g)))


# -- applying scenarios -------------------------------------------------------


def _scale(series: tuple, g: tuple) -> tuple:
    return tuple(v * m for v, m in zip(series, g))


def _override(series: tuple, event: DisruptionEvent, horizon: int, integral=False) -> tuple:
    end = horizon if event.end is None else event.end
    v = int(event.override) if integral else float(event.override)
    return tuple(
        v if event.start <= t < end else series[t] for t in range(horizon)
    )


def _materials_for(event: DisruptionEvent, available) -> list:
    m = event.target[2] if len(event.target) > 2 else None
    if m is None:
        return sorted(available)
    if m not in available:
        raise ScenarioError(f"target {event.target!r}: material {m} not present")
    return [m]


def _patch_table(table, materials, fn):
    out = dict(table)
    for m in materials:
        out[m] = fn(out[m])
    return out


def _apply_event(model: NetworkModel, event: DisruptionEvent) -> NetworkModel:
    H = model.grid.period_count
    event.check(H)
    kind = event.target[0]
    g = event.multipliers(H)

    def swap_node(node_id, new_node):
        return replace(model, nodes=tuple(new_node if n.id == node_id else n for n in model.nodes))

    def swap_arc(arc_id, **changes):
        for a in model.arcs:
            if a.id == arc_id:
                new_arc = replace(a, **changes)
                return replace(model, arcs=tuple(new_arc if x.id == arc_id else x for x in model.arcs))
        raise ScenarioError(f"target {event.target!r}: unknown arc {arc_id!r}")

    def node_or_fail(node_id, kinds):
        if not model.has_node(node_id):
            raise ScenarioError(f"target {event.target!r}: unknown node {node_id!r}")
        node = model.node(node_id)
        if node.kind not in kinds:
            raise ScenarioError(f"target {event.target!r}: node {node_id!r} is a {node.kind}")
        return node

    if kind in ("production_upper", "production_lead", "production_cost"):
        plant = node_or_fail(event.target[1], ("plant",))
        recipe_id = event.target[2]
        hits = [r for r in plant.recipes if r.id == recipe_id]
        if not hits:
            raise ScenarioError(f"target {event.target!r}: unknown recipe {recipe_id!r}")
        recipe = hits[0]
        if kind == "production_upper":
            new_r = replace(recipe, upper=_scale(recipe.upper, g))
        elif kind == "production_lead":
            new_r = replace(recipe, duration=_override(recipe.duration, event, H, integral=True))
        else:
            new_r = replace(recipe, cost=_override(recipe.cost, event, H))
        new_plant = replace(
            plant, recipes=tuple(new_r if r.id == recipe_id else r for r in plant.recipes)
        )
        return swap_node(plant.id, new_plant)

    if kind in ("flow_upper", "flow_cost", "lead_time"):
        arc_id = event.target[1]
        arcs = [a for a in model.arcs if a.id == arc_id]
        if not arcs:
            raise ScenarioError(f"target {event.target!r}: unknown arc {arc_id!r}")
        arc = arcs[0]
        mats = _materials_for(event, arc.materials)
        if kind == "flow_upper":
            return swap_arc(arc_id, upper=_patch_table(arc.upper, mats, lambda s: _scale(s, g)))
        if kind == "flow_cost":
            return swap_arc(arc_id, cost=_patch_table(arc.cost, mats, lambda s: _override(s, event, H)))
        return swap_arc(
            arc_id,
            lead_time=_patch_table(arc.lead_time, mats, lambda s: _override(s, event, H, integral=True)),
        )

    if kind in ("buy_upper", "buy_cost"):
        sup = node_or_fail(event.target[1], (SUPPLIER,))
        mats = _materials_for(event, sup.materials)
        if kind == "buy_upper":
            new_node = replace(sup, buy_upper=_patch_table(sup.buy_upper, mats, lambda s: _scale(s, g)))
        else:
            new_node = replace(sup, buy_cost=_patch_table(sup.buy_cost, mats, lambda s: _override(s, event, H)))
        return swap_node(sup.id, new_node)

    if kind == "inventory_upper":
        node = node_or_fail(event.target[1], ("plant", "warehouse"))
        mats = _materials_for(event, node.materials)
        inv = node.inventory
        new_inv = replace(inv, capacity=_patch_table(inv.capacity, mats, lambda s: _scale(s, g)))
        return swap_node(node.id, replace(node, inventory=new_inv))

    if kind == "demand_upper":
        cust = node_or_fail(event.target[1], (CUSTOMER,))
        mats = _materials_for(event, cust.materials)
        table = {m: cust.demand_upper.get(m, expand(math.inf, H)) for m in cust.materials}
        new_node = replace(cust, demand_upper=_patch_table(table, mats, lambda s: _scale(s, g)))
        return swap_node(cust.id, new_node)

    if kind in ("price", "late_cost", "cancel_cost"):
        cust = node_or_fail(event.target[1], (CUSTOMER,))
        mats = _materials_for(event, cust.materials)
        entries = dict(model.orders.entries)
        touched = False
        for m in mats:
            series = entries.get((m, cust.id))
            if series is None:
                continue
            touched = True
            if kind == "price":
                entries[(m, cust.id)] = replace(series, price=_override(series.price, event, H))
            elif kind == "late_cost":
                entries[(m, cust.id)] = replace(series, late_cost=_override(series.late_cost, event, H))
            else:
                entries[(m, cust.id)] = replace(series, cancel_cost=_override(series.cancel_cost, event, H))
        if not touched:
            raise ScenarioError(f"target {event.target!r}: no orders for that customer/material")
        return replace(model, orders=OrderBook(entries=entries))

    raise ScenarioError(f"unknown target path {event.target!r}")


def _inject_order(model: NetworkModel, order: InjectedOrder) -> NetworkModel:
    H = model.grid.period_count
    if not model.has_node(order.customer) or model.node(order.customer).kind != CUSTOMER:
        raise ScenarioError(f"injected order targets unknown customer {order.customer!r}")
    cust = model.node(order.customer)
    if order.material not in cust.materials:
        raise ScenarioError(
            f"injected order: customer {order.customer!r} does not take {order.material!r}"
        )
    if not 0 <= order.period < H:
        raise ScenarioError(f"injected order period {order.period} outside horizon")
    if order.quantity < 0:
        raise ScenarioError("injected order quantity must be nonnegative")

    key = (order.material, order.customer)
    entries = dict(model.orders.entries)
    series = entries.get(key)
    if series is None:
        series = OrderSeries(
            quantity=expand(0.0, H),
            price=expand(0.0, H),
            late_cost=expand(0.0, H),
            cancel_cost=expand(0.0, H),
        )
    quantity = list(series.quantity)
    quantity[order.period] += float(order.quantity)
    changes = {
        "quantity": tuple(quantity),
        "late_cost": expand(order.late_cost, H),
        "cancel_cost": expand(order.cancel_cost, H),
    }
    if order.price is not None:
        changes["price"] = expand(order.price, H)
    if order.no_late:
        changes["no_late"] = True
    if order.no_cancel:
        changes["no_cancel_periods"] = tuple(sorted(set(series.no_cancel_periods) | {order.period}))
    entries[key] = replace(series, **changes)
    return replace(model, orders=OrderBook(entries=entries))


def apply_scenario(model: NetworkModel, scenario: Scenario) -> NetworkModel:
    """Produce the disrupted model; the input is left untouched."""
    out = model
    for event in scenario.events:
        out = _apply_event(out, event)
    for order in scenario.injected_orders:
        out = _inject_order(out, order)
    if scenario.config is not None and scenario.config.terminal != "fid":
        for series in out.orders.entries.values():
            if series.no_late or series.no_cancel_periods:
                raise ScenarioError(
                    "no-late/no-cancel enforcement requires the soft terminal mode"
                )
    return out


# -- change audit -------------------------------------------------------------


@dataclass(frozen=True)
class Change:
    path: tuple  # e.g. ("flow_upper", arc_id, material)
    start: int
    end: int  # exclusive
    old: float
    new: float


def _diff_series(changes, path, old: tuple, new: tuple):
    run_start = None
    for t in range(len(old) + 1):
        differs = t < len(old) and old[t] != new[t]
        if differs and run_start is None:
            run_start = t
        elif run_start is not None:
            same_run = differs and old[t] == old[run_start] and new[t] == new[run_start]
            if not same_run:
                changes.append(Change(path, run_start, t, old[run_start], new[run_start]))
                run_start = t if differs else None


def diff_models(before: NetworkModel, after: NetworkModel) -> list:
    """Per-parameter, per-period-range differences between two models."""
    if [n.id for n in before.nodes] != [n.id for n in after.nodes] or [
        a.id for a in before.arcs
    ] != [a.id for a in after.arcs]:
        raise ScenarioError("models have different topology")
    changes: list[Change] = []
    for a0, a1 in zip(before.arcs, after.arcs):
        for m in sorted(a0.materials):
            _diff_series(changes, ("flow_upper", a0.id, m), a0.upper[m], a1.upper[m])
            _diff_series(changes, ("flow_lower", a0.id, m), a0.lower[m], a1.lower[m])
            _diff_series(changes, ("flow_cost", a0.id, m), a0.cost[m], a1.cost[m])
            _diff_series(changes, ("lead_time", a0.id, m), a0.lead_time[m], a1.lead_time[m])
    for n0, n1 in zip(before.nodes, after.nodes):
        if n0.kind == "plant":
            for r0, r1 in zip(n0.recipes, n1.recipes):
                _diff_series(changes, ("production_upper", n0.id, r0.id), r0.upper, r1.upper)
                _diff_series(changes, ("production_cost", n0.id, r0.id), r0.cost, r1.cost)
                _diff_series(changes, ("production_lead", n0.id, r0.id), r0.duration, r1.duration)
        if n0.kind in ("plant", "warehouse"):
            for m in sorted(n0.materials):
                _diff_series(changes, ("inventory_upper", n0.id, m),
                             n0.inventory.capacity[m], n1.inventory.capacity[m])
        if n0.kind == SUPPLIER:
            for m in sorted(n0.materials):
                _diff_series(changes, ("buy_upper", n0.id, m), n0.buy_upper[m], n1.buy_upper[m])
                _diff_series(changes, ("buy_cost", n0.id, m), n0.buy_cost[m], n1.buy_cost[m])
    keys = sorted(set(before.orders.entries) | set(after.orders.entries))
    H = before.grid.period_count
    zero = expand(0.0, H)
    for key in keys:
        s0 = before.orders.entries.get(key)
        s1 = after.orders.entries.get(key)
        q0 = s0.quantity if s0 else zero
        q1 = s1.quantity if s1 else zero
        _diff_series(changes, ("order_quantity",) + key, q0, q1)
        _diff_series(changes, ("late_cost",) + key, s0.late_cost if s0 else zero,
                     s1.late_cost if s1 else zero)
        _diff_series(changes, ("cancel_cost",) + key, s0.cancel_cost if s0 else zero,
                     s1.cancel_cost if s1 else zero)
        _diff_series(changes, ("price",) + key, s0.price if s0 else zero,
                     s1.price if s1 else zero)
    return changes
