"""Versioned JSON documents: network models, scenarios, and result files.

Time-indexed parameters accept either a scalar (constant over the horizon)
or a list with one entry per period. Upper bounds accept the string
"unbounded" (or null) for no limit; inventory capacity is deliberately
required, storage is a physical resource.
"""

from __future__ import annotations

import dataclasses
import json
import math
from datetime import datetime, timezone
from pathlib import Path

from .disruption import DisruptionEvent, InjectedOrder, Scenario
from .formulation import ExtensionConfig, ScheduleReport
from .milp import SolveOptions
from .network import (
    Arc,
    Customer,
    InventoryParams,
    NetworkModel,
    OrderBook,
    OrderSeries,
    Plant,
    Recipe,
    Supplier,
    TimeGrid,
    Warehouse,
    expand,
    validate,
)
from .runner import KpiReport

SUPPORTED_MODEL_VERSIONS = (1,)
SUPPORTED_SCENARIO_VERSIONS = (1,)


class DocumentError(ValueError):
    """Parse or schema failure; message lists every finding with its location."""

    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__("\n".join(str(f) for f in self.findings))


class _Collector:
    def __init__(self, source: str):
        self.source = source
        self.problems: list[str] = []

    def add(self, where: str, message: str):
        self.problems.append(f"{self.source}:{where}: {message}")

    def raise_if_any(self):
        if self.problems:
            raise DocumentError(self.problems)


def _bound(value, periods, where, errs, default=math.inf):
    """Upper-bound field: scalar/list, 'unbounded', or null."""
    if value is None:
        value = default
    if isinstance(value, str):
        if value == "unbounded":
            value = math.inf
        else:
            errs.add(where, f"expected a number or 'unbounded', got {value!r}")
            return expand(default if math.isfinite(default) else 0.0, periods)
    if isinstance(value, list):
        value = [math.inf if v in (None, "unbounded") else v for v in value]
    try:
        return expand(value, periods)
    except (TypeError, ValueError) as exc:
        errs.add(where, str(exc))
        return expand(0.0, periods)


def _series(value, periods, where, errs, default=0.0, integral=False):
    if value is None:
        value = default
    try:
        return expand(value, periods, integral)
    except (TypeError, ValueError) as exc:
        errs.add(where, str(exc))
        return expand(default, periods, integral)


def _table(raw, materials, periods, where, errs, default=0.0, bound=False, integral=False):
    raw = dict(raw or {})
    out = {}
    for m in materials:
        v = raw.pop(m, None)
        if bound:
            out[m] = _bound(v, periods, f"{where}.{m}", errs, default)
        else:
            out[m] = _series(v if v is not None else default, periods, f"{where}.{m}", errs,
                             default, integral)
    for extra in sorted(raw):
        errs.add(where, f"material {extra!r} is not present at this node/arc")
    return out


def _scalar_map(raw, materials, where, errs, default=0.0):
    raw = dict(raw or {})
    out = {}
    for m in materials:
        out[m] = float(raw.pop(m, default))
    for extra in sorted(raw):
        errs.add(where, f"material {extra!r} is not present at this node/arc")
    return out


def _inventory(raw, materials, periods, where, errs, defaults) -> InventoryParams:
    raw = raw or {}
    capacity_raw = raw.get("capacity")
    if capacity_raw is None:
        errs.add(where, "inventory capacity required (no unbounded storage)")
        capacity_raw = {}
    capacity = {}
    for m in materials:
        if m not in capacity_raw:
            errs.add(f"{where}.capacity", f"inventory capacity required for material {m}")
            capacity[m] = expand(0.0, periods)
        else:
            capacity[m] = _bound(capacity_raw[m], periods, f"{where}.capacity.{m}", errs)
    shared = raw.get("shared_capacity")
    return InventoryParams(
        capacity=capacity,
        initial=_scalar_map(raw.get("initial"), materials, f"{where}.initial", errs),
        holding_cost=_table(raw.get("holding_cost"), materials, periods,
                            f"{where}.holding_cost", errs, defaults.get("holding_cost", 0.0)),
        buffer_stock=_table(raw.get("buffer_stock"), materials, periods,
                            f"{where}.buffer_stock", errs),
        buffer_fraction=_table(raw.get("buffer_fraction"), materials, periods,
                               f"{where}.buffer_fraction", errs),
        floor_penalty=_table(raw.get("floor_penalty"), materials, periods,
                             f"{where}.floor_penalty", errs),
        deviation_penalty=_scalar_map(raw.get("deviation_penalty"), materials,
                                      f"{where}.deviation_penalty", errs),
        shared_capacity=None if shared is None else _bound(shared, periods, f"{where}.shared_capacity", errs),
    )


def model_from_dict(doc: dict, source: str = "<memory>") -> NetworkModel:
    errs = _Collector(source)
    version = doc.get("schema_version")
    if version not in SUPPORTED_MODEL_VERSIONS:
        errs.add("schema_version",
                 f"unsupported version {version!r}; supported: {list(SUPPORTED_MODEL_VERSIONS)}")
        errs.raise_if_any()
    time_raw = doc.get("time") or {}
    periods = int(time_raw.get("periods", 0))
    if periods < 2:
        errs.add("time.periods", "need at least 2 periods")
        errs.raise_if_any()
    grid = TimeGrid(period_count=periods, period_hours=float(time_raw.get("period_hours", 24.0)))
    materials = tuple(doc.get("materials") or ())
    if not materials:
        errs.add("materials", "at least one material required")
    defaults = doc.get("defaults") or {}

    nodes = []
    for i, node_raw in enumerate(doc.get("nodes") or []):
        where = f"nodes[{i}]({node_raw.get('id', '?')})"
        node_id = node_raw.get("id")
        kind = node_raw.get("kind")
        mats = tuple(node_raw.get("materials") or ())
        if not node_id:
            errs.add(where, "node id required")
            continue
        if kind == "supplier":
            nodes.append(Supplier(
                id=node_id,
                materials=mats,
                buy_lower=_table(node_raw.get("buy_lower"), mats, periods, f"{where}.buy_lower", errs),
                buy_upper=_table(node_raw.get("buy_upper"), mats, periods, f"{where}.buy_upper",
                                 errs, defaults.get("buy_upper", math.inf), bound=True),
                buy_cost=_table(node_raw.get("buy_cost"), mats, periods, f"{where}.buy_cost",
                                errs, defaults.get("buy_cost", 0.0)),
                sla_required=bool(node_raw.get("sla_required", False)),
                sla_min=_table(node_raw.get("sla_min"), mats, periods, f"{where}.sla_min", errs),
                sla_window=_table(node_raw.get("sla_window"), mats, periods, f"{where}.sla_window",
                                  errs, 0, integral=True),
                preplanned_buy=_scalar_map(node_raw.get("preplanned_buy"), mats,
                                           f"{where}.preplanned_buy", errs),
            ))
        elif kind in ("plant", "warehouse"):
            inv = _inventory(node_raw.get("inventory"), mats, periods, f"{where}.inventory",
                             errs, defaults)
            if kind == "plant":
                recipes = []
                for k, recipe_raw in enumerate(node_raw.get("recipes") or []):
                    rwhere = f"{where}.recipes[{k}]"
                    recipes.append(Recipe(
                        id=recipe_raw.get("id", f"r{k}"),
                        coefficients={str(m): float(v) for m, v in
                                      (recipe_raw.get("coefficients") or {}).items()},
                        lower=_series(recipe_raw.get("lower"), periods, f"{rwhere}.lower", errs),
                        upper=_bound(recipe_raw.get("upper"), periods, f"{rwhere}.upper", errs),
                        cost=_series(recipe_raw.get("cost"), periods, f"{rwhere}.cost", errs,
                                     defaults.get("production_cost", 0.0)),
                        duration=_series(recipe_raw.get("duration"), periods, f"{rwhere}.duration",
                                         errs, 0, integral=True),
                        preplanned=float(recipe_raw.get("preplanned", 0.0)),
                        is_source_or_sink=bool(recipe_raw.get("source_or_sink", False)),
                    ))
                nodes.append(Plant(id=node_id, materials=mats, recipes=tuple(recipes), inventory=inv))
            else:
                nodes.append(Warehouse(id=node_id, materials=mats, inventory=inv))
        elif kind == "customer":
            nodes.append(Customer(
                id=node_id,
                materials=mats,
                demand_upper=_table(node_raw.get("demand_upper"), mats, periods,
                                    f"{where}.demand_upper", errs,
                                    defaults.get("demand_upper", math.inf), bound=True),
                unmet_lower=_table(node_raw.get("unmet_lower"), mats, periods,
                                   f"{where}.unmet_lower", errs),
                unmet_upper=_table(node_raw.get("unmet_upper"), mats, periods,
                                   f"{where}.unmet_upper", errs, math.inf, bound=True),
            ))
        else:
            errs.add(where, f"unknown node kind {kind!r}")

    arcs = []
    for i, arc_raw in enumerate(doc.get("arcs") or []):
        where = f"arcs[{i}]({arc_raw.get('id', '?')})"
        mats = tuple(arc_raw.get("materials") or ())
        arcs.append(Arc(
            id=arc_raw.get("id", f"arc{i}"),
            origin=arc_raw.get("origin", ""),
            destination=arc_raw.get("destination", ""),
            mode=arc_raw.get("mode", "default"),
            materials=mats,
            lead_time=_table(arc_raw.get("lead_time"), mats, periods, f"{where}.lead_time",
                             errs, defaults.get("lead_time", 0), integral=True),
            lower=_table(arc_raw.get("lower"), mats, periods, f"{where}.lower", errs),
            upper=_table(arc_raw.get("upper"), mats, periods, f"{where}.upper", errs,
                         defaults.get("flow_upper", math.inf), bound=True),
            cost=_table(arc_raw.get("cost"), mats, periods, f"{where}.cost", errs,
                        defaults.get("flow_cost", 0.0)),
            fixed_cost=_table(arc_raw.get("fixed_cost"), mats, periods, f"{where}.fixed_cost",
                              errs, defaults.get("fixed_cost", 0.0)),
            preplanned_in=_scalar_map(arc_raw.get("preplanned_in"), mats,
                                      f"{where}.preplanned_in", errs),
            preplanned_out=_scalar_map(arc_raw.get("preplanned_out"), mats,
                                       f"{where}.preplanned_out", errs),
        ))

    entries: dict = {}
    for i, order_raw in enumerate(doc.get("orders") or []):
        where = f"orders[{i}]"
        m = order_raw.get("material")
        c = order_raw.get("customer")
        if not m or not c:
            errs.add(where, "orders need material and customer")
            continue
        t = int(order_raw.get("period", -1))
        if not 0 <= t < periods:
            errs.add(where, f"period {t} outside the horizon")
            continue
        key = (m, c)
        series = entries.get(key)
        if series is None:
            series = OrderSeries(
                quantity=expand(0.0, periods),
                price=_series(order_raw.get("price"), periods, f"{where}.price", errs),
                late_cost=_series(order_raw.get("late_cost"), periods, f"{where}.late_cost", errs),
                cancel_cost=_series(order_raw.get("cancel_cost"), periods, f"{where}.cancel_cost", errs),
                preplanned_met=float(order_raw.get("preplanned_met", 0.0)),
            )
        else:
            for field_name in ("price", "late_cost", "cancel_cost"):
                if order_raw.get(field_name) is not None:
                    stated = _series(order_raw[field_name], periods, f"{where}.{field_name}", errs)
                    if stated != getattr(series, field_name):
                        errs.add(where, f"{field_name} conflicts with an earlier order line for {m}@{c}")
        quantity = list(series.quantity)
        quantity[t] += float(order_raw.get("quantity", 0.0))
        changes = {"quantity": tuple(quantity)}
        if order_raw.get("no_late"):
            changes["no_late"] = True
        if order_raw.get("no_cancel"):
            changes["no_cancel_periods"] = tuple(sorted(set(series.no_cancel_periods) | {t}))
        if order_raw.get("preplanned_met") is not None:
            changes["preplanned_met"] = float(order_raw["preplanned_met"])
        entries[key] = dataclasses.replace(series, **changes)

    errs.raise_if_any()
    model = NetworkModel(
        grid=grid,
        materials=materials,
        nodes=tuple(nodes),
        arcs=tuple(arcs),
        orders=OrderBook(entries=entries),
        schema_version=int(version),
    )
    report = validate(model)
    if not report.ok:
        raise DocumentError([f"{source}:{f.location}: {f.message}" for f in report.errors])
    return model


def _unexpand(series) -> object:
    """Compact encoding: collapse constant series back to a scalar."""
    vals = ["unbounded" if math.isinf(v) else v for v in series]
    return vals[0] if len(set(map(str, vals))) == 1 else vals


def _table_to_dict(table):
    return {m: _unexpand(s) for m, s in sorted(table.items())}


def model_to_dict(model: NetworkModel) -> dict:
    nodes = []
    for n in model.nodes:
        if n.kind == "supplier":
            nodes.append({
                "id": n.id, "kind": "supplier", "materials": list(n.materials),
                "buy_lower": _table_to_dict(n.buy_lower),
                "buy_upper": _table_to_dict(n.buy_upper),
                "buy_cost": _table_to_dict(n.buy_cost),
                "sla_required": n.sla_required,
                "sla_min": _table_to_dict(n.sla_min),
                "sla_window": _table_to_dict(n.sla_window),
                "preplanned_buy": dict(sorted(n.preplanned_buy.items())),
            })
        elif n.kind in ("plant", "warehouse"):
            inv = n.inventory
            entry = {
                "id": n.id, "kind": n.kind, "materials": list(n.materials),
                "inventory": {
                    "capacity": _table_to_dict(inv.capacity),
                    "initial": dict(sorted(inv.initial.items())),
                    "holding_cost": _table_to_dict(inv.holding_cost),
                    "buffer_stock": _table_to_dict(inv.buffer_stock),
                    "buffer_fraction": _table_to_dict(inv.buffer_fraction),
                    "floor_penalty": _table_to_dict(inv.floor_penalty),
                    "deviation_penalty": dict(sorted(inv.deviation_penalty.items())),
                    "shared_capacity": None if inv.shared_capacity is None else _unexpand(inv.shared_capacity),
                },
            }
            if n.kind == "plant":
                entry["recipes"] = [
                    {
                        "id": r.id,
                        "coefficients": dict(sorted(r.coefficients.items())),
                        "lower": _unexpand(r.lower),
                        "upper": _unexpand(r.upper),
                        "cost": _unexpand(r.cost),
                        "duration": _unexpand(r.duration),
                        "preplanned": r.preplanned,
                        "source_or_sink": r.is_source_or_sink,
                    }
                    for r in n.recipes
                ]
            nodes.append(entry)
        else:
            nodes.append({
                "id": n.id, "kind": "customer", "materials": list(n.materials),
                "demand_upper": _table_to_dict(n.demand_upper),
                "unmet_lower": _table_to_dict(n.unmet_lower),
                "unmet_upper": _table_to_dict(n.unmet_upper),
            })
    orders = []
    for (m, c), series in sorted(model.orders.entries.items()):
        first = True
        for t, q in enumerate(series.quantity):
            if q <= 0:
                continue
            entry = {"material": m, "customer": c, "period": t, "quantity": q}
            if first:
                entry["price"] = _unexpand(series.price)
                entry["late_cost"] = _unexpand(series.late_cost)
                entry["cancel_cost"] = _unexpand(series.cancel_cost)
                entry["preplanned_met"] = series.preplanned_met
                first = False
            if series.no_late:
                entry["no_late"] = True
            if t in series.no_cancel_periods:
                entry["no_cancel"] = True
            orders.append(entry)
        if first and (series.preplanned_met or series.no_late):
            orders.append({
                "material": m, "customer": c, "period": 0, "quantity": 0.0,
                "price": _unexpand(series.price),
                "late_cost": _unexpand(series.late_cost),
                "cancel_cost": _unexpand(series.cancel_cost),
                "preplanned_met": series.preplanned_met,
            })
    return {
        "schema_version": model.schema_version,
        "time": {"periods": model.grid.period_count, "period_hours": model.grid.period_hours},
        "materials": list(model.materials),
        "nodes": nodes,
        "arcs": [
            {
                "id": a.id, "origin": a.origin, "destination": a.destination,
                "mode": a.mode, "materials": list(a.materials),
                "lead_time": _table_to_dict(a.lead_time),
                "lower": _table_to_dict(a.lower),
                "upper": _table_to_dict(a.upper),
                "cost": _table_to_dict(a.cost),
                "fixed_cost": _table_to_dict(a.fixed_cost),
                "preplanned_in": dict(sorted(a.preplanned_in.items())),
                "preplanned_out": dict(sorted(a.preplanned_out.items())),
            }
            for a in model.arcs
        ],
        "orders": orders,
    }


def load_model(path) -> NetworkModel:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise DocumentError([f"{path}: file not found"])
    except json.JSONDecodeError as exc:
        raise DocumentError([f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"])
    return model_from_dict(doc, source=str(path))


def save_model(model: NetworkModel, path) -> None:
    Path(path).write_text(json.dumps(model_to_dict(model), indent=2, sort_keys=True) + "\n")


# -- scenarios ----------------------------------------------------------------

_TARGET_KEYS = {
    "production_upper": ("node", "recipe"),
    "production_lead": ("node", "recipe"),
    "production_cost": ("node", "recipe"),
    "flow_upper": ("arc", "material"),
    "flow_cost": ("arc", "material"),
    "lead_time": ("arc", "material"),
    "buy_upper": ("node", "material"),
    "buy_cost": ("node", "material"),
    "inventory_upper": ("node", "material"),
    "demand_upper": ("node", "material"),
    "price": ("node", "material"),
    "late_cost": ("node", "material"),
    "cancel_cost": ("node", "material"),
}


def _target_from_dict(raw: dict, where: str, errs) -> tuple:
    kind = (raw or {}).get("kind")
    if kind not in _TARGET_KEYS:
        errs.add(where, f"unknown target kind {kind!r}")
        return ("flow_upper", "?", None)
    keys = _TARGET_KEYS[kind]
    first = raw.get(keys[0])
    if first is None:
        errs.add(where, f"target {kind} needs {keys[0]!r}")
    return (kind, first, raw.get(keys[1]))


def _target_to_dict(target: tuple) -> dict:
    kind = target[0]
    keys = _TARGET_KEYS[kind]
    out = {"kind": kind, keys[0]: target[1]}
    if len(target) > 2 and target[2] is not None:
        out[keys[1]] = target[2]
    return out


def scenario_from_dict(doc: dict, source: str = "<memory>"):
    """Returns (Scenario, ExtensionConfig, SolveOptions)."""
    errs = _Collector(source)
    version = doc.get("schema_version")
    if version not in SUPPORTED_SCENARIO_VERSIONS:
        errs.add("schema_version",
                 f"unsupported version {version!r}; supported: {list(SUPPORTED_SCENARIO_VERSIONS)}")
        errs.raise_if_any()
    events = []
    for i, raw in enumerate(doc.get("events") or []):
        where = f"events[{i}]"
        target = _target_from_dict(raw.get("target"), f"{where}.target", errs)
        profile = raw.get("profile")
        events.append(DisruptionEvent(
            target=target,
            shape=raw.get("shape", "immediate"),
            start=int(raw.get("start", 0)),
            end=None if raw.get("end") is None else int(raw["end"]),
            fraction=float(raw.get("fraction", 1.0)),
            ramp_in=int(raw.get("ramp_in", 0)),
            ramp_out=int(raw.get("ramp_out", 0)),
            override=None if raw.get("override") is None else float(raw["override"]),
            profile=None if profile is None else tuple(float(v) for v in profile),
        ))
    orders = []
    for i, raw in enumerate(doc.get("orders") or []):
        where = f"orders[{i}]"
        for needed in ("material", "customer", "period", "quantity", "late_cost", "cancel_cost"):
            if raw.get(needed) is None:
                errs.add(where, f"injected orders must state {needed!r}")
        orders.append(InjectedOrder(
            material=raw.get("material", "?"),
            customer=raw.get("customer", "?"),
            period=int(raw.get("period", 0)),
            quantity=float(raw.get("quantity", 0.0)),
            late_cost=raw.get("late_cost", 0.0),
            cancel_cost=float(raw.get("cancel_cost", 0.0)),
            price=raw.get("price"),
            no_late=bool(raw.get("no_late", False)),
            no_cancel=bool(raw.get("no_cancel", False)),
        ))
    ext_raw = doc.get("extensions")
    config = None
    if ext_raw is not None:
        try:
            config = ExtensionConfig(
                patp=bool(ext_raw.get("patp", False)),
                ftc=bool(ext_raw.get("ftc", False)),
                sla=ext_raw.get("sla", "off"),
                terminal=ext_raw.get("terminal", "hard"),
                inventory_floor=ext_raw.get("inventory_floor", "hard"),
                shared_volume=bool(ext_raw.get("shared_volume", False)),
                enforce_u_upper=bool(ext_raw.get("enforce_u_upper", False)),
            )
        except ValueError as exc:
            errs.add("extensions", str(exc))
    solver_raw = doc.get("solver") or {}
    try:
        options = SolveOptions(
            feasibility_tol=float(solver_raw.get("feasibility_tol", 1e-6)),
            integrality_tol=float(solver_raw.get("integrality_tol", 1e-6)),
            mip_gap=float(solver_raw.get("mip_gap", 1e-6)),
            node_limit=solver_raw.get("node_limit"),
            time_limit=solver_raw.get("time_limit"),
        )
    except ValueError as exc:
        errs.add("solver", str(exc))
        options = SolveOptions()
    errs.raise_if_any()
    scenario = Scenario(
        events=tuple(events),
        injected_orders=tuple(orders),
        label=doc.get("label", ""),
        config=config,
    )
    return scenario, config or ExtensionConfig(), options


def scenario_to_dict(scenario: Scenario, options: SolveOptions | None = None) -> dict:
    doc: dict = {"schema_version": 1, "label": scenario.label}
    doc["events"] = [
        {
            "target": _target_to_dict(e.target),
            "shape": e.shape,
            "start": e.start,
            "end": e.end,
            "fraction": e.fraction,
            "ramp_in": e.ramp_in,
            "ramp_out": e.ramp_out,
            "override": e.override,
            "profile": None if e.profile is None else list(e.profile),
        }
        for e in scenario.events
    ]
    doc["orders"] = [
        {
            "material": o.material,
            "customer": o.customer,
            "period": o.period,
            "quantity": o.quantity,
            "late_cost": o.late_cost,
            "cancel_cost": o.cancel_cost,
            "price": o.price,
            "no_late": o.no_late,
            "no_cancel": o.no_cancel,
        }
        for o in scenario.injected_orders
    ]
    if scenario.config is not None:
        cfg = scenario.config
        doc["extensions"] = {
            "patp": cfg.patp,
            "ftc": cfg.ftc,
            "sla": cfg.sla,
            "terminal": cfg.terminal,
            "inventory_floor": cfg.inventory_floor,
            "shared_volume": cfg.shared_volume,
            "enforce_u_upper": cfg.enforce_u_upper,
        }
    if options is not None:
        doc["solver"] = {
            "feasibility_tol": options.feasibility_tol,
            "integrality_tol": options.integrality_tol,
            "mip_gap": options.mip_gap,
            "node_limit": options.node_limit,
            "time_limit": options.time_limit,
        }
    return doc


def load_scenario(path):
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except FileNotFoundError:
        raise DocumentError([f"{path}: file not found"])
    except json.JSONDecodeError as exc:
        raise DocumentError([f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}"])
    return scenario_from_dict(doc, source=str(path))


def save_scenario(scenario: Scenario, path, options: SolveOptions | None = None) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(scenario, options), indent=2, sort_keys=True) + "\n")


# -- results ------------------------------------------------------------------

_FAMILIES = (
    ("procurement", "material,supplier"),
    ("production", "plant,recipe"),
    ("production_starts", "plant,recipe"),
    ("production_ends", "plant,recipe"),
    ("shipments_in", "material,arc"),
    ("shipments_out", "material,arc"),
    ("inventory", "material,node"),
    ("demand_met", "material,customer"),
    ("unmet", "material,customer"),
    ("flow_active", "material,arc"),
    ("floor_shortfall", "material,node"),
)


def _fmt(v: float) -> str:
    return repr(float(v))


def save_results(schedule: ScheduleReport, kpi: KpiReport, path, format: str = "structured",
                 timestamps: bool = True) -> None:
    """Write a solved schedule either as one JSON document or a table per family."""
    path = Path(path)
    if format == "structured":
        doc = {
            "horizon": schedule.horizon,
            "objective": schedule.objective,
            "solver_objective": schedule.solver_objective,
            "cancellations": [list(c) for c in schedule.cancellations],
            "terminal_deviation": {f"{m}|{n}": v for (m, n), v in sorted(schedule.terminal_deviation.items())},
            "kpis": {c: getattr(kpi, c) for c in KpiReport.COLUMNS},
            "kpis_by_material": kpi.by_material,
            "kpis_by_node": kpi.by_node,
        }
        for family, _header in _FAMILIES:
            doc[family] = {
                "|".join(key): [_fmt(v) for v in series]
                for key, series in sorted(getattr(schedule, family).items())
            }
        if timestamps:
            doc["generated_at"] = datetime.now(timezone.utc).isoformat()
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return
    if format != "tabular":
        raise ValueError(f"unknown results format {format!r}")
    path.mkdir(parents=True, exist_ok=True)
    for family, header in _FAMILIES:
        data = getattr(schedule, family)
        lines = [header + "," + ",".join(f"t{t}" for t in range(schedule.horizon))]
        for key, series in sorted(data.items()):
            lines.append(",".join(list(key) + [_fmt(v) for v in series]))
        (path / f"{family}.csv").write_text("\n".join(lines) + "\n")
    lines = ["material,customer,period"]
    for (m, c, t) in schedule.cancellations:
        lines.append(f"{m},{c},{t}")
    (path / "cancellations.csv").write_text("\n".join(lines) + "\n")
    lines = [",".join(KpiReport.COLUMNS), ",".join(_fmt(v) if isinstance(v, float) else str(v) for v in kpi.row())]
    (path / "kpis.csv").write_text("\n".join(lines) + "\n")
    if timestamps:
        (path / "meta.txt").write_text(f"generated_at {datetime.now(timezone.utc).isoformat()}\n")


def load_results(path, format: str = "structured") -> dict:
    """Round-trip reader for saved results (dict form, exact float recovery)."""
    path = Path(path)
    if format == "structured":
        doc = json.loads(path.read_text())
        for family, _header in _FAMILIES:
            doc[family] = {
                tuple(key.split("|")): tuple(float(v) for v in series)
                for key, series in doc.get(family, {}).items()
            }
        doc["cancellations"] = [tuple(c) for c in doc.get("cancellations", [])]
        return doc
    if format != "tabular":
        raise ValueError(f"unknown results format {format!r}")
    out: dict = {}
    for family, header in _FAMILIES:
        file = path / f"{family}.csv"
        table = {}
        lines = file.read_text().splitlines()
        key_width = len(header.split(","))
        for line in lines[1:]:
            parts = line.split(",")
            table[tuple(parts[:key_width])] = tuple(float(v) for v in parts[key_width:])
        out[family] = table
    lines = (path / "cancellations.csv").read_text().splitlines()
    out["cancellations"] = [
        (p[0], p[1], int(p[2])) for p in (line.split(",") for line in lines[1:])
    ]
    lines = (path / "kpis.csv").read_text().splitlines()
    out["kpis"] = dict(zip(lines[0].split(","), (float(v) for v in lines[1].split(","))))
    return out


def sweep_to_rows(grid) -> str:
    """Tabular text export of a sweep grid (one row per cell)."""
    header = [grid.axis1_name, grid.axis2_name, "status"] + list(KpiReport.COLUMNS)
    lines = [",".join(header)]
    for row in grid.rows():
        lines.append(",".join("" if v is None else (_fmt(v) if isinstance(v, float) else str(v)) for v in row))
    return "\n".join(lines) + "\n"
