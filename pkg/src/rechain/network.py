"""Immutable domain model of the supply chain network and its parameters.

Every time-indexed parameter is stored as a dense tuple with one entry per
period; ``expand`` turns the compact "constant over time" input encoding
into that form. Models are frozen dataclasses, so structural equality and
safe sharing across threads come for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

INF = math.inf

Number = Union[int, float]
Series = tuple  # tuple[float, ...] or tuple[int, ...], length = period_count

SUPPLIER, PLANT, WAREHOUSE, CUSTOMER = "supplier", "plant", "warehouse", "customer"


def expand(value, periods: int, integral: bool = False) -> Series:
    """Expand a scalar or per-period sequence to a dense period tuple."""
    if isinstance(value, (int, float)):
        v = int(value) if integral else float(value)
        return tuple(v for _ in range(periods))
    seq = list(value)
    if len(seq) != periods:
        raise ValueError(f"expected {periods} per-period values, got {len(seq)}")
    return tuple(int(v) if integral else float(v) for v in seq)


def expand_table(table: Mapping[str, object] | None, materials, periods: int,
                 default: Number, integral: bool = False) -> dict[str, Series]:
    """Expand a per-material mapping, filling missing materials with a default."""
    table = dict(table or {})
    out = {}
    for m in materials:
        out[m] = expand(table.pop(m, default), periods, integral)
    if table:
        unknown = ", ".join(sorted(table))
        raise ValueError(f"table references materials not at this node/arc: {unknown}")
    return out


@dataclass(frozen=True)
class TimeGrid:
    period_count: int
    period_hours: float = 24.0

    def __post_init__(self):
        if self.period_count < 2:
            raise ValueError("need at least 2 periods (period 0 holds fixed initial state)")
        if self.period_hours <= 0:
            raise ValueError("period duration must be positive")

    @property
    def periods(self) -> range:
        return range(self.period_count)


@dataclass(frozen=True)
class InventoryParams:
    """Storage parameters of a plant or warehouse, per material."""

    capacity: Mapping[str, Series]  # hard physical limit, required
    initial: Mapping[str, float]
    holding_cost: Mapping[str, Series]
    buffer_stock: Mapping[str, Series]
    buffer_fraction: Mapping[str, Series]  # share of buffer kept during disruptions
    floor_penalty: Mapping[str, Series]  # per-unit-per-period shortfall penalty
    deviation_penalty: Mapping[str, float]  # terminal-deviation penalty
    shared_capacity: Optional[Series] = None  # total facility volume, opt-in

    def floor(self, m: str, t: int) -> float:
        return self.buffer_fraction[m][t] * self.buffer_stock[m][t]


@dataclass(frozen=True)
class Recipe:
    id: str
    coefficients: Mapping[str, float]  # + produced, - consumed
    lower: Series
    upper: Series
    cost: Series
    duration: Series  # periods from start to completion, int
    preplanned: float = 0.0
    is_source_or_sink: bool = False


@dataclass(frozen=True)
class Supplier:
    id: str
    materials: tuple
    buy_lower: Mapping[str, Series]
    buy_upper: Mapping[str, Series]
    buy_cost: Mapping[str, Series]
    sla_required: bool = False
    sla_min: Mapping[str, Series] = field(default_factory=dict)
    sla_window: Mapping[str, Series] = field(default_factory=dict)  # int periods
    preplanned_buy: Mapping[str, float] = field(default_factory=dict)

    kind = SUPPLIER


@dataclass(frozen=True)
class Plant:
    id: str
    materials: tuple
    recipes: tuple
    inventory: InventoryParams

    kind = PLANT


@dataclass(frozen=True)
class Warehouse:
    id: str
    materials: tuple
    inventory: InventoryParams

    kind = WAREHOUSE


@dataclass(frozen=True)
class Customer:
    id: str
    materials: tuple
    demand_upper: Mapping[str, Series]
    unmet_lower: Mapping[str, Series] = field(default_factory=dict)  # stored, never enforced
    unmet_upper: Mapping[str, Series] = field(default_factory=dict)  # enforced only on opt-in

    kind = CUSTOMER


Node = Union[Supplier, Plant, Warehouse, Customer]


@dataclass(frozen=True)
class Arc:
    """A directed transport link; one arc per transportation mode."""

    id: str
    origin: str
    destination: str
    materials: tuple
    lead_time: Mapping[str, Series]  # int periods, dispatch-indexed
    lower: Mapping[str, Series]
    upper: Mapping[str, Series]
    cost: Mapping[str, Series]
    fixed_cost: Mapping[str, Series]
    mode: str = "default"
    preplanned_in: Mapping[str, float] = field(default_factory=dict)
    preplanned_out: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class OrderSeries:
    """All order data for one (material, customer) pair."""

    quantity: Series  # ordered amount per period
    price: Series
    late_cost: Series  # per remaining-unmet unit, per period
    cancel_cost: Series
    preplanned_met: float = 0.0
    no_late: bool = False  # forces zero unmet balance in every period
    no_cancel_periods: tuple = ()  # periods whose order may not be canceled


@dataclass(frozen=True)
class OrderBook:
    entries: Mapping[tuple, OrderSeries]  # (material, customer_id) -> series

    def get(self, m: str, c: str) -> Optional[OrderSeries]:
        return self.entries.get((m, c))


@dataclass(frozen=True)
class NetworkModel:
    grid: TimeGrid
    materials: tuple
    nodes: tuple
    arcs: tuple
    orders: OrderBook
    schema_version: int = 1

    def __post_init__(self):
        object.__setattr__(self, "_index", {n.id: n for n in self.nodes})

    def node(self, node_id: str) -> Node:
        try:
            return self._index[node_id]
        except KeyError:
            raise KeyError(f"unknown node id {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._index

    def arc(self, arc_id: str) -> Arc:
        for a in self.arcs:
            if a.id == arc_id:
                return a
        raise KeyError(f"unknown arc id {arc_id!r}")

    @property
    def suppliers(self):
        return [n for n in self.nodes if n.kind == SUPPLIER]

    @property
    def plants(self):
        return [n for n in self.nodes if n.kind == PLANT]

    @property
    def warehouses(self):
        return [n for n in self.nodes if n.kind == WAREHOUSE]

    @property
    def customers(self):
        return [n for n in self.nodes if n.kind == CUSTOMER]

    @property
    def inventory_nodes(self):
        return [n for n in self.nodes if n.kind in (PLANT, WAREHOUSE)]


def incidence(model: NetworkModel, node_id: str):
    """Arcs into and out of a node, in stable (arc id) order."""
    model.node(node_id)  # raises on unknown id
    arcs_in = sorted((a for a in model.arcs if a.destination == node_id), key=lambda a: a.id)
    arcs_out = sorted((a for a in model.arcs if a.origin == node_id), key=lambda a: a.id)
    return arcs_in, arcs_out


def aggregate_orders(raw: Iterable[tuple]) -> dict[tuple, float]:
    """Sum raw order lines (material, customer, period, quantity) per key.

    Same-key quantities add up; the result is independent of input order.
    """
    out: dict[tuple, float] = {}
    for m, c, t, qty in raw:
        qty = float(qty)
        if qty < 0:
            raise ValueError(f"negative order quantity for ({m}, {c}, {t})")
        key = (m, c, int(t))
        out[key] = out.get(key, 0.0) + qty
    return out


# -- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    code: str
    location: str
    message: str

    def __str__(self):
        return f"[{self.code}] {self.location}: {self.message}"


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code, location, message):
        self.errors.append(Finding(code, location, message))

    def warn(self, code, location, message):
        self.warnings.append(Finding(code, location, message))

    def summary(self) -> str:
        lines = [f"{len(self.errors)} error(s), {len(self.warnings)} warning(s)"]
        lines += [f"error   {f}" for f in self.errors]
        lines += [f"warning {f}" for f in self.warnings]
        return "\n".join(lines)


def _check_bounds_table(report, where, lower, upper, periods):
    for m in lower:
        lo, hi = lower[m], upper[m]
        for t in range(periods):
            if not math.isfinite(lo[t]) or lo[t] < 0:
                report.error("bad-lower-bound", where, f"material {m} period {t}: lower bound {lo[t]} must be finite and nonnegative")
                break
            if hi[t] < lo[t]:
                report.error("bound-order", where, f"material {m} period {t}: lower {lo[t]} > upper {hi[t]}")
                break


def _check_nonnegative(report, where, tables: Mapping[str, Series], what: str):
    for m, series in tables.items():
        for t, v in enumerate(series):
            if math.isnan(v) or math.isinf(v) or v < 0:
                report.error("bad-" + what, where, f"material {m} period {t}: {what} {v} must be finite and nonnegative")
                break


def validate(model: NetworkModel) -> ValidationReport:
    """Structural and parameter consistency checks.

    A clean report guarantees that every parameter lookup the compiler
    performs will succeed and produce usable numbers.
    """
    report = ValidationReport()
    H = model.grid.period_count

    if len(set(model.materials)) != len(model.materials) or not model.materials:
        report.error("materials", "catalog", "material identifiers must be unique and non-empty")
    for m in model.materials:
        if not m:
            report.error("materials", "catalog", "empty material identifier")

    seen = set()
    for node in model.nodes:
        if node.id in seen:
            report.error("duplicate-node", node.id, "duplicate node id")
        seen.add(node.id)
        for m in node.materials:
            if m not in model.materials:
                report.error("unknown-material", node.id, f"material {m} not in the catalog")

    for node in model.nodes:
        where = node.id
        if node.kind == SUPPLIER:
            _check_bounds_table(report, where, node.buy_lower, node.buy_upper, H)
            _check_nonnegative(report, where, node.buy_cost, "cost")
            if node.sla_required:
                for m in node.materials:
                    if m not in node.sla_min or m not in node.sla_window:
                        report.error("missing-sla", where,
                                     f"material {m}: SLA supplier needs sla_min and sla_window tables")
                _check_nonnegative(report, where, node.sla_min, "sla-minimum")
                for m, series in node.sla_min.items():
                    for t in range(H):
                        if series[t] > node.buy_upper[m][t]:
                            report.warn("sla-exceeds-capacity", where,
                                        f"material {m} period {t}: SLA minimum {series[t]} above buy capacity")
                            break
        elif node.kind in (PLANT, WAREHOUSE):
            inv = node.inventory
            for m in node.materials:
                if m not in inv.capacity:
                    report.error("missing-capacity", where, f"inventory capacity required for material {m}")
                    continue
                cap = inv.capacity[m]
                frac = inv.buffer_fraction[m]
                stock = inv.buffer_stock[m]
                for t in range(H):
                    if not 0.0 <= frac[t] <= 1.0:
                        report.error("bad-buffer-fraction", where, f"material {m} period {t}: fraction {frac[t]} outside [0, 1]")
                        break
                    if frac[t] * stock[t] > cap[t]:
                        report.error("floor-above-capacity", where,
                                     f"material {m} period {t}: enforced buffer {frac[t] * stock[t]} exceeds capacity {cap[t]}")
                        break
                i0 = inv.initial.get(m, 0.0)
                if not 0.0 <= i0 <= cap[0]:
                    report.error("bad-initial-inventory", where, f"material {m}: initial level {i0} outside [0, {cap[0]}]")
                elif i0 > cap[H - 1]:
                    report.warn("terminal-capacity", where,
                                f"material {m}: initial level {i0} exceeds final-period capacity; hard recovery is infeasible")
                _check_nonnegative(report, where, {m: inv.holding_cost[m]}, "cost")
                _check_nonnegative(report, where, {m: inv.floor_penalty[m]}, "penalty")
                if inv.deviation_penalty.get(m, 0.0) < 0:
                    report.error("bad-penalty", where, f"material {m}: negative terminal-deviation penalty")
            if node.kind == PLANT:
                rseen = set()
                for r in node.recipes:
                    rw = f"{where}/{r.id}"
                    if r.id in rseen:
                        report.error("duplicate-recipe", rw, "duplicate recipe id")
                    rseen.add(r.id)
                    pos = neg = False
                    for m, phi in r.coefficients.items():
                        if m not in node.materials:
                            report.error("recipe-material", rw, f"material {m} not stored at this plant")
                        pos = pos or phi > 0
                        neg = neg or phi < 0
                    if not (pos and neg) and not r.is_source_or_sink:
                        report.error("recipe-unbalanced", rw,
                                     "recipe needs both produced and consumed materials (or an explicit source/sink flag)")
                    for t in range(H):
                        if r.lower[t] < 0 or r.upper[t] < r.lower[t]:
                            report.error("bound-order", rw, f"period {t}: production bounds [{r.lower[t]}, {r.upper[t]}]")
                            break
                        if r.duration[t] < 0:
                            report.error("bad-duration", rw, f"period {t}: negative duration")
                            break
        elif node.kind == CUSTOMER:
            for m in node.demand_upper:
                if m not in node.materials:
                    report.error("unknown-material", where, f"demand bound for material {m} not sold here")

    arc_seen = set()
    for arc in model.arcs:
        where = arc.id
        if arc.id in arc_seen:
            report.error("duplicate-arc", where, "duplicate arc id")
        arc_seen.add(arc.id)
        if arc.origin == arc.destination:
            report.error("self-loop", where, "arc origin equals destination")
            continue
        if not model.has_node(arc.origin) or not model.has_node(arc.destination):
            report.error("dangling-arc", where, "arc endpoint does not exist")
            continue
        o, d = model.node(arc.origin), model.node(arc.destination)
        for m in arc.materials:
            if m not in o.materials or m not in d.materials:
                report.error("material-not-at-node", where, f"material {m} not present at both endpoints")
        _check_bounds_table(report, where, arc.lower, arc.upper, H)
        _check_nonnegative(report, where, arc.cost, "cost")
        _check_nonnegative(report, where, arc.fixed_cost, "cost")
        for m in arc.materials:
            lt = arc.lead_time[m]
            if any(v < 0 for v in lt):
                report.error("bad-lead-time", where, f"material {m}: negative lead time")
            if lt[0] == 0:
                fin0 = arc.preplanned_in.get(m, 0.0)
                fout0 = arc.preplanned_out.get(m, 0.0)
                if abs(fin0 - fout0) > 1e-9:
                    report.error("preplanned-mismatch", where,
                                 f"material {m}: zero-lead arc has pre-planned dispatch {fin0} != arrival {fout0}")
            if all(v == 0 for v in arc.upper[m]):
                report.warn("zero-capacity", where, f"material {m}: arc can never carry anything")

    for (m, c), series in model.orders.entries.items():
        where = f"order {m}@{c}"
        if not model.has_node(c) or model.node(c).kind != CUSTOMER:
            report.error("unknown-customer", where, "order targets a non-customer node")
            continue
        if m not in model.node(c).materials:
            report.error("unknown-material", where, f"customer does not take material {m}")
            continue
        if any(q < 0 for q in series.quantity):
            report.error("negative-order", where, "negative order quantity")
        _check_nonnegative(report, where, {m: series.price}, "price")
        _check_nonnegative(report, where, {m: series.late_cost}, "penalty")
        _check_nonnegative(report, where, {m: series.cancel_cost}, "penalty")
        if series.quantity[0] > series.preplanned_met + 1e-9:
            report.warn("uncovered-initial-order", where,
                        f"period-0 order of {series.quantity[0]} exceeds pre-planned delivery {series.preplanned_met}")
        arcs_in, _ = incidence(model, c) if model.has_node(c) else ([], [])
        if not any(m in a.materials for a in arcs_in):
            report.warn("undeliverable-order", where, "no incoming arc carries this material")

    for node in model.nodes:
        arcs_in, arcs_out = incidence(model, node.id)
        if node.kind == CUSTOMER and not arcs_in:
            report.warn("unreachable-customer", node.id, "customer has no incoming arcs")
        if not arcs_in and not arcs_out:
            report.warn("isolated-node", node.id, "node participates in no arcs")

    return report


__all__ = [
    "Arc",
    "Customer",
    "Finding",
    "INF",
    "InventoryParams",
    "NetworkModel",
    "OrderBook",
    "OrderSeries",
    "Plant",
    "Recipe",
    "Supplier",
    "TimeGrid",
    "ValidationReport",
    "Warehouse",
    "aggregate_orders",
    "expand",
    "expand_table",
    "incidence",
    "validate",
]
