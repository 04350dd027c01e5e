"""Orchestration: single runs, characterization/penalty sweeps, rolling horizon.

Sweep cells are independent solves; they can run on a small thread pool and
results land in pre-assigned grid slots, so parallel and sequential sweeps
produce identical grids.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

from .disruption import DisruptionEvent, Scenario, apply_scenario, diff_models
from .formulation import (
    ExtensionConfig,
    ScheduleReport,
    build,
    dimensions_of,
    extract_schedule,
)
from .milp import SolveOptions, solve
from .network import NetworkModel, OrderBook

SHIPMENT_TOL = 1e-6


@dataclass
class KpiReport:
    """Aggregates of one solved schedule.

    delayed_material counts unit-periods of outstanding backlog (the unmet
    balance summed over time); late_delivered_material is the portion of
    deliveries that cleared pre-existing backlog.
    """

    profit: float = 0.0
    canceled_orders: int = 0
    delayed_material: float = 0.0
    late_delivered_material: float = 0.0
    shipment_count: float = 0
    warehouse_inventory: float = 0.0
    by_material: dict = field(default_factory=dict)
    by_node: dict = field(default_factory=dict)

    COLUMNS = (
        "profit",
        "canceled_orders",
        "delayed_material",
        "late_delivered_material",
        "shipment_count",
        "warehouse_inventory",
    )

    def row(self) -> list:
        return [getattr(self, c) for c in self.COLUMNS]


def kpis(model: NetworkModel, config: ExtensionConfig, schedule: ScheduleReport) -> KpiReport:
    """Aggregate a decoded schedule into the reported indicators."""
    H = schedule.horizon
    report = KpiReport(profit=schedule.objective)
    report.canceled_orders = len(schedule.cancellations)

    by_mat: dict = {}

    def mat(m):
        return by_mat.setdefault(
            m, {"delayed": 0.0, "delivered": 0.0, "late_delivered": 0.0, "shipped": 0.0}
        )

    for (m, c), unmet in schedule.unmet.items():
        delayed = sum(unmet)
        report.delayed_material += delayed
        mat(m)["delayed"] += delayed
        dem = schedule.demand_met[(m, c)]
        mat(m)["delivered"] += sum(dem)
        late = sum(min(dem[t], unmet[t - 1]) for t in range(1, H))
        report.late_delivered_material += late
        mat(m)["late_delivered"] += late

    if config.ftc:
        report.shipment_count = sum(
            sum(active) for active in schedule.flow_active.values()
        )
    else:
        report.shipment_count = sum(
            sum(1 for v in series if v > SHIPMENT_TOL)
            for series in schedule.shipments_in.values()
        )
    for (m, _a), series in schedule.shipments_in.items():
        mat(m)["shipped"] += sum(series)

    warehouses = {n.id for n in model.warehouses}
    by_node: dict = {}
    for (m, n), series in schedule.inventory.items():
        total = sum(series)
        by_node.setdefault(n, {"inventory": 0.0})["inventory"] += total
        if n in warehouses:
            report.warehouse_inventory += total
    report.by_material = by_mat
    report.by_node = by_node
    return report


@dataclass
class RunResult:
    solution: object
    schedule: Optional[ScheduleReport]
    kpis: Optional[KpiReport]
    dimensions: object
    changes: list
    wall_time: float


def run(
    model: NetworkModel,
    scenario: Scenario | None = None,
    config: ExtensionConfig | None = None,
    options: SolveOptions | None = None,
) -> RunResult:
    """apply_scenario -> build -> solve -> extract -> KPIs, with timings."""
    scenario = scenario or Scenario()
    config = config or scenario.config or ExtensionConfig()
    options = options or SolveOptions()
    t0 = time.perf_counter()
    disrupted = apply_scenario(model, scenario)
    changes = diff_models(model, disrupted) if not scenario.empty else []
    instance, catalog = build(disrupted, config)
    solution = solve(instance, options)
    schedule = kpi = None
    if solution.values is not None:
        schedule = extract_schedule(disrupted, catalog, solution, config)
        kpi = kpis(disrupted, config, schedule)
    return RunResult(
        solution=solution,
        schedule=schedule,
        kpis=kpi,
        dimensions=dimensions_of(instance),
        changes=changes,
        wall_time=time.perf_counter() - t0,
    )


# -- sweeps -------------------------------------------------------------------


@dataclass
class SweepGrid:
    axis1: tuple
    axis2: tuple
    axis1_name: str
    axis2_name: str
    cells: list  # cells[i][j] -> KpiReport | None
    statuses: list  # statuses[i][j] -> solver status or error text
    scenarios: list  # scenarios[i][j] -> Scenario used for the cell

    def rows(self):
        """Plot-ready tabular form: one row per cell."""
        out = []
        for i, v1 in enumerate(self.axis1):
            for j, v2 in enumerate(self.axis2):
                kpi = self.cells[i][j]
                out.append(
                    [v1, v2, self.statuses[i][j]]
                    + (kpi.row() if kpi else [None] * len(KpiReport.COLUMNS))
                )
        return out


def _grid(axis1, axis2, fill=None):
    return [[fill for _ in axis2] for _ in axis1]


def _run_cells(model, scenarios, config, options, workers, on_cell=None):
    axis1_len = len(scenarios)
    axis2_len = len(scenarios[0]) if scenarios else 0
    cells = _grid(range(axis1_len), range(axis2_len))
    statuses = _grid(range(axis1_len), range(axis2_len), "pending")

    def one(i, j):
        try:
            result = run(model, scenarios[i][j], config, options)
            cells[i][j] = result.kpis
            statuses[i][j] = result.solution.status
        except Exception as exc:  # per-cell failures never kill the sweep
            cells[i][j] = None
            statuses[i][j] = f"error: {exc}"
        if on_cell is not None:
            on_cell()

    pairs = [(i, j) for i in range(axis1_len) for j in range(axis2_len)]
    if workers <= 1:
        for i, j in pairs:
            one(i, j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda ij: one(*ij), pairs))
    return cells, statuses


def characterization_scenario(
    base_event: DisruptionEvent,
    capacity_fraction: float,
    duration_fraction: float,
    horizon: int,
    template: Scenario | None = None,
) -> Scenario:
    """Cell scenario: severity times duration-as-remaining-horizon-fraction.

    duration_fraction 1 is the nominal system (empty window) and 0 keeps the
    disruption active through the end of the horizon.
    """
    start = base_event.start
    span = round((1.0 - duration_fraction) * (horizon - start))
    event = replace(
        base_event,
        shape="immediate" if start == 0 else "scheduled",
        fraction=capacity_fraction,
        end=start + span,
        ramp_in=min(base_event.ramp_in, span),
        ramp_out=min(base_event.ramp_out, max(0, span - base_event.ramp_in)),
    )
    template = template or Scenario()
    label = f"capacity={capacity_fraction:g} duration={duration_fraction:g}"
    return replace(template, events=(event,) + tuple(template.events[1:]), label=label)


def sweep_characterization(
    model: NetworkModel,
    base_event: DisruptionEvent,
    fractions,
    durations,
    config: ExtensionConfig | None = None,
    options: SolveOptions | None = None,
    template: Scenario | None = None,
    workers: int = 1,
    on_cell=None,
) -> SweepGrid:
    """One run per (capacity fraction, duration fraction) pair."""
    H = model.grid.period_count
    for v in list(fractions) + list(durations):
        if not 0.0 <= v <= 1.0:
            raise ValueError("sweep fractions must lie in [0, 1]")
    scenarios = [
        [
            characterization_scenario(base_event, f, d, H, template)
            for d in durations
        ]
        for f in fractions
    ]
    cells, statuses = _run_cells(model, scenarios, config, options, workers, on_cell)
    return SweepGrid(
        axis1=tuple(fractions),
        axis2=tuple(durations),
        axis1_name="capacity_fraction",
        axis2_name="duration_fraction",
        cells=cells,
        statuses=statuses,
        scenarios=scenarios,
    )


def override_order_penalties(
    model: NetworkModel, late_cost: float | None = None, cancel_cost: float | None = None
) -> NetworkModel:
    """Uniform late-delivery / cancellation penalties across every order."""
    H = model.grid.period_count
    entries = {}
    for key, series in model.orders.entries.items():
        changes = {}
        if late_cost is not None:
            changes["late_cost"] = tuple(float(late_cost) for _ in range(H))
        if cancel_cost is not None:
            changes["cancel_cost"] = tuple(float(cancel_cost) for _ in range(H))
        entries[key] = replace(series, **changes) if changes else series
    return replace(model, orders=OrderBook(entries=entries))


def sweep_penalties(
    model: NetworkModel,
    scenario: Scenario,
    lambda_u_values,
    lambda_delta_values,
    config: ExtensionConfig | None = None,
    options: SolveOptions | None = None,
    workers: int = 1,
    on_cell=None,
) -> SweepGrid:
    """Grid over uniform late-delivery and cancellation penalties."""
    for v in list(lambda_u_values) + list(lambda_delta_values):
        if v <= 0:
            raise ValueError("penalty values must be positive")
    axis1 = tuple(lambda_u_values)
    axis2 = tuple(lambda_delta_values)
    cells = _grid(axis1, axis2)
    statuses = _grid(axis1, axis2, "pending")
    scenarios = _grid(axis1, axis2)

    def one(i, j):
        try:
            cell_model = override_order_penalties(model, axis1[i], axis2[j])
            result = run(cell_model, scenario, config, options)
            cells[i][j] = result.kpis
            statuses[i][j] = result.solution.status
            scenarios[i][j] = replace(
                scenario, label=f"late={axis1[i]:g} cancel={axis2[j]:g}"
            )
        except Exception as exc:
            cells[i][j] = None
            statuses[i][j] = f"error: {exc}"
        if on_cell is not None:
            on_cell()

    pairs = [(i, j) for i in range(len(axis1)) for j in range(len(axis2))]
    if workers <= 1:
        for i, j in pairs:
            one(i, j)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda ij: one(*ij), pairs))
    return SweepGrid(
        axis1=axis1,
        axis2=axis2,
        axis1_name="late_delivery_cost",
        axis2_name="cancellation_cost",
        cells=cells,
        statuses=statuses,
        scenarios=scenarios,
    )


# -- rolling horizon ----------------------------------------------------------


@dataclass
class RollingState:
    """Committed state threaded between rolling-horizon steps."""

    offset: int
    initial_inventory: dict  # (m, node) -> level
    initial_unmet: dict  # (m, customer) -> backlog
    preplanned_in: dict  # (m, arc) -> flow
    preplanned_out: dict
    preplanned_production: dict  # (plant, recipe) -> amount
    preplanned_buy: dict  # (m, supplier) -> amount
    preplanned_met: dict  # (m, customer) -> amount


@dataclass
class RollStep:
    offset: int
    schedule: ScheduleReport
    kpis: KpiReport
    solution: object


@dataclass
class RollResult:
    steps: list
    committed: dict  # family -> key -> list over global periods
    halted: bool = False
    diagnostic: str = ""


def _initial_state(model: NetworkModel) -> RollingState:
    return RollingState(
        offset=0,
        initial_inventory={
            (m, n.id): n.inventory.initial.get(m, 0.0)
            for n in model.inventory_nodes
            for m in n.materials
        },
        initial_unmet={
            (m, c.id): max(
                0.0,
                (model.orders.get(m, c.id).quantity[0] - model.orders.get(m, c.id).preplanned_met)
                if model.orders.get(m, c.id)
                else 0.0,
            )
            for c in model.customers
            for m in c.materials
        },
        preplanned_in={
            (m, a.id): a.preplanned_in.get(m, 0.0) for a in model.arcs for m in a.materials
        },
        preplanned_out={
            (m, a.id): a.preplanned_out.get(m, 0.0) for a in model.arcs for m in a.materials
        },
        preplanned_production={
            (p.id, r.id): r.preplanned for p in model.plants for r in p.recipes
        },
        preplanned_buy={
            (m, s.id): s.preplanned_buy.get(m, 0.0) for s in model.suppliers for m in s.materials
        },
        preplanned_met={
            (m, c.id): (model.orders.get(m, c.id).preplanned_met if model.orders.get(m, c.id) else 0.0)
            for c in model.customers
            for m in c.materials
        },
    )


def window_slice(model: NetworkModel, state: RollingState, window: int) -> NetworkModel:
    """Sub-model over [offset, offset + window) with committed initial state."""
    off = state.offset

    def cut(series):
        return tuple(series[off : off + window])

    def cut_table(table):
        return {m: cut(s) for m, s in table.items()}

    grid = replace(model.grid, period_count=window)
    nodes = []
    for n in model.nodes:
        if n.kind == "supplier":
            nodes.append(
                replace(
                    n,
                    buy_lower=cut_table(n.buy_lower),
                    buy_upper=cut_table(n.buy_upper),
                    buy_cost=cut_table(n.buy_cost),
                    sla_min=cut_table(n.sla_min),
                    sla_window=cut_table(n.sla_window),
                    preplanned_buy={
                        m: state.preplanned_buy[(m, n.id)] for m in n.materials
                    },
                )
            )
        elif n.kind in ("plant", "warehouse"):
            inv = n.inventory
            new_inv = replace(
                inv,
                capacity=cut_table(inv.capacity),
                holding_cost=cut_table(inv.holding_cost),
                buffer_stock=cut_table(inv.buffer_stock),
                buffer_fraction=cut_table(inv.buffer_fraction),
                floor_penalty=cut_table(inv.floor_penalty),
                initial={m: state.initial_inventory[(m, n.id)] for m in n.materials},
                shared_capacity=cut(inv.shared_capacity) if inv.shared_capacity else None,
            )
            if n.kind == "plant":
                recipes = tuple(
                    replace(
                        r,
                        lower=cut(r.lower),
                        upper=cut(r.upper),
                        cost=cut(r.cost),
                        duration=cut(r.duration),
                        preplanned=state.preplanned_production[(n.id, r.id)],
                    )
                    for r in n.recipes
                )
                nodes.append(replace(n, recipes=recipes, inventory=new_inv))
            else:
                nodes.append(replace(n, inventory=new_inv))
        else:
            nodes.append(
                replace(
                    n,
                    demand_upper=cut_table(n.demand_upper),
                    unmet_lower=cut_table(n.unmet_lower),
                    unmet_upper=cut_table(n.unmet_upper),
                )
            )
    arcs = tuple(
        replace(
            a,
            lead_time=cut_table(a.lead_time),
            lower=cut_table(a.lower),
            upper=cut_table(a.upper),
            cost=cut_table(a.cost),
            fixed_cost=cut_table(a.fixed_cost),
            preplanned_in={m: state.preplanned_in[(m, a.id)] for m in a.materials},
            preplanned_out={m: state.preplanned_out[(m, a.id)] for m in a.materials},
        )
        for a in model.arcs
    )
    entries = {}
    for (m, c), series in model.orders.entries.items():
        quantity = list(cut(series.quantity))
        # Period 0 of the window is history; encode the committed backlog so
        # the pinned local unmet balance starts from it.
        quantity[0] = state.initial_unmet[(m, c)] + state.preplanned_met[(m, c)]
        entries[(m, c)] = replace(
            series,
            quantity=tuple(quantity),
            price=cut(series.price),
            late_cost=cut(series.late_cost),
            cancel_cost=cut(series.cancel_cost),
            preplanned_met=state.preplanned_met[(m, c)],
            no_cancel_periods=tuple(
                t - off for t in series.no_cancel_periods if 0 < t - off < window
            ),
        )
    return replace(model, grid=grid, nodes=tuple(nodes), arcs=arcs, orders=OrderBook(entries=entries))


def roll(
    model: NetworkModel,
    scenario: Scenario | None = None,
    window: int = 5,
    steps: int = 1,
    config: ExtensionConfig | None = None,
    options: SolveOptions | None = None,
) -> RollResult:
    """Receding-horizon re-solves: commit one period, shift, repeat.

    Each step solves with the soft terminal mode so intermediate windows
    stay feasible even when the outer configuration demands hard recovery.
    """
    scenario = scenario or Scenario()
    config = config or scenario.config or ExtensionConfig()
    H = model.grid.period_count
    if window < 2 or window > H:
        raise ValueError("window must lie in [2, horizon]")
    if steps < 1 or steps + window > H + 1:
        raise ValueError("steps exceed the horizon")
    disrupted = apply_scenario(model, scenario)
    state = _initial_state(disrupted)
    step_config = replace(config, terminal="fid")

    committed: dict = {
        "inventory": {k: [v] for k, v in state.initial_inventory.items()},
        "unmet": {k: [v] for k, v in state.initial_unmet.items()},
        "shipments_in": {k: [v] for k, v in state.preplanned_in.items()},
        "shipments_out": {k: [v] for k, v in state.preplanned_out.items()},
        "production": {k: [v] for k, v in state.preplanned_production.items()},
        "procurement": {k: [v] for k, v in state.preplanned_buy.items()},
        "demand_met": {k: [v] for k, v in state.preplanned_met.items()},
        "cancellations": [],
    }
    out = RollResult(steps=[], committed=committed)

    for _step in range(steps):
        sub = window_slice(disrupted, state, window)
        instance, catalog = build(sub, step_config)
        solution = solve(instance, options or SolveOptions())
        if solution.values is None:
            out.halted = True
            out.diagnostic = (
                f"step at offset {state.offset} ended {solution.status}; partial history kept"
            )
            return out
        schedule = extract_schedule(sub, catalog, solution, step_config)
        out.steps.append(
            RollStep(
                offset=state.offset,
                schedule=schedule,
                kpis=kpis(sub, step_config, schedule),
                solution=solution,
            )
        )

        prod_family = schedule.production_starts if step_config.patp else schedule.production
        for key, series in schedule.inventory.items():
            committed["inventory"][key].append(series[1])
        for key, series in schedule.unmet.items():
            committed["unmet"][key].append(series[1])
        for key, series in schedule.shipments_in.items():
            committed["shipments_in"][key].append(series[1])
        for key, series in schedule.shipments_out.items():
            committed["shipments_out"][key].append(series[1])
        for key, series in prod_family.items():
            committed["production"][key].append(series[1])
        for key, series in schedule.procurement.items():
            committed["procurement"][key].append(series[1])
        for key, series in schedule.demand_met.items():
            committed["demand_met"][key].append(series[1])
        for (m, c, t) in schedule.cancellations:
            if t == 1:
                committed["cancellations"].append((m, c, state.offset + 1))

        state = RollingState(
            offset=state.offset + 1,
            initial_inventory={k: s[1] for k, s in schedule.inventory.items()},
            initial_unmet={k: s[1] for k, s in schedule.unmet.items()},
            preplanned_in={k: s[1] for k, s in schedule.shipments_in.items()},
            preplanned_out={k: s[1] for k, s in schedule.shipments_out.items()},
            preplanned_production={k: s[1] for k, s in prod_family.items()},
            preplanned_buy={k: s[1] for k, s in schedule.procurement.items()},
            preplanned_met={k: s[1] for k, s in schedule.demand_met.items()},
        )
    return out


def stitched_residuals(model: NetworkModel, scenario: Scenario | None, result: RollResult) -> float:
    """Worst violation of the balance recursions across the committed path."""
    disrupted = apply_scenario(model, scenario or Scenario())
    committed = result.committed
    n_committed = len(result.steps) + 1
    worst = 0.0
    plants = {p.id: p for p in disrupted.plants}
    for n in disrupted.inventory_nodes:
        arcs_in = [a for a in disrupted.arcs if a.destination == n.id]
        arcs_out = [a for a in disrupted.arcs if a.origin == n.id]
        for m in n.materials:
            inv = committed["inventory"][(m, n.id)]
            for g in range(1, n_committed):
                rhs = inv[g - 1]
                rhs += sum(
                    committed["shipments_out"][(m, a.id)][g] for a in arcs_in if m in a.materials
                )
                rhs -= sum(
                    committed["shipments_in"][(m, a.id)][g] for a in arcs_out if m in a.materials
                )
                if n.id in plants:
                    for r in plants[n.id].recipes:
                        phi = r.coefficients.get(m, 0.0)
                        if phi:
                            rhs += phi * committed["production"][(n.id, r.id)][g]
                worst = max(worst, abs(inv[g] - rhs))
    canceled = set(committed["cancellations"])
    for c in disrupted.customers:
        for m in c.materials:
            series = disrupted.orders.get(m, c.id)
            unmet = committed["unmet"][(m, c.id)]
            for g in range(1, n_committed):
                delta = series.quantity[g] if series else 0.0
                if (m, c.id, g) in canceled:
                    delta = 0.0
                expect = unmet[g - 1] - committed["demand_met"][(m, c.id)][g] + delta
                worst = max(worst, abs(unmet[g] - expect))
    return worst
