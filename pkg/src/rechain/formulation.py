"""Compile a network plus extension choices into a MILP; decode solutions back.

Column and row order is lexicographic within fixed family order, so two
builds of the same inputs are identical object-for-object. Period 0 carries
the pre-disruption state: its columns exist but are pinned, and every
balance / order / extension row starts at period 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .milp import INF, MilpInstance, Solution
from .network import PLANT, NetworkModel, validate

TERMINAL_MODES = ("hard", "fid")
FLOOR_MODES = ("hard", "nid")
SLA_MODES = ("off", "simple", "window")


class BuildError(ValueError):
    """Raised when the model/config combination cannot be compiled."""


@dataclass(frozen=True)
class ExtensionConfig:
    """Which optional constraint families the compiled model includes."""

    patp: bool = False
    ftc: bool = False
    sla: str = "off"
    terminal: str = "hard"
    inventory_floor: str = "hard"
    shared_volume: bool = False
    enforce_u_upper: bool = False

    def __post_init__(self):
        if self.terminal not in TERMINAL_MODES:
            raise BuildError(f"terminal mode must be one of {TERMINAL_MODES}")
        if self.inventory_floor not in FLOOR_MODES:
            raise BuildError(f"inventory floor mode must be one of {FLOOR_MODES}")
        if self.sla not in SLA_MODES:
            raise BuildError(f"sla mode must be one of {SLA_MODES}")


class VariableCatalog:
    """Bijection between MILP column indices and typed variable keys.

    Keys are tuples like ("FIn", material, arc_id, period) or ("Dev",
    material, node_id); binaries are exactly the y/x/w/z families.
    """

    def __init__(self):
        self._by_key: dict[tuple, int] = {}
        self._by_index: list[tuple] = []

    def add(self, key: tuple, index: int) -> None:
        if key in self._by_key:
            raise BuildError(f"duplicate variable key {key}")
        if index != len(self._by_index):
            raise BuildError("catalog indices must be assigned densely")
        self._by_key[key] = index
        self._by_index.append(key)

    def index(self, key: tuple) -> int:
        return self._by_key[key]

    def get(self, key: tuple) -> Optional[int]:
        return self._by_key.get(key)

    def key(self, index: int) -> tuple:
        return self._by_index[index]

    def __len__(self):
        return len(self._by_index)

    def __contains__(self, key):
        return key in self._by_key

    def keys(self):
        return iter(self._by_index)


@dataclass(frozen=True)
class DimensionReport:
    continuous_count: int
    binary_count: int
    constraint_count: int
    nonzero_count: int


def _name(key: tuple) -> str:
    return f"{key[0]}[{','.join(str(k) for k in key[1:])}]"


def _arrival_image(lead: tuple, horizon: int) -> dict[int, list[int]]:
    """Arrival period -> dispatch periods (lead times are dispatch-indexed).

    Several dispatches may land in the same period under time-varying lead
    times; their flows add up in one arrival row.
    """
    image: dict[int, list[int]] = {}
    for t in range(horizon):
        arrive = t + lead[t]
        if arrive <= horizon - 1:
            image.setdefault(arrive, []).append(t)
    return image


def _pin(value: float) -> tuple:
    return (value, value)


class _Compiler:
    def __init__(self, model: NetworkModel, config: ExtensionConfig):
        self.model = model
        self.config = config
        self.H = model.grid.period_count
        self.instance = MilpInstance(name="rechain")
        self.catalog = VariableCatalog()
        self.arcs = sorted(model.arcs, key=lambda a: a.id)
        self.suppliers = sorted(model.suppliers, key=lambda n: n.id)
        self.plants = sorted(model.plants, key=lambda n: n.id)
        self.customers = sorted(model.customers, key=lambda n: n.id)
        self.inventory_nodes = sorted(model.inventory_nodes, key=lambda n: n.id)
        self.arcs_in: dict[str, list] = {n.id: [] for n in model.nodes}
        self.arcs_out: dict[str, list] = {n.id: [] for n in model.nodes}
        for a in self.arcs:
            self.arcs_in[a.destination].append(a)
            self.arcs_out[a.origin].append(a)
        self.flow_image = {
            (m, a.id): _arrival_image(a.lead_time[m], self.H)
            for a in self.arcs
            for m in sorted(a.materials)
        }
        self.prod_image = {}
        if config.patp:
            for p in self.plants:
                for r in sorted(p.recipes, key=lambda r: r.id):
                    self.prod_image[(p.id, r.id)] = _arrival_image(r.duration, self.H)

    # -- guards ------------------------------------------------------------

    def check_config(self):
        cfg, model = self.config, self.model
        if cfg.ftc:
            for a in self.arcs:
                for m in sorted(a.materials):
                    if any(not math.isfinite(v) for v in a.upper[m][1:]):
                        raise BuildError(
                            f"FTC requires finite flow capacity: arc {a.id}, material {m}"
                        )
        if cfg.sla != "off":
            for s in self.suppliers:
                if not s.sla_required:
                    continue
                for m in sorted(s.materials):
                    if any(not math.isfinite(v) for v in s.buy_upper[m][1:]):
                        raise BuildError(
                            f"SLA reformulation requires finite buy capacity: supplier {s.id}, material {m}"
                        )
        for (m, c), series in model.orders.entries.items():
            if (series.no_late or series.no_cancel_periods) and cfg.terminal != "fid":
                raise BuildError(
                    f"order {m}@{c}: no-late/no-cancel enforcement requires the soft terminal mode"
                )
            if series.no_late:
                pin = max(0.0, series.quantity[0] - series.preplanned_met)
                if pin > 0:
                    raise BuildError(
                        f"order {m}@{c}: no-late flag conflicts with uncovered period-0 order"
                    )

    # -- columns -----------------------------------------------------------

    def col(self, key, lower, upper, objective=0.0, binary=False):
        idx = self.instance.add_column(_name(key), lower, upper, objective, binary)
        self.catalog.add(key, idx)
        return idx

    def build_columns(self):
        model, cfg, H = self.model, self.config, self.H

        for a in self.arcs:
            for m in sorted(a.materials):
                for t in range(H):
                    if t == 0:
                        lo, hi = _pin(a.preplanned_in.get(m, 0.0))
                    elif t + a.lead_time[m][t] > H - 1:
                        lo, hi = 0.0, 0.0  # the shipment could never arrive
                    else:
                        lo, hi = 0.0, a.upper[m][t]
                    self.col(("FIn", m, a.id, t), lo, hi)
        for a in self.arcs:
            for m in sorted(a.materials):
                arrivals = set(self.flow_image[(m, a.id)])
                for t in range(H):
                    if t == 0:
                        lo, hi = _pin(a.preplanned_out.get(m, 0.0))
                    elif t not in arrivals:
                        lo, hi = 0.0, 0.0
                    else:
                        lo, hi = 0.0, a.upper[m][t]
                    self.col(("FOut", m, a.id, t), lo, hi, objective=-a.cost[m][t])

        for p in self.plants:
            for r in sorted(p.recipes, key=lambda r: r.id):
                if cfg.patp:
                    continue
                for t in range(H):
                    lo, hi = _pin(r.preplanned) if t == 0 else (0.0, r.upper[t])
                    self.col(("Prod", p.id, r.id, t), lo, hi, objective=-r.cost[t])
        if cfg.patp:
            for p in self.plants:
                for r in sorted(p.recipes, key=lambda r: r.id):
                    for t in range(H):
                        if t == 0:
                            lo, hi = _pin(r.preplanned)
                        elif t + r.duration[t] > H - 1:
                            lo, hi = 0.0, 0.0
                        else:
                            lo, hi = 0.0, r.upper[t]
                        self.col(("ProdIn", p.id, r.id, t), lo, hi, objective=-r.cost[t])
            for p in self.plants:
                for r in sorted(p.recipes, key=lambda r: r.id):
                    ends = set(self.prod_image[(p.id, r.id)])
                    for t in range(H):
                        lo, hi = (0.0, INF) if t in ends else (0.0, 0.0)
                        self.col(("ProdOut", p.id, r.id, t), lo, hi)

        for n in self.inventory_nodes:
            inv = n.inventory
            for m in sorted(n.materials):
                for t in range(H):
                    if t == 0:
                        lo, hi = _pin(inv.initial.get(m, 0.0))
                    else:
                        floor = inv.floor(m, t) if cfg.inventory_floor == "hard" else 0.0
                        lo, hi = floor, inv.capacity[m][t]
                    self.col(("Inv", m, n.id, t), lo, hi, objective=-inv.holding_cost[m][t])

        for s in self.suppliers:
            for m in sorted(s.materials):
                for t in range(H):
                    if t == 0:
                        lo, hi = _pin(s.preplanned_buy.get(m, 0.0))
                    else:
                        lo, hi = 0.0, s.buy_upper[m][t]
                    self.col(("Buy", m, s.id, t), lo, hi, objective=-s.buy_cost[m][t])

        for c in self.customers:
            for m in sorted(c.materials):
                series = model.orders.get(m, c.id)
                for t in range(H):
                    price = series.price[t] if series else 0.0
                    if t == 0:
                        lo, hi = _pin(series.preplanned_met if series else 0.0)
                    else:
                        hi = c.demand_upper.get(m, (INF,) * H)[t]
                        lo = 0.0
                    self.col(("Dem", m, c.id, t), lo, hi, objective=price)
        for c in self.customers:
            for m in sorted(c.materials):
                series = model.orders.get(m, c.id)
                for t in range(H):
                    late = series.late_cost[t] if series else 0.0
                    if series and series.no_late:
                        lo, hi = 0.0, 0.0
                    elif t == 0:
                        lo = hi = max(0.0, (series.quantity[0] - series.preplanned_met) if series else 0.0)
                    else:
                        lo = 0.0
                        hi = c.unmet_upper.get(m, (INF,) * H)[t] if cfg.enforce_u_upper else INF
                    self.col(("Unmet", m, c.id, t), lo, hi, objective=-late)

        if cfg.terminal == "fid":
            for n in self.inventory_nodes:
                for m in sorted(n.materials):
                    penalty = n.inventory.deviation_penalty.get(m, 0.0)
                    self.col(("Dev", m, n.id), 0.0, INF, objective=-penalty)

        if cfg.inventory_floor == "nid":
            for n in self.inventory_nodes:
                inv = n.inventory
                for m in sorted(n.materials):
                    for t in range(H):
                        floor = inv.floor(m, t)
                        if t == 0:
                            v = min(0.0, inv.initial.get(m, 0.0) - floor)
                            lo, hi = _pin(v)
                        else:
                            lo, hi = -floor, 0.0
                        self.col(("K", m, n.id, t), lo, hi, objective=inv.floor_penalty[m][t])

        # binaries, in catalog family order y, x, w, z
        for c in self.customers:
            for m in sorted(c.materials):
                series = model.orders.get(m, c.id)
                if series is None:
                    continue
                for t in range(H):
                    if series.quantity[t] <= 0.0:
                        continue  # no order: cancellation is the constant "no"
                    if t == 0 or t in series.no_cancel_periods:
                        lo, hi = 0.0, 0.0
                    else:
                        lo, hi = 0.0, 1.0
                    self.col(("y", m, c.id, t), lo, hi,
                             objective=-series.cancel_cost[t], binary=True)

        if cfg.ftc:
            for a in self.arcs:
                for m in sorted(a.materials):
                    for t in range(H):
                        if t == 0:
                            v = 1.0 if a.preplanned_in.get(m, 0.0) > 0 else 0.0
                            lo, hi = _pin(v)
                        else:
                            lo, hi = 0.0, 1.0
                        self.col(("x", m, a.id, t), lo, hi,
                                 objective=-a.fixed_cost[m][t], binary=True)

        if cfg.sla != "off":
            for s in self.suppliers:
                if not s.sla_required:
                    continue
                for m in sorted(s.materials):
                    if cfg.sla == "simple":
                        for t in range(H):
                            if t == 0:
                                v = 1.0 if s.preplanned_buy.get(m, 0.0) > 0 else 0.0
                                lo, hi = _pin(v)
                            else:
                                lo, hi = 0.0, 1.0
                            self.col(("w", m, s.id, t), lo, hi, binary=True)
                    else:
                        window = s.sla_window[m]
                        for t in range(1, H):
                            if t + window[t] > H - 1:
                                continue  # a window may not extend beyond the horizon
                            self.col(("w", m, s.id, t), 0.0, 1.0, binary=True)

        if cfg.inventory_floor == "nid":
            for n in self.inventory_nodes:
                inv = n.inventory
                for m in sorted(n.materials):
                    for t in range(H):
                        if t == 0:
                            v = 1.0 if inv.initial.get(m, 0.0) < inv.floor(m, 0) else 0.0
                            lo, hi = _pin(v)
                        else:
                            lo, hi = 0.0, 1.0
                        self.col(("z", m, n.id, t), lo, hi, binary=True)

    # -- rows ----------------------------------------------------------------

    def row(self, key, coefs, sense, rhs):
        self.instance.add_row(_name(key), coefs, sense, rhs)

    def cix(self, key) -> int:
        return self.catalog.index(key)

    def build_transport_coupling(self):
        for a in self.arcs:
            for m in sorted(a.materials):
                image = self.flow_image[(m, a.id)]
                for arrive in sorted(image):
                    coefs = [(self.cix(("FOut", m, a.id, arrive)), 1.0)]
                    for t in image[arrive]:
                        coefs.append((self.cix(("FIn", m, a.id, t)), -1.0))
                    self.row(("Link", m, a.id, arrive), coefs, "==", 0.0)

    def build_production_coupling(self):
        if not self.config.patp:
            return
        for p in self.plants:
            for r in sorted(p.recipes, key=lambda r: r.id):
                image = self.prod_image[(p.id, r.id)]
                for arrive in sorted(image):
                    coefs = [(self.cix(("ProdOut", p.id, r.id, arrive)), 1.0)]
                    for t in image[arrive]:
                        coefs.append((self.cix(("ProdIn", p.id, r.id, t)), -1.0))
                    self.row(("PLink", p.id, r.id, arrive), coefs, "==", 0.0)

    def build_inventory_balances(self):
        cfg, H = self.config, self.H
        for n in self.inventory_nodes:
            for m in sorted(n.materials):
                for t in range(1, H):
                    coefs = [
                        (self.cix(("Inv", m, n.id, t)), 1.0),
                        (self.cix(("Inv", m, n.id, t - 1)), -1.0),
                    ]
                    for a in self.arcs_in[n.id]:
                        if m in a.materials:
                            coefs.append((self.cix(("FOut", m, a.id, t)), -1.0))
                    for a in self.arcs_out[n.id]:
                        if m in a.materials:
                            coefs.append((self.cix(("FIn", m, a.id, t)), 1.0))
                    if n.kind == PLANT:
                        for r in sorted(n.recipes, key=lambda r: r.id):
                            phi = r.coefficients.get(m, 0.0)
                            if phi == 0.0:
                                continue
                            if not cfg.patp:
                                coefs.append((self.cix(("Prod", n.id, r.id, t)), -phi))
                            elif phi > 0:
                                coefs.append((self.cix(("ProdOut", n.id, r.id, t)), -phi))
                            else:
                                coefs.append((self.cix(("ProdIn", n.id, r.id, t)), -phi))
                    self.row(("Bal", m, n.id, t), coefs, "==", 0.0)

    def build_demand_and_buy(self):
        for c in self.customers:
            for m in sorted(c.materials):
                for t in range(1, self.H):
                    coefs = [(self.cix(("Dem", m, c.id, t)), 1.0)]
                    for a in self.arcs_in[c.id]:
                        if m in a.materials:
                            coefs.append((self.cix(("FOut", m, a.id, t)), -1.0))
                    self.row(("DemTie", m, c.id, t), coefs, "==", 0.0)
        for s in self.suppliers:
            for m in sorted(s.materials):
                for t in range(1, self.H):
                    coefs = [(self.cix(("Buy", m, s.id, t)), 1.0)]
                    for a in self.arcs_out[s.id]:
                        if m in a.materials:
                            coefs.append((self.cix(("FIn", m, a.id, t)), -1.0))
                    self.row(("BuyTie", m, s.id, t), coefs, "==", 0.0)

    def build_order_management(self):
        for c in self.customers:
            for m in sorted(c.materials):
                series = self.model.orders.get(m, c.id)
                for t in range(1, self.H):
                    delta = series.quantity[t] if series else 0.0
                    coefs = [
                        (self.cix(("Unmet", m, c.id, t)), 1.0),
                        (self.cix(("Unmet", m, c.id, t - 1)), -1.0),
                        (self.cix(("Dem", m, c.id, t)), 1.0),
                    ]
                    if delta > 0:
                        coefs.append((self.cix(("y", m, c.id, t)), delta))
                    self.row(("UnmetBal", m, c.id, t), coefs, "==", delta)

    def build_terminal(self):
        cfg, H = self.config, self.H
        for n in self.inventory_nodes:
            for m in sorted(n.materials):
                i0 = n.inventory.initial.get(m, 0.0)
                last = self.cix(("Inv", m, n.id, H - 1))
                if cfg.terminal == "hard":
                    self.row(("Term", m, n.id), [(last, 1.0)], "==", i0)
                else:
                    dev = self.cix(("Dev", m, n.id))
                    self.row(("DevLo", m, n.id), [(dev, 1.0), (last, 1.0)], ">=", i0)
                    self.row(("DevHi", m, n.id), [(dev, 1.0), (last, -1.0)], ">=", -i0)

    def build_nid(self):
        if self.config.inventory_floor != "nid":
            return
        for n in self.inventory_nodes:
            inv = n.inventory
            for m in sorted(n.materials):
                for t in range(1, self.H):
                    floor = inv.floor(m, t)
                    cap = inv.capacity[m][t]
                    k = self.cix(("K", m, n.id, t))
                    i = self.cix(("Inv", m, n.id, t))
                    z = self.cix(("z", m, n.id, t))
                    self.row(("Relu1", m, n.id, t), [(k, 1.0), (i, -1.0)], "<=", -floor)
                    self.row(("Relu2", m, n.id, t),
                             [(k, 1.0), (i, -1.0), (z, floor - cap)], ">=", -cap)
                    self.row(("Relu3", m, n.id, t), [(k, 1.0), (z, floor)], ">=", 0.0)
                    self.row(("Relu4", m, n.id, t), [(k, 1.0)], "<=", 0.0)

    def build_ftc(self):
        if not self.config.ftc:
            return
        for a in self.arcs:
            for m in sorted(a.materials):
                for t in range(1, self.H):
                    fin = self.cix(("FIn", m, a.id, t))
                    x = self.cix(("x", m, a.id, t))
                    if a.lower[m][t] > 0:
                        self.row(("FtcLo", m, a.id, t),
                                 [(fin, 1.0), (x, -a.lower[m][t])], ">=", 0.0)
                    self.row(("FtcUp", m, a.id, t),
                             [(fin, 1.0), (x, -a.upper[m][t])], "<=", 0.0)

    def build_sla(self):
        cfg = self.config
        if cfg.sla == "off":
            return
        for s in self.suppliers:
            if not s.sla_required:
                continue
            for m in sorted(s.materials):
                if cfg.sla == "simple":
                    for t in range(1, self.H):
                        buy = self.cix(("Buy", m, s.id, t))
                        w = self.cix(("w", m, s.id, t))
                        if s.sla_min[m][t] > 0:
                            self.row(("SlaLo", m, s.id, t),
                                     [(buy, 1.0), (w, -s.sla_min[m][t])], ">=", 0.0)
                        self.row(("SlaUp", m, s.id, t),
                                 [(buy, 1.0), (w, -s.buy_upper[m][t])], "<=", 0.0)
                else:
                    window = s.sla_window[m]
                    for t in range(1, self.H):
                        if t + window[t] > self.H - 1:
                            continue
                        w = self.cix(("w", m, s.id, t))
                        buys = [(self.cix(("Buy", m, s.id, tt)), 1.0)
                                for tt in range(t, t + window[t] + 1)]
                        if s.sla_min[m][t] > 0:
                            self.row(("SlaLo", m, s.id, t),
                                     buys + [(w, -s.sla_min[m][t])], ">=", 0.0)
                        self.row(("SlaUp", m, s.id, t),
                                 buys + [(w, -s.buy_upper[m][t])], "<=", 0.0)

    def build_shared_volume(self):
        if not self.config.shared_volume:
            return
        for n in self.inventory_nodes:
            total = n.inventory.shared_capacity
            if total is None:
                continue
            for t in range(1, self.H):
                coefs = [(self.cix(("Inv", m, n.id, t)), 1.0) for m in sorted(n.materials)]
                self.row(("Vol", n.id, t), coefs, "<=", total[t])

    def compile(self):
        self.check_config()
        self.build_columns()
        self.build_transport_coupling()
        self.build_production_coupling()
        self.build_inventory_balances()
        self.build_demand_and_buy()
        self.build_order_management()
        self.build_terminal()
        self.build_nid()
        self.build_ftc()
        self.build_sla()
        self.build_shared_volume()
        self.instance.check()
        return self.instance, self.catalog


def build(model: NetworkModel, config: ExtensionConfig | None = None,
          check: bool = True):
    """Compile the network into a MILP instance plus its variable catalog."""
    config = config or ExtensionConfig()
    if check:
        report = validate(model)
        if not report.ok:
            raise BuildError("model failed validation:\n" + report.summary())
    return _Compiler(model, config).compile()


# -- dimension prediction ----------------------------------------------------


def expected_dimensions(model: NetworkModel, config: ExtensionConfig | None = None) -> DimensionReport:
    """Closed-form instance dimensions from index-set cardinalities.

    Counts are derived arithmetically, not by building, and must match the
    compiled instance exactly.
    """
    config = config or ExtensionConfig()
    H = model.grid.period_count
    arcs = sorted(model.arcs, key=lambda a: a.id)
    plants = sorted(model.plants, key=lambda n: n.id)
    suppliers = sorted(model.suppliers, key=lambda n: n.id)
    customers = sorted(model.customers, key=lambda n: n.id)
    inv_nodes = sorted(model.inventory_nodes, key=lambda n: n.id)

    arc_mats = sum(len(a.materials) for a in arcs)
    recipe_count = sum(len(p.recipes) for p in plants)
    inv_mats = sum(len(n.materials) for n in inv_nodes)
    sup_mats = sum(len(s.materials) for s in suppliers)
    cust_mats = sum(len(c.materials) for c in customers)

    continuous = 2 * arc_mats * H
    continuous += recipe_count * H * (2 if config.patp else 1)
    continuous += inv_mats * H + sup_mats * H + 2 * cust_mats * H
    if config.terminal == "fid":
        continuous += inv_mats
    if config.inventory_floor == "nid":
        continuous += inv_mats * H

    positive_orders = sum(
        1
        for series in model.orders.entries.values()
        for q in series.quantity
        if q > 0
    )
    binary = positive_orders
    if config.ftc:
        binary += arc_mats * H
    if config.sla == "simple":
        binary += sum(len(s.materials) for s in suppliers if s.sla_required) * H
    elif config.sla == "window":
        for s in suppliers:
            if not s.sla_required:
                continue
            for m in s.materials:
                win = s.sla_window[m]
                binary += sum(1 for t in range(1, H) if t + win[t] <= H - 1)
    if config.inventory_floor == "nid":
        binary += inv_mats * H

    def image_sizes(lead):
        arrivals = {}
        for t in range(H):
            ta = t + lead[t]
            if ta <= H - 1:
                arrivals[ta] = arrivals.get(ta, 0) + 1
        return arrivals

    constraints = 0
    nonzeros = 0
    for a in arcs:
        for m in a.materials:
            arrivals = image_sizes(a.lead_time[m])
            constraints += len(arrivals)
            nonzeros += sum(1 + k for k in arrivals.values())
    if config.patp:
        for p in plants:
            for r in p.recipes:
                arrivals = image_sizes(r.duration)
                constraints += len(arrivals)
                nonzeros += sum(1 + k for k in arrivals.values())

    for n in inv_nodes:
        in_arcs = [a for a in arcs if a.destination == n.id]
        out_arcs = [a for a in arcs if a.origin == n.id]
        for m in n.materials:
            terms = 2
            terms += sum(1 for a in in_arcs if m in a.materials)
            terms += sum(1 for a in out_arcs if m in a.materials)
            if n.kind == PLANT:
                terms += sum(1 for r in n.recipes if r.coefficients.get(m, 0.0) != 0.0)
            constraints += H - 1
            nonzeros += terms * (H - 1)

    for c in customers:
        in_arcs = [a for a in arcs if a.destination == c.id]
        for m in c.materials:
            constraints += H - 1
            nonzeros += (1 + sum(1 for a in in_arcs if m in a.materials)) * (H - 1)
    for s in suppliers:
        out_arcs = [a for a in arcs if a.origin == s.id]
        for m in s.materials:
            constraints += H - 1
            nonzeros += (1 + sum(1 for a in out_arcs if m in a.materials)) * (H - 1)

    for c in customers:
        for m in c.materials:
            series = model.orders.get(m, c.id)
            constraints += H - 1
            nonzeros += 3 * (H - 1)
            if series:
                nonzeros += sum(1 for t in range(1, H) if series.quantity[t] > 0)

    if config.terminal == "hard":
        constraints += inv_mats
        nonzeros += inv_mats
    else:
        constraints += 2 * inv_mats
        nonzeros += 4 * inv_mats

    if config.inventory_floor == "nid":
        for n in inv_nodes:
            inv = n.inventory
            for m in n.materials:
                for t in range(1, H):
                    floor = inv.floor(m, t)
                    cap = inv.capacity[m][t]
                    constraints += 4
                    nonzeros += 2  # relu1
                    nonzeros += 2 + (1 if floor != cap else 0)  # relu2
                    nonzeros += 1 + (1 if floor != 0 else 0)  # relu3
                    nonzeros += 1  # relu4

    if config.ftc:
        for a in arcs:
            for m in a.materials:
                for t in range(1, H):
                    if a.lower[m][t] > 0:
                        constraints += 1
                        nonzeros += 2
                    constraints += 1
                    nonzeros += 1 + (1 if a.upper[m][t] != 0 else 0)

    if config.sla != "off":
        for s in suppliers:
            if not s.sla_required:
                continue
            for m in s.materials:
                for t in range(1, H):
                    if config.sla == "simple":
                        width = 1
                    else:
                        if t + s.sla_window[m][t] > H - 1:
                            continue
                        width = s.sla_window[m][t] + 1
                    if s.sla_min[m][t] > 0:
                        constraints += 1
                        nonzeros += width + 1
                    constraints += 1
                    nonzeros += width + (1 if s.buy_upper[m][t] != 0 else 0)

    if config.shared_volume:
        for n in inv_nodes:
            if n.inventory.shared_capacity is not None:
                constraints += H - 1
                nonzeros += len(n.materials) * (H - 1)

    return DimensionReport(continuous, binary, constraints, nonzeros)


def dimensions_of(instance: MilpInstance) -> DimensionReport:
    return DimensionReport(
        continuous_count=instance.num_columns - instance.num_binary,
        binary_count=instance.num_binary,
        constraint_count=instance.num_rows,
        nonzero_count=instance.num_nonzeros,
    )


# -- solution decoding --------------------------------------------------------


@dataclass
class ScheduleReport:
    """Decoded time series per node/arc/material plus order decisions."""

    horizon: int
    procurement: dict = field(default_factory=dict)  # (m, supplier) -> tuple
    production: dict = field(default_factory=dict)  # (plant, recipe) -> tuple
    production_starts: dict = field(default_factory=dict)  # PATP only
    production_ends: dict = field(default_factory=dict)
    shipments_in: dict = field(default_factory=dict)  # (m, arc) -> tuple (dispatch)
    shipments_out: dict = field(default_factory=dict)  # (m, arc) -> tuple (arrival)
    inventory: dict = field(default_factory=dict)  # (m, node) -> tuple
    demand_met: dict = field(default_factory=dict)  # (m, customer) -> tuple
    unmet: dict = field(default_factory=dict)  # (m, customer) -> tuple
    cancellations: list = field(default_factory=list)  # (m, customer, t), y == 1
    flow_active: dict = field(default_factory=dict)  # (m, arc) -> tuple, FTC only
    terminal_deviation: dict = field(default_factory=dict)  # (m, node) -> float
    floor_shortfall: dict = field(default_factory=dict)  # (m, node) -> tuple
    objective: float = 0.0  # recomputed from the schedule and model prices
    solver_objective: float = 0.0


def extract_schedule(
    model: NetworkModel,
    catalog: VariableCatalog,
    solution: Solution,
    config: ExtensionConfig | None = None,
) -> ScheduleReport:
    """Decode raw column values into typed schedules.

    The report's objective is recomputed from the decoded series and the
    model's economic tables, independently of the solver's dot product.
    """
    config = config or ExtensionConfig()
    if solution.values is None:
        raise ValueError(f"solution carries no values (status={solution.status})")
    if len(solution.values) != len(catalog):
        raise ValueError(
            f"catalog has {len(catalog)} columns but solution has {len(solution.values)}"
        )
    H = model.grid.period_count
    x = solution.values

    def series(family, *key) -> tuple:
        return tuple(float(x[catalog.index((family, *key, t))]) for t in range(H))

    report = ScheduleReport(horizon=H)
    for a in sorted(model.arcs, key=lambda a: a.id):
        for m in sorted(a.materials):
            report.shipments_in[(m, a.id)] = series("FIn", m, a.id)
            report.shipments_out[(m, a.id)] = series("FOut", m, a.id)
            if config.ftc:
                report.flow_active[(m, a.id)] = series("x", m, a.id)
    for p in sorted(model.plants, key=lambda n: n.id):
        for r in sorted(p.recipes, key=lambda r: r.id):
            if config.patp:
                report.production_starts[(p.id, r.id)] = series("ProdIn", p.id, r.id)
                report.production_ends[(p.id, r.id)] = series("ProdOut", p.id, r.id)
            else:
                report.production[(p.id, r.id)] = series("Prod", p.id, r.id)
    for n in sorted(model.inventory_nodes, key=lambda n: n.id):
        for m in sorted(n.materials):
            report.inventory[(m, n.id)] = series("Inv", m, n.id)
            if config.terminal == "fid":
                report.terminal_deviation[(m, n.id)] = float(x[catalog.index(("Dev", m, n.id))])
            if config.inventory_floor == "nid":
                report.floor_shortfall[(m, n.id)] = series("K", m, n.id)
    for s in sorted(model.suppliers, key=lambda n: n.id):
        for m in sorted(s.materials):
            report.procurement[(m, s.id)] = series("Buy", m, s.id)
    for c in sorted(model.customers, key=lambda n: n.id):
        for m in sorted(c.materials):
            report.demand_met[(m, c.id)] = series("Dem", m, c.id)
            report.unmet[(m, c.id)] = series("Unmet", m, c.id)
            orders = model.orders.get(m, c.id)
            if orders:
                for t in range(H):
                    idx = catalog.get(("y", m, c.id, t))
                    if idx is not None and x[idx] > 0.5:
                        report.cancellations.append((m, c.id, t))

    report.solver_objective = float(solution.objective) if solution.objective is not None else 0.0
    report.objective = schedule_objective(model, config, report)
    return report


def schedule_objective(model: NetworkModel, config: ExtensionConfig,
                       report: ScheduleReport) -> float:
    """Profit of a decoded schedule, recomputed from the model's price tables."""
    H = model.grid.period_count
    total = 0.0
    for (m, c), dem in report.demand_met.items():
        series = model.orders.get(m, c)
        price = series.price if series else (0.0,) * H
        late = series.late_cost if series else (0.0,) * H
        unmet = report.unmet[(m, c)]
        total += sum(price[t] * dem[t] - late[t] * unmet[t] for t in range(H))
    for (m, c, t) in report.cancellations:
        total -= model.orders.get(m, c).cancel_cost[t]
    for a in model.arcs:
        for m in sorted(a.materials):
            out = report.shipments_out[(m, a.id)]
            total -= sum(a.cost[m][t] * out[t] for t in range(H))
            if config.ftc:
                active = report.flow_active[(m, a.id)]
                total -= sum(a.fixed_cost[m][t] * active[t] for t in range(H))
    for s in model.suppliers:
        for m in sorted(s.materials):
            buy = report.procurement[(m, s.id)]
            total -= sum(s.buy_cost[m][t] * buy[t] for t in range(H))
    for p in model.plants:
        for r in p.recipes:
            prod = (report.production_starts if config.patp else report.production)[(p.id, r.id)]
            total -= sum(r.cost[t] * prod[t] for t in range(H))
    for n in model.inventory_nodes:
        for m in sorted(n.materials):
            inv = report.inventory[(m, n.id)]
            total -= sum(n.inventory.holding_cost[m][t] * inv[t] for t in range(H))
            if config.terminal == "fid":
                total -= n.inventory.deviation_penalty.get(m, 0.0) * report.terminal_deviation[(m, n.id)]
            if config.inventory_floor == "nid":
                k = report.floor_shortfall[(m, n.id)]
                total += sum(n.inventory.floor_penalty[m][t] * k[t] for t in range(H))
    return total
