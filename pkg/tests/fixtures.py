"""Shared model fixtures, defined as documents so tests exercise the codecs."""

from __future__ import annotations

from rechain.documents import model_from_dict


def minimal_chain_doc(periods=4, lead1=1, lead2=0, order_qty=10, price=8,
                      late_cost=1, cancel_cost=64, prod_cap=32, flow_cap=64,
                      order_periods=None):
    """Supplier -> plant (RAW -> PROD) -> customer, with an order every period."""
    if order_periods is None:
        order_periods = list(range(periods))
    orders = []
    for t in order_periods:
        entry = {"material": "PROD", "customer": "C1", "period": t, "quantity": order_qty}
        if not orders:
            entry.update({"price": price, "late_cost": late_cost, "cancel_cost": cancel_cost,
                          "preplanned_met": order_qty if 0 in order_periods else 0.0})
        orders.append(entry)
    return {
        "schema_version": 1,
        "time": {"periods": periods, "period_hours": 24},
        "materials": ["PROD", "RAW"],
        "nodes": [
            {"id": "S1", "kind": "supplier", "materials": ["RAW"],
             "buy_upper": {"RAW": flow_cap}, "buy_cost": {"RAW": 1}},
            {"id": "P1", "kind": "plant", "materials": ["PROD", "RAW"],
             "inventory": {"capacity": {"PROD": 64, "RAW": 64},
                           "initial": {"PROD": 16, "RAW": 16},
                           "holding_cost": {"PROD": 0.125, "RAW": 0.125},
                           "deviation_penalty": {"PROD": 4, "RAW": 4},
                           "floor_penalty": {"PROD": 2, "RAW": 2}},
             "recipes": [{"id": "R1", "coefficients": {"RAW": -1, "PROD": 1},
                          "upper": prod_cap, "cost": 1}]},
            {"id": "C1", "kind": "customer", "materials": ["PROD"]},
        ],
        "arcs": [
            {"id": "a1", "origin": "S1", "destination": "P1", "materials": ["RAW"],
             "lead_time": {"RAW": lead1}, "upper": {"RAW": flow_cap},
             "cost": {"RAW": 0.25}, "fixed_cost": {"RAW": 8}},
            {"id": "a2", "origin": "P1", "destination": "C1", "materials": ["PROD"],
             "lead_time": {"PROD": lead2}, "upper": {"PROD": flow_cap},
             "cost": {"PROD": 0.25}, "fixed_cost": {"PROD": 8}},
        ],
        "orders": orders,
    }


def minimal_chain(**kw):
    return model_from_dict(minimal_chain_doc(**kw))


def dual_site_doc(periods=20, order_qty=24):
    """Two plants, two warehouses, two transport modes; nominal plan feasible."""
    return {
        "schema_version": 1,
        "time": {"periods": periods, "period_hours": 12},
        "materials": ["GOOD", "INT", "RAW"],
        "defaults": {"lead_time": 1},
        "nodes": [
            {"id": "S1", "kind": "supplier", "materials": ["RAW"],
             "buy_upper": {"RAW": 64}, "buy_cost": {"RAW": 1}},
            {"id": "PL1", "kind": "plant", "materials": ["INT", "RAW"],
             "inventory": {"capacity": {"INT": 64, "RAW": 64},
                           "initial": {"INT": 16, "RAW": 32},
                           "holding_cost": {"INT": 0.0625, "RAW": 0.0625},
                           "deviation_penalty": {"INT": 4, "RAW": 4},
                           "floor_penalty": {"INT": 2, "RAW": 2}},
             "recipes": [{"id": "MAKE_INT", "coefficients": {"RAW": -1, "INT": 1},
                          "upper": 16, "cost": 1}]},
            {"id": "PL2", "kind": "plant", "materials": ["GOOD", "INT"],
             "inventory": {"capacity": {"GOOD": 64, "INT": 64},
                           "initial": {"GOOD": 16, "INT": 16},
                           "holding_cost": {"GOOD": 0.0625, "INT": 0.0625},
                           "deviation_penalty": {"GOOD": 4, "INT": 4},
                           "floor_penalty": {"GOOD": 2, "INT": 2}},
             "recipes": [{"id": "MAKE_GOOD", "coefficients": {"INT": -1, "GOOD": 1},
                          "upper": 16, "cost": 1}]},
            {"id": "W1", "kind": "warehouse", "materials": ["INT"],
             "inventory": {"capacity": {"INT": 96}, "initial": {"INT": 32},
                           "holding_cost": {"INT": 0.0625},
                           "deviation_penalty": {"INT": 4}, "floor_penalty": {"INT": 2}}},
            {"id": "W2", "kind": "warehouse", "materials": ["INT"],
             "inventory": {"capacity": {"INT": 96}, "initial": {"INT": 16},
                           "holding_cost": {"INT": 0.0625},
                           "deviation_penalty": {"INT": 4}, "floor_penalty": {"INT": 2}}},
            {"id": "C1", "kind": "customer", "materials": ["INT"]},
            {"id": "C2", "kind": "customer", "materials": ["GOOD"]},
        ],
        "arcs": [
            {"id": "s1-pl1", "origin": "S1", "destination": "PL1", "materials": ["RAW"],
             "upper": {"RAW": 64}, "cost": {"RAW": 0.25}, "fixed_cost": {"RAW": 4}},
            {"id": "pl1-w1", "origin": "PL1", "destination": "W1", "materials": ["INT"],
             "upper": {"INT": 32}, "cost": {"INT": 0.25}, "fixed_cost": {"INT": 4}},
            {"id": "w1-w2-road", "origin": "W1", "destination": "W2", "materials": ["INT"],
             "mode": "road", "lead_time": {"INT": 2},
             "upper": {"INT": 32}, "cost": {"INT": 0.25}, "fixed_cost": {"INT": 4}},
            {"id": "w1-w2-air", "origin": "W1", "destination": "W2", "materials": ["INT"],
             "mode": "air", "lead_time": {"INT": 1},
             "upper": {"INT": 32}, "cost": {"INT": 1}, "fixed_cost": {"INT": 8}},
            {"id": "w2-pl2", "origin": "W2", "destination": "PL2", "materials": ["INT"],
             "upper": {"INT": 32}, "cost": {"INT": 0.25}, "fixed_cost": {"INT": 4}},
            {"id": "w1-c1", "origin": "W1", "destination": "C1", "materials": ["INT"],
             "upper": {"INT": 32}, "cost": {"INT": 0.25}, "fixed_cost": {"INT": 4}},
            {"id": "pl2-c2", "origin": "PL2", "destination": "C2", "materials": ["GOOD"],
             "upper": {"GOOD": 32}, "cost": {"GOOD": 0.25}, "fixed_cost": {"GOOD": 4}},
        ],
        "orders":
            [{"material": "INT", "customer": "C1", "period": t, "quantity": order_qty,
              "price": 8, "late_cost": 1, "cancel_cost": 128}
             for t in (4, 8, 12, 16) if t < periods]
            + [{"material": "GOOD", "customer": "C2", "period": t, "quantity": order_qty,
                "price": 16, "late_cost": 1, "cancel_cost": 128}
               for t in (6, 10, 14, 18) if t < periods],
    }


def dual_site(**kw):
    return model_from_dict(dual_site_doc(**kw))
