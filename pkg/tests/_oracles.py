"""Independent reference implementations used only to check the real ones.

* a dense full-tableau two-phase simplex (Bland's rule throughout), written
  against a different problem transformation than the production kernel;
* fixed-format MPS and LP-text readers for export round-trips.

Deliberately slow and simple.
"""

from __future__ import annotations

import math

import numpy as np

TOL = 1e-9


def _pivot(T, r, c):
    T[r] = T[r] / T[r, c]
    for i in range(T.shape[0]):
        if i != r and T[i, c] != 0.0:
            T[i] -= T[i, c] * T[r]


def _tableau_min(A, b, c):
    """min c@x, Ax = b, x >= 0, b >= 0. Returns (status, x) via full tableau."""
    m, n = A.shape
    # phase 1 with one artificial per row
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    basis = list(range(n, n + m))
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()

    def iterate(allowed):
        while True:
            col = -1
            for j in allowed:
                if j not in basis and T[m, j] < -TOL:
                    col = j
                    break
            if col < 0:
                return "optimal"
            row, best = -1, math.inf
            for i in range(m):
                if T[i, col] > TOL:
                    ratio = T[i, -1] / T[i, col]
                    if ratio < best - TOL or (abs(ratio - best) <= TOL and (row < 0 or basis[i] < basis[row])):
                        best, row = ratio, i
            if row < 0:
                return "unbounded"
            _pivot(T, row, col)
            basis[row] = col

    iterate(range(n + m))
    scale = 1.0 + (abs(b).max() if m else 0.0)
    if -T[m, -1] > 1e-7 * scale:
        return "infeasible", None
    # remove artificials from the basis where possible
    for i in range(m):
        if basis[i] >= n:
            for j in range(n):
                if abs(T[i, j]) > 1e-7:
                    _pivot(T, i, j)
                    basis[i] = j
                    break
    # phase 2 objective row
    T[m, :] = 0.0
    T[m, :n] = c
    for i in range(m):
        if basis[i] < n:
            T[m] -= c[basis[i]] * T[i]
    status = iterate(range(n))
    if status == "unbounded":
        return "unbounded", None
    x = np.zeros(n)
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i, -1]
    return "optimal", x


def dense_lp_oracle(A, senses, b, c, lb, ub):
    """min c@x st rows/senses/rhs and bounds. Returns (status, objective).

    Transforms to standard form (shift finite lower bounds, reflect
    upper-only columns, split free ones, add explicit upper-bound rows).
    """
    A = np.asarray(A, dtype=float)
    m, n = A.shape if A.size else (len(b), len(c))
    cols = []  # (kind, j, base) with kind in {shift, neg, pos_part, neg_part}
    col_vecs = []
    col_costs = []
    base = np.zeros(n)
    extra_rows = []
    for j in range(n):
        lo, hi = lb[j], ub[j]
        if math.isfinite(lo):
            base[j] = lo
            cols.append(("shift", j, lo))
            col_vecs.append(A[:, j].copy())
            col_costs.append(c[j])
            if math.isfinite(hi):
                extra_rows.append((len(cols) - 1, hi - lo))
        elif math.isfinite(hi):
            base[j] = hi
            cols.append(("neg", j, hi))
            col_vecs.append(-A[:, j])
            col_costs.append(-c[j])
        else:
            cols.append(("pos_part", j, 0.0))
            col_vecs.append(A[:, j].copy())
            col_costs.append(c[j])
            cols.append(("neg_part", j, 0.0))
            col_vecs.append(-A[:, j])
            col_costs.append(-c[j])
    b2 = np.asarray(b, dtype=float) - A @ base
    rows = [list(v) for v in np.array(col_vecs).T] if cols else [[] for _ in range(m)]
    senses2 = list(senses)
    rhs2 = list(b2)
    for k, (col_idx, cap) in enumerate(extra_rows):
        row = [0.0] * len(cols)
        row[col_idx] = 1.0
        rows.append(row)
        senses2.append(-1)
        rhs2.append(cap)
    # slacks
    n2 = len(cols)
    slack_count = sum(1 for s in senses2 if s != 0)
    A2 = np.zeros((len(rows), n2 + slack_count))
    for i, row in enumerate(rows):
        A2[i, :n2] = row
    k = 0
    for i, s in enumerate(senses2):
        if s < 0:
            A2[i, n2 + k] = 1.0
            k += 1
        elif s > 0:
            A2[i, n2 + k] = -1.0
            k += 1
    c2 = np.concatenate([np.asarray(col_costs, dtype=float), np.zeros(slack_count)])
    rhs_arr = np.asarray(rhs2)
    neg = rhs_arr < 0
    A2[neg] = -A2[neg]
    rhs_arr = np.abs(rhs_arr)
    status, x2 = _tableau_min(A2, rhs_arr, c2)
    if status != "optimal":
        return status, None
    x = base.copy()
    for idx, (kind, j, _basev) in enumerate(cols):
        if kind == "shift":
            x[j] += x2[idx]
        elif kind == "neg":
            x[j] -= x2[idx]
        elif kind == "pos_part":
            x[j] += x2[idx]
        else:
            x[j] -= x2[idx]
    return "optimal", float(np.dot(c, x))


# -- format readers -----------------------------------------------------------


def read_mps(text: str):
    """Parse the fixed-format MPS dialect written by the package.

    Returns a dict with minimize-sense arrays: names, c, rows (coefs, sense,
    rhs), bounds, binaries.
    """
    section = None
    problem_name = "parsed"
    row_sense: dict[str, str] = {}
    obj_row = None
    order: list[str] = []
    col_order: list[str] = []
    cols: dict[str, dict] = {}
    rhs: dict[str, float] = {}
    bounds: dict[str, list] = {}
    binaries: set[str] = set()
    integer_mode = False
    for line in text.splitlines():
        if not line or line.startswith("*"):
            continue
        if not line.startswith(" ") and not line.startswith("\t"):
            parts = line.split()
            section = parts[0]
            if section == "NAME" and len(parts) > 1:
                problem_name = parts[1]
            continue
        parts = line.split()
        if section == "ROWS":
            tag, name = parts
            if tag == "N":
                obj_row = name
            else:
                row_sense[name] = tag
                order.append(name)
        elif section == "COLUMNS":
            if len(parts) >= 3 and parts[1] == "'MARKER'":
                integer_mode = parts[2] == "'INTORG'"
                continue
            name = parts[0]
            if name not in cols:
                cols[name] = {}
                col_order.append(name)
                if integer_mode:
                    binaries.add(name)
            for k in range(1, len(parts) - 1, 2):
                cols[name][parts[k]] = float(parts[k + 1])
        elif section == "RHS":
            for k in range(1, len(parts) - 1, 2):
                rhs[parts[k]] = float(parts[k + 1])
        elif section == "BOUNDS":
            tag, _bnd, name = parts[0], parts[1], parts[2]
            value = float(parts[3]) if len(parts) > 3 else None
            bounds.setdefault(name, []).append((tag, value))
    n = len(col_order)
    c = np.zeros(n)
    lb = np.zeros(n)
    ub = np.full(n, math.inf)
    for j, name in enumerate(col_order):
        if name in binaries:
            lb[j], ub[j] = 0.0, 1.0
        for tag, value in bounds.get(name, []):
            if tag == "FX":
                lb[j] = ub[j] = value
            elif tag == "LO":
                lb[j] = value
            elif tag == "UP":
                ub[j] = value
            elif tag == "MI":
                lb[j] = -math.inf
            elif tag == "PL":
                ub[j] = math.inf
            elif tag == "BV":
                lb[j], ub[j] = 0.0, 1.0
        c[j] = cols[name].get(obj_row, 0.0)
    col_index = {name: j for j, name in enumerate(col_order)}
    rows = []
    sense_map = {"L": "<=", "E": "==", "G": ">="}
    for name in order:
        coefs = [
            (col_index[cn], table[name])
            for cn, table in cols.items()
            if name in table
        ]
        rows.append((name, sorted(coefs), sense_map[row_sense[name]], rhs.get(name, 0.0)))
    return {
        "name": problem_name,
        "columns": col_order,
        "c_min": c,
        "lb": lb,
        "ub": ub,
        "rows": rows,
        "binaries": [col_index[b] for b in sorted(binaries, key=col_index.get)],
    }


def read_lp_text(text: str):
    """Parse the package's LP dialect; returns a maximize-sense structure."""
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("\\")]
    section = None
    objective: dict[str, float] = {}
    rows = []
    bounds: dict[str, tuple] = {}
    binaries: list[str] = []
    maximize = None

    def parse_terms(expr: str):
        toks = expr.replace("+", " + ").replace("-", " - ").split()
        terms = {}
        sign, coef = 1.0, None
        for tok in toks:
            if tok == "+":
                sign, coef = 1.0, None
            elif tok == "-":
                sign, coef = -1.0, None
            else:
                try:
                    coef = float(tok)
                except ValueError:
                    terms[tok] = terms.get(tok, 0.0) + sign * (1.0 if coef is None else coef)
                    sign, coef = 1.0, None
        return terms

    for line in lines:
        low = line.strip().lower()
        if low in ("maximize", "minimize", "subject to", "bounds", "binary", "end"):
            section = low
            if low in ("maximize", "minimize"):
                maximize = low == "maximize"
            continue
        body = line.strip()
        if section in ("maximize", "minimize"):
            _, expr = body.split(":", 1)
            objective.update(parse_terms(expr))
        elif section == "subject to":
            name, rest = body.split(":", 1)
            for op in ("<=", ">=", "="):
                if op in rest:
                    left, right = rest.rsplit(op, 1)
                    rows.append((name.strip(), parse_terms(left), "==" if op == "=" else op, float(right)))
                    break
        elif section == "bounds":
            if body.endswith(" free"):
                bounds[body[:-5].strip()] = (-math.inf, math.inf)
            elif "<=" in body:
                parts = [p.strip() for p in body.split("<=")]
                if len(parts) == 3:
                    lo = -math.inf if parts[0] == "-inf" else float(parts[0])
                    bounds[parts[1]] = (lo, float(parts[2]))
                else:
                    bounds[parts[0]] = (0.0, float(parts[1]))
            elif "=" in body and ">=" not in body:
                name, v = body.split("=")
                bounds[name.strip()] = (float(v), float(v))
            elif ">=" in body:
                name, v = body.split(">=")
                bounds[name.strip()] = (float(v), math.inf)
        elif section == "binary":
            binaries.extend(body.split())
    return {
        "maximize": maximize,
        "objective": objective,
        "rows": rows,
        "bounds": bounds,
        "binaries": binaries,
    }


def instance_from_mps(parsed):
    """Rebuild a MilpInstance (maximize sense) from a parsed MPS dict."""
    from rechain.milp import MilpInstance

    inst = MilpInstance(name=parsed.get("name", "parsed"))
    for j, name in enumerate(parsed["columns"]):
        inst.add_column(
            name,
            parsed["lb"][j],
            parsed["ub"][j],
            -parsed["c_min"][j],  # writer negated for the MIN convention
            binary=j in set(parsed["binaries"]),
        )
    for name, coefs, sense, rhs in parsed["rows"]:
        inst.add_row(name, coefs, sense, rhs)
    return inst


def instance_from_lp(parsed):
    from rechain.milp import MilpInstance

    inst = MilpInstance(name="parsed")
    names = list(parsed["bounds"])
    binaries = set(parsed["binaries"])
    for name in names:
        lo, hi = parsed["bounds"][name]
        inst.add_column(name, lo, hi, parsed["objective"].get(name, 0.0), binary=name in binaries)
    for name, terms, sense, rhs in parsed["rows"]:
        coefs = [(inst.column_index(v), k) for v, k in terms.items()]
        inst.add_row(name, coefs, sense, rhs)
    return inst
