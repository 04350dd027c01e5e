"""Standard-format writers: fixed-format MPS and an algebraic LP text dialect.

Output is byte-identical for identical instances. MPS carries the
minimization convention, so objective coefficients are negated and a header
comment records the original sense. Names wider than the 8-character MPS
field trigger a deterministic rename with a sidecar map.
"""

from __future__ import annotations

import math

from .instance import EQ, GE, LE, MilpInstance

_MPS_NAME_WIDTH = 8


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return format(v, ".12g")


def _needs_rename(names) -> bool:
    return any(len(n) > _MPS_NAME_WIDTH or " " in n for n in names)


def export_mps_with_map(instance: MilpInstance) -> tuple[str, dict[str, str]]:
    """Render fixed-format MPS; returns (text, original->short name map)."""
    instance.check()
    rename = _needs_rename(instance.col_names) or _needs_rename(
        r.name for r in instance.rows
    )
    name_map: dict[str, str] = {}
    if rename:
        col_names = [f"C{j:07d}" for j in range(instance.num_columns)]
        row_names = [f"R{i:07d}" for i in range(instance.num_rows)]
        for orig, short in zip(instance.col_names, col_names):
            name_map[orig] = short
        for row, short in zip(instance.rows, row_names):
            name_map[row.name] = short
    else:
        col_names = list(instance.col_names)
        row_names = [r.name for r in instance.rows]

    out = []
    out.append("* Objective sense: MAXIMIZE (coefficients negated; solve as MIN)")
    out.append(f"NAME          {instance.name[:_MPS_NAME_WIDTH]:<8s}")
    out.append("ROWS")
    out.append(" N  OBJ")
    sense_tag = {LE: "L", EQ: "E", GE: "G"}
    for i, row in enumerate(instance.rows):
        out.append(f" {sense_tag[row.sense]}  {row_names[i]}")

    by_col: list[list[tuple[str, float]]] = [[] for _ in range(instance.num_columns)]
    for i, row in enumerate(instance.rows):
        for col, coef in row.coefs:
            by_col[col].append((row_names[i], coef))

    out.append("COLUMNS")
    in_int = False

    def entry(col_name: str, pairs: list[tuple[str, float]]):
        for k in range(0, len(pairs), 2):
            chunk = pairs[k : k + 2]
            line = f"    {col_name:<8s}  {chunk[0][0]:<8s}  {_fmt(chunk[0][1]):<12s}"
            if len(chunk) == 2:
                line += f"   {chunk[1][0]:<8s}  {_fmt(chunk[1][1]):<12s}"
            out.append(line.rstrip())

    marker = 0
    for j in range(instance.num_columns):
        binary = instance.is_binary[j]
        if binary and not in_int:
            out.append(f"    MARKER{marker:02d}  'MARKER'                 'INTORG'")
            marker += 1
            in_int = True
        elif not binary and in_int:
            out.append(f"    MARKER{marker:02d}  'MARKER'                 'INTEND'")
            marker += 1
            in_int = False
        pairs = []
        if instance.objective[j] != 0.0:
            pairs.append(("OBJ", -instance.objective[j]))
        pairs.extend(by_col[j])
        if not pairs:
            pairs.append(("OBJ", 0.0))  # keep every column declared
        entry(col_names[j], pairs)
    if in_int:
        out.append(f"    MARKER{marker:02d}  'MARKER'                 'INTEND'")

    out.append("RHS")
    pairs = [
        (row_names[i], row.rhs)
        for i, row in enumerate(instance.rows)
        if row.rhs != 0.0
    ]
    for k in range(0, len(pairs), 2):
        chunk = pairs[k : k + 2]
        line = f"    RHS       {chunk[0][0]:<8s}  {_fmt(chunk[0][1]):<12s}"
        if len(chunk) == 2:
            line += f"   {chunk[1][0]:<8s}  {_fmt(chunk[1][1]):<12s}"
        out.append(line.rstrip())

    out.append("BOUNDS")
    for j in range(instance.num_columns):
        lo, hi = instance.lower[j], instance.upper[j]
        name = col_names[j]
        if lo == hi:
            out.append(f" FX BND       {name:<8s}  {_fmt(lo)}")
        elif instance.is_binary[j]:
            out.append(f" BV BND       {name:<8s}")
        else:
            if math.isinf(lo) and lo < 0:
                out.append(f" MI BND       {name:<8s}")
            elif lo != 0.0:
                out.append(f" LO BND       {name:<8s}  {_fmt(lo)}")
            if math.isfinite(hi):
                out.append(f" UP BND       {name:<8s}  {_fmt(hi)}")
    out.append("ENDATA")
    return "\n".join(out) + "\n", name_map


def export_mps(instance: MilpInstance) -> str:
    text, _ = export_mps_with_map(instance)
    return text


def export_lp_text(instance: MilpInstance) -> str:
    """Human-readable algebraic rendering (CPLEX-style LP dialect)."""
    instance.check()
    out = [f"\\ Problem: {instance.name}"]
    out.append("Maximize")

    def terms(pairs):
        parts = []
        for name, coef in pairs:
            sign = "-" if coef < 0 else "+"
            parts.append(f"{sign} {_fmt(abs(coef))} {name}")
        if not parts:
            return "0"
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else text

    obj_pairs = [
        (instance.col_names[j], instance.objective[j])
        for j in range(instance.num_columns)
        if instance.objective[j] != 0.0
    ]
    out.append(" obj: " + terms(obj_pairs))
    out.append("Subject To")
    op = {LE: "<=", EQ: "=", GE: ">="}
    for row in instance.rows:
        pairs = [(instance.col_names[c], k) for c, k in row.coefs]
        out.append(f" {row.name}: {terms(pairs)} {op[row.sense]} {_fmt(row.rhs)}")
    out.append("Bounds")
    for j in range(instance.num_columns):
        lo, hi = instance.lower[j], instance.upper[j]
        name = instance.col_names[j]
        if lo == hi:
            out.append(f" {name} = {_fmt(lo)}")
        elif math.isinf(lo) and math.isinf(hi):
            out.append(f" {name} free")
        elif math.isinf(hi):
            out.append(f" {name} >= {_fmt(lo)}")
        elif math.isinf(lo):
            out.append(f" -inf <= {name} <= {_fmt(hi)}")
        else:
            out.append(f" {_fmt(lo)} <= {name} <= {_fmt(hi)}")
    binaries = [instance.col_names[j] for j in range(instance.num_columns) if instance.is_binary[j]]
    if binaries:
        out.append("Binary")
        for k in range(0, len(binaries), 8):
            out.append(" " + " ".join(binaries[k : k + 8]))
    out.append("End")
    return "\n".join(out) + "\n"
