"""Solver-agnostic sparse MILP container and solve metadata types."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

LE, EQ, GE = "<=", "==", ">="
_SENSES = (LE, EQ, GE)

INF = math.inf


class MilpError(ValueError):
    """Raised for malformed instances or invalid solve requests."""


@dataclass
class Row:
    name: str
    coefs: list  # list[(col_index, coefficient)], no explicit zeros
    sense: str
    rhs: float


class MilpInstance:
    """A mixed-integer linear program in sparse row form.

    Columns carry bounds, an objective coefficient, and a binary flag; rows
    are sparse coefficient lists with a sense and right-hand side. The
    optimization sense is always maximize. Column and row order is part of
    the contract: exports and solves are deterministic in it.
    """

    def __init__(self, name: str = "MILP"):
        self.name = name
        self.col_names: list[str] = []
        self.lower: list[float] = []
        self.upper: list[float] = []
        self.objective: list[float] = []
        self.is_binary: list[bool] = []
        self.rows: list[Row] = []
        self._col_index: dict[str, int] = {}
        self._row_names: set[str] = set()

    # -- construction -----------------------------------------------------

    def add_column(
        self,
        name: str,
        lower: float = 0.0,
        upper: float = INF,
        objective: float = 0.0,
        binary: bool = False,
    ) -> int:
        if name in self._col_index:
            raise MilpError(f"duplicate column name {name!r}")
        for v, what in ((lower, "lower bound"), (upper, "upper bound"), (objective, "objective")):
            if isinstance(v, float) and math.isnan(v):
                raise MilpError(f"NaN {what} on column {name!r}")
        if lower > upper:
            raise MilpError(f"column {name!r} has lower bound {lower} > upper bound {upper}")
        if binary and not (0.0 <= lower and upper <= 1.0):
            raise MilpError(f"binary column {name!r} must have bounds within [0, 1]")
        idx = len(self.col_names)
        self.col_names.append(name)
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        self.objective.append(float(objective))
        self.is_binary.append(bool(binary))
        self._col_index[name] = idx
        return idx

    def add_row(self, name: str, coefs, sense: str, rhs: float) -> int:
        if name in self._row_names:
            raise MilpError(f"duplicate row name {name!r}")
        if sense not in _SENSES:
            raise MilpError(f"row {name!r} has unknown sense {sense!r}")
        if math.isnan(rhs) or math.isinf(rhs):
            raise MilpError(f"row {name!r} has non-finite rhs")
        clean = []
        for col, coef in coefs:
            if not 0 <= col < len(self.col_names):
                raise MilpError(f"row {name!r} references unknown column index {col}")
            coef = float(coef)
            if math.isnan(coef) or math.isinf(coef):
                raise MilpError(f"row {name!r} has non-finite coefficient on column {col}")
            if coef != 0.0:
                clean.append((col, coef))
        self.rows.append(Row(name=name, coefs=clean, sense=sense, rhs=float(rhs)))
        self._row_names.add(name)
        return len(self.rows) - 1

    def fix_column(self, index: int, value: float) -> None:
        """Pin a column to a constant (used for boundary conditions)."""
        self.lower[index] = float(value)
        self.upper[index] = float(value)

    def column_index(self, name: str) -> int:
        return self._col_index[name]

    # -- introspection ----------------------------------------------------

    @property
    def num_columns(self) -> int:
        return len(self.col_names)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def num_binary(self) -> int:
        return sum(self.is_binary)

    @property
    def num_nonzeros(self) -> int:
        return sum(len(r.coefs) for r in self.rows)

    def binary_indices(self) -> list[int]:
        return [j for j, b in enumerate(self.is_binary) if b]

    def check(self) -> None:
        """Validate container invariants; raises MilpError on violation."""
        for j, name in enumerate(self.col_names):
            if self.lower[j] > self.upper[j]:
                raise MilpError(f"column {name!r}: lower > upper")
            if self.is_binary[j] and not (0.0 <= self.lower[j] and self.upper[j] <= 1.0):
                raise MilpError(f"binary column {name!r} outside [0, 1]")
        if len(self._col_index) != len(self.col_names):
            raise MilpError("column names are not unique")
        if len(self._row_names) != len(self.rows):
            raise MilpError("row names are not unique")

    def dense_matrix(self) -> np.ndarray:
        a = np.zeros((self.num_rows, self.num_columns))
        for i, row in enumerate(self.rows):
            for col, coef in row.coefs:
                a[i, col] = coef
        return a

    def arrays(self):
        """Bounds / objective / row data as numpy arrays (shared layout for solvers)."""
        lb = np.asarray(self.lower, dtype=np.float64)
        ub = np.asarray(self.upper, dtype=np.float64)
        c = np.asarray(self.objective, dtype=np.float64)
        rhs = np.asarray([r.rhs for r in self.rows], dtype=np.float64)
        sense = np.asarray(
            [{LE: -1, EQ: 0, GE: 1}[r.sense] for r in self.rows], dtype=np.int8
        )
        return lb, ub, c, rhs, sense

    def row_residuals(self, x: np.ndarray) -> np.ndarray:
        """Signed constraint violations for a candidate point (0 when satisfied)."""
        res = np.zeros(self.num_rows)
        for i, row in enumerate(self.rows):
            lhs = sum(coef * x[col] for col, coef in row.coefs)
            if row.sense == LE:
                res[i] = max(0.0, lhs - row.rhs)
            elif row.sense == GE:
                res[i] = max(0.0, row.rhs - lhs)
            else:
                res[i] = abs(lhs - row.rhs)
        return res

    def copy(self) -> "MilpInstance":
        other = MilpInstance(self.name)
        other.col_names = list(self.col_names)
        other.lower = list(self.lower)
        other.upper = list(self.upper)
        other.objective = list(self.objective)
        other.is_binary = list(self.is_binary)
        other.rows = [Row(r.name, list(r.coefs), r.sense, r.rhs) for r in self.rows]
        other._col_index = dict(self._col_index)
        other._row_names = set(self._row_names)
        return other


@dataclass(frozen=True)
class SolveOptions:
    """Tolerances and limits for the embedded solver.

    The solver is deterministic: no seeds, fixed branching (most-fractional,
    lowest index on ties) and node selection (best bound, FIFO on ties).
    """

    feasibility_tol: float = 1e-6
    integrality_tol: float = 1e-6
    mip_gap: float = 1e-6
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    branching: str = "most-fractional"
    node_selection: str = "best-bound"
    lp_iteration_limit: int = 200_000
    should_stop: Optional[Callable[[], bool]] = None
    progress: Optional[Callable[[int, float, Optional[float]], None]] = None

    def __post_init__(self):
        if self.feasibility_tol <= 0 or self.integrality_tol <= 0:
            raise MilpError("tolerances must be positive")
        if self.mip_gap < 0:
            raise MilpError("mip gap must be nonnegative")
        if self.branching != "most-fractional":
            raise MilpError(f"unknown branching rule {self.branching!r}")
        if self.node_selection != "best-bound":
            raise MilpError(f"unknown node selection {self.node_selection!r}")


@dataclass
class Solution:
    """Outcome of a solve: status, objective, and column values.

    status is one of "optimal", "feasible", "infeasible", "unbounded",
    "limit". values is None when no feasible point was found.
    """

    status: str
    objective: Optional[float] = None
    values: Optional[np.ndarray] = None
    bound: Optional[float] = None
    gap: Optional[float] = None
    node_count: int = 0
    iteration_count: int = 0
    wall_time: float = 0.0
    diagnostic: str = ""

    @property
    def feasible(self) -> bool:
        return self.status in ("optimal", "feasible") or (
            self.status == "limit" and self.values is not None
        )
