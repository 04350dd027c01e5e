"""LP relaxation solver: instance-level wrapper around the simplex kernels.

Two kernel lanes exist: a Cython extension (``_simplex_cy``) and a pure
numpy implementation (``_simplex_py``). The compiled lane is selected at
import when available; set ``RECHAIN_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass

import numpy as np

from . import _simplex_py
from .instance import MilpInstance, Solution, SolveOptions

if os.environ.get("RECHAIN_PURE", "") not in ("", "0"):
    _kernel = _simplex_py
    KERNEL = "pure"
else:
    try:
        from . import _simplex_cy as _kernel  # type: ignore[attr-defined]

        KERNEL = "compiled"
    except ImportError:
        _kernel = _simplex_py
        KERNEL = "pure"

_STATUS = {0: "optimal", 1: "infeasible", 2: "unbounded", 3: "limit"}


@dataclass
class LpResult:
    status: str
    x: np.ndarray | None
    objective: float | None
    iterations: int
    reduced_costs: np.ndarray | None  # maximize sense, structural columns
    basic: np.ndarray | None  # bool per column


def solve_lp_arrays(
    instance: MilpInstance,
    lower: np.ndarray,
    upper: np.ndarray,
    options: SolveOptions,
    kernel=None,
) -> LpResult:
    """Solve the LP relaxation with the given (possibly tightened) bounds."""
    kern = kernel if kernel is not None else _kernel
    _, _, c_max, rhs, sense = instance.arrays()
    n = instance.num_columns
    free = lower < upper
    fixed_vals = np.where(free, 0.0, lower)

    dense = instance.dense_matrix()
    rhs_adj = rhs - dense @ fixed_vals if instance.num_rows else rhs.copy()
    a_free = dense[:, free]

    # Rows with no free columns are pure consistency checks.
    keep = np.ones(instance.num_rows, dtype=bool)
    ftol = options.feasibility_tol
    for i in range(instance.num_rows):
        if a_free.shape[1] == 0 or not np.any(a_free[i] != 0.0):
            keep[i] = False
            resid = rhs_adj[i]
            tol = ftol * (1.0 + abs(rhs[i]))
            s = sense[i]
            if (s == 0 and abs(resid) > tol) or (s < 0 and resid < -tol) or (s > 0 and resid > tol):
                return LpResult("infeasible", None, None, 0, None, None)

    a_free = a_free[keep]
    rhs_k = rhs_adj[keep]
    sense_k = sense[keep]

    n_free = int(free.sum())
    if n_free == 0:
        x = fixed_vals
        return LpResult(
            "optimal", x, float(c_max @ x), 0, np.zeros(n), np.zeros(n, dtype=bool)
        )

    c_min = -c_max[free]  # kernel minimizes
    status_code, x_free, _, iters, red_min, vstat = kern.run_simplex(
        np.ascontiguousarray(a_free),
        np.ascontiguousarray(rhs_k),
        np.ascontiguousarray(sense_k),
        np.ascontiguousarray(c_min),
        np.ascontiguousarray(lower[free]),
        np.ascontiguousarray(upper[free]),
        options.feasibility_tol,
        1e-9,
        options.lp_iteration_limit,
    )
    status = _STATUS[status_code]
    if status in ("infeasible", "limit") and status_code != 0:
        if status == "limit":
            return LpResult("limit", None, None, iters, None, None)
        return LpResult("infeasible", None, None, iters, None, None)
    x = fixed_vals.copy()
    x[free] = x_free
    if status == "unbounded":
        return LpResult("unbounded", None, None, iters, None, None)
    red = np.zeros(n)
    red[free] = -np.asarray(red_min)  # back to maximize sense
    basic = np.zeros(n, dtype=bool)
    basic[np.nonzero(free)[0][np.asarray(vstat) == 2]] = True
    return LpResult("optimal", x, float(c_max @ x), iters, red, basic)


def solve_lp(instance: MilpInstance, options: SolveOptions | None = None) -> Solution:
    """Solve the instance with integrality relaxed.

    Binaries participate as continuous columns in [lb, ub]. Returns a
    Solution whose reduced-cost certificate has already been computed.
    """
    options = options or SolveOptions()
    instance.check()
    t0 = time.perf_counter()
    lb, ub, _, _, _ = instance.arrays()
    res = solve_lp_arrays(instance, lb, ub, options)
    wall = time.perf_counter() - t0
    sol = Solution(
        status=res.status,
        objective=res.objective,
        values=res.x,
        bound=res.objective,
        gap=0.0 if res.status == "optimal" else None,
        node_count=0,
        iteration_count=res.iterations,
        wall_time=wall,
    )
    if res.status == "limit":
        sol.diagnostic = "simplex iteration limit or numeric breakdown"
    return sol
