"""Branch-and-bound over LP relaxations, plus a brute-force oracle.

Deterministic by construction: most-fractional branching with lowest column
index on ties, best-bound node selection with FIFO on ties, and no random
state anywhere.
"""

from __future__ import annotations

import heapq
import itertools
import time

import numpy as np

from .instance import MilpError, MilpInstance, Solution, SolveOptions
from .simplex import solve_lp_arrays


def _check_binaries(instance: MilpInstance) -> list[int]:
    bins = instance.binary_indices()
    for j in bins:
        if not (np.isfinite(instance.lower[j]) and np.isfinite(instance.upper[j])):
            raise MilpError(f"binary column {instance.col_names[j]!r} has infinite bounds")
    return bins


def solve(instance: MilpInstance, options: SolveOptions | None = None) -> Solution:
    """Solve the MILP to (gap-limited) optimality.

    With mip_gap == 0 the search runs until the node list is empty, so the
    returned incumbent is exactly optimal up to LP arithmetic.
    """
    options = options or SolveOptions()
    instance.check()
    bins = _check_binaries(instance)
    t0 = time.perf_counter()
    lb0, ub0, c_obj, _, _ = instance.arrays()
    int_tol = options.integrality_tol

    best_x: np.ndarray | None = None
    best_obj = -np.inf
    node_count = 0
    iter_count = 0
    seq = itertools.count()

    # Heap of (-bound, seq, lower, upper); bounds inherited from the parent LP.
    heap: list = [(-np.inf, next(seq), lb0, ub0)]
    status = None

    while heap:
        if options.should_stop is not None and options.should_stop():
            status = "limit"
            break
        if options.node_limit is not None and node_count >= options.node_limit:
            status = "limit"
            break
        if options.time_limit is not None and time.perf_counter() - t0 > options.time_limit:
            status = "limit"
            break
        neg_bound, _, lb, ub = heapq.heappop(heap)
        bound = -neg_bound
        if best_x is not None and bound <= best_obj:
            continue
        if (
            best_x is not None
            and options.mip_gap > 0
            and bound - best_obj <= options.mip_gap * max(1.0, abs(best_obj))
        ):
            status = "optimal"
            break
        node_count += 1
        res = solve_lp_arrays(instance, lb, ub, options)
        iter_count += res.iterations
        if res.status == "infeasible":
            continue
        if res.status == "unbounded":
            return Solution(
                status="unbounded",
                node_count=node_count,
                iteration_count=iter_count,
                wall_time=time.perf_counter() - t0,
                diagnostic="LP relaxation unbounded",
            )
        if res.status == "limit":
            status = "limit"
            break
        obj = res.objective
        if best_x is not None and obj <= best_obj:
            continue
        frac_j = -1
        frac_best = int_tol
        for j in bins:
            f = res.x[j] - np.floor(res.x[j])
            dist = min(f, 1.0 - f)
            if dist > frac_best:
                frac_best = dist
                frac_j = j
        if frac_j < 0:
            best_x = res.x.copy()
            for j in bins:
                best_x[j] = round(best_x[j])
            best_obj = float(c_obj @ best_x)  # consistent with the rounded point
            if options.progress is not None:
                top = max((-h[0] for h in heap), default=best_obj)
                options.progress(node_count, max(top, best_obj), best_obj)
            continue
        lb_hi = lb.copy()
        ub_lo = ub.copy()
        ub_lo[frac_j] = 0.0
        lb_hi[frac_j] = 1.0
        heapq.heappush(heap, (-obj, next(seq), lb, ub_lo))
        heapq.heappush(heap, (-obj, next(seq), lb_hi, ub))
        if options.progress is not None:
            top = max((-h[0] for h in heap), default=best_obj)
            if best_x is not None:
                top = max(top, best_obj)
            options.progress(node_count, top, best_obj if best_x is not None else None)

    wall = time.perf_counter() - t0
    if status == "limit":
        open_bound = max((-h[0] for h in heap), default=-np.inf)
        if best_x is not None:
            bound = max(best_obj, open_bound)
            gap = (bound - best_obj) / max(1.0, abs(best_obj))
            return Solution(
                status="limit",
                objective=best_obj,
                values=best_x,
                bound=bound,
                gap=gap,
                node_count=node_count,
                iteration_count=iter_count,
                wall_time=wall,
                diagnostic="node/time limit reached with incumbent",
            )
        return Solution(
            status="limit",
            bound=open_bound if np.isfinite(open_bound) else None,
            node_count=node_count,
            iteration_count=iter_count,
            wall_time=wall,
            diagnostic="node/time limit reached without incumbent",
        )
    if best_x is None:
        return Solution(
            status="infeasible",
            node_count=node_count,
            iteration_count=iter_count,
            wall_time=wall,
        )
    if status == "optimal" and options.mip_gap > 0:
        open_bound = max((-h[0] for h in heap), default=best_obj)
        bound = max(best_obj, open_bound)
    else:
        bound = best_obj
    gap = (bound - best_obj) / max(1.0, abs(best_obj))
    return Solution(
        status="optimal",
        objective=best_obj,
        values=best_x,
        bound=bound,
        gap=gap,
        node_count=node_count,
        iteration_count=iter_count,
        wall_time=wall,
    )


def brute_force(
    instance: MilpInstance,
    max_binaries: int = 12,
    options: SolveOptions | None = None,
) -> Solution:
    """Exact reference: enumerate every binary assignment and solve each LP.

    Assignments are visited in lexicographic order over ascending column
    index; strictly better objectives replace the incumbent, so the result
    is deterministic.
    """
    options = options or SolveOptions()
    instance.check()
    bins = _check_binaries(instance)
    if len(bins) > max_binaries:
        raise MilpError(f"{len(bins)} binaries exceed the brute-force cap {max_binaries}")
    t0 = time.perf_counter()
    lb0, ub0, _, _, _ = instance.arrays()

    # Respect pre-fixed binaries: enumerate only genuinely free ones.
    free_bins = [j for j in bins if lb0[j] < ub0[j]]
    best: Solution | None = None
    best_obj = -np.inf
    iter_count = 0
    unbounded = False
    for assignment in itertools.product((0.0, 1.0), repeat=len(free_bins)):
        lb = lb0.copy()
        ub = ub0.copy()
        for j, v in zip(free_bins, assignment):
            lb[j] = v
            ub[j] = v
        res = solve_lp_arrays(instance, lb, ub, options)
        iter_count += res.iterations
        if res.status == "unbounded":
            unbounded = True
            continue
        if res.status != "optimal":
            continue
        if res.objective > best_obj:
            best_obj = res.objective
            best = Solution(status="optimal", objective=res.objective, values=res.x.copy())
    wall = time.perf_counter() - t0
    if unbounded:
        return Solution(status="unbounded", wall_time=wall, iteration_count=iter_count)
    if best is None:
        return Solution(status="infeasible", wall_time=wall, iteration_count=iter_count)
    best.bound = best.objective
    best.gap = 0.0
    best.iteration_count = iter_count
    best.node_count = 2 ** len(free_bins)
    best.wall_time = wall
    return best
