"""Pure-Python (numpy) bounded-variable primal simplex kernel.

This is the fallback lane for the compiled kernel in ``_simplex_cy``; both
implement the same algorithm with the same pivot rules:

* two phases, artificial columns only on rows whose logical starts outside
  its bounds;
* Dantzig pricing with a Bland's-rule fallback after a degeneracy stall;
* ratio test with bound flips; ties prefer the largest pivot magnitude,
  then the lowest basic column index;
* explicit basis inverse, refactorized every 64 pivots with a dense
  recomputation of the basic right-hand side.

Status codes: 0 optimal, 1 infeasible, 2 unbounded, 3 iteration/numeric limit.
"""

from __future__ import annotations

import numpy as np

OPTIMAL, INFEASIBLE, UNBOUNDED, LIMIT = 0, 1, 2, 3

_PIV_EPS = 1e-9
_DEGEN_EPS = 1e-10
_STALL_LIMIT = 120
_REFACTOR_EVERY = 64

AT_LOWER, AT_UPPER, BASIC, FREE_NB = 0, 1, 2, 3


class _State:
    __slots__ = (
        "A", "b", "n", "m", "K", "lo", "hi", "xn", "vstat", "basis", "xB",
        "Binv", "cost", "art_row", "art_sig", "n_art", "iters", "pivots",
        "bland", "stall",
    )


def _ftran(s: _State, j: int) -> np.ndarray:
    n, m = s.n, s.m
    if j < n:
        return s.Binv @ s.A[:, j]
    if j < n + m:
        return s.Binv[:, j - n].copy()
    k = j - n - m
    return s.art_sig[k] * s.Binv[:, s.art_row[k]]


def _column_into(s: _State, j: int, out: np.ndarray) -> None:
    out[:] = 0.0
    n, m = s.n, s.m
    if j < n:
        out[:] = s.A[:, j]
    elif j < n + m:
        out[j - n] = 1.0
    else:
        k = j - n - m
        out[s.art_row[k]] = s.art_sig[k]


def _refactorize(s: _State) -> bool:
    m = s.m
    B = np.zeros((m, m))
    col = np.zeros(m)
    for i in range(m):
        _column_into(s, s.basis[i], col)
        B[:, i] = col
    try:
        s.Binv = np.linalg.inv(B)
    except np.linalg.LinAlgError:
        return False
    # Full-precision dense recomputation of the basic values.
    rhs = s.b.copy()
    nb_struct = [j for j in range(s.n) if s.vstat[j] != BASIC and s.xn[j] != 0.0]
    if nb_struct:
        rhs -= s.A[:, nb_struct] @ s.xn[nb_struct]
    for i in range(m):
        j = s.n + i
        if s.vstat[j] != BASIC and s.xn[j] != 0.0:
            rhs[i] -= s.xn[j]
    s.xB = s.Binv @ rhs
    return True


def _reduced_costs(s: _State) -> np.ndarray:
    cb = s.cost[s.basis] if s.m else np.zeros(0)
    y = s.Binv.T @ cb if s.m else np.zeros(0)
    d = np.zeros(s.K)  # unused artificial slots must price as immovable zeros
    d[: s.n] = s.cost[: s.n] - (s.A.T @ y if s.m else 0.0)
    d[s.n : s.n + s.m] = s.cost[s.n : s.n + s.m] - y
    if s.n_art:
        rows = s.art_row[: s.n_art]
        sigs = s.art_sig[: s.n_art]
        d[s.n + s.m : s.n + s.m + s.n_art] = (
            s.cost[s.n + s.m : s.n + s.m + s.n_art] - sigs * y[rows]
        )
    return d


def _choose_entering(s: _State, d: np.ndarray, opt_tol: float):
    movable = (s.vstat != BASIC) & (s.lo < s.hi)
    eligible = movable & (
        ((s.vstat == AT_LOWER) & (d < -opt_tol))
        | ((s.vstat == AT_UPPER) & (d > opt_tol))
        | ((s.vstat == FREE_NB) & (np.abs(d) > opt_tol))
    )
    idx = np.nonzero(eligible)[0]
    if idx.size == 0:
        return -1, 0
    if s.bland:
        j = int(idx[0])
    else:
        j = int(idx[np.argmax(np.abs(d[idx]))])
    if s.vstat[j] == AT_LOWER or (s.vstat[j] == FREE_NB and d[j] < 0):
        return j, 1
    return j, -1


def _ratio_test(s: _State, j: int, direction: int, w: np.ndarray):
    """Returns (t, leave_row); leave_row == -1 means a bound flip."""
    if np.isinf(s.lo[j]) or np.isinf(s.hi[j]):
        t_best = np.inf
    else:
        t_best = s.hi[j] - s.lo[j]
    leave = -1
    if s.m:
        coef = direction * w
        basis_lo = s.lo[s.basis]
        basis_hi = s.hi[s.basis]
        lims = np.full(s.m, np.inf)
        pos = coef > _PIV_EPS
        neg = coef < -_PIV_EPS
        with np.errstate(invalid="ignore"):
            lims[pos] = (s.xB[pos] - basis_lo[pos]) / coef[pos]
            lims[neg] = (basis_hi[neg] - s.xB[neg]) / (-coef[neg])
        lims[np.isnan(lims)] = np.inf  # inf-bound basics never block
        np.maximum(lims, 0.0, out=lims)
        t_min = lims.min() if s.m else np.inf
        if t_min < t_best:
            cand = np.nonzero(lims == t_min)[0]
            if s.bland:
                cols = np.asarray(s.basis)[cand]
                leave = int(cand[np.argmin(cols)])
            else:
                aw = np.abs(w[cand])
                best = aw.max()
                tied = cand[aw == best]
                cols = np.asarray(s.basis)[tied]
                leave = int(tied[np.argmin(cols)])
            t_best = t_min
    return t_best, leave


def _pivot_update(s: _State, leave: int, w: np.ndarray) -> None:
    piv = w[leave]
    row = s.Binv[leave, :] / piv
    s.Binv -= np.outer(w, row)
    s.Binv[leave, :] = row


def _iterate(s: _State, opt_tol: float, iter_limit: int):
    """Runs simplex until optimal/unbounded/limit for the current costs."""
    while True:
        if s.iters >= iter_limit:
            return LIMIT
        d = _reduced_costs(s)
        j, direction = _choose_entering(s, d, opt_tol)
        if j < 0:
            return OPTIMAL
        w = _ftran(s, j)
        t, leave = _ratio_test(s, j, direction, w)
        if np.isinf(t):
            return UNBOUNDED
        s.iters += 1
        if t <= _DEGEN_EPS:
            s.stall += 1
            if s.stall > _STALL_LIMIT:
                s.bland = True
        else:
            s.stall = 0
            s.bland = False
        if s.m:
            s.xB -= (direction * t) * w
        if leave < 0:
            s.xn[j] = s.hi[j] if s.vstat[j] == AT_LOWER else s.lo[j]
            s.vstat[j] = AT_UPPER if s.vstat[j] == AT_LOWER else AT_LOWER
            continue
        start = (
            s.lo[j]
            if s.vstat[j] == AT_LOWER
            else (s.hi[j] if s.vstat[j] == AT_UPPER else 0.0)
        )
        lv_col = s.basis[leave]
        if direction * w[leave] > 0:
            s.vstat[lv_col] = AT_LOWER
            s.xn[lv_col] = s.lo[lv_col] if np.isfinite(s.lo[lv_col]) else 0.0
        else:
            s.vstat[lv_col] = AT_UPPER
            s.xn[lv_col] = s.hi[lv_col] if np.isfinite(s.hi[lv_col]) else 0.0
        s.basis[leave] = j
        s.vstat[j] = BASIC
        s.xB[leave] = start + direction * t
        _pivot_update(s, leave, w)
        s.pivots += 1
        if s.pivots % _REFACTOR_EVERY == 0:
            if not _refactorize(s):
                return LIMIT


def _drive_out_artificials(s: _State) -> None:
    for i in range(s.m):
        if s.basis[i] < s.n + s.m:
            continue
        # Degenerate swap with any real column having a usable pivot in row i.
        for j in range(s.n + s.m):
            if s.vstat[j] == BASIC:
                continue
            w = _ftran(s, j)
            if abs(w[i]) > 1e-7:
                lv_col = s.basis[i]
                s.vstat[lv_col] = AT_LOWER
                s.xn[lv_col] = 0.0
                s.basis[i] = j
                val = s.xn[j]
                s.vstat[j] = BASIC
                s.xB[i] = val
                _pivot_update(s, i, w)
                s.pivots += 1
                break


def run_simplex(A, b, sense, c, lb, ub, feas_tol, opt_tol, iter_limit):
    """Solve min c@x s.t. rows (sense/rhs), lb <= x <= ub.

    Returns (status, x, objective, iterations, reduced_costs, vstat) with x,
    reduced_costs, vstat over the structural columns only.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    m, n = A.shape
    s = _State()
    s.A, s.b, s.n, s.m = A, np.asarray(b, dtype=np.float64), n, m
    s.K = n + 2 * m
    s.lo = np.empty(s.K)
    s.hi = np.empty(s.K)
    s.lo[:n] = lb
    s.hi[:n] = ub
    for i in range(m):
        if sense[i] < 0:
            s.lo[n + i], s.hi[n + i] = 0.0, np.inf
        elif sense[i] > 0:
            s.lo[n + i], s.hi[n + i] = -np.inf, 0.0
        else:
            s.lo[n + i], s.hi[n + i] = 0.0, 0.0
    s.lo[n + m :] = 0.0
    s.hi[n + m :] = 0.0  # artificial slots open individually during setup
    s.xn = np.zeros(s.K)
    s.vstat = np.full(s.K, AT_LOWER, dtype=np.int8)
    for j in range(n):
        if np.isfinite(s.lo[j]):
            s.xn[j] = s.lo[j]
        elif np.isfinite(s.hi[j]):
            s.xn[j], s.vstat[j] = s.hi[j], AT_UPPER
        else:
            s.vstat[j] = FREE_NB
    s.art_row = np.zeros(m, dtype=np.int64)
    s.art_sig = np.zeros(m)
    s.n_art = 0
    s.basis = np.zeros(m, dtype=np.int64)
    s.xB = np.zeros(m)
    s.Binv = np.eye(m)
    s.cost = np.zeros(s.K)
    s.iters = 0
    s.pivots = 0
    s.bland = False
    s.stall = 0

    r = s.b - (A @ s.xn[:n] if m else np.zeros(0))
    need_phase1 = False
    for i in range(m):
        lo_i, hi_i = s.lo[n + i], s.hi[n + i]
        if lo_i - feas_tol <= r[i] <= hi_i + feas_tol:
            s.basis[i] = n + i
            s.vstat[n + i] = BASIC
            s.xB[i] = r[i]
        else:
            snapped = hi_i if r[i] > hi_i else lo_i
            s.vstat[n + i] = AT_UPPER if r[i] > hi_i else AT_LOWER
            s.xn[n + i] = snapped
            k = s.n_art
            s.art_row[k] = i
            s.art_sig[k] = 1.0 if r[i] - snapped > 0 else -1.0
            j_art = n + m + k
            s.hi[j_art] = np.inf
            s.basis[i] = j_art
            s.vstat[j_art] = BASIC
            s.xB[i] = abs(r[i] - snapped)
            s.Binv[i, i] = s.art_sig[k]  # initial basis column is sig * e_i
            s.n_art += 1
            need_phase1 = True

    if need_phase1:
        s.cost[:] = 0.0
        s.cost[n + m : n + m + s.n_art] = 1.0
        status = _iterate(s, opt_tol, iter_limit)
        if status == LIMIT:
            return _finish(s, LIMIT, c)
        if status == UNBOUNDED:
            return _finish(s, LIMIT, c)  # phase 1 is bounded below; numeric trouble
        infeas = 0.0
        for i in range(m):
            if s.basis[i] >= n + m:
                infeas += abs(s.xB[i])
        scale = 1.0 + (np.abs(s.b).max() if m else 0.0)
        if infeas > feas_tol * scale:
            return _finish(s, INFEASIBLE, c)
        _drive_out_artificials(s)
        s.lo[n + m :] = 0.0
        s.hi[n + m :] = 0.0
        s.bland = False
        s.stall = 0

    s.cost[:] = 0.0
    s.cost[:n] = c
    status = _iterate(s, opt_tol, iter_limit)
    return _finish(s, status, c)


def _finish(s: _State, status: int, c):
    x = np.array(s.xn[: s.n])
    for i in range(s.m):
        if s.basis[i] < s.n:
            x[s.basis[i]] = s.xB[i]
    obj = float(np.dot(c, x))
    d = _reduced_costs(s)[: s.n]
    return status, x, obj, s.iters, d, np.array(s.vstat[: s.n], dtype=np.int8)
