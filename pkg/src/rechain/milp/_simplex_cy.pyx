# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled bounded-variable primal simplex kernel.

Same algorithm and pivot rules as ``_simplex_py``; the whole iteration loop
runs without the GIL so concurrent solves can overlap. See the pure lane for
the algorithm commentary.
"""

from libc.math cimport fabs, isfinite, INFINITY

import numpy as np

cdef int OPTIMAL = 0, INFEASIBLE = 1, UNBOUNDED = 2, LIMIT = 3
cdef int AT_LOWER = 0, AT_UPPER = 1, BASIC = 2, FREE_NB = 3

cdef double PIV_EPS = 1e-9
cdef double DEGEN_EPS = 1e-10
cdef int STALL_LIMIT = 120
cdef int REFACTOR_EVERY = 64


cdef struct SolverState:
    int n, m, K, n_art
    long iters, pivots, iter_limit
    bint bland
    int stall
    double opt_tol


cdef void _column_into(SolverState* st, double[:, ::1] AT, long[::1] art_row,
                       double[::1] art_sig, int j, double[::1] out) nogil:
    cdef int i, n = st.n, m = st.m
    for i in range(m):
        out[i] = 0.0
    if j < n:
        for i in range(m):
            out[i] = AT[j, i]
    elif j < n + m:
        out[j - n] = 1.0
    else:
        out[art_row[j - n - m]] = art_sig[j - n - m]


cdef void _ftran(SolverState* st, double[:, ::1] AT, long[::1] art_row,
                 double[::1] art_sig, double[:, ::1] Binv, int j,
                 double[::1] scratch, double[::1] w) nogil:
    cdef int i, k
    _column_into(st, AT, art_row, art_sig, j, scratch)
    for i in range(st.m):
        w[i] = 0.0
    for k in range(st.m):
        if scratch[k] != 0.0:
            for i in range(st.m):
                w[i] += Binv[i, k] * scratch[k]


cdef bint _invert(double[:, ::1] W, double[:, ::1] Binv, int m) nogil:
    """Gauss-Jordan inverse with partial pivoting; W is destroyed."""
    cdef int i, k, p
    cdef double piv, f, best
    for i in range(m):
        for k in range(m):
            Binv[i, k] = 1.0 if i == k else 0.0
    for k in range(m):
        p = k
        best = fabs(W[k, k])
        for i in range(k + 1, m):
            if fabs(W[i, k]) > best:
                best = fabs(W[i, k])
                p = i
        if best < 1e-12:
            return False
        if p != k:
            for i in range(m):
                f = W[k, i]; W[k, i] = W[p, i]; W[p, i] = f
                f = Binv[k, i]; Binv[k, i] = Binv[p, i]; Binv[p, i] = f
        piv = W[k, k]
        for i in range(m):
            W[k, i] /= piv
            Binv[k, i] /= piv
        for i in range(m):
            if i != k:
                f = W[i, k]
                if f != 0.0:
                    for p in range(m):
                        W[i, p] -= f * W[k, p]
                        Binv[i, p] -= f * Binv[k, p]
    return True


cdef bint _refactorize(SolverState* st, double[:, ::1] AT, double[::1] b,
                       long[::1] basis, long[::1] art_row, double[::1] art_sig,
                       signed char[::1] vstat, double[::1] xn,
                       double[:, ::1] Binv, double[:, ::1] W,
                       double[::1] xB, double[::1] scratch) nogil:
    cdef int i, k, j, m = st.m, n = st.n
    for i in range(m):
        _column_into(st, AT, art_row, art_sig, <int>basis[i], scratch)
        for k in range(m):
            W[k, i] = scratch[k]
    if not _invert(W, Binv, m):
        return False
    # Full-precision dense recomputation of the basic right-hand side.
    for i in range(m):
        scratch[i] = b[i]
    for j in range(n):
        if vstat[j] != BASIC and xn[j] != 0.0:
            for i in range(m):
                scratch[i] -= AT[j, i] * xn[j]
    for i in range(m):
        j = n + i
        if vstat[j] != BASIC and xn[j] != 0.0:
            scratch[i] -= xn[j]
    for i in range(m):
        xB[i] = 0.0
        for k in range(m):
            xB[i] += Binv[i, k] * scratch[k]
    return True


cdef void _reduced_costs(SolverState* st, double[:, ::1] AT, double[::1] cost,
                         long[::1] basis, long[::1] art_row, double[::1] art_sig,
                         double[:, ::1] Binv, double[::1] y, double[::1] d) nogil:
    cdef int i, k, j, m = st.m, n = st.n
    cdef double cb, acc
    for k in range(m):
        y[k] = 0.0
    for i in range(m):
        cb = cost[basis[i]]
        if cb != 0.0:
            for k in range(m):
                y[k] += cb * Binv[i, k]
    for j in range(st.K):
        d[j] = 0.0
    for j in range(n):
        acc = 0.0
        for i in range(m):
            acc += y[i] * AT[j, i]
        d[j] = cost[j] - acc
    for i in range(m):
        d[n + i] = cost[n + i] - y[i]
    for k in range(st.n_art):
        d[n + m + k] = cost[n + m + k] - art_sig[k] * y[art_row[k]]


cdef int _choose_entering(SolverState* st, double[::1] d, double[::1] lo,
                          double[::1] hi, signed char[::1] vstat,
                          int* direction) nogil:
    cdef int j, best_j = -1
    cdef double best_mag = 0.0, mag
    cdef bint ok
    for j in range(st.K):
        if vstat[j] == BASIC or lo[j] >= hi[j]:
            continue
        ok = False
        if vstat[j] == AT_LOWER:
            ok = d[j] < -st.opt_tol
        elif vstat[j] == AT_UPPER:
            ok = d[j] > st.opt_tol
        elif vstat[j] == FREE_NB:
            ok = fabs(d[j]) > st.opt_tol
        if not ok:
            continue
        if st.bland:
            best_j = j
            break
        mag = fabs(d[j])
        if mag > best_mag:
            best_mag = mag
            best_j = j
    if best_j < 0:
        return -1
    if vstat[best_j] == AT_LOWER or (vstat[best_j] == FREE_NB and d[best_j] < 0):
        direction[0] = 1
    else:
        direction[0] = -1
    return best_j


cdef double _ratio_test(SolverState* st, int j, int direction, double[::1] w,
                        double[::1] lo, double[::1] hi, long[::1] basis,
                        double[::1] xB, int* leave) nogil:
    cdef double t_best, lim, coef, cand_mag
    cdef double best_mag = -1.0
    cdef int i
    cdef long col, best_col = -1
    if not isfinite(lo[j]) or not isfinite(hi[j]):
        t_best = INFINITY
    else:
        t_best = hi[j] - lo[j]
    leave[0] = -1
    for i in range(st.m):
        coef = direction * w[i]
        col = basis[i]
        if coef > PIV_EPS:
            if not isfinite(lo[col]):
                continue
            lim = (xB[i] - lo[col]) / coef
        elif coef < -PIV_EPS:
            if not isfinite(hi[col]):
                continue
            lim = (hi[col] - xB[i]) / (-coef)
        else:
            continue
        if lim < 0.0:
            lim = 0.0
        if lim < t_best:
            t_best = lim
            leave[0] = i
            best_mag = fabs(w[i])
            best_col = col
        elif lim == t_best and leave[0] >= 0:
            cand_mag = fabs(w[i])
            if st.bland:
                if col < best_col:
                    leave[0] = i
                    best_mag = cand_mag
                    best_col = col
            elif cand_mag > best_mag or (cand_mag == best_mag and col < best_col):
                leave[0] = i
                best_mag = cand_mag
                best_col = col
    return t_best


cdef void _pivot_update(double[:, ::1] Binv, double[::1] w, int r, int m) nogil:
    cdef double piv = w[r]
    cdef int i, k
    cdef double f
    for k in range(m):
        Binv[r, k] /= piv
    for i in range(m):
        if i != r:
            f = w[i]
            if f != 0.0:
                for k in range(m):
                    Binv[i, k] -= f * Binv[r, k]


cdef int _iterate(SolverState* st, double[:, ::1] AT, double[::1] b,
                  double[::1] cost, double[::1] lo, double[::1] hi,
                  double[::1] xn, signed char[::1] vstat, long[::1] basis,
                  long[::1] art_row, double[::1] art_sig,
                  double[:, ::1] Binv, double[:, ::1] W, double[::1] xB,
                  double[::1] y, double[::1] d, double[::1] w,
                  double[::1] scratch) nogil:
    cdef int j, direction, leave, i
    cdef long lv_col
    cdef double t, start
    while True:
        if st.iters >= st.iter_limit:
            return LIMIT
        _reduced_costs(st, AT, cost, basis, art_row, art_sig, Binv, y, d)
        j = _choose_entering(st, d, lo, hi, vstat, &direction)
        if j < 0:
            return OPTIMAL
        _ftran(st, AT, art_row, art_sig, Binv, j, scratch, w)
        t = _ratio_test(st, j, direction, w, lo, hi, basis, xB, &leave)
        if not isfinite(t):
            return UNBOUNDED
        st.iters += 1
        if t <= DEGEN_EPS:
            st.stall += 1
            if st.stall > STALL_LIMIT:
                st.bland = True
        else:
            st.stall = 0
            st.bland = False
        for i in range(st.m):
            xB[i] -= (direction * t) * w[i]
        if leave < 0:
            xn[j] = hi[j] if vstat[j] == AT_LOWER else lo[j]
            vstat[j] = AT_UPPER if vstat[j] == AT_LOWER else AT_LOWER
            continue
        if vstat[j] == AT_LOWER:
            start = lo[j]
        elif vstat[j] == AT_UPPER:
            start = hi[j]
        else:
            start = 0.0
        lv_col = basis[leave]
        if direction * w[leave] > 0:
            vstat[lv_col] = AT_LOWER
            xn[lv_col] = lo[lv_col] if isfinite(lo[lv_col]) else 0.0
        else:
            vstat[lv_col] = AT_UPPER
            xn[lv_col] = hi[lv_col] if isfinite(hi[lv_col]) else 0.0
        basis[leave] = j
        vstat[j] = BASIC
        xB[leave] = start + direction * t
        _pivot_update(Binv, w, leave, st.m)
        st.pivots += 1
        if st.pivots % REFACTOR_EVERY == 0:
            if not _refactorize(st, AT, b, basis, art_row, art_sig, vstat, xn,
                                Binv, W, xB, scratch):
                return LIMIT


cdef void _drive_out_artificials(SolverState* st, double[:, ::1] AT,
                                 double[::1] xn, signed char[::1] vstat,
                                 long[::1] basis, long[::1] art_row,
                                 double[::1] art_sig, double[:, ::1] Binv,
                                 double[::1] xB, double[::1] w,
                                 double[::1] scratch) nogil:
    cdef int i, j
    cdef long lv_col
    for i in range(st.m):
        if basis[i] < st.n + st.m:
            continue
        for j in range(st.n + st.m):
            if vstat[j] == BASIC:
                continue
            _ftran(st, AT, art_row, art_sig, Binv, j, scratch, w)
            if fabs(w[i]) > 1e-7:
                lv_col = basis[i]
                vstat[lv_col] = AT_LOWER
                xn[lv_col] = 0.0
                basis[i] = j
                vstat[j] = BASIC
                xB[i] = xn[j]
                _pivot_update(Binv, w, i, st.m)
                st.pivots += 1
                break


def run_simplex(A, b, sense, c, lb, ub, double feas_tol, double opt_tol,
                long iter_limit):
    """Entry point matching ``_simplex_py.run_simplex`` exactly."""
    A = np.ascontiguousarray(A, dtype=np.float64)
    cdef int m = A.shape[0]
    cdef int n = A.shape[1]
    cdef int K = n + 2 * m
    AT_np = np.ascontiguousarray(A.T) if m and n else np.zeros((n, m))
    b_np = np.ascontiguousarray(b, dtype=np.float64)
    sense_np = np.ascontiguousarray(sense, dtype=np.int8)
    c_np = np.ascontiguousarray(c, dtype=np.float64)

    lo_np = np.zeros(K); hi_np = np.zeros(K)
    lo_np[:n] = lb; hi_np[:n] = ub
    xn_np = np.zeros(K)
    vstat_np = np.full(K, AT_LOWER, dtype=np.int8)
    basis_np = np.zeros(max(m, 1), dtype=np.int64)
    xB_np = np.zeros(max(m, 1))
    Binv_np = np.eye(max(m, 1))
    W_np = np.zeros((max(m, 1), max(m, 1)))
    cost_np = np.zeros(K)
    art_row_np = np.zeros(max(m, 1), dtype=np.int64)
    art_sig_np = np.zeros(max(m, 1))
    y_np = np.zeros(max(m, 1))
    d_np = np.zeros(K)
    w_np = np.zeros(max(m, 1))
    scratch_np = np.zeros(max(m, 1))

    cdef double[:, ::1] AT = AT_np
    cdef double[::1] bv = b_np
    cdef signed char[::1] sv = sense_np
    cdef double[::1] cv = c_np
    cdef double[::1] lo = lo_np
    cdef double[::1] hi = hi_np
    cdef double[::1] xn = xn_np
    cdef signed char[::1] vstat = vstat_np
    cdef long[::1] basis = basis_np
    cdef double[::1] xB = xB_np
    cdef double[:, ::1] Binv = Binv_np
    cdef double[:, ::1] W = W_np
    cdef double[::1] cost = cost_np
    cdef long[::1] art_row = art_row_np
    cdef double[::1] art_sig = art_sig_np
    cdef double[::1] y = y_np
    cdef double[::1] d = d_np
    cdef double[::1] w = w_np
    cdef double[::1] scratch = scratch_np

    cdef SolverState st
    st.n, st.m, st.K = n, m, K
    st.n_art = 0
    st.iters = 0
    st.pivots = 0
    st.bland = False
    st.stall = 0
    st.opt_tol = opt_tol
    st.iter_limit = iter_limit

    cdef int i, j, k
    cdef double r_i, snapped, lo_i, hi_i, bmax, infeas
    cdef bint need_phase1 = False
    cdef int status = -1

    with nogil:
        for i in range(m):
            if sv[i] < 0:
                lo[n + i] = 0.0
                hi[n + i] = INFINITY
            elif sv[i] > 0:
                lo[n + i] = -INFINITY
                hi[n + i] = 0.0
            else:
                lo[n + i] = 0.0
                hi[n + i] = 0.0
        for j in range(n):
            if isfinite(lo[j]):
                xn[j] = lo[j]
            elif isfinite(hi[j]):
                xn[j] = hi[j]
                vstat[j] = AT_UPPER
            else:
                vstat[j] = FREE_NB

        for i in range(m):
            r_i = bv[i]
            for j in range(n):
                if xn[j] != 0.0:
                    r_i -= AT[j, i] * xn[j]
            lo_i = lo[n + i]
            hi_i = hi[n + i]
            if lo_i - feas_tol <= r_i <= hi_i + feas_tol:
                basis[i] = n + i
                vstat[n + i] = BASIC
                xB[i] = r_i
            else:
                snapped = hi_i if r_i > hi_i else lo_i
                vstat[n + i] = AT_UPPER if r_i > hi_i else AT_LOWER
                xn[n + i] = snapped
                k = st.n_art
                art_row[k] = i
                art_sig[k] = 1.0 if r_i - snapped > 0 else -1.0
                j = n + m + k
                hi[j] = INFINITY
                basis[i] = j
                vstat[j] = BASIC
                xB[i] = fabs(r_i - snapped)
                Binv[i, i] = art_sig[k]
                st.n_art += 1
                need_phase1 = True

        if need_phase1:
            for k in range(st.n_art):
                cost[n + m + k] = 1.0
            status = _iterate(&st, AT, bv, cost, lo, hi, xn, vstat, basis,
                              art_row, art_sig, Binv, W, xB, y, d, w, scratch)
            if status == UNBOUNDED:
                status = LIMIT  # phase 1 is bounded below; numeric trouble
            if status == OPTIMAL:
                infeas = 0.0
                for i in range(m):
                    if basis[i] >= n + m:
                        infeas += fabs(xB[i])
                bmax = 0.0
                for i in range(m):
                    if fabs(bv[i]) > bmax:
                        bmax = fabs(bv[i])
                if infeas > feas_tol * (1.0 + bmax):
                    status = INFEASIBLE
                else:
                    _drive_out_artificials(&st, AT, xn, vstat, basis, art_row,
                                           art_sig, Binv, xB, w, scratch)
                    for k in range(st.n_art):
                        lo[n + m + k] = 0.0
                        hi[n + m + k] = 0.0
                        cost[n + m + k] = 0.0
                    st.bland = False
                    st.stall = 0
                    status = -1

        if status == -1:
            for j in range(n):
                cost[j] = cv[j]
            status = _iterate(&st, AT, bv, cost, lo, hi, xn, vstat, basis,
                              art_row, art_sig, Binv, W, xB, y, d, w, scratch)

    x = xn_np[:n].copy()
    for i in range(m):
        if basis_np[i] < n:
            x[basis_np[i]] = xB_np[i]
    obj = float(np.dot(c_np, x))
    _reduced_costs(&st, AT, cost, basis, art_row, art_sig, Binv, y, d)
    red = d_np[:n].copy()
    return int(status), x, obj, int(st.iters), red, vstat_np[:n].copy()
