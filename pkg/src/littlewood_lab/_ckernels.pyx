# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same algorithms and error bounds as ``_pykernels``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, floor, ceil, rint, nearbyint

cnp.import_array()

cdef double U = 2.0 ** -53
cdef int TRUE = 1, FALSE = 0, UNSURE = -1
cdef double MAX_COEFF_BOX = 4000000.0
cdef double LLL_DELTA = 0.99
cdef int LLL_MAX_ITER = 500

TRUE_, FALSE_, UNSURE_ = 1, 0, -1


# ---------------------------------------------------------------------------
# Littlewood product prefilter
# ---------------------------------------------------------------------------


cdef inline bint _lw_pass(double n, double a, double ea, double b, double eb, double thr_hi) nogil:
    cdef double xa = n * a
    cdef double xb = n * b
    cdef double da = fabs(xa - rint(xa))
    cdef double db = fabs(xb - rint(xb))
    cdef double erra = (n * ea + 2 * U * fabs(xa)) * (1 + 1e-12) + 1e-300
    cdef double errb = (n * eb + 2 * U * fabs(xb)) * (1 + 1e-12) + 1e-300
    cdef double la = da - erra
    cdef double lb = db - errb
    if la < 0:
        la = 0.0
    if lb < 0:
        lb = 0.0
    return n * la * lb * (1 - 8 * U) <= thr_hi


def littlewood_mask(ns, double a, double ea, double b, double eb, double thr_hi):
    cdef cnp.int64_t[::1] nv = np.ascontiguousarray(ns, dtype=np.int64)
    cdef Py_ssize_t i, m = nv.shape[0]
    out = np.zeros(m, dtype=np.bool_)
    cdef cnp.npy_bool[::1] ov = out
    with nogil:
        for i in range(m):
            ov[i] = _lw_pass(<double>nv[i], a, ea, b, eb, thr_hi)
    return out


def littlewood_scan(long long n_lo, long long n_hi, double a, double ea, double b, double eb,
                    double thr_hi, chunk=None):
    cdef long long n
    cdef Py_ssize_t cap = 1024, k = 0
    buf = np.empty(cap, dtype=np.int64)
    cdef cnp.int64_t[::1] bv = buf
    n = n_lo
    while n <= n_hi:
        with nogil:
            while n <= n_hi and k < cap:
                if _lw_pass(<double>n, a, ea, b, eb, thr_hi):
                    bv[k] = n
                    k += 1
                n += 1
        if k == cap:
            cap *= 2
            buf = np.resize(buf, cap)
            bv = buf
    return buf[:k].copy()


# ---------------------------------------------------------------------------
# X_eps predicate
# ---------------------------------------------------------------------------


cdef struct Cell:
    int status
    long long best_n


cdef void _gso(double B[3][3], double mu[3][3], double nrm[3]) nogil:
    cdef double Bs[3][3]
    cdef int i, j, r
    cdef double m
    for i in range(3):
        for r in range(3):
            Bs[i][r] = B[i][r]
        for j in range(i):
            if nrm[j] > 0:
                mu[i][j] = (B[i][0] * Bs[j][0] + B[i][1] * Bs[j][1] + B[i][2] * Bs[j][2]) / nrm[j]
            else:
                mu[i][j] = 0.0
            m = mu[i][j]
            Bs[i][0] -= m * Bs[j][0]
            Bs[i][1] -= m * Bs[j][1]
            Bs[i][2] -= m * Bs[j][2]
        nrm[i] = Bs[i][0] * Bs[i][0] + Bs[i][1] * Bs[i][1] + Bs[i][2] * Bs[i][2]


cdef inline double _pyround(double x) nogil:
    # Python's round(): ties to even, which nearbyint gives in the default mode
    return nearbyint(x)


cdef void _lll(double B[3][3], long long Uc[3][3]) nogil:
    cdef double mu[3][3]
    cdef double nrm[3]
    cdef double tmp
    cdef long long itmp, q
    cdef int k = 1, it = 0, j, r
    _gso(B, mu, nrm)
    while k < 3 and it < LLL_MAX_ITER:
        it += 1
        for j in range(k - 1, -1, -1):
            q = <long long>_pyround(mu[k][j])
            if q != 0:
                for r in range(3):
                    B[k][r] -= q * B[j][r]
                    Uc[k][r] -= q * Uc[j][r]
                _gso(B, mu, nrm)
        if nrm[k] >= (LLL_DELTA - mu[k][k - 1] * mu[k][k - 1]) * nrm[k - 1]:
            k += 1
        else:
            for r in range(3):
                tmp = B[k - 1][r]
                B[k - 1][r] = B[k][r]
                B[k][r] = tmp
                itmp = Uc[k - 1][r]
                Uc[k - 1][r] = Uc[k][r]
                Uc[k][r] = itmp
            _gso(B, mu, nrm)
            k = k - 1 if k > 1 else 1


cdef long long _inverse_int(long long Uc[3][3], long long inv[3][3]) nogil:
    cdef long long u[3][3]
    cdef int i, j, r0, r1, c0, c1
    cdef long long det, m
    for i in range(3):
        for j in range(3):
            u[i][j] = Uc[j][i]
    det = (u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
           - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
           + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]))
    for i in range(3):
        for j in range(3):
            r0 = 1 if j == 0 else 0
            r1 = 1 if j == 2 else 2
            c0 = 1 if i == 0 else 0
            c1 = 1 if i == 2 else 2
            m = u[r0][c0] * u[r1][c1] - u[r0][c1] * u[r1][c0]
            inv[i][j] = (m if (i + j) % 2 == 0 else -m) * det
    return det


cdef int _classify(long long n, long long m1, long long m2, double a, double ea, double b, double eb,
                   double es, double et, double est, double eps_lo, double eps_hi) nogil:
    cdef double fn = <double>n
    cdef double y = fn / est
    cdef double ey = 8 * U * fabs(y)
    cdef double p1 = fn * a
    cdef double q1 = p1 + <double>m1
    cdef double x1 = es * q1
    cdef double ex1 = es * (fabs(fn) * ea + U * fabs(p1) + U * fabs(q1)) * (1 + 1e-12) + 4 * U * fabs(x1)
    cdef double p2 = fn * b
    cdef double q2 = p2 + <double>m2
    cdef double x2 = et * q2
    cdef double ex2 = et * (fabs(fn) * eb + U * fabs(p2) + U * fabs(q2)) * (1 + 1e-12) + 4 * U * fabs(x2)
    if fabs(y) - ey > eps_hi or fabs(x1) - ex1 > eps_hi or fabs(x2) - ex2 > eps_hi:
        return FALSE
    if fabs(y) + ey <= eps_lo and fabs(x1) + ex1 <= eps_lo and fabs(x2) + ex2 <= eps_lo:
        return TRUE
    return UNSURE


cdef Cell _cell(double a, double ea, double b, double eb, double s, double t,
                double eps_lo, double eps_hi, long long Uc[3][3]) nogil:
    cdef Cell res
    cdef double es = exp(s)
    cdef double et = exp(t)
    cdef double est = es * et
    cdef double cols0[3][3]
    cdef double ecols0[3][3]
    cdef double B[3][3]
    cdef double Bp[3][3]
    cdef double Ep[3][3]
    cdef long long inv[3][3]
    cdef long long K[3]
    cdef long long C[3]
    cdef long long det, ca, cb, c, lo, hi, n, m1, m2, an, v0, v1, v2
    cdef int i, j, l, r, k, ia, ib, cls
    cdef double acc, eacc, r0, e0, rr1, rr2, bound, bj, ebj, w, ew, nlo, nhi, q, qlo, qhi, d1, d2
    res.status = UNSURE
    res.best_n = 0

    cols0[0][0] = 1.0 / est; cols0[0][1] = es * a; cols0[0][2] = et * b
    cols0[1][0] = 0.0; cols0[1][1] = es; cols0[1][2] = 0.0
    cols0[2][0] = 0.0; cols0[2][1] = 0.0; cols0[2][2] = et
    ecols0[0][0] = 4 * U / est
    ecols0[0][1] = es * ea + 4 * U * fabs(es * a)
    ecols0[0][2] = et * eb + 4 * U * fabs(et * b)
    ecols0[1][0] = 0.0; ecols0[1][1] = 2 * U * es; ecols0[1][2] = 0.0
    ecols0[2][0] = 0.0; ecols0[2][1] = 0.0; ecols0[2][2] = 2 * U * et

    for c in range(3):
        for r in range(3):
            acc = 0.0
            for l in range(3):
                acc = acc + cols0[l][r] * <double>Uc[c][l]
            B[c][r] = acc
    _lll(B, Uc)
    det = _inverse_int(Uc, inv)
    if det != 1 and det != -1:
        return res
    for i in range(3):
        v0 = inv[i][0]; v1 = inv[i][1]; v2 = inv[i][2]
        r0 = est * (<double>v0 - a * <double>v1 - b * <double>v2)
        e0 = (est * (fabs(<double>v1) * ea + fabs(<double>v2) * eb
                     + 4 * U * (fabs(<double>v0) + fabs(a * <double>v1) + fabs(b * <double>v2)))
              + 8 * U * fabs(r0))
        rr1 = <double>v1 / es
        rr2 = <double>v2 / et
        bound = eps_hi * (fabs(r0) + e0 + fabs(rr1) + fabs(rr2)) * (1 + 1e-12) + 1e-9
        if bound > MAX_COEFF_BOX:
            return res
        K[i] = <long long>floor(bound)
    if (2.0 * K[0] + 1) * (2.0 * K[1] + 1) * (2.0 * K[2] + 1) > MAX_COEFF_BOX:
        return res
    for c in range(3):
        for r in range(3):
            acc = 0.0
            for l in range(3):
                acc = acc + cols0[l][r] * <double>Uc[c][l]
            Bp[c][r] = acc
    for c in range(3):
        for r in range(3):
            eacc = 0.0
            for l in range(3):
                eacc = eacc + (ecols0[l][r] + 2 * U * fabs(cols0[l][r])) * fabs(<double>Uc[c][l])
            Ep[c][r] = eacc * (1 + 1e-12) + 4 * U * fabs(Bp[c][r])
    # same choice as max(range(3), key=K.__getitem__): first maximal index
    k = 0
    if K[1] > K[k]:
        k = 1
    if K[2] > K[k]:
        k = 2
    ia = 1 if k == 0 else 0
    ib = 1 if k == 2 else 2
    res.status = FALSE
    for ca in range(-K[ia], K[ia] + 1):
        for cb in range(-K[ib], K[ib] + 1):
            lo = -K[k]
            hi = K[k]
            for j in range(3):
                bj = Bp[k][j]
                ebj = Ep[k][j]
                if fabs(bj) <= 4 * ebj or bj == 0.0:
                    continue
                w = <double>ca * Bp[ia][j] + <double>cb * Bp[ib][j]
                ew = (fabs(<double>ca) * (Ep[ia][j] + 4 * U * fabs(Bp[ia][j]))
                      + fabs(<double>cb) * (Ep[ib][j] + 4 * U * fabs(Bp[ib][j])) + 4 * U * fabs(w))
                nlo = -eps_hi - w - ew
                nhi = eps_hi - w + ew
                d1 = bj - ebj
                d2 = bj + ebj
                qlo = nlo / d1
                qhi = qlo
                q = nlo / d2
                qlo = q if q < qlo else qlo
                qhi = q if q > qhi else qhi
                q = nhi / d1
                qlo = q if q < qlo else qlo
                qhi = q if q > qhi else qhi
                q = nhi / d2
                qlo = q if q < qlo else qlo
                qhi = q if q > qhi else qhi
                qlo = floor(qlo - 1e-9 * fabs(qlo)) - 1
                qhi = ceil(qhi + 1e-9 * fabs(qhi)) + 1
                if qlo > lo:
                    lo = <long long>qlo
                if qhi < hi:
                    hi = <long long>qhi
            for c in range(lo, hi + 1):
                C[ia] = ca
                C[ib] = cb
                C[k] = c
                n = Uc[0][0] * C[0] + Uc[1][0] * C[1] + Uc[2][0] * C[2]
                m1 = Uc[0][1] * C[0] + Uc[1][1] * C[1] + Uc[2][1] * C[2]
                m2 = Uc[0][2] * C[0] + Uc[1][2] * C[1] + Uc[2][2] * C[2]
                if n == 0 and m1 == 0 and m2 == 0:
                    continue
                cls = _classify(n, m1, m2, a, ea, b, eb, es, et, est, eps_lo, eps_hi)
                if cls == TRUE:
                    res.status = TRUE
                    an = n if n >= 0 else -n
                    if res.best_n == 0 or an < res.best_n:
                        res.best_n = an
                elif cls == UNSURE and res.status == FALSE:
                    res.status = UNSURE
    return res


cdef void _row(double a, double ea, double b, double eb, double s, double[::1] tv,
               double eps_lo, double eps_hi, cnp.int8_t[::1] st, cnp.int64_t[::1] wt) nogil:
    cdef long long Uc[3][3]
    cdef int i, j
    cdef Cell c
    for i in range(3):
        for j in range(3):
            Uc[i][j] = 1 if i == j else 0
    for j in range(tv.shape[0]):
        c = _cell(a, ea, b, eb, s, tv[j], eps_lo, eps_hi, Uc)
        st[j] = c.status
        wt[j] = c.best_n


def xeps_rows(double a, double ea, double b, double eb, s_values, t_values,
              double eps_lo, double eps_hi, int threads=1):
    cdef double[::1] sv = np.ascontiguousarray(s_values, dtype=np.float64)
    cdef double[::1] tv = np.ascontiguousarray(t_values, dtype=np.float64)
    cdef Py_ssize_t ns = sv.shape[0], nt = tv.shape[0]
    status = np.zeros((ns, nt), dtype=np.int8)
    wit = np.zeros((ns, nt), dtype=np.int64)
    cdef cnp.int8_t[:, ::1] stv = status
    cdef cnp.int64_t[:, ::1] wtv = wit

    def run_rows(Py_ssize_t start, Py_ssize_t stop):
        cdef Py_ssize_t i
        with nogil:
            for i in range(start, stop):
                _row(a, ea, b, eb, sv[i], tv, eps_lo, eps_hi, stv[i], wtv[i])

    if threads <= 1 or ns < 2:
        run_rows(0, ns)
    else:
        from concurrent.futures import ThreadPoolExecutor

        step = max(1, (ns + 4 * threads - 1) // (4 * threads))
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(run_rows, i, min(ns, i + step)) for i in range(0, ns, step)]
            for f in futures:
                f.result()
    return status, wit
