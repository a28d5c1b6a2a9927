"""Pure-Python reference kernels (fallback when the compiled extension is absent).

Both kernels work in binary64 and carry explicit a-priori bounds on the
rounding error, so every answer they give as certain is certain; anything
inside the error margin is reported as unsure and left to the MPFR path.
"""

import math

import numpy as np

U = 2.0**-53
TRUE, FALSE, UNSURE = 1, 0, -1
MAX_COEFF_BOX = 4_000_000
LLL_DELTA = 0.99
LLL_MAX_ITER = 500


# ---------------------------------------------------------------------------
# Littlewood product prefilter
# ---------------------------------------------------------------------------


def littlewood_mask(ns, a, ea, b, eb, thr_hi):
    """True where ``n <n a> <n b>`` may be ``<= thr_hi`` given ``|alpha - a| <= ea`` etc."""
    n = np.asarray(ns, dtype=np.float64)
    xa = n * a
    xb = n * b
    da = np.abs(xa - np.rint(xa))
    db = np.abs(xb - np.rint(xb))
    erra = (n * ea + 2 * U * np.abs(xa)) * (1 + 1e-12) + 1e-300
    errb = (n * eb + 2 * U * np.abs(xb)) * (1 + 1e-12) + 1e-300
    lo = n * np.maximum(da - erra, 0.0) * np.maximum(db - errb, 0.0) * (1 - 8 * U)
    return lo <= thr_hi


def littlewood_scan(n_lo, n_hi, a, ea, b, eb, thr_hi, chunk=1 << 20):
    """Candidates ``n`` in ``[n_lo, n_hi]`` passing ``littlewood_mask``."""
    out = []
    start = n_lo
    while start <= n_hi:
        stop = min(n_hi, start + chunk - 1)
        ns = np.arange(start, stop + 1, dtype=np.int64)
        out.append(ns[littlewood_mask(ns, a, ea, b, eb, thr_hi)])
        start = stop + 1
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


# ---------------------------------------------------------------------------
# X_eps predicate on a_{s,t} tau_{a,b} Z^3
# ---------------------------------------------------------------------------


def _gso(B):
    Bs = [list(col) for col in B]
    mu = [[0.0] * 3 for _ in range(3)]
    nrm = [0.0] * 3
    for i in range(3):
        v = list(B[i])
        for j in range(i):
            mu[i][j] = (B[i][0] * Bs[j][0] + B[i][1] * Bs[j][1] + B[i][2] * Bs[j][2]) / nrm[j] if nrm[j] > 0 else 0.0
            m = mu[i][j]
            v[0] -= m * Bs[j][0]
            v[1] -= m * Bs[j][1]
            v[2] -= m * Bs[j][2]
        Bs[i] = v
        nrm[i] = v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
    return mu, nrm


def _lll(B, Uc):
    """LLL on columns ``B[i]`` (3-lists); ``Uc[i]`` tracks integer columns. In place."""
    k = 1
    it = 0
    mu, nrm = _gso(B)
    while k < 3 and it < LLL_MAX_ITER:
        it += 1
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                for r in range(3):
                    B[k][r] -= q * B[j][r]
                    Uc[k][r] -= q * Uc[j][r]
                mu, nrm = _gso(B)
        if nrm[k] >= (LLL_DELTA - mu[k][k - 1] ** 2) * nrm[k - 1]:
            k += 1
        else:
            B[k - 1], B[k] = B[k], B[k - 1]
            Uc[k - 1], Uc[k] = Uc[k], Uc[k - 1]
            mu, nrm = _gso(B)
            k = max(k - 1, 1)


def _inverse_int(Uc):
    """Rows of ``U^{-1}`` where ``Uc`` lists the columns of ``U``."""
    u = [[Uc[j][i] for j in range(3)] for i in range(3)]
    det = (u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
           - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
           + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]))
    inv = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != j]
            c = [x for x in range(3) if x != i]
            m = u[r[0]][c[0]] * u[r[1]][c[1]] - u[r[0]][c[1]] * u[r[1]][c[0]]
            inv[i][j] = (-1) ** (i + j) * m * det
    return inv, det


def xeps_cell(a, ea, b, eb, s, t, eps_lo, eps_hi, Uc):
    """Decide whether ``a_{s,t} tau_{a,b} Z^3`` has a nonzero vector of sup-norm <= eps.

    ``Uc`` is a warm-start basis transform (list of integer columns) and is
    updated in place.  Returns ``(status, n)`` with ``n`` the smallest
    positive first coordinate among certified short vectors.
    """
    es = math.exp(s)
    et = math.exp(t)
    est = es * et
    cols0 = ((1.0 / est, es * a, et * b), (0.0, es, 0.0), (0.0, 0.0, et))
    # error bounds for the float entries of the basis columns
    ecols0 = ((4 * U / est, es * ea + 4 * U * abs(es * a), et * eb + 4 * U * abs(et * b)),
              (0.0, 2 * U * es, 0.0), (0.0, 0.0, 2 * U * et))
    B = [[sum(cols0[l][r] * Uc[c][l] for l in range(3)) for r in range(3)] for c in range(3)]
    _lll(B, Uc)
    inv, det = _inverse_int(Uc)
    if det not in (1, -1):
        return UNSURE, 0
    K = []
    for i in range(3):
        v0, v1, v2 = inv[i]
        r0 = est * (v0 - a * v1 - b * v2)
        e0 = (est * (abs(v1) * ea + abs(v2) * eb
                     + 4 * U * (abs(v0) + abs(a * v1) + abs(b * v2))) + 8 * U * abs(r0))
        r1 = v1 / es
        r2 = v2 / et
        bound = eps_hi * (abs(r0) + e0 + abs(r1) + abs(r2)) * (1 + 1e-12) + 1e-9
        if bound > MAX_COEFF_BOX:
            return UNSURE, 0
        K.append(int(math.floor(bound)))
    if (2 * K[0] + 1) * (2 * K[1] + 1) * (2 * K[2] + 1) > MAX_COEFF_BOX:
        return UNSURE, 0
    # recompute the reduced columns from the transform (fresh rounding) with error bounds
    Bp = [[sum(cols0[l][r] * Uc[c][l] for l in range(3)) for r in range(3)] for c in range(3)]
    Ep = [[sum((ecols0[l][r] + 2 * U * abs(cols0[l][r])) * abs(Uc[c][l]) for l in range(3)) * (1 + 1e-12)
           + 4 * U * abs(Bp[c][r]) for r in range(3)] for c in range(3)]
    k = max(range(3), key=lambda i: K[i])
    ia, ib = [i for i in range(3) if i != k]
    status = FALSE
    best_n = 0
    for ca in range(-K[ia], K[ia] + 1):
        for cb in range(-K[ib], K[ib] + 1):
            lo, hi = -K[k], K[k]
            for j in range(3):
                bj = Bp[k][j]
                ebj = Ep[k][j]
                if abs(bj) <= 4 * ebj or bj == 0.0:
                    continue
                w = ca * Bp[ia][j] + cb * Bp[ib][j]
                ew = (abs(ca) * (Ep[ia][j] + 4 * U * abs(Bp[ia][j]))
                      + abs(cb) * (Ep[ib][j] + 4 * U * abs(Bp[ib][j])) + 4 * U * abs(w))
                nlo = -eps_hi - w - ew
                nhi = eps_hi - w + ew
                qs = (nlo / (bj - ebj), nlo / (bj + ebj), nhi / (bj - ebj), nhi / (bj + ebj))
                qlo, qhi = min(qs), max(qs)
                lo = max(lo, math.floor(qlo - 1e-9 * abs(qlo)) - 1)
                hi = min(hi, math.ceil(qhi + 1e-9 * abs(qhi)) + 1)
            for c in range(lo, hi + 1):
                C = [0, 0, 0]
                C[ia], C[ib], C[k] = ca, cb, c
                n = Uc[0][0] * C[0] + Uc[1][0] * C[1] + Uc[2][0] * C[2]
                m1 = Uc[0][1] * C[0] + Uc[1][1] * C[1] + Uc[2][1] * C[2]
                m2 = Uc[0][2] * C[0] + Uc[1][2] * C[1] + Uc[2][2] * C[2]
                if n == 0 and m1 == 0 and m2 == 0:
                    continue
                r = classify_vector(n, m1, m2, a, ea, b, eb, es, et, est, eps_lo, eps_hi)
                if r == TRUE:
                    status = TRUE
                    an = abs(n)
                    if best_n == 0 or an < best_n:
                        best_n = an
                elif r == UNSURE and status == FALSE:
                    status = UNSURE
    return status, best_n


def classify_vector(n, m1, m2, a, ea, b, eb, es, et, est, eps_lo, eps_hi):
    """Sup-norm of ``a_{s,t} tau (n, m1, m2)`` against eps with rounding bounds."""
    fn = float(n)
    y = fn / est
    ey = 8 * U * abs(y)
    p1 = fn * a
    q1 = p1 + m1
    x1 = es * q1
    ex1 = es * (abs(fn) * ea + U * abs(p1) + U * abs(q1)) * (1 + 1e-12) + 4 * U * abs(x1)
    p2 = fn * b
    q2 = p2 + m2
    x2 = et * q2
    ex2 = et * (abs(fn) * eb + U * abs(p2) + U * abs(q2)) * (1 + 1e-12) + 4 * U * abs(x2)
    if abs(y) - ey > eps_hi or abs(x1) - ex1 > eps_hi or abs(x2) - ex2 > eps_hi:
        return FALSE
    if abs(y) + ey <= eps_lo and abs(x1) + ex1 <= eps_lo and abs(x2) + ex2 <= eps_lo:
        return TRUE
    return UNSURE


def xeps_rows(a, ea, b, eb, s_values, t_values, eps_lo, eps_hi, threads=1):
    """Status and witness arrays of shape ``(len(s_values), len(t_values))``.

    Each row restarts from the identity transform, so rows are independent
    and the result does not depend on ``threads`` (unused here).
    """
    ns, nt = len(s_values), len(t_values)
    status = np.zeros((ns, nt), dtype=np.int8)
    wit = np.zeros((ns, nt), dtype=np.int64)
    for i in range(ns):
        Uc = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
        s = float(s_values[i])
        for j in range(nt):
            st, n = xeps_cell(a, ea, b, eb, s, float(t_values[j]), eps_lo, eps_hi, Uc)
            status[i, j] = st
            wit[i, j] = n
    return status, wit
