"""The counting set Lambda and the Littlewood product ``n <n alpha> <n beta>``.

Two enumerators return the same set:

* ``lambda_bruteforce`` scans every ``n <= N`` with a binary64 prefilter whose
  rounding error is bounded per ``n``, then rechecks survivors exactly.
* ``lambda_fast`` only looks at ``n`` where ``<n alpha>`` or ``<n beta>`` is at
  most ``sqrt(threshold / n)``; any hit has that property, since the product of
  the two distances is at most ``threshold / n``.  Those ``n`` are enumerated per
  dyadic block as points of a reduced two-dimensional integer lattice.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .realnum import (
    CertifiedInterval,
    Const,
    Radical,
    as_expr,
    compare,
    exp,
    float_enclosure,
    mul,
    to_realspec,
)

CROSSOVER = 10**6
MAX_SCAN_N = 2**50
SCAN_CHUNK = 1 << 20
_APPROX_BITS = 160


# ---------------------------------------------------------------------------
# data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaHit:
    n: int
    m1: int
    m2: int
    product: CertifiedInterval
    strict: bool


@dataclass(frozen=True)
class LambdaResult:
    """Hits sorted by ``n`` plus the ``n`` whose membership stayed undecided."""

    hits: tuple[LambdaHit, ...]
    undecided: tuple[int, ...]
    bound_N: int
    strict: bool
    candidates: int
    path: str

    def __len__(self) -> int:
        return len(self.hits)

    def __iter__(self):
        return iter(self.hits)

    @property
    def ns(self) -> tuple[int, ...]:
        return tuple(h.n for h in self.hits)


@dataclass(frozen=True)
class GrowthRow:
    N: int
    count: int
    normalizer: float
    normalized: float
    reference: float


# ---------------------------------------------------------------------------
# exact product
# ---------------------------------------------------------------------------


def _exact(x) -> Radical:
    return x if isinstance(x, Radical) else to_realspec(x).exact()


def _nearest(x: Radical) -> int:
    """Nearest integer, ties to the smaller modulus."""
    f = (x + Radical.rational(Fraction(1, 2))).floor()
    if x.is_rational and x.rational_value + Fraction(1, 2) == f:
        return f if abs(f) < abs(f - 1) else f - 1
    return f


def witnesses(n: int, alpha, beta) -> tuple[int, int, Radical, Radical]:
    """``(m1, m2, |n alpha + m1|, |n beta + m2|)`` with ``m_i`` the nearest integers to ``-n alpha``, ``-n beta``."""
    na = _exact(alpha).scale(n)
    nb = _exact(beta).scale(n)
    m1 = -_nearest(na)
    m2 = -_nearest(nb)
    return m1, m2, abs(na + Radical.rational(m1)), abs(nb + Radical.rational(m2))


def product_exact(n: int, alpha, beta) -> tuple[int, int, Radical]:
    m1, m2, d1, d2 = witnesses(n, alpha, beta)
    return m1, m2, (d1 * d2).scale(n)


def littlewood_product(n: int, alpha, beta, precision: int = 64) -> CertifiedInterval:
    """Certified enclosure of ``n <n alpha> <n beta>``; exactly ``[0, 0]`` on rational degeneracy."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    return product_exact(n, alpha, beta)[2].interval(precision)


def is_rational_input(*xs) -> bool:
    return any(to_realspec(x).is_rational for x in xs)


def count_bound(T) -> int:
    """Largest integer ``n`` with ``n < e^{2T}``."""
    e = exp(mul(2, as_expr(T)))
    ex = e.exact()
    if ex is not None and ex.is_rational:
        q = ex.rational_value
        f = q.numerator // q.denominator
        return f - 1 if f == q else f
    p = 64
    while True:
        iv = e.interval(p)
        lo, hi = int(math.floor(iv.lo)), int(math.floor(iv.hi))
        if lo == hi:
            return lo
        if p >= 4096:
            raise ArithmeticError("cannot separate e^{2T} from an integer")
        p *= 2


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


class _Certifier:
    def __init__(self, alpha, beta, threshold, strict: bool):
        self.alpha = _exact(alpha)
        self.beta = _exact(beta)
        self.threshold = as_expr(threshold)
        self.strict = strict
        self.op = "<" if strict else "<="
        a, ea = float_enclosure(Const(self.alpha))
        b, eb = float_enclosure(Const(self.beta))
        self.floats = (a, ea, b, eb)
        self.thr_hi = float(self.threshold.enclose().float_bounds()[1])

    def candidates(self, ns: np.ndarray) -> np.ndarray:
        if len(ns) == 0:
            return ns
        if int(ns.max()) > MAX_SCAN_N:
            raise ValueError(f"n beyond the float prefilter range (2^50): {int(ns.max())}")
        a, ea, b, eb = self.floats
        return ns[kernels.littlewood_mask(ns, a, ea, b, eb, self.thr_hi)]

    def check(self, n: int):
        m1, m2, prod = product_exact(n, self.alpha, self.beta)
        d = compare(Const(prod), self.threshold, self.op)
        if self.strict:
            d = d.tie_as_false()
        if d.is_true:
            return LambdaHit(n, m1, m2, prod.interval(64), self.strict)
        if d.is_false:
            return None
        return n

    def run(self, cands: Iterable[int], bound_N: int, n_cands: int, path: str) -> LambdaResult:
        hits, undecided = [], []
        for n in cands:
            r = self.check(int(n))
            if isinstance(r, LambdaHit):
                hits.append(r)
            elif r is not None:
                undecided.append(r)
        return LambdaResult(tuple(hits), tuple(undecided), bound_N, self.strict, n_cands, path)


# ---------------------------------------------------------------------------
# enumerators
# ---------------------------------------------------------------------------


def lambda_bruteforce(alpha, beta, bound_N: int, eps, strict: bool = True) -> LambdaResult:
    """All ``n`` in ``[1, bound_N]`` with ``n <n alpha> <n beta> < eps`` (``<=`` if not strict)."""
    if bound_N < 1:
        return LambdaResult((), (), bound_N, strict, 0, "bruteforce")
    if bound_N > MAX_SCAN_N:
        raise ValueError("bound_N beyond the scan range")
    cert = _Certifier(alpha, beta, eps, strict)
    a, ea, b, eb = cert.floats
    cands = kernels.littlewood_scan(1, bound_N, a, ea, b, eb, cert.thr_hi)
    return cert.run(cands.tolist(), bound_N, len(cands), "bruteforce")


def lambda_fast(
    alpha,
    beta,
    T=None,
    eps=None,
    strict: bool = True,
    bound_N: int | None = None,
    crossover: int = CROSSOVER,
) -> LambdaResult:
    """Same set as ``lambda_bruteforce`` with ``N = count_bound(T)`` (or ``bound_N``)."""
    if eps is None:
        raise TypeError("eps is required")
    if (T is None) == (bound_N is None):
        raise TypeError("give exactly one of T and bound_N")
    N = count_bound(T) if bound_N is None else int(bound_N)
    if N <= crossover:
        return lambda_bruteforce(alpha, beta, N, eps, strict)
    if N > MAX_SCAN_N:
        raise ValueError("bound beyond the supported integer range (2^50)")
    cert = _Certifier(alpha, beta, eps, strict)
    thr = as_expr(eps).enclose().upper
    if thr <= 0:
        return LambdaResult((), (), N, strict, 0, "fast")
    ns = set(harvest(cert.alpha, N, thr)) | set(harvest(cert.beta, N, thr))
    arr = np.array(sorted(ns), dtype=np.int64)
    cands = cert.candidates(arr)
    return cert.run(cands.tolist(), N, len(arr), "fast")


# ---------------------------------------------------------------------------
# candidate harvesting
# ---------------------------------------------------------------------------


def _rational_approx(x: Radical, bits: int) -> tuple[int, int, Fraction]:
    """``(p, Q, eta)`` with ``Q = 2^bits`` and ``|x - p/Q| <= eta``."""
    iv = x.interval(bits + 32)
    Q = 1 << bits
    p = math.floor(iv.lower * Q)
    eta = (iv.upper - iv.lower) + Fraction(1, Q)
    return p, Q, eta


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _round_div(a: int, b: int) -> int:
    return (2 * a + b) // (2 * b)


def _gauss(b1, b2, wx: int, wy: int):
    """Lagrange reduction of integer 2-vectors under ``(wx x)^2 + (wy y)^2``."""

    def dot(u, v):
        return wx * wx * u[0] * v[0] + wy * wy * u[1] * v[1]

    if dot(b1, b1) > dot(b2, b2):
        b1, b2 = b2, b1
    while True:
        q = _round_div(dot(b1, b2), dot(b1, b1))
        b2 = (b2[0] - q * b1[0], b2[1] - q * b1[1])
        if dot(b2, b2) >= dot(b1, b1):
            return b1, b2
        b1, b2 = b2, b1


def _coeff_range(r0: int, r1: int, det: int, xs, ys) -> tuple[int, int]:
    """Integer range of ``(r0 x + r1 y) / det`` over the box corners."""
    vals = [Fraction(r0 * x + r1 * y, det) for x in xs for y in ys]
    return math.floor(min(vals)), math.ceil(max(vals))


def _solve_range(c_lo, c_hi, off: int, coef: int, lo: int, hi: int):
    """Tighten ``[c_lo, c_hi]`` with ``lo <= off + coef * c <= hi``; ``None`` if empty."""
    if coef == 0:
        return (c_lo, c_hi) if lo <= off <= hi else None
    if coef > 0:
        a, b = _ceil_div(lo - off, coef), (hi - off) // coef
    else:
        a, b = _ceil_div(hi - off, coef), (lo - off) // coef
    a, b = max(a, c_lo), min(b, c_hi)
    return (a, b) if a <= b else None


def lattice_window(p: int, Q: int, A: int, B: int, D: int) -> list[int]:
    """All ``n`` in ``[A, B]`` with ``|n p - m Q| <= D`` for some integer ``m``.

    The points ``(n, n p - m Q)`` form a lattice of determinant ``Q``; after
    reducing it for the box's aspect ratio both coefficient ranges are short
    and the enumeration is exact integer arithmetic throughout.
    """
    wx, wy = max(D, 1), max(B, 1)
    b1, b2 = _gauss((1, p % Q), (0, Q), wx, wy)
    det = b1[0] * b2[1] - b2[0] * b1[1]
    xs, ys = (A, B), (-D, D)
    r1 = _coeff_range(b2[1], -b2[0], det, xs, ys)
    r2 = _coeff_range(-b1[1], b1[0], det, xs, ys)
    if r1[1] - r1[0] > r2[1] - r2[0]:
        b1, b2, r1, r2 = b2, b1, r2, r1
    out = []
    for c1 in range(r1[0], r1[1] + 1):
        rng = _solve_range(r2[0], r2[1], c1 * b1[0], b2[0], A, B)
        if rng is None:
            continue
        rng = _solve_range(rng[0], rng[1], c1 * b1[1], b2[1], -D, D)
        if rng is None:
            continue
        for c2 in range(rng[0], rng[1] + 1):
            out.append(c1 * b1[0] + c2 * b2[0])
    return out


def harvest(x: Radical, N: int, threshold_hi: Fraction) -> list[int]:
    """Superset of ``{n <= N : <n x> <= sqrt(threshold / n)}``.

    On the block ``[2^j, 2^{j+1})`` the radius ``sqrt(threshold / 2^j)``
    dominates ``sqrt(threshold / n)``.  ``x`` is replaced by ``p / Q`` with
    ``|x - p/Q| <= eta``, and the radius grows by ``B * eta`` to absorb that.
    """
    p, Q, eta = _rational_approx(x, _APPROX_BITS)
    out: list[int] = []
    j = 0
    while (1 << j) <= N:
        A = 1 << j
        B = min((1 << (j + 1)) - 1, N)
        r2 = threshold_hi * Q * Q / A
        D = math.isqrt(math.ceil(r2)) + 1 + math.ceil(B * eta * Q)
        if 2 * D >= Q:
            out.extend(range(A, B + 1))
        else:
            out.extend(lattice_window(p, Q, A, B, D))
        j += 1
    return out


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------


def convergents(x, count: int) -> list[tuple[int, int]]:
    """First ``count`` convergents ``(p_k, q_k)`` of ``x`` (rational or single surd)."""
    r = _exact(x)
    out = []
    p0, q0 = 1, 0
    pm, qm = 0, 1
    for _ in range(count):
        a = r.floor()
        p, q = a * p0 + pm, a * q0 + qm
        out.append((p, q))
        pm, qm, p0, q0 = p0, q0, p, q
        frac = r - Radical.rational(a)
        if frac.is_zero:
            break
        r = frac.inverse()
        if r is None:
            raise ValueError("continued fractions need a rational or a + b*sqrt(d)")
    return out


# ---------------------------------------------------------------------------
# growth table and output
# ---------------------------------------------------------------------------


def growth_table(alpha, beta, eps, bounds: Sequence[int], strict: bool = True) -> list[GrowthRow]:
    """Counts for each bound, normalized by ``(log log N)^2 / (log N)^2``; informational only."""
    bounds = [int(N) for N in bounds]
    for N in bounds:
        if N < 16:
            raise ValueError(f"growth rows need N >= 16, got {N}")
    if not bounds:
        return []
    res = lambda_fast(alpha, beta, eps=eps, strict=strict, bound_N=max(bounds))
    if res.undecided:
        raise ArithmeticError(f"undecided memberships: {res.undecided[:5]}")
    ns = np.array(res.ns, dtype=np.int64)
    e = as_expr(eps).to_float()
    rows = []
    for N in bounds:
        count = int(np.searchsorted(ns, N, side="right"))
        lg = math.log(N)
        normalizer = math.log(lg) ** 2 / lg**2
        rows.append(GrowthRow(N, count, normalizer, count * normalizer, 2 * e * lg**2))
    return rows


def _fmt_float(x: float) -> str:
    return repr(float(x))


def write_hits_csv(hits: Iterable[LambdaHit], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "m1", "m2", "product_lo", "product_hi"])
    for h in hits:
        lo, hi = h.product.float_bounds()
        w.writerow([h.n, h.m1, h.m2, _fmt_float(lo), _fmt_float(hi)])


def write_growth_csv(rows: Iterable[GrowthRow], fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["N", "count", "normalized", "reference"])
    for r in rows:
        w.writerow([r.N, r.count, _fmt_float(r.normalized), _fmt_float(r.reference)])
