"""Regions in R^3, lattice point counts in them, and the cusp triangles in the (s, t) plane.

Regions are open and described by strict constraints ``lhs < rhs``.  Each
region can test points two ways: a vectorized binary64 tier that only answers
where the rounding error bounds allow, and a certified tier on ``Expr``
coordinates for everything else.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from gmpy2 import mpfr

from .diophantine import lambda_fast, witnesses
from .lattice import Box, Lattice3, box_vectors
from .realnum import (
    CertifiedInterval,
    Const,
    Decision,
    Expr,
    Radical,
    add,
    all_of,
    as_expr,
    compare,
    emax,
    emin,
    exp,
    float_enclosure,
    inv,
    log,
    mul,
    neg,
    sign_of,
    to_realspec,
)

U = 2.0**-53


class DegenerateInputError(ValueError):
    """``n alpha`` or ``n beta`` is an integer, so the triangle is undefined."""


def _fenc(x) -> tuple[float, float]:
    """Binary64 bounds ``lo <= x <= hi``."""
    f, e = float_enclosure(as_expr(x))
    return math.nextafter(f - e, -math.inf), math.nextafter(f + e, math.inf)


def _abs(x: Expr) -> Expr:
    """``|x|``, keeping the tree as is when the sign is already certain."""
    s = sign_of(x, 64)
    if s == 1:
        return x
    if s == -1:
        return neg(x)
    return abs(x)


# ---------------------------------------------------------------------------
# regions
# ---------------------------------------------------------------------------


class Region:
    """Open region given by strict constraints on ``(y, |x1|, |x2|, y|x1||x2|)``.

    ``_bounds`` lists ``(quantity, lower, upper)`` with ``lower < q < upper``;
    quantities are indices into ``(y, |x1|, |x2|, product)``.
    """

    def _bounds(self) -> list[tuple[int, Expr | None, Expr | None]]:
        raise NotImplementedError

    def box(self) -> Box:
        raise NotImplementedError

    def _float_bounds(self):
        cache = getattr(self, "_fb", None)
        if cache is None:
            cache = [(q, _fenc(lo) if lo is not None else None, _fenc(hi) if hi is not None else None)
                     for q, lo, hi in self._bounds()]
            object.__setattr__(self, "_fb", cache)
        return cache

    def contains(self, v: Sequence) -> Decision:
        y, x1, x2 = (as_expr(c) for c in v)
        a1, a2 = _abs(x1), _abs(x2)
        qs = (y, a1, a2, mul(y, a1, a2))
        ds = []
        for q, lo, hi in self._bounds():
            e = qs[q]
            if lo is not None:
                ds.append(compare(lo, e, "<").tie_as_false())
            if hi is not None:
                ds.append(compare(e, hi, "<").tie_as_false())
        return all_of(ds)

    def classify(self, V: np.ndarray, err: np.ndarray):
        """Masks ``(certainly inside, certainly outside)`` for float points with error bounds."""
        V = np.asarray(V, dtype=float).reshape(-1, 3)
        err = np.asarray(err, dtype=float).reshape(-1, 3)
        a = np.abs(V)
        qlo = [V[:, 0] - err[:, 0], np.maximum(a[:, 1] - err[:, 1], 0), np.maximum(a[:, 2] - err[:, 2], 0)]
        qhi = [V[:, 0] + err[:, 0], a[:, 1] + err[:, 1], a[:, 2] + err[:, 2]]
        qlo.append(np.maximum(qlo[0], 0) * qlo[1] * qlo[2] * (1 - 8 * U))
        qhi.append(np.abs(qhi[0]) * qhi[1] * qhi[2] * (1 + 8 * U))
        # the product bound above is only valid for y > 0; y <= 0 fails the y constraint anyway
        ins = np.ones(len(V), dtype=bool)
        out = np.zeros(len(V), dtype=bool)
        for q, lo, hi in self._float_bounds():
            if lo is not None:
                ins &= qlo[q] > lo[1]
                out |= qhi[q] <= lo[0]
            if hi is not None:
                ins &= qhi[q] < hi[0]
                out |= qlo[q] >= hi[1]
        return ins, out & ~ins


@dataclass(frozen=True)
class RegionOmega(Region):
    """``0 < y < e^{2T}``, ``0 < |x_i| < 1/2``, ``y |x1| |x2| < eps``."""

    T: object
    eps: object

    def __post_init__(self):
        object.__setattr__(self, "T", as_expr(self.T))
        object.__setattr__(self, "eps", as_expr(self.eps))

    def _bounds(self):
        half = as_expr(Fraction(1, 2))
        zero = as_expr(0)
        return [(0, zero, exp(mul(2, self.T))), (1, zero, half), (2, zero, half), (3, None, self.eps)]

    def box(self) -> Box:
        half = Fraction(1, 2)
        return Box.make((0, -half, -half), (exp(mul(2, self.T)), half, half), closed=False)


@dataclass(frozen=True)
class RegionDelta(Region):
    """``0 < y < 1``, ``1/(2e) < |x_i| < 1/2``, ``y |x1| |x2| < eps``."""

    eps: object
    general: bool = False

    def __post_init__(self):
        object.__setattr__(self, "eps", as_expr(self.eps))
        if not self.general and not compare(self.eps, volume_limit(), "<").is_true:
            raise ValueError("eps must be below 1/(4e^2); pass general=True for larger values")

    def _bounds(self):
        half = as_expr(Fraction(1, 2))
        c = mul(Fraction(1, 2), exp(-1))
        return [(0, as_expr(0), as_expr(1)), (1, c, half), (2, c, half), (3, None, self.eps)]

    def box(self) -> Box:
        half = Fraction(1, 2)
        return Box.make((0, -half, -half), (1, half, half), closed=False)


@dataclass(frozen=True)
class DeltaTile(Region):
    """``a_{m,n}^{-1} Delta_eps``: ``0 < y < e^{m+n}``, ``e^{-m-1}/2 < |x1| < e^{-m}/2``, ``e^{-n-1}/2 < |x2| < e^{-n}/2``."""

    m: int
    n: int
    eps: object

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("tile indices are nonnegative")
        object.__setattr__(self, "eps", as_expr(self.eps))

    def _bounds(self):
        h = Fraction(1, 2)
        m, n = self.m, self.n
        return [
            (0, as_expr(0), exp(m + n)),
            (1, mul(h, exp(-m - 1)), mul(h, exp(-m))),
            (2, mul(h, exp(-n - 1)), mul(h, exp(-n))),
            (3, None, self.eps),
        ]

    def box(self) -> Box:
        h = Fraction(1, 2)
        r1, r2 = mul(h, exp(-self.m)), mul(h, exp(-self.n))
        return Box.make((0, neg(r1), neg(r2)), (exp(self.m + self.n), r1, r2), closed=False)


def delta_tile(m: int, n: int, eps) -> DeltaTile:
    return DeltaTile(m, n, eps)


def omega_contains(region: RegionOmega, v: Sequence) -> Decision:
    return region.contains(v)


def volume_limit() -> Expr:
    """``1 / (4 e^2)``: below it the y-integral over Delta_eps never saturates."""
    return mul(Fraction(1, 4), exp(-2))


# ---------------------------------------------------------------------------
# lattice point counts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SiegelCount:
    raw: int  # nonzero lattice vectors in the region
    n_count: int  # distinct first coefficients among them
    vectors: np.ndarray = field(repr=False)  # coefficient vectors, sorted
    boundary: tuple = ()  # coefficient vectors whose membership stayed undecided


def siegel_count(lattice: Lattice3, region: Region) -> SiegelCount:
    """Exact number of nonzero lattice vectors in ``region`` (box enumeration + region filter)."""
    inside, bnd, *_ = box_vectors(lattice, region.box())
    F, E = lattice.basis.float_enclosure()
    Zf = inside.astype(float)
    V = Zf @ F.T
    err = np.abs(Zf) @ (E + 8 * U * np.abs(F)).T * (1 + 1e-12)
    ins, out = region.classify(V, err)
    keep = [inside[ins]]
    boundary = []
    for z in np.concatenate([inside[~ins & ~out], bnd]) if len(bnd) else inside[~ins & ~out]:
        d = region.contains(lattice.vector(z).coordinates)
        if d.is_true:
            keep.append(z[None, :])
        elif d.is_undecided:
            boundary.append(tuple(int(c) for c in z))
    Z = np.concatenate(keep) if keep else np.zeros((0, 3), np.int64)
    Z = Z[np.lexsort(Z.T[::-1])] if len(Z) else Z
    return SiegelCount(len(Z), len(set(Z[:, 0].tolist())), Z, tuple(boundary))


# ---------------------------------------------------------------------------
# tessellation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TessellationReport:
    T: float
    eps: float
    samples: int
    tiles: int
    outside_omega: int
    double_membership: int
    not_in_own_tile: int
    undecided: int

    @property
    def ok(self) -> bool:
        return self.outside_omega == 0 and self.double_membership == 0 and self.not_in_own_tile == 0


def _sample_tile(rng: np.random.Generator, m: int, n: int, eps: float, k: int) -> np.ndarray:
    """``k`` points of the tile, uniform in ``(log y, log|x1|, log|x2|)`` over its bounding log-box."""
    l1 = rng.uniform(-m - 1, -m, k) - math.log(2)
    l2 = rng.uniform(-n - 1, -n, k) - math.log(2)
    # y below both e^{m+n} and eps / (|x1||x2|)
    ly_top = np.minimum(m + n, math.log(eps) - l1 - l2)
    ly = ly_top - rng.uniform(0, 1, k) * (ly_top + 12.0 + m + n)
    s1 = rng.choice((-1.0, 1.0), k)
    s2 = rng.choice((-1.0, 1.0), k)
    return np.stack([np.exp(ly), s1 * np.exp(l1), s2 * np.exp(l2)], axis=1)


def _tile_indices(x: float) -> range:
    """Tile bands that can hold ``|x|``: the one from ``-log(2|x|)`` and its neighbours."""
    k = math.floor(-math.log(2 * abs(x)))
    return range(max(k - 1, 0), k + 2)


def tessellation_check(T, eps, samples: int, seed: int) -> TessellationReport:
    """Sample every tile ``(m, n)`` with ``m, n <= T``; check it lies in Omega and in no other tile."""
    if samples < 1:
        raise ValueError("samples must be positive")
    Tf, epsf = as_expr(T).to_float(), as_expr(eps).to_float()
    top = math.floor(Tf)
    tiles = [(m, n) for m in range(top + 1) for n in range(top + 1)]
    region = RegionOmega(T, eps)
    tile_objs = {mn: DeltaTile(mn[0], mn[1], eps) for mn in tiles}
    rng = np.random.default_rng(seed)
    base, extra = divmod(samples, len(tiles))
    outside = double = not_own = und = 0
    for idx, (m, n) in enumerate(tiles):
        k = base + (1 if idx < extra else 0)
        if k == 0:
            continue
        P = _sample_tile(rng, m, n, epsf, k)
        zero = np.zeros_like(P)
        ins, out = region.classify(P, zero)
        for i in np.nonzero(~ins)[0]:
            d = region.contains([Fraction(float(c)) for c in P[i]])
            if d.is_false:
                outside += 1
            elif d.is_undecided:
                und += 1
        # band membership: test the candidate tiles around each point
        member = {}
        for mn in {(a, b) for a in range(max(m - 1, 0), m + 2) for b in range(max(n - 1, 0), n + 2)}:
            tile = tile_objs.get(mn) or DeltaTile(mn[0], mn[1], eps)
            t_in, t_out = tile.classify(P, zero)
            member[mn] = (t_in, t_out)
        counts = np.zeros(k, dtype=np.int64)
        for mn, (t_in, t_out) in member.items():
            counts += t_in
            for i in np.nonzero(~t_in & ~t_out)[0]:
                d = DeltaTile(mn[0], mn[1], eps).contains([Fraction(float(c)) for c in P[i]])
                if d.is_true:
                    counts[i] += 1
                elif d.is_undecided:
                    und += 1
        own_in, own_out = member[(m, n)]
        own = own_in.copy()
        for i in np.nonzero(~own_in & ~own_out)[0]:
            own[i] = tile_objs[(m, n)].contains([Fraction(float(c)) for c in P[i]]).is_true
        not_own += int(np.sum(~own))
        double += int(np.sum(counts > 1))
    return TessellationReport(Tf, epsf, samples, len(tiles), outside, double, not_own, und)


# ---------------------------------------------------------------------------
# volume of Delta_eps
# ---------------------------------------------------------------------------


def delta_volume(eps, grid: int = 1024, general: bool = False) -> CertifiedInterval:
    """Enclosure of the Lebesgue measure of ``Delta_eps``.

    The y-integral is exact: ``min(1, eps / (|x1||x2|))``.  What is left is
    decreasing in both ``|x_i|``, so on a log-spaced grid the far and near
    corner values give lower and upper sums.  The lower sum runs over a float
    band inside ``(1/(2e), 1/2)``, the upper over one containing it, and a
    relative slack absorbs the float summation error.
    """
    eps = as_expr(eps)
    if not general and not compare(eps, volume_limit(), "<").is_true:
        raise ValueError("eps must be below 1/(4e^2) for the volume identity; pass general=True")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    e_lo, e_hi = _fenc(eps)
    c_lo, c_hi = _fenc(mul(Fraction(1, 2), exp(-1)))
    inner = 0.5 * np.exp(-np.arange(1, grid)[::-1] / grid)
    lo_pts = np.concatenate([[c_hi], inner, [0.5]])
    hi_pts = np.concatenate([[c_lo], inner, [0.5]])

    def corner_sum(pts, corner, e):
        dx = np.diff(pts)
        vals = np.minimum(1.0, e / (corner[:, None] * corner[None, :]))
        return float(dx @ vals @ dx)

    lower = 4 * corner_sum(lo_pts, lo_pts[1:], e_lo) * (1 - 1e-10)
    upper = 4 * corner_sum(hi_pts, hi_pts[:-1], e_hi) * (1 + 1e-10)
    return CertifiedInterval(mpfr(lower), mpfr(upper), 53)


# ---------------------------------------------------------------------------
# cusp triangles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangleD:
    """``{s <= s_max, t <= t_max, s + t >= diag_min}`` for the vector ``(n, m1, m2)``."""

    n: int
    m1: int
    m2: int
    eps: Expr
    dist1: Radical  # |n alpha + m1|
    dist2: Radical  # |n beta + m2|

    @property
    def s_max(self) -> Expr:
        return log(mul(self.eps, inv(Const(self.dist1))))

    @property
    def t_max(self) -> Expr:
        return log(mul(self.eps, inv(Const(self.dist2))))

    @property
    def diag_min(self) -> Expr:
        return log(mul(self.n, inv(self.eps)))

    @property
    def leg(self) -> Expr:
        """``log(eps^3 / (n |n alpha + m1| |n beta + m2|))``."""
        prod = (self.dist1 * self.dist2).scale(self.n)
        return log(mul(self.eps, self.eps, self.eps, inv(Const(prod))))

    def is_nonempty(self) -> Decision:
        return compare(self.leg, 0, ">=")

    def area(self) -> Expr:
        return mul(Fraction(1, 2), self.leg, self.leg)

    def contains(self, s, t) -> Decision:
        s, t = as_expr(s), as_expr(t)
        return all_of([
            compare(s, self.s_max, "<="),
            compare(t, self.t_max, "<="),
            compare(s + t, self.diag_min, ">="),
        ])


def triangle_for_vector(n: int, m1: int, m2: int, alpha, beta, eps) -> TriangleD:
    a = to_realspec(alpha).exact()
    b = to_realspec(beta).exact()
    d1 = abs(a.scale(n) + Radical.rational(m1))
    d2 = abs(b.scale(n) + Radical.rational(m2))
    if d1.is_zero or d2.is_zero:
        which = "n*alpha" if d1.is_zero else "n*beta"
        raise DegenerateInputError(f"{which} is an integer for n = {n}: rational input, triangle undefined")
    return TriangleD(n, m1, m2, as_expr(eps), d1, d2)


def triangle_for(n: int, alpha, beta, eps) -> TriangleD | None:
    """Triangle for the nearest-integer vector of ``n``; ``None`` when the leg is negative."""
    if n < 1:
        raise ValueError("n must be positive")
    m1, m2, _, _ = witnesses(n, alpha, beta)
    tri = triangle_for_vector(n, m1, m2, alpha, beta, eps)
    return tri if not tri.is_nonempty().is_false else None


def _min(a: Expr, b: Expr) -> Expr:
    """``min(a, b)``, resolved to one side when the order is certain."""
    d = compare(a, b, "<=")
    if d.is_true:
        return a
    if d.is_false:
        return b
    return emin(a, b)


def _g(x: Expr) -> Expr:
    m = emax(x, 0)
    return mul(Fraction(1, 2), m, m)


@dataclass(frozen=True)
class ClippedTriangle:
    parent: TriangleD
    T: Expr
    area: CertifiedInterval
    apex: tuple  # (s, t) as Expr
    proj: tuple  # (lo, hi) as Expr
    lam: Expr
    area_exact: Expr  # the same area as an exact expression

    @property
    def n(self) -> int:
        return self.parent.n

    def float_polygon(self) -> list[tuple[float, float]]:
        """Vertices (counterclockwise) of the clipped polygon in binary64."""
        s_max, t_max, D = (x.to_float() for x in (self.parent.s_max, self.parent.t_max, self.parent.diag_min))
        tri = [(s_max, t_max), (D - t_max, t_max), (s_max, D - s_max)]
        return clip_polygon(tri, self.T.to_float())


def clip_polygon(poly, T: float) -> list[tuple[float, float]]:
    """Sutherland-Hodgman clip of a convex polygon against ``[0, T]^2``."""
    planes = [(1.0, 0.0, 0.0), (-1.0, 0.0, -T), (0.0, 1.0, 0.0), (0.0, -1.0, -T)]  # a s + b t >= c
    out = list(poly)
    for a, b, c in planes:
        if not out:
            break
        src, out = out, []
        for i, p in enumerate(src):
            q = src[(i + 1) % len(src)]
            fp = a * p[0] + b * p[1] - c
            fq = a * q[0] + b * q[1] - c
            if fp >= 0:
                out.append(p)
            if (fp >= 0) != (fq >= 0):
                r = fp / (fp - fq)
                out.append((p[0] + r * (q[0] - p[0]), p[1] + r * (q[1] - p[1])))
    return out


def shoelace(poly) -> float:
    return 0.5 * abs(sum(p[0] * q[1] - q[0] * p[1] for p, q in zip(poly, poly[1:] + poly[:1])))


def clip_triangle(tri: TriangleD, T) -> ClippedTriangle | None:
    """Intersect with ``[0, T]^2``.

    With ``S = min(T, s_max)`` and ``R = min(T, t_max)`` the piece is the
    rectangle ``[0, S] x [0, R]`` cut by ``s + t >= D``, whose area is
    ``S R - g(D) + g(D - S) + g(D - R) - g(D - S - R)``, ``g(x) = max(x, 0)^2 / 2``.
    The apex ``(S, R)`` is the unique maximizer of ``s + t``.
    """
    T = as_expr(T)
    if not compare(T, 0, ">").is_true:
        raise ValueError("T must be positive")
    S = _min(T, tri.s_max)
    R = _min(T, tri.t_max)
    D = tri.diag_min
    for d in (compare(S, 0, "<"), compare(R, 0, "<"), compare(add(S, R), D, "<")):
        if d.is_true:
            return None
        if d.is_undecided and not d.is_exact_tie:
            raise ArithmeticError(f"cannot decide clipping for n = {tri.n}")
    lam = add(S, R, neg(D))
    if compare(D, S, ">=").is_true and compare(D, R, ">=").is_true:
        # neither axis cuts the triangle: the closed form makes area = lam^2 / 2 structural
        area = mul(Fraction(1, 2), lam, lam)
    else:
        area = emax(add(mul(S, R), neg(_g(D)), _g(add(D, neg(S))), _g(add(D, neg(R))),
                        neg(_g(add(D, neg(S), neg(R))))), 0)
    return ClippedTriangle(tri, T, area.enclose(), (S, R), (emax(D, 0), add(S, R)), lam, area)


# ---------------------------------------------------------------------------
# atlas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Atlas:
    alpha: object
    beta: object
    T: Expr
    eps: Expr
    triangles: tuple[ClippedTriangle, ...]
    multiple: tuple[int, ...]  # n with more than one meeting triangle (expected empty)
    scanned: int  # number of n examined

    @property
    def unique(self) -> bool:
        return not self.multiple


def triangle_atlas(alpha, beta, T, eps) -> Atlas:
    """One clipped triangle per ``n`` whose triangle meets ``[0, T]^2``.

    Only ``n`` in the non-strict ``eps^3`` set can carry a nonempty triangle.
    For each, the nearest pair ``(m1, m2)`` is tried, together with its eight
    neighbours when ``eps`` is not below 1/2, and any ``n`` with more than
    one triangle meeting the square is recorded.
    """
    T, eps = as_expr(T), as_expr(eps)
    thr = mul(eps, eps, eps)
    res = lambda_fast(alpha, beta, T=T, eps=thr, strict=False)
    if res.undecided:
        raise ArithmeticError(f"undecided eps^3 memberships: {res.undecided[:5]}")
    # neighbours of the nearest pair sit at distance >= 1/2, beyond eps < 1/2
    shifts = (0,) if compare(eps, Fraction(1, 2), "<").is_true else (-1, 0, 1)
    tris, multiple = [], []
    for hit in res.hits:
        found = []
        for dm1 in shifts:
            for dm2 in shifts:
                tri = triangle_for_vector(hit.n, hit.m1 + dm1, hit.m2 + dm2, alpha, beta, eps)
                if (dm1 or dm2) and _far(tri, eps):
                    continue
                if tri.is_nonempty().is_false:
                    continue
                c = clip_triangle(tri, T)
                if c is not None:
                    found.append(c)
        if len(found) > 1:
            multiple.append(hit.n)
        tris.extend(found)
    return Atlas(alpha, beta, T, eps, tuple(tris), tuple(multiple), len(res.hits))


def _far(tri: TriangleD, eps: Expr) -> bool:
    """Certainly ``s_max < 0`` or ``t_max < 0``: the triangle misses the square."""
    return compare(Const(tri.dist1), eps, ">").is_true or compare(Const(tri.dist2), eps, ">").is_true


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _f(x: float) -> str:
    return f"{x:.3f}"


def atlas_svg(atlas: Atlas) -> str:
    """The clipped triangles in ``[0, T]^2`` drawn on a fixed 1000 x 1000 viewBox."""
    T = atlas.T.to_float()
    k = 1000.0 / T

    def pt(s, t):
        return _f(s * k), _f(1000.0 - t * k)

    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" viewBox="-40 -40 1080 1080" width="1080" height="1080">',
        '<rect x="0.000" y="0.000" width="1000.000" height="1000.000" fill="none" stroke="black" stroke-width="2"/>',
    ]
    for c in atlas.triangles:
        poly = c.float_polygon()
        coords = " ".join(",".join(pt(s, t)) for s, t in poly)
        lines.append(f'<polygon data-n="{c.n}" points="{coords}" fill="steelblue" fill-opacity="0.35" stroke="navy" stroke-width="1"/>')
    for c in atlas.triangles:
        D = c.parent.diag_min.to_float()
        a = (max(0.0, D - T), min(T, D))
        b = (min(T, D), max(0.0, D - T))
        x1, y1 = pt(*a)
        x2, y2 = pt(*b)
        lines.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="gray" stroke-width="0.5" stroke-dasharray="4 3"/>')
        sx, sy = (x.to_float() for x in c.apex)
        tx, ty = pt(sx, sy)
        lines.append(f'<text x="{tx}" y="{ty}" font-size="12" font-family="monospace">{c.n}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_atlas_csv(atlas: Atlas, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["n", "m1", "m2", "leg", "lambda", "area_lo", "area_hi", "proj_lo", "proj_hi"])
    for c in atlas.triangles:
        lo, hi = c.area.float_bounds()
        w.writerow([
            c.n, c.parent.m1, c.parent.m2,
            repr(c.parent.leg.to_float()), repr(c.lam.to_float()),
            repr(lo), repr(hi),
            repr(c.proj[0].to_float()), repr(c.proj[1].to_float()),
        ])
