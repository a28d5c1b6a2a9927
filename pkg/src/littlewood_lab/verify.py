"""Escape-of-mass bookkeeping: coverage of [0,T]^2, the counting bound and its witnesses."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import kernels
from .diophantine import count_bound, lambda_fast, product_exact
from .geometry import Atlas, triangle_atlas
from .lattice import Lattice3, in_X_eps
from .realnum import (
    Const,
    Expr,
    Radical,
    as_expr,
    compare,
    emin,
    exp,
    float_enclosure,
    inv,
    log,
    mul,
    sqrt,
    to_realspec,
)

U = 2.0**-53
_SQRT2_3 = mul(Fraction(1, 3), sqrt(2))  # sqrt(2) / 3


class WitnessError(AssertionError):
    """A multiple of a fat-triangle index failed certification (implementation bug)."""


def _fbounds(x) -> tuple[float, float]:
    f, e = float_enclosure(as_expr(x))
    return math.nextafter(f - e, -math.inf), math.nextafter(f + e, math.inf)


def _pair(alpha, beta):
    a, ea = float_enclosure(as_expr(to_realspec(alpha)))
    b, eb = float_enclosure(as_expr(to_realspec(beta)))
    return a, ea, b, eb


def cell_centers(T, grid: int) -> np.ndarray:
    """Midpoints ``(i + 1/2) T / grid`` as binary64; both coverage paths use exactly these."""
    return (np.arange(grid) + 0.5) * (as_expr(T).to_float() / grid)


# ---------------------------------------------------------------------------
# lattice path
# ---------------------------------------------------------------------------


def xeps_grid(alpha, beta, s_values, t_values, eps, threads: int = 1):
    """Certified ``X_eps`` indicator on a grid: statuses 1 / 0 / -1 and witness ``n``.

    The float kernel settles most cells; the rest go through the MPFR
    enumeration at the exact binary64 grid point.
    """
    a, ea, b, eb = _pair(alpha, beta)
    e_lo, e_hi = _fbounds(eps)
    status, wit = kernels.xeps_rows(a, ea, b, eb, s_values, t_values, e_lo, e_hi, threads)
    escalated = 0
    for i, j in zip(*np.nonzero(status == kernels.UNSURE)):
        escalated += 1
        L = Lattice3.flowed_shear(alpha, beta, Fraction(float(s_values[i])), Fraction(float(t_values[j])))
        d = in_X_eps(L, eps)
        status[i, j] = 1 if d.is_true else (0 if d.is_false else -1)
    return status, wit, escalated


# ---------------------------------------------------------------------------
# atlas path
# ---------------------------------------------------------------------------


def atlas_indicator(atlas: Atlas, s_values, t_values) -> np.ndarray:
    """Statuses 1 / 0 / -1 for membership of grid points in the union of atlas triangles."""
    S = np.asarray(s_values)[:, None]
    Tt = np.asarray(t_values)[None, :]
    out = np.zeros((len(s_values), len(t_values)), dtype=np.int8)
    unsure = np.zeros_like(out, dtype=bool)
    total = S + Tt
    tot_lo, tot_hi = total * (1 - 2 * U), total * (1 + 2 * U)
    for c in atlas.triangles:
        tri = c.parent
        smax = _fbounds(tri.s_max)
        tmax = _fbounds(tri.t_max)
        dmin = _fbounds(tri.diag_min)
        inside = (S <= smax[0]) & (Tt <= tmax[0]) & (tot_lo >= dmin[1])
        outside = (S > smax[1]) | (Tt > tmax[1]) | (tot_hi < dmin[0])
        out[inside] = 1
        unsure |= ~inside & ~outside
        for i, j in zip(*np.nonzero(~inside & ~outside & (out == 0))):
            d = tri.contains(Fraction(float(s_values[i])), Fraction(float(t_values[j])))
            if d.is_true:
                out[i, j] = 1
    # a point left unsure by some triangle and not certified inside another stays undecided
    for i, j in zip(*np.nonzero(unsure & (out == 0))):
        ds = [c.parent.contains(Fraction(float(s_values[i])), Fraction(float(t_values[j])))
              for c in atlas.triangles]
        if any(d.is_undecided for d in ds):
            out[i, j] = -1
    return out


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverageReport:
    T: float
    eps: float
    grid: int
    cells_true: int
    cells_false: int
    cells_undecided: int
    gamma_lower: float
    gamma_upper: float
    atlas_true: int
    atlas_undecided: int
    disagreements: int
    escalated: int
    area_fraction: float  # sum of clipped triangle areas / T^2
    triangles: int

    @property
    def agreement(self) -> bool:
        return self.disagreements == 0

    @property
    def undecided_fraction(self) -> float:
        return self.cells_undecided / self.grid**2


def coverage(alpha, beta, T, eps, grid: int = 200, threads: int = 1, atlas: Atlas | None = None,
             return_maps: bool = False):
    """Midpoint-rule coverage of ``[0, T]^2`` by ``{(s, t) : a_{s,t} tau Z^3 in X_eps}``, two ways."""
    if grid < 16:
        raise ValueError("grid must be at least 16")
    if atlas is None:
        atlas = triangle_atlas(alpha, beta, T, eps)
    c = cell_centers(T, grid)
    lat, _, escalated = xeps_grid(alpha, beta, c, c, eps, threads)
    geo = atlas_indicator(atlas, c, c)
    both = (lat != -1) & (geo != -1)
    dis = int(np.sum(both & (lat != geo)))
    total = grid * grid
    t_ = int(np.sum(lat == 1))
    f_ = int(np.sum(lat == 0))
    u_ = int(np.sum(lat == -1))
    Tf = as_expr(T).to_float()
    area = sum(x.area.mid for x in atlas.triangles) / Tf**2
    rep = CoverageReport(
        Tf, as_expr(eps).to_float(), grid, t_, f_, u_, t_ / total, (t_ + u_) / total,
        int(np.sum(geo == 1)), int(np.sum(geo == -1)), dis, escalated, area, len(atlas.triangles),
    )
    return (rep, lat, geo) if return_maps else rep


@dataclass(frozen=True)
class DiscreteReport:
    N: int
    eps: float
    cells_true: int
    cells_undecided: int
    fraction: float


def empirical_discrete(alpha, beta, N: int, eps, threads: int = 1) -> DiscreteReport:
    """Fraction of integer pairs ``(m, n)`` in ``[0, N-1]^2`` with ``a_{m,n} tau Gamma`` in ``X_eps``."""
    if N < 1:
        raise ValueError("N must be positive")
    pts = np.arange(N, dtype=float)
    st, _, _ = xeps_grid(alpha, beta, pts, pts, eps, threads)
    t_ = int(np.sum(st == 1))
    return DiscreteReport(N, as_expr(eps).to_float(), t_, int(np.sum(st == -1)), t_ / N**2)


# ---------------------------------------------------------------------------
# the counting bound
# ---------------------------------------------------------------------------


def branch_count(gamma, T, L) -> Expr:
    """``gamma T^2 / L``."""
    T = as_expr(T)
    return mul(as_expr(gamma), T, T, inv(as_expr(L)))


def branch_exp(L) -> Expr:
    """``exp(sqrt(2) L^{1/2} / 3)``."""
    return exp(mul(_SQRT2_3, sqrt(as_expr(L))))


def log_choice_L(T) -> Expr:
    """``18 (log T)^2``, which makes the exponential branch exactly ``T^2``."""
    lt = log(as_expr(T))
    return mul(18, lt, lt)


@dataclass(frozen=True)
class BoundCheck:
    gamma: float
    T: float
    L: float
    branch_count: float
    branch_exp: float
    bound: float
    observed: int
    satisfied: bool
    label: str = ""


def _check(gamma, T, L, observed: int, label: str = "") -> BoundCheck:
    L = as_expr(L)
    if not compare(L, 1, ">").is_true:
        raise ValueError("L must exceed 1")
    bc, be = branch_count(gamma, T, L), branch_exp(L)
    bound = emin(bc, be)
    ok = compare(observed, bound, ">=")
    if ok.is_undecided:
        raise ArithmeticError("cannot decide the bound comparison")
    return BoundCheck(
        float(gamma), as_expr(T).to_float(), L.to_float(), bc.to_float(), be.to_float(),
        bound.to_float(), observed, ok.is_true, label,
    )


def observed_count(alpha, beta, T, eps) -> int:
    """``|{n < e^{2T} : n <n alpha> <n beta> <= eps^3}|``."""
    e = as_expr(eps)
    res = lambda_fast(alpha, beta, T=T, eps=mul(e, e, e), strict=False)
    if res.undecided:
        raise ArithmeticError(f"undecided memberships: {res.undecided[:5]}")
    return len(res)


def theorem33_check(alpha, beta, T, eps, Ls: Sequence, gamma=None, grid: int = 200,
                    threads: int = 1, report: CoverageReport | None = None) -> list[BoundCheck]:
    """Check ``observed >= min{gamma T^2 / L, e^{sqrt(2) L^{1/2} / 3}}`` for each ``L``.

    ``gamma`` defaults to the certified-true coverage fraction on a ``grid``
    midpoint grid.
    """
    if not (compare(eps, 0, ">").is_true and compare(eps, Fraction(1, 2), "<").is_true):
        raise ValueError("eps must lie in (0, 1/2)")
    if not compare(T, 1, ">").is_true:
        raise ValueError("T must exceed 1")
    if gamma is None:
        if report is None:
            report = coverage(alpha, beta, T, eps, grid, threads)
        gamma = Fraction(report.cells_true, report.grid**2)
    obs = observed_count(alpha, beta, T, eps)
    out = []
    for L in Ls:
        label = ""
        if isinstance(L, str) and L == "log":
            L, label = log_choice_L(T), "18(log T)^2"
        out.append(_check(gamma, T, L, obs, label))
    return out


@dataclass(frozen=True)
class OptimalL:
    L: float
    bound: float
    log_L: float  # 18 (log T)^2
    log_bound: float
    residual: float  # |log branch_count - log branch_exp| at L


def optimal_L(gamma, T, rtol: float = 1e-9) -> OptimalL:
    """Equalize ``gamma T^2 / L = e^{sqrt(2) L^{1/2} / 3}`` by bisection on ``L > 1``.

    ``h(L) = log(gamma T^2) - log L - sqrt(2 L) / 3`` is strictly decreasing;
    when ``h(1) <= 0`` the supremum of the bound is approached as ``L -> 1``.
    """
    Tf = as_expr(T).to_float()
    if not compare(T, exp(1), ">").is_true:
        raise ValueError("T must exceed e")
    g = float(gamma)
    if g <= 0:
        raise ValueError("gamma must be positive")
    c = math.log(g) + 2 * math.log(Tf)

    def h(L):
        return c - math.log(L) - math.sqrt(2 * L) / 3

    lo, hi = 1.0, 2.0
    if h(lo) <= 0:
        L = 1.0
    else:
        while h(hi) > 0:
            lo, hi = hi, 2 * hi
        while (hi - lo) > rtol * lo:
            mid = 0.5 * (lo + hi)
            if h(mid) > 0:
                lo = mid
            else:
                hi = mid
        L = 0.5 * (lo + hi)
    bound = min(g * Tf**2 / L, math.exp(math.sqrt(2 * L) / 3))
    lL = log_choice_L(T).to_float()
    lb = min(g * Tf**2 / lL, Tf**2)
    return OptimalL(L, bound, lL, lb, abs(h(L)))


# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WitnessSet:
    n0: int
    L: float
    area_lo: float
    lam: float
    k_max: int
    ks: tuple[int, ...]
    multiples: tuple[int, ...]
    all_verified: bool
    strict_k_max: int  # largest k < e^{...}, the strict reading
    lambda_ok: bool  # lambda > sqrt(2) L^{1/2}


def fat_triangle_witness(alpha, beta, T, eps, L, atlas: Atlas | None = None) -> WitnessSet | None:
    """From an atlas triangle with area > L, certify every ``k n0`` with ``k <= e^{sqrt(2) L^{1/2}/3}``."""
    L = as_expr(L)
    if atlas is None:
        atlas = triangle_atlas(alpha, beta, T, eps)
    fat = [c for c in atlas.triangles if compare(Const(Radical.rational(c.area.lower)), L, ">").is_true]
    if not fat:
        return None
    best = max(fat, key=lambda c: (c.area.lower, -c.n))
    e = as_expr(eps)
    thr = mul(e, e, e)
    x = branch_exp(L)
    k_max = _floor(x)
    strict_k_max = k_max - 1 if compare(x, k_max, "==").is_true else k_max
    n_limit = count_bound(T)
    ks, multiples = [], []
    lam_ok = compare(best.lam, mul(sqrt(2), sqrt(L)), ">").is_true
    if not lam_ok:
        raise WitnessError(f"area > L but lambda <= sqrt(2 L) for n = {best.n}")
    for k in range(1, k_max + 1):
        kn = k * best.n
        if kn > n_limit:
            raise WitnessError(f"{k} * {best.n} is not below e^(2T)")
        d = compare(Const(product_exact(kn, alpha, beta)[2]), thr, "<=")
        if not d.is_true:
            raise WitnessError(f"{k} * {best.n} = {kn} is not certified in the eps^3 set")
        ks.append(k)
        multiples.append(kn)
    return WitnessSet(best.n, L.to_float(), float(best.area.lower), best.lam.to_float(), k_max,
                      tuple(ks), tuple(multiples), True, strict_k_max, lam_ok)


def _floor(x: Expr) -> int:
    p = 64
    while True:
        iv = x.interval(p)
        lo, hi = math.floor(iv.lo), math.floor(iv.hi)
        if lo == hi:
            return int(lo)
        if compare(x, hi, "==").is_true:
            return int(hi)
        if p > 1024:
            raise ArithmeticError("floor undecidable")
        p *= 2


# ---------------------------------------------------------------------------
# f_gamma
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FGammaRow:
    T: float
    f: float
    lhs: float  # gamma T^2 / f(T)
    rhs: float  # exp(sqrt(2)/3 f(T)^{1/2})
    holds: bool


@dataclass(frozen=True)
class FGammaReport:
    gamma: float
    rows: tuple[FGammaRow, ...]
    increasing: bool
    first_failure: float | None

    @property
    def holds(self) -> bool:
        return self.first_failure is None


def f_log(T) -> Expr:
    return log_choice_L(T)


def fgamma_check(f: Callable | Mapping, gamma, T_range: Sequence) -> FGammaReport:
    """``gamma T^2 / f(T) <= exp(sqrt(2)/3 f(T)^{1/2})`` at each tabulated ``T``."""
    rows = []
    first = None
    vals = []
    for T in T_range:
        fv = as_expr(f[T] if isinstance(f, Mapping) else f(T))
        vals.append(fv)
        lhs = branch_count(gamma, T, fv)
        rhs = branch_exp(fv)
        d = compare(lhs, rhs, "<=")
        if d.is_undecided:
            raise ArithmeticError(f"undecided at T = {T}")
        rows.append(FGammaRow(as_expr(T).to_float(), fv.to_float(), lhs.to_float(), rhs.to_float(), d.is_true))
        if not d.is_true and first is None:
            first = as_expr(T).to_float()
    increasing = all(compare(a, b, "<").is_true for a, b in zip(vals, vals[1:]))
    return FGammaReport(float(gamma), tuple(rows), increasing, first)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def _clean(x):
    if isinstance(x, float):
        return float(repr(x)) if math.isfinite(x) else str(x)
    if isinstance(x, dict):
        return {k: _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    return x


def verify_report(config: dict, report: CoverageReport, checks: Sequence[BoundCheck],
                  witness: WitnessSet | None, optimal: OptimalL | None = None,
                  fgamma: FGammaReport | None = None) -> dict:
    out = {
        "config": config,
        "coverage": {
            "gamma_lower": report.gamma_lower,
            "gamma_upper": report.gamma_upper,
            "undecided": report.undecided_fraction,
            "cells_true": report.cells_true,
            "cells_false": report.cells_false,
            "cells_undecided": report.cells_undecided,
            "agreement": report.agreement,
            "area_fraction": report.area_fraction,
        },
        "bound_checks": [asdict(c) for c in checks],
        "witness": asdict(witness) if witness is not None else None,
    }
    if optimal is not None:
        out["optimal_L"] = asdict(optimal)
    if fgamma is not None:
        out["fgamma"] = {"holds": fgamma.holds, "first_failure": fgamma.first_failure,
                         "rows": [asdict(r) for r in fgamma.rows]}
    return _clean(out)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
