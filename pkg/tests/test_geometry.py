import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from littlewood_lab.diophantine import lambda_bruteforce, count_bound
from littlewood_lab.geometry import (
    DegenerateInputError,
    RegionDelta,
    RegionOmega,
    TriangleD,
    atlas_svg,
    clip_polygon,
    clip_triangle,
    delta_tile,
    delta_volume,
    omega_contains,
    shoelace,
    siegel_count,
    tessellation_check,
    triangle_atlas,
    triangle_for,
    triangle_for_vector,
)
from littlewood_lab.lattice import Lattice3, in_X_eps
from littlewood_lab.realnum import GOLDEN, QuadraticSurd, Radical, as_expr, compare, exp, mul

from conftest import NEAR_RATIONAL, SQRT2, SQRT3, SQRT5

# Siegel n-counts for (sqrt 2, sqrt 3), frozen from an independent decimal scan
SIEGEL_S2_S3 = {(2, "0.3"): 14, (2, "0.05"): 1, (4, "0.3"): 47, (4, "0.05"): 5, (6, "0.3"): 98, (6, "0.05"): 11}


def test_omega_examples():
    R = RegionOmega(1, "0.1")
    q = Fraction(1, 4)
    assert omega_contains(R, (1, q, q)).is_true
    assert omega_contains(R, (0, q, q)).is_false
    R = RegionOmega(1, "0.05")
    v = (mul(exp(2), Fraction(99, 100)), Fraction(2, 5), Fraction(2, 5))
    assert omega_contains(R, v).is_false


def test_tile_examples():
    eps = "0.01"
    half_e = mul(Fraction(1, 2), exp(-1))
    pt = (Fraction(1, 10), half_e, Fraction(1, 4))
    assert delta_tile(0, 0, eps).contains(pt).is_false
    assert delta_tile(1, 0, eps).contains(pt).is_false
    t = delta_tile(1, 2, eps)
    inside = (Fraction(1, 100), mul(Fraction(1, 2), exp(Fraction(-3, 2))), mul(Fraction(1, 2), exp(Fraction(-5, 2))))
    assert t.contains(inside).is_true
    assert t.contains((exp(3), inside[1], inside[2])).is_false
    # tile (0, 0) is Delta itself
    D = RegionDelta(eps)
    p = (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
    assert D.contains(p).value == delta_tile(0, 0, eps).contains(p).value


def test_delta_requires_small_eps():
    with pytest.raises(ValueError):
        RegionDelta("0.05")
    RegionDelta("0.05", general=True)


@pytest.mark.parametrize("T", [2, 4, 6])
@pytest.mark.parametrize("eps", ["0.3", "0.05"])
def test_siegel_frozen(T, eps):
    sc = siegel_count(Lattice3.flowed_shear(SQRT2, SQRT3), RegionOmega(T, eps))
    assert sc.n_count == SIEGEL_S2_S3[(T, eps)]
    assert sc.raw == sc.n_count and not sc.boundary


def test_siegel_empty_for_tiny_eps():
    sc = siegel_count(Lattice3.flowed_shear(SQRT2, SQRT3), RegionOmega(2, "1e-9"))
    assert sc.raw == 0


def test_tessellation_small():
    rep = tessellation_check(3, "0.01", 3000, seed=7)
    assert rep.ok and rep.undecided == 0 and rep.tiles == 16


@pytest.mark.parametrize("eps", ["0.01", "0.03"])
def test_delta_volume_examples(eps):
    iv = delta_volume(eps, grid=256)
    assert iv.contains(4 * Fraction(eps))


def test_triangle_example():
    tenth = Fraction(1, 10)
    tri = triangle_for(1, tenth, tenth, Fraction(1, 4))
    assert abs(tri.s_max.to_float() - math.log(2.5)) < 1e-15
    assert abs(tri.t_max.to_float() - math.log(2.5)) < 1e-15
    assert abs(tri.diag_min.to_float() - math.log(4)) < 1e-15
    assert abs(tri.leg.to_float() - math.log(1.5625)) < 1e-15


def test_triangle_empty_and_degenerate():
    assert triangle_for(5, SQRT2, SQRT3, Fraction(1, 4)) is None  # product 0.12 > 1/64
    with pytest.raises(DegenerateInputError):
        triangle_for_vector(2, -1, 0, Fraction(1, 2), SQRT3, Fraction(1, 4))


def _rtri(n, d1, d2, eps):
    return TriangleD(n, 0, 0, as_expr(eps), Radical.rational(d1), Radical.rational(d2))


def test_clip_examples():
    tri = _rtri(1, Fraction(1, 10), Fraction(1, 10), Fraction(1, 4))
    c = clip_triangle(tri, 5)
    assert abs(c.lam.to_float() - tri.leg.to_float()) < 1e-15
    assert c.area.contains(0) is False
    assert abs(c.area.mid - tri.leg.to_float() ** 2 / 2) < 1e-15
    assert compare(c.apex[0], tri.s_max, "==").is_true
    # s_max > T: apex moves to (T, t_max)
    tri = _rtri(1, Fraction(1, 1000), Fraction(1, 10), Fraction(1, 4))
    c = clip_triangle(tri, 2)
    assert compare(c.apex[0], 2, "==").is_true
    want = 2 + tri.t_max.to_float() - tri.diag_min.to_float()
    assert abs(c.lam.to_float() - want) < 1e-14
    # hypotenuse beyond the far corner
    tri = _rtri(10**6, Fraction(1, 10**9), Fraction(1, 10**9), Fraction(1, 4))
    assert tri.diag_min.to_float() > 2 * 5
    assert clip_triangle(tri, 5) is None


def test_atlas_unique_and_svg():
    atlas = triangle_atlas(GOLDEN, SQRT5, 4, Fraction(1, 4))
    assert atlas.unique
    ns = [c.n for c in atlas.triangles]
    assert len(ns) == len(set(ns)) > 0
    svg = atlas_svg(atlas)
    assert svg.count("<polygon") == len(atlas.triangles)
    assert '<rect x="0.000" y="0.000" width="1000.000" height="1000.000"' in svg
    for n in ns:
        assert f'data-n="{n}"' in svg and f">{n}</text>" in svg


def test_atlas_points_are_in_X_eps():
    eps = Fraction(1, 4)
    atlas = triangle_atlas(*NEAR_RATIONAL, 4, eps)
    assert atlas.triangles
    for c in atlas.triangles[:6]:
        poly = c.float_polygon()
        cs = sum(p[0] for p in poly) / len(poly)
        ct = sum(p[1] for p in poly) / len(poly)
        L = Lattice3.flowed_shear(*NEAR_RATIONAL, Fraction(cs).limit_denominator(10**6),
                                  Fraction(ct).limit_denominator(10**6))
        assert in_X_eps(L, eps).is_true


# --- properties --------------------------------------------------------------

surd = st.builds(
    QuadraticSurd,
    st.fractions(min_value=-1, max_value=1, max_denominator=12),
    st.fractions(min_value=Fraction(1, 100), max_value=2, max_denominator=100),
    st.sampled_from([2, 3, 5, 6, 7, 10]),
)


@given(surd, surd, st.sampled_from([1, Fraction(3, 2), 2, Fraction(5, 2), 3]),
       st.sampled_from(["0.3", "0.1", "0.05", "0.01"]))
def test_siegel_equals_diophantine(a, b, T, eps):
    sc = siegel_count(Lattice3.flowed_shear(a, b), RegionOmega(T, eps))
    res = lambda_bruteforce(a, b, count_bound(T), eps)
    assert not sc.boundary and not res.undecided
    assert sorted(set(sc.vectors[:, 0].tolist())) == list(res.ns)
    assert sc.raw == sc.n_count == len(res)


@given(surd, surd, st.integers(min_value=0, max_value=2), st.integers(min_value=0, max_value=2),
       st.sampled_from(["0.03", "0.01", "0.002"]))
def test_tile_equivariance(a, b, m, n, eps):
    lhs = siegel_count(Lattice3.flowed_shear(a, b, m, n), RegionDelta(eps))
    rhs = siegel_count(Lattice3.flowed_shear(a, b), delta_tile(m, n, eps))
    assert lhs.raw == rhs.raw
    assert lhs.vectors.tolist() == rhs.vectors.tolist()


@given(st.fractions(min_value=Fraction(1, 1000), max_value=Fraction(33, 1000), max_denominator=1000))
def test_delta_volume_contains_4eps(eps):
    iv = delta_volume(eps, grid=128)
    assert iv.contains(4 * eps)


d_values = st.fractions(min_value=Fraction(1, 10**6), max_value=Fraction(1, 2), max_denominator=10**6)


@given(st.integers(min_value=1, max_value=10**5), d_values, d_values,
       st.fractions(min_value=Fraction(1, 100), max_value=Fraction(1, 2), max_denominator=100),
       st.fractions(min_value=Fraction(1, 2), max_value=12, max_denominator=8))
def test_clip_consistency(n, d1, d2, eps, T):
    assume(n * d1 * d2 != eps**3 and d1 != eps and d2 != eps)
    tri = _rtri(n, d1, d2, eps)
    leg = tri.leg.to_float()
    assert abs(tri.s_max.to_float() + tri.t_max.to_float() - tri.diag_min.to_float() - leg) < 1e-12
    c = clip_triangle(tri, T)
    s_max, t_max, D = tri.s_max.to_float(), tri.t_max.to_float(), tri.diag_min.to_float()
    poly = clip_polygon([(s_max, t_max), (D - t_max, t_max), (s_max, D - s_max)], float(T))
    area = shoelace(poly) if len(poly) >= 3 and leg > 0 else 0.0
    if c is None:
        assert area < 1e-9
        return
    lam = c.lam.to_float()
    assert c.area.lo <= lam**2 / 2 * (1 + 1e-12)
    assert lam <= leg + 1e-12
    assert abs((c.proj[1].to_float() - c.proj[0].to_float()) - lam) < 1e-12 * (1 + abs(D))
    assert abs(c.area.mid - area) < 1e-9 * (1 + area)
