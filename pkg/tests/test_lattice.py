import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from littlewood_lab.lattice import (
    Box,
    Lattice3,
    LatticeError,
    Matrix3,
    diag_flow,
    enumerate_in_box,
    in_X_eps,
    interval_inverse,
    shear,
    shortest_vector_supnorm,
)
from littlewood_lab.realnum import compare, log

from conftest import SQRT2, SQRT3


def _contains(expr, q):
    return expr.enclose().contains(Fraction(q))


def test_diag_flow_examples():
    I = diag_flow(0, 0)
    for i, j in product(range(3), range(3)):
        assert compare(I[i, j], int(i == j), "==").is_true
    a = diag_flow(1, 0)
    assert abs(a[0, 0].to_float() - math.exp(-1)) < 1e-15
    assert abs(a[1, 1].to_float() - math.e) < 1e-15
    assert compare(a[2, 2], 1, "==").is_true
    b = diag_flow(log(2), log(3))
    assert _contains(b[0, 0], Fraction(1, 6))
    assert compare(b[1, 1], 2, "==").is_true and compare(b[2, 2], 3, "==").is_true


def test_shear_examples():
    m = shear(Fraction(1, 2), Fraction(1, 3))
    want = [[1, 0, 0], [Fraction(1, 2), 1, 0], [Fraction(1, 3), 0, 1]]
    for i, j in product(range(3), range(3)):
        assert compare(m[i, j], want[i][j], "==").is_true


def test_non_unimodular_rejected():
    with pytest.raises(LatticeError):
        Lattice3(Matrix3.diagonal(2, 1, 1))


def test_enumerate_unit_lattice():
    res = enumerate_in_box(Lattice3.standard(), Box.cube(Fraction(3, 2)))
    assert len(res) == 26 and not res.boundary


def test_enumerate_scaled_axes():
    L = Lattice3(Matrix3.diagonal(2, 1, Fraction(1, 2)))
    res = enumerate_in_box(L, Box.cube(Fraction(3, 4)))
    assert sorted(v.coefficients for v in res.inside) == [(0, 0, -1), (0, 0, 1)]


def test_enumerate_shear_window():
    L = Lattice3.flowed_shear(Fraction(1, 3), Fraction(1, 5))
    box = Box.make((0, Fraction(-1, 2), Fraction(-1, 2)), (4, Fraction(1, 2), Fraction(1, 2)), closed=False)
    res = enumerate_in_box(L, box)
    assert sorted(v.coefficients for v in res.inside) == [(1, 0, 0), (2, -1, 0), (3, -1, -1)]


def test_enumerate_point_on_closed_face():
    # (0, 3, -3) maps to (0, 1, 0), exactly on the face of the closed unit cube
    B = [[Fraction(5, 3), 0, 0], [0, Fraction(2, 3), Fraction(1, 3)], [0, Fraction(9, 5), Fraction(9, 5)]]
    res = enumerate_in_box(Lattice3(Matrix3(B)), Box.cube(1, closed=True))
    assert sorted(v.coefficients for v in res.inside) == [
        (0, -3, 3), (0, -2, 2), (0, -1, 1), (0, 1, -1), (0, 2, -2), (0, 3, -3)]
    res = enumerate_in_box(Lattice3(Matrix3(B)), Box.cube(1, closed=False))
    assert len(res) == 4


def test_shortest_unit_lattice():
    sv = shortest_vector_supnorm(Lattice3.standard())
    assert sv.length.contains(1)
    assert sv.witness.coefficients == (1, 0, 0)


def test_shortest_scaled_axes():
    sv = shortest_vector_supnorm(Lattice3(Matrix3.diagonal(2, 1, Fraction(1, 2))))
    assert sv.length.contains(Fraction(1, 2))
    assert sv.witness.coefficients == (0, 0, 1)


def _brute_min_supnorm(alpha, beta, s, t, bound=100):
    """Minimal sup-norm over coefficients |n|, |m1|, |m2| <= bound, not all zero."""
    best = math.inf
    ms = np.arange(-bound, bound + 1)
    for n in range(-bound, bound + 1):
        y = abs(math.exp(-s - t) * n)
        x1 = np.abs(math.exp(s) * (n * alpha + ms))
        x2 = np.abs(math.exp(t) * (n * beta + ms))
        if n == 0:
            # exclude the zero vector
            v = np.maximum.outer(x1, x2)
            v[bound, bound] = math.inf
            best = min(best, float(v.min()))
        else:
            best = min(best, max(y, float(x1.min()), float(x2.min())))
    return best


def test_shortest_flowed_matches_bruteforce():
    L = Lattice3.flowed_shear(SQRT2, SQRT3, 2, 2)
    sv = shortest_vector_supnorm(L)
    oracle = _brute_min_supnorm(math.sqrt(2), math.sqrt(3), 2.0, 2.0)
    assert abs(sv.length.mid - oracle) < 1e-12
    assert max(abs(c) for c in sv.witness.coefficients) <= 100


def test_in_X_eps_examples():
    assert in_X_eps(Lattice3.standard(), Fraction(2, 5)).is_false
    assert in_X_eps(Lattice3(Matrix3.diagonal(2, 1, Fraction(1, 2))), Fraction(1, 2)).is_true
    L = Lattice3.flowed_shear(SQRT2, SQRT3, 3, 3)
    oracle = _brute_min_supnorm(math.sqrt(2), math.sqrt(3), 3.0, 3.0)
    assert in_X_eps(L, Fraction(1, 4)).value == (oracle <= 0.25)


def test_in_X_eps_range():
    with pytest.raises(ValueError):
        in_X_eps(Lattice3.standard(), Fraction(3, 4))


def test_json_roundtrip():
    L = Lattice3.flowed_shear(SQRT2, SQRT3, Fraction(1, 2), 1)
    back = Lattice3.from_json(L.to_json())
    assert back.to_json() == L.to_json()
    M = Lattice3(Matrix3([[1, 0, 0], [Fraction(1, 2), 1, 0], [SQRT2, 0, 1]]))
    assert Lattice3.from_json(M.to_json()).to_json() == M.to_json()


# --- properties --------------------------------------------------------------

params = st.fractions(min_value=-3, max_value=3, max_denominator=50)


@given(params, params)
def test_flow_and_shear_unimodular(s, t):
    assert diag_flow(s, t).is_unimodular().is_true
    assert shear(s, t).is_unimodular().is_true


small_int = st.integers(min_value=-2, max_value=2)
pos_q = st.fractions(min_value=Fraction(1, 3), max_value=3, max_denominator=6)


@st.composite
def rational_lattices(draw):
    """``diag(p, q, 1/(pq)) . shear(a, b) . U`` with integer unimodular ``U``."""
    p, q = draw(pos_q), draw(pos_q)
    a = draw(st.fractions(min_value=-1, max_value=1, max_denominator=7))
    b = draw(st.fractions(min_value=-1, max_value=1, max_denominator=7))
    u = [[1, draw(small_int), draw(small_int)], [0, 1, draw(small_int)], [0, 0, 1]]
    l_ = [[1, 0, 0], [draw(small_int), 1, 0], [draw(small_int), draw(small_int), 1]]
    D = [[p, 0, 0], [0, q, 0], [0, 0, 1 / (p * q)]]
    S = [[1, 0, 0], [a, 1, 0], [b, 0, 1]]

    def mm(A, B):
        return [[sum(Fraction(A[i][k]) * B[k][j] for k in range(3)) for j in range(3)] for i in range(3)]

    return mm(mm(mm(D, S), u), l_)


def _inverse(B):
    M = Matrix3(B)
    inv = interval_inverse(M.interval_matrix(200))
    return [[max(abs(x.lower), abs(x.upper)) for x in row] for row in inv]


_GRID = np.array(list(product(range(-30, 31), repeat=3)), dtype=np.int64)
_GRID = _GRID[np.any(_GRID != 0, axis=1)]


def _scan_box(B, r, closed):
    """Exact scan of all coefficients in [-30, 30]^3, in integers after clearing denominators."""
    K = math.lcm(*(x.denominator for row in B for x in map(Fraction, row)), Fraction(r).denominator)
    BI = np.array([[int(Fraction(x) * K) for x in row] for row in B], dtype=np.int64)
    rI = int(Fraction(r) * K)
    m = np.abs(_GRID @ BI.T).max(axis=1)
    hit = (m <= rI) if closed else (m < rI)
    return {tuple(int(v) for v in c) for c in _GRID[hit]}


@given(rational_lattices(), st.fractions(min_value=Fraction(1, 4), max_value=2, max_denominator=8),
       st.booleans())
def test_enumeration_complete_against_bruteforce(B, r, closed):
    Binv = _inverse(B)
    assume(all(sum(abs(x) for x in row) * r <= 30 for row in Binv))
    res = enumerate_in_box(Lattice3(Matrix3(B)), Box.cube(r, closed=closed))
    got = {v.coefficients for v in res.inside} | {v.coefficients for v in res.boundary}
    want = _scan_box(B, r, closed)
    assert {v.coefficients for v in res.inside} == want
    assert got == want  # rational lattices never produce undecided faces


@given(rational_lattices(), st.fractions(min_value=Fraction(1, 4), max_value=2, max_denominator=8))
def test_enumeration_symmetric(B, r):
    res = enumerate_in_box(Lattice3(Matrix3(B)), Box.cube(r))
    s = {v.coefficients for v in res.inside}
    assert s == {tuple(-x for x in c) for c in s}


@given(st.fractions(min_value=0, max_value=3, max_denominator=8),
       st.fractions(min_value=0, max_value=3, max_denominator=8))
def test_shortest_witness_norm_equals_length(s, t):
    L = Lattice3.flowed_shear(SQRT2, SQRT3, s, t)
    sv = shortest_vector_supnorm(L)
    iv = sv.witness.supnorm().enclose()
    assert iv.lo <= sv.length.hi and sv.length.lo <= iv.hi
    oracle = _brute_min_supnorm(math.sqrt(2), math.sqrt(3), float(s), float(t), bound=40)
    assert sv.length.mid <= oracle + 1e-12
