"""Unimodular lattices in R^3, the diagonal flow and the shear.

Enumeration is exact in the following sense: a floating-point LLL pass only
chooses an integer change of basis ``U`` (any unimodular ``U`` is valid), the
coefficient ranges come from a certified interval inverse of the reduced
basis, and membership of every enumerated vector is decided either by a
float evaluation carrying an explicit rounding-error bound or, near the box
faces, by MPFR interval evaluation of the exact coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .realnum import (
    DEFAULT_PRECISION,
    FALSE,
    TRUE,
    CertifiedInterval,
    Decision,
    Expr,
    ExprLike,
    Radical,
    _NeedPrecision,
    add,
    all_of,
    as_expr,
    compare,
    emax,
    exp,
    float_enclosure,
    format_real,
    mul,
    neg,
    parse_real,
    to_realspec,
    undecided,
    MAX_PRECISION_REACHED,
)

U_ROUND = 2.0**-53
# generous multiple of the unit roundoff for short dot products
_DOT_SLACK = 8 * U_ROUND


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


class Matrix3:
    """3x3 matrix of certified-real expressions, stored row-major."""

    __slots__ = ("entries", "_float")

    def __init__(self, rows: Sequence[Sequence[ExprLike]]):
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise LatticeError("expected a 3x3 matrix")
        self.entries = tuple(tuple(as_expr(x) for x in r) for r in rows)
        self._float = None

    @classmethod
    def identity(cls) -> "Matrix3":
        return cls([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    @classmethod
    def diagonal(cls, a, b, c) -> "Matrix3":
        return cls([[a, 0, 0], [0, b, 0], [0, 0, c]])

    def __getitem__(self, ij) -> Expr:
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other):
        if isinstance(other, Matrix3):
            return Matrix3([
                [add(*(mul(self.entries[i][k], other.entries[k][j]) for k in range(3)))
                 for j in range(3)]
                for i in range(3)
            ])
        vec = [as_expr(x) for x in other]
        return tuple(add(*(mul(self.entries[i][k], vec[k]) for k in range(3))) for i in range(3))

    def det(self) -> Expr:
        e = self.entries

        def minor(i1, i2, j1, j2):
            return add(mul(e[i1][j1], e[i2][j2]), neg(mul(e[i1][j2], e[i2][j1])))

        return add(
            mul(e[0][0], minor(1, 2, 1, 2)),
            neg(mul(e[0][1], minor(1, 2, 0, 2))),
            mul(e[0][2], minor(1, 2, 0, 1)),
        )

    def is_unimodular(self) -> Decision:
        return compare(self.det(), 1, "==")

    def float_enclosure(self) -> tuple[np.ndarray, np.ndarray]:
        """Float matrix ``F`` and entrywise bounds ``E`` with ``|M - F| <= E``."""
        if self._float is None:
            F = np.empty((3, 3))
            E = np.empty((3, 3))
            for i in range(3):
                for j in range(3):
                    F[i, j], E[i, j] = float_enclosure(self.entries[i][j])
            self._float = (F, E)
        return self._float

    def interval_matrix(self, prec: int) -> list[list[CertifiedInterval]]:
        return [[self.entries[i][j].interval(prec) for j in range(3)] for i in range(3)]

    def __repr__(self):
        F, _ = self.float_enclosure()
        return f"Matrix3({F.tolist()})"


def diag_flow(s: ExprLike, t: ExprLike) -> Matrix3:
    """``diag(e^{-s-t}, e^s, e^t)``."""
    s, t = as_expr(s), as_expr(t)
    return Matrix3.diagonal(exp(neg(add(s, t))), exp(s), exp(t))


def shear(alpha: ExprLike, beta: ExprLike) -> Matrix3:
    return Matrix3([[1, 0, 0], [alpha, 1, 0], [beta, 0, 1]])


# ---------------------------------------------------------------------------
# Lattices and vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Provenance:
    kind: str
    params: tuple = ()

    def as_dict(self) -> dict:
        return {"kind": self.kind, **{k: v for k, v in self.params}}


class Lattice3:
    """The lattice ``basis . Z^3`` (lattice vectors are integer combinations of columns)."""

    def __init__(self, basis: Matrix3, provenance: Provenance | None = None, check: bool = True):
        self.basis = basis
        self.provenance = provenance or Provenance("basis")
        if check and self.basis.is_unimodular().is_false:
            raise LatticeError("basis is not unimodular")
        self._reduction_cache: dict = {}

    @classmethod
    def standard(cls) -> "Lattice3":
        return cls(Matrix3.identity(), Provenance("standard"))

    @classmethod
    def flowed_shear(cls, alpha, beta, s=0, t=0) -> "Lattice3":
        """``a_{s,t} tau_{alpha,beta} Z^3``."""
        params = (("alpha", _fmt(alpha)), ("beta", _fmt(beta)), ("s", _fmt(s)), ("t", _fmt(t)))
        m = diag_flow(s, t) @ shear(alpha, beta)
        return cls(m, Provenance("flow_shear", params), check=False)

    def transformed(self, g: Matrix3, provenance: Provenance | None = None) -> "Lattice3":
        return Lattice3(g @ self.basis, provenance or Provenance("product"), check=False)

    def vector(self, coeffs: Sequence[int]) -> "LatticeVector":
        return LatticeVector(tuple(int(c) for c in coeffs), self)

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for row in self.basis.entries:
            out = []
            for e in row:
                out.append(_radical_text(e.exact()))
            entries.append(out)
        return {"basis": entries, "provenance": self.provenance.as_dict()}

    @classmethod
    def from_json(cls, data: dict) -> "Lattice3":
        prov = dict(data.get("provenance", {}))
        kind = prov.pop("kind", "basis")
        if kind == "flow_shear":
            return cls.flowed_shear(
                parse_real(prov["alpha"]), parse_real(prov["beta"]),
                parse_real(prov["s"]), parse_real(prov["t"]))
        rows = data["basis"]
        if any(x is None for r in rows for x in r):
            raise LatticeError("basis entries not representable and no rebuildable provenance")
        return cls(Matrix3([[parse_real(x) for x in r] for r in rows]),
                   Provenance(kind, tuple(sorted(prov.items()))))

    def __repr__(self):
        return f"Lattice3({self.provenance.as_dict()})"


def _fmt(x) -> str:
    if isinstance(x, Expr):
        ex = x.exact()
        txt = _radical_text(ex) if ex is not None else None
        if txt is None:
            raise LatticeError("flow parameters must be exact reals")
        return txt
    return format_real(to_realspec(x))


def _radical_text(ex: Radical | None) -> str | None:
    if ex is None:
        return None
    irr = [(r, Fraction(c)) for r, c in ex.terms if r != 1]
    a = Fraction(dict(ex.terms).get(1, 0))
    if not irr:
        return format_real(to_realspec(a))
    if len(irr) == 1:
        from .realnum import QuadraticSurd

        return format_real(QuadraticSurd(a, irr[0][1], irr[0][0]))
    return None


@dataclass(frozen=True)
class LatticeVector:
    coefficients: tuple[int, int, int]
    lattice: Lattice3 = field(repr=False, compare=False)

    @property
    def is_zero(self) -> bool:
        return not any(self.coefficients)

    @property
    def coordinates(self) -> tuple[Expr, Expr, Expr]:
        return self.lattice.basis @ self.coefficients

    def coordinate_intervals(self, prec: int = DEFAULT_PRECISION) -> tuple[CertifiedInterval, ...]:
        return tuple(c.interval(prec) for c in self.coordinates)

    def supnorm(self) -> Expr:
        x, y, z = self.coordinates
        return emax(emax(abs(x), abs(y)), abs(z))

    def float_coordinates(self) -> np.ndarray:
        F, _ = self.lattice.basis.float_enclosure()
        return F @ np.array(self.coefficients, dtype=float)


def normalized_key(c: Sequence[int]) -> tuple:
    """Deterministic order on coefficient vectors up to sign.

    The sign is flipped so the first nonzero entry is positive; vectors whose
    first nonzero entry sits earlier come first, then entrywise comparison.
    """
    c = tuple(int(v) for v in c)
    first = next(i for i, v in enumerate(c) if v)
    if c[first] < 0:
        c = tuple(-v for v in c)
    return (first, tuple(abs(v) for v in c), c)


def sign_normalize(c: Sequence[int]) -> tuple[int, ...]:
    c = tuple(int(v) for v in c)
    first = next((v for v in c if v), 0)
    return tuple(-v for v in c) if first < 0 else c


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------


def lll_reduce(cols: np.ndarray, delta: float = 0.99, max_iter: int = 2000) -> np.ndarray:
    """Float LLL on the columns of ``cols``; returns the integer transform ``U``.

    Only ``U`` is used downstream, so rounding here affects speed, never
    correctness.
    """
    n = cols.shape[1]
    B = cols.astype(float).copy()
    U = np.eye(n, dtype=np.int64)

    def gso(B):
        Bs = np.zeros_like(B)
        mu = np.zeros((n, n))
        for i in range(n):
            v = B[:, i].copy()
            for j in range(i):
                denom = Bs[:, j] @ Bs[:, j]
                mu[i, j] = (B[:, i] @ Bs[:, j]) / denom if denom > 0 else 0.0
                v -= mu[i, j] * Bs[:, j]
            Bs[:, i] = v
        return Bs, mu

    k = 1
    it = 0
    Bs, mu = gso(B)
    while k < n and it < max_iter:
        it += 1
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q:
                B[:, k] -= q * B[:, j]
                U[:, k] -= q * U[:, j]
                Bs, mu = gso(B)
        nk = Bs[:, k] @ Bs[:, k]
        nk1 = Bs[:, k - 1] @ Bs[:, k - 1]
        if nk >= (delta - mu[k, k - 1] ** 2) * nk1:
            k += 1
        else:
            B[:, [k - 1, k]] = B[:, [k, k - 1]]
            U[:, [k - 1, k]] = U[:, [k, k - 1]]
            Bs, mu = gso(B)
            k = max(k - 1, 1)
    return U


def integer_inverse(U) -> list[list[int]]:
    """Exact inverse of an integer matrix with determinant +-1."""
    u = [[int(U[i][j]) for j in range(3)] for i in range(3)]
    det = (u[0][0] * (u[1][1] * u[2][2] - u[1][2] * u[2][1])
           - u[0][1] * (u[1][0] * u[2][2] - u[1][2] * u[2][0])
           + u[0][2] * (u[1][0] * u[2][1] - u[1][1] * u[2][0]))
    if det not in (1, -1):
        raise LatticeError(f"transform is not unimodular (det {det})")
    adj = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != j]
            c = [x for x in range(3) if x != i]
            m = u[r[0]][c[0]] * u[r[1]][c[1]] - u[r[0]][c[1]] * u[r[1]][c[0]]
            adj[i][j] = (-1) ** (i + j) * m
    return [[adj[i][j] * det for j in range(3)] for i in range(3)]


def interval_inverse(M: list[list[CertifiedInterval]]) -> list[list[CertifiedInterval]]:
    def minor(r0, r1, c0, c1):
        return M[r0][c0] * M[r1][c1] - M[r0][c1] * M[r1][c0]

    cof = [[None] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != i]
            c = [x for x in range(3) if x != j]
            m = minor(r[0], r[1], c[0], c[1])
            cof[i][j] = m if (i + j) % 2 == 0 else -m
    det = M[0][0] * cof[0][0] + M[0][1] * cof[0][1] + M[0][2] * cof[0][2]
    rdet = det.reciprocal()
    return [[cof[j][i] * rdet for j in range(3)] for i in range(3)]


# ---------------------------------------------------------------------------
# Boxes and enumeration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Axis-aligned box; ``closed`` selects ``<=`` versus ``<`` at the faces."""

    lo: tuple
    hi: tuple
    closed: bool = True

    @classmethod
    def make(cls, lo, hi, closed: bool = True) -> "Box":
        return cls(tuple(as_expr(x) for x in lo), tuple(as_expr(x) for x in hi), closed)

    @classmethod
    def cube(cls, r, closed: bool = True) -> "Box":
        r = as_expr(r)
        return cls((neg(r),) * 3, (r,) * 3, closed)

    def float_bounds(self):
        lo = [float_enclosure(x) for x in self.lo]
        hi = [float_enclosure(x) for x in self.hi]
        return (np.array([v for v, _ in lo]), np.array([e for _, e in lo]),
                np.array([v for v, _ in hi]), np.array([e for _, e in hi]))

    def contains(self, coords: Sequence[Expr]) -> Decision:
        op = "<=" if self.closed else "<"
        ds = []
        for j in range(3):
            for a, b in ((self.lo[j], coords[j]), (coords[j], self.hi[j])):
                d = compare(a, b, op)
                ds.append(d if self.closed else d.tie_as_false())
        return all_of(ds)


@dataclass
class EnumerationResult:
    inside: list
    boundary: list

    def __len__(self):
        return len(self.inside)


class _Candidates:
    """Array form of enumerated vectors: coefficients, float coordinates, error bounds."""

    def __init__(self, Z, V, err):
        self.Z = Z
        self.V = V
        self.err = err

    def __len__(self):
        return len(self.Z)

    def subset(self, mask):
        return _Candidates(self.Z[mask], self.V[mask], self.err[mask])


MAX_ENUMERATION = 20_000_000


def _reduction(lattice: Lattice3, scale: np.ndarray):
    key = tuple(np.round(np.log2(scale), 3))
    hit = lattice._reduction_cache.get(key)
    if hit is not None:
        return hit
    F, _ = lattice.basis.float_enclosure()
    U = lll_reduce(scale[:, None] * F)
    lattice._reduction_cache[key] = U
    return U


def _coefficient_ranges(lattice: Lattice3, box: Box, U) -> list[tuple[int, int]]:
    prec = 128
    while True:
        try:
            Binv = interval_inverse(lattice.basis.interval_matrix(prec))
            break
        except _NeedPrecision:
            prec *= 2
            if prec > 1024:
                raise LatticeError("basis too ill-conditioned to invert")
    V = integer_inverse(U)
    lo = [x.interval(prec) for x in box.lo]
    hi = [x.interval(prec) for x in box.hi]
    ranges = []
    for i in range(3):
        row = []
        for j in range(3):
            acc = CertifiedInterval.exact(0, prec)
            for k in range(3):
                if V[i][k]:
                    acc = acc + Binv[k][j] * V[i][k]
            row.append(acc)
        total = CertifiedInterval.exact(0, prec)
        for j in range(3):
            span = CertifiedInterval(lo[j].lo, hi[j].hi, prec)
            total = total + row[j] * span
        ranges.append((math.ceil(total.lower), math.floor(total.upper)))
    return ranges


def _candidates_in_box(lattice: Lattice3, box: Box) -> _Candidates:
    """All lattice vectors possibly in ``box`` (a superset), in array form."""
    F, E = lattice.basis.float_enclosure()
    lo_f, lo_e, hi_f, hi_e = box.float_bounds()
    half = np.maximum((hi_f - lo_f) / 2, 1e-300)
    U = _reduction(lattice, 1.0 / half)
    ranges = _coefficient_ranges(lattice, box, U)
    sizes = [max(0, b - a + 1) for a, b in ranges]
    if 0 in sizes:
        return _Candidates(np.zeros((0, 3), np.int64), np.zeros((0, 3)), np.zeros((0, 3)))
    Uf = U.astype(float)
    Bp = F @ Uf  # reduced basis, columns
    G = (E + 4 * U_ROUND * np.abs(F)) @ np.abs(Uf)  # error bound on Bp entries
    inner = int(np.argmax(sizes))
    outer = [i for i in range(3) if i != inner]
    na, nb = sizes[outer[0]], sizes[outer[1]]
    if na * nb > MAX_ENUMERATION:
        raise LatticeError(f"enumeration too large ({na}x{nb} outer pairs)")
    ca, cb = np.meshgrid(np.arange(ranges[outer[0]][0], ranges[outer[0]][1] + 1),
                         np.arange(ranges[outer[1]][0], ranges[outer[1]][1] + 1), indexing="ij")
    ca = ca.ravel().astype(float)
    cb = cb.ravel().astype(float)
    w = ca[:, None] * Bp[:, outer[0]] + cb[:, None] * Bp[:, outer[1]]
    ew = (np.abs(ca)[:, None] * (G[:, outer[0]] + _DOT_SLACK * np.abs(Bp[:, outer[0]]))
          + np.abs(cb)[:, None] * (G[:, outer[1]] + _DOT_SLACK * np.abs(Bp[:, outer[1]])))
    kmin = np.full(len(ca), float(ranges[inner][0]))
    kmax = np.full(len(ca), float(ranges[inner][1]))
    for j in range(3):
        b = Bp[j, inner]
        eb = G[j, inner] + _DOT_SLACK * abs(b)
        if abs(b) <= 4 * eb or b == 0.0:
            continue
        nlo = lo_f[j] - lo_e[j] - w[:, j] - ew[:, j]
        nhi = hi_f[j] + hi_e[j] - w[:, j] + ew[:, j]
        qs = [nlo / (b - eb), nlo / (b + eb), nhi / (b - eb), nhi / (b + eb)]
        qlo = np.minimum.reduce(qs)
        qhi = np.maximum.reduce(qs)
        kmin = np.maximum(kmin, np.floor(qlo - 1e-9 * np.abs(qlo)) - 1)
        kmax = np.minimum(kmax, np.ceil(qhi + 1e-9 * np.abs(qhi)) + 1)
    counts = np.maximum(kmax - kmin + 1, 0).astype(np.int64)
    total = int(counts.sum())
    if total > MAX_ENUMERATION:
        raise LatticeError(f"enumeration too large ({total} vectors)")
    C = np.zeros((total, 3), dtype=np.int64)
    rep = np.repeat(np.arange(len(ca)), counts)
    offs = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
    C[:, outer[0]] = ca[rep].astype(np.int64)
    C[:, outer[1]] = cb[rep].astype(np.int64)
    C[:, inner] = kmin[rep].astype(np.int64) + offs
    Z = C @ U.T
    Z = Z[np.any(Z != 0, axis=1)]
    Zf = Z.astype(float)
    V = Zf @ F.T
    err = np.abs(Zf) @ (E + _DOT_SLACK * np.abs(F)).T
    return _Candidates(Z, V, err)


def _classify_box(cands: _Candidates, box: Box):
    """Return masks (certainly inside, certainly outside) for the float tier."""
    lo_f, lo_e, hi_f, hi_e = box.float_bounds()
    V, err = cands.V, cands.err
    if box.closed:
        ins = np.all((V - err >= lo_f + lo_e) & (V + err <= hi_f - hi_e), axis=1)
        out = np.any((V + err < lo_f - lo_e) | (V - err > hi_f + hi_e), axis=1)
    else:
        ins = np.all((V - err > lo_f + lo_e) & (V + err < hi_f - hi_e), axis=1)
        out = np.any((V + err <= lo_f - lo_e) | (V - err >= hi_f + hi_e), axis=1)
    return ins, out


def box_vectors(lattice: Lattice3, box: Box):
    """Certified split of the lattice vectors in ``box``: ``(inside, boundary)`` arrays of coefficients."""
    cands = _candidates_in_box(lattice, box)
    ins, out = _classify_box(cands, box)
    inside = [cands.Z[ins]]
    boundary = []
    for z in cands.Z[~ins & ~out]:
        d = box.contains(lattice.vector(z).coordinates)
        if d.is_true:
            inside.append(z[None, :])
        elif d.is_undecided:
            boundary.append(z)
    inside_arr = np.concatenate(inside) if inside else np.zeros((0, 3), np.int64)
    return inside_arr, np.array(boundary, dtype=np.int64).reshape(-1, 3), cands, ins, out


def enumerate_in_box(lattice: Lattice3, box: Box) -> EnumerationResult:
    """Nonzero lattice vectors in ``box``; undecidable ones are listed as boundary."""
    inside, boundary, *_ = box_vectors(lattice, box)
    order = sorted(range(len(inside)), key=lambda i: tuple(inside[i]))
    return EnumerationResult(
        [lattice.vector(inside[i]) for i in order],
        [lattice.vector(z) for z in boundary],
    )


# ---------------------------------------------------------------------------
# Shortest vectors and the cusp neighbourhood
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ShortestVector:
    length: CertifiedInterval
    witness: LatticeVector
    ambiguous: tuple = ()


def shortest_vector_supnorm(lattice: Lattice3) -> ShortestVector:
    """Nonzero vector of minimal sup-norm, ties broken by ``normalized_key``."""
    F, E = lattice.basis.float_enclosure()
    U = _reduction(lattice, np.ones(3))
    Bp = F @ U.astype(float)
    G = (E + 4 * U_ROUND * np.abs(F)) @ np.abs(U.astype(float))
    r_up = float(np.min(np.max(np.abs(Bp) + G, axis=0))) * (1 + 1e-12) + 1e-300
    box = Box.cube(Fraction(r_up), closed=True)
    inside, boundary, *_ = box_vectors(lattice, box)
    pool = np.concatenate([inside, boundary]) if len(boundary) else inside
    if len(pool) == 0:  # pragma: no cover - basis vectors are always in the cube
        raise LatticeError("no vector found in the initial cube")
    # one representative per +-pair
    reps = {}
    for z in pool:
        c = sign_normalize(z)
        reps[c] = c
    cands = sorted(reps)
    Zf = np.array(cands, dtype=float)
    Vf = np.abs(Zf @ F.T).max(axis=1)
    ef = (np.abs(Zf) @ (E + _DOT_SLACK * np.abs(F)).T).max(axis=1)
    best_hi = float(np.min(Vf + ef))
    close = [c for c, v, e in zip(cands, Vf, ef) if v - e <= best_hi]
    norms = {c: lattice.vector(c).supnorm() for c in close}
    # certified minimum: candidates not provably larger than some other
    minimal = []
    for c in close:
        dominated = False
        for o in close:
            if o != c and compare(norms[o], norms[c], "<").is_true:
                dominated = True
                break
        if not dominated:
            minimal.append(c)
    minimal.sort(key=normalized_key)
    best = minimal[0]
    ambiguous = tuple(c for c in minimal[1:]
                      if not compare(norms[c], norms[best], "==").is_true)
    length = norms[best].enclose()
    return ShortestVector(length, lattice.vector(best), ambiguous)


def in_X_eps(lattice: Lattice3, eps: ExprLike) -> Decision:
    """Does the lattice contain a nonzero vector of sup-norm <= eps (closed ball)?"""
    eps = as_expr(eps)
    if not (compare(eps, 0, ">").is_true and compare(eps, Fraction(1, 2), "<=").is_true):
        raise ValueError("eps must lie in (0, 1/2]")
    inside, boundary, *_ = box_vectors(lattice, Box.cube(eps, closed=True))
    if len(inside):
        return TRUE
    if len(boundary):
        return undecided(MAX_PRECISION_REACHED)
    return FALSE


def brute_force_vectors(lattice: Lattice3, bound: int) -> np.ndarray:
    """All nonzero coefficient vectors with entries in ``[-bound, bound]`` (test oracle helper)."""
    r = np.arange(-bound, bound + 1)
    Z = np.stack(np.meshgrid(r, r, r, indexing="ij"), -1).reshape(-1, 3)
    return Z[np.any(Z != 0, axis=1)]
