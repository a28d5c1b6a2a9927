"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (shown in the terminal summary) before asserting.
"""

import math
import time
from fractions import Fraction

from littlewood_lab.cli import main
from littlewood_lab.diophantine import count_bound, lambda_bruteforce, lambda_fast
from littlewood_lab.geometry import (
    RegionOmega,
    delta_volume,
    siegel_count,
    tessellation_check,
    triangle_atlas,
)
from littlewood_lab.lattice import Lattice3
from littlewood_lab.realnum import GOLDEN, QuadraticSurd, compare, mul, sqrt
from littlewood_lab.verify import (
    branch_exp,
    coverage,
    f_log,
    fat_triangle_witness,
    fgamma_check,
    log_choice_L,
    theorem33_check,
)

from conftest import NEAR_RATIONAL, SQRT2, SQRT3, SQRT5, record_criterion

NEAR_RATIONAL_2 = (
    QuadraticSurd(Fraction(1, 7), Fraction(1, 10**5), 5),
    QuadraticSurd(Fraction(2, 9), Fraction(1, 10**5), 7),
)
SIEGEL_PAIRS = {
    "sqrt2-sqrt3": (SQRT2, SQRT3),
    "golden-sqrt2": (GOLDEN, SQRT2),
    "golden-sqrt5": (GOLDEN, SQRT5),
    "near-rational": NEAR_RATIONAL,
    "sqrt7-sqrt11": (QuadraticSurd(0, 1, 7), QuadraticSurd(0, 1, 11)),
}
COVER_PAIRS = {"sqrt2-sqrt3": (SQRT2, SQRT3), "golden-sqrt5": (GOLDEN, SQRT5)}
EPS = Fraction(1, 4)
WITNESS_T, WITNESS_L = 6, 8

_atlases: dict = {}
_reports: dict = {}


def atlas(name, pair, T):
    key = (name, T)
    if key not in _atlases:
        _atlases[key] = triangle_atlas(*pair, T, EPS)
    return _atlases[key]


def cover(name, T):
    key = (name, T)
    if key not in _reports:
        _reports[key] = coverage(*COVER_PAIRS[name], T, EPS, grid=500, atlas=atlas(name, COVER_PAIRS[name], T))
    return _reports[key]


def test_criterion_01_oracle_equivalence():
    pairs = {"sqrt2-sqrt3": (SQRT2, SQRT3), "golden-sqrt2": (GOLDEN, SQRT2),
             "near-rational": NEAR_RATIONAL, "near-rational-2": NEAR_RATIONAL_2}
    configs = [(p, e, 10**6, True) for p in pairs for e in ("0.3", "0.1", "0.03", "0.001")]
    configs += [(p, e, 2 * 10**5, False) for p in pairs for e in ("0.3", "0.03")]
    t0 = time.perf_counter()
    bad, hits = [], 0
    for name, eps, N, strict in configs:
        a, b = pairs[name]
        fast = lambda_fast(a, b, eps=eps, strict=strict, bound_N=N, crossover=0)
        brute = lambda_bruteforce(a, b, N, eps, strict)
        hits += len(brute)
        if fast.path != "fast" or fast.ns != brute.ns or fast.undecided or brute.undecided:
            bad.append((name, eps, N, strict))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120 and len(configs) >= 20
    record_criterion(1, ok, f"{len(configs)} configurations, {hits} hits, {len(bad)} mismatches, {dt:.1f} s")
    assert ok, bad


def test_criterion_02_siegel_identity():
    bad, total = [], 0
    for name, pair in SIEGEL_PAIRS.items():
        L = Lattice3.flowed_shear(*pair)
        for T in (2, 4, 6):
            for eps in ("0.3", "0.05"):
                sc = siegel_count(L, RegionOmega(T, eps))
                want = len(lambda_bruteforce(*pair, count_bound(T), eps))
                total += 1
                if sc.boundary or sc.n_count != want:
                    bad.append((name, T, eps, sc.n_count, want))
    record_criterion(2, not bad, f"{total} (pair, T, eps) cases, {len(bad)} count mismatches")
    assert not bad, bad


def test_criterion_03_delta_volume():
    rows, ok = [], True
    for eps in ("0.005", "0.01", "0.03"):
        t0 = time.perf_counter()
        iv = delta_volume(eps)
        dt = time.perf_counter() - t0
        target = 4 * Fraction(eps)
        rel = float(iv.upper - iv.lower) / float(target)
        good = iv.contains(target) and rel < 0.005 and dt < 10
        ok &= good
        rows.append(f"eps={eps} width {100 * rel:.3f}% {dt:.2f} s")
    record_criterion(3, ok, "; ".join(rows))
    assert ok


def test_criterion_04_tessellation():
    rep = tessellation_check(5, "0.01", 10**5, seed=20)
    ok = (rep.samples == 10**5 and rep.outside_omega == 0 and rep.double_membership == 0
          and rep.not_in_own_tile == 0 and rep.undecided == 0)
    record_criterion(4, ok, f"{rep.samples} samples over {rep.tiles} tiles, {rep.outside_omega} outside, "
                            f"{rep.double_membership} double, {rep.undecided} undecided")
    assert ok


def test_criterion_05_cover_identity():
    rows, ok = [], True
    for name in COVER_PAIRS:
        rep = cover(name, 6)
        good = rep.agreement and rep.undecided_fraction < 0.005
        ok &= good
        rows.append(f"{name}: gamma_lower {rep.gamma_lower:.4f}, {rep.disagreements} disagreements, "
                    f"undecided {100 * rep.undecided_fraction:.3f}%")
    record_criterion(5, ok, "; ".join(rows))
    assert ok


def test_criterion_06_triangle_uniqueness():
    multiple = {name: atlas(name, pair, 6).multiple for name, pair in COVER_PAIRS.items()}
    ok = not any(multiple.values())
    n_tri = sum(len(atlas(name, pair, 6).triangles) for name, pair in COVER_PAIRS.items())
    record_criterion(6, ok, f"{n_tri} triangles, n with several triangles: {multiple}")
    assert ok


def test_criterion_07_counting_bound():
    Ls = [2, 5, 10, "log"]
    checks, bad = 0, []
    for name in COVER_PAIRS:
        for T in (5, 6, 10):
            rep = cover(name, T)
            for c in theorem33_check(*COVER_PAIRS[name], T, EPS, Ls, report=rep):
                checks += 1
                if not c.satisfied:
                    bad.append((name, T, c.L, c.observed, c.bound))
    spot = []
    for T in (5, 6, 10):
        rel = abs(branch_exp(log_choice_L(T)).to_float() - T * T) / (T * T)
        spot.append(rel)
    ok = not bad and max(spot) < 1e-12
    record_criterion(7, ok, f"{checks} bound checks, {len(bad)} violations; "
                            f"max |branch_exp - T^2| / T^2 = {max(spot):.1e}")
    assert ok, bad


def test_criterion_08_witness_chain():
    at = atlas("near-rational", NEAR_RATIONAL, WITNESS_T)
    fat = [c for c in at.triangles if compare(c.area_exact, WITNESS_L, ">").is_true]
    w = fat_triangle_witness(*NEAR_RATIONAL, WITNESS_T, EPS, WITNESS_L, atlas=at)
    ok = bool(fat) and w is not None and w.all_verified and w.ks == tuple(range(1, w.k_max + 1))
    detail = "no fat triangle" if w is None else (
        f"n0={w.n0}, area >= {w.area_lo:.3f} > L={WITNESS_L}, k <= {w.k_max}, multiples {list(w.multiples)} certified")
    record_criterion(8, ok, detail)
    assert ok


def test_criterion_09_lambda_area():
    runs = [(name, pair, T) for name, pair in COVER_PAIRS.items() for T in (5, 6, 10)]
    runs.append(("near-rational", NEAR_RATIONAL, WITNESS_T))
    tris = [c for name, pair, T in runs for c in atlas(name, pair, T).triangles]
    bad_area = [c.n for c in tris if not compare(c.area_exact, mul(Fraction(1, 2), c.lam, c.lam), "<=").is_true]
    at = atlas("near-rational", NEAR_RATIONAL, WITNESS_T)
    fat = [c for c in at.triangles if compare(c.area_exact, WITNESS_L, ">").is_true]
    bound = mul(sqrt(2), sqrt(WITNESS_L))
    bad_lam = [c.n for c in fat if not compare(c.lam, bound, ">").is_true]
    ok = not bad_area and not bad_lam and bool(fat)
    record_criterion(9, ok, f"{len(tris)} triangles with area <= lambda^2/2 ({len(bad_area)} failures); "
                            f"{len(fat)} with area > {WITNESS_L}, {len(bad_lam)} with lambda <= sqrt(2L)")
    assert ok


def test_criterion_10_fgamma():
    good = fgamma_check(f_log, 1, [3, 10, 100, 10**4])
    bad = fgamma_check({100: 10}, Fraction(1, 2), [100])
    row = bad.rows[0]
    ok = (good.holds and good.increasing and not bad.holds and bad.first_failure == 100
          and abs(row.lhs - 500) < 1e-9 and abs(row.rhs - math.exp(math.sqrt(20) / 3)) < 1e-9)
    record_criterion(10, ok, f"f = 18(log T)^2 holds at 3, 10, 100, 1e4; f = 10 fails at T = 100 "
                             f"({row.lhs:.0f} > {row.rhs:.2f})")
    assert ok


def test_criterion_11_determinism(tmp_path, capsys):
    near = ["--alpha", "1/3+1/1000000*sqrt(2)", "--beta", "1/5+1/1000000*sqrt(3)", "--T", "6", "--seed", "11"]
    blobs = []
    for i, threads in enumerate((1, 4)):
        stem = tmp_path / f"run{i}" / "atlas"
        codes = (main(["triangles", *near, "-o", str(stem)]),
                 main(["verify", *near, "--threads", str(threads), "-o", str(tmp_path / f"run{i}" / "verify.json")]))
        capsys.readouterr()
        assert codes == (0, 0)
        blobs.append([(tmp_path / f"run{i}" / f).read_bytes() for f in ("atlas.svg", "atlas.csv", "verify.json")])
    ok = blobs[0] == blobs[1]
    record_criterion(11, ok, "triangles (svg, csv) and verify (json) byte-identical across two runs")
    assert ok
