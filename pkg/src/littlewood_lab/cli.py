"""Command-line entry point: ``littlewood-lab {count,triangles,coverage,verify,growth}``.

Exit codes: 0 all certified checks pass, 1 bad input, 2 disagreement between
two independent computation paths, 3 a certified inequality fails.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import diophantine as dio
from . import geometry as geo
from . import verify as ver
from .realnum import RepresentationError, as_expr, compare, format_real, mul, to_realspec

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DISAGREE = 2
EXIT_VIOLATION = 3

DEFAULT_WITNESS_L = 8
DEFAULT_MAX_UNDECIDED = 0.005


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    alpha: str
    beta: str
    T: str | None = None
    N: int | None = None
    eps: str = "1/4"
    strict: bool = True
    cube: bool = False
    grid: int = 200
    seed: int = 0
    threads: int = 1
    output: str | None = None
    format: str | None = None
    L: list = field(default_factory=lambda: [2, 5, 10, "log"])
    Ns: list = field(default_factory=list)
    witness_L: str = str(DEFAULT_WITNESS_L)
    max_undecided: float = DEFAULT_MAX_UNDECIDED

    def __post_init__(self):
        self.alpha = _canon(self.alpha, "alpha")
        self.beta = _canon(self.beta, "beta")
        self.eps = _canon(self.eps, "eps")
        if self.T is not None:
            self.T = _canon(self.T, "T")
        if self.N is not None:
            self.N = int(self.N)
        if self.grid < 16:
            raise InputError("grid must be at least 16")
        if self.threads < 1:
            raise InputError("threads must be positive")
        self.witness_L = _canon(self.witness_L, "witness_L")
        self.L = [x if x == "log" else _canon(x, "L") for x in self.L]
        self.Ns = [int(n) for n in self.Ns]

    def record(self) -> dict:
        """The resolved configuration, echoed into reports."""
        d = asdict(self)
        for k in ("output", "format", "threads"):
            d.pop(k)
        return d


def _canon(x, name: str) -> str:
    """Normalize a RealSpec value to its canonical text; JSON numbers are read as decimals."""
    if isinstance(x, bool):
        raise InputError(f"{name}: booleans are not reals")
    text = repr(x) if isinstance(x, float) else str(x)
    try:
        return format_real(to_realspec(text))
    except (RepresentationError, ValueError) as e:
        raise InputError(f"{name}: {e}") from None


def _real(text: str):
    return to_realspec(text)


def _list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default values; flags override it")
    common.add_argument("--alpha", help="first number, e.g. 0+1*sqrt(2), 3/7 or 0.125")
    common.add_argument("--beta", help="second number, same grammar as --alpha")
    scale = common.add_mutually_exclusive_group()
    scale.add_argument("--T", help="flow time; the count runs over n < e^(2T)")
    scale.add_argument("--N", type=int, help="explicit bound on n")
    common.add_argument("--eps", help="threshold epsilon (RealSpec grammar)")
    common.add_argument("--strict", dest="strict", action="store_true", default=None,
                        help="count products < threshold (default)")
    common.add_argument("--non-strict", dest="strict", action="store_false",
                        help="count products <= threshold")
    common.add_argument("--grid", type=int, help="cells per side of the [0,T]^2 grid")
    common.add_argument("--seed", type=int, help="recorded in reports; all runs are deterministic")
    common.add_argument("--threads", type=int, help="worker cap for grid evaluation")
    common.add_argument("--output", "-o", help="output path ('-' or absent for stdout)")
    common.add_argument("--format", choices=["csv", "json", "svg"])

    ap = argparse.ArgumentParser(prog="littlewood-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="n with small Littlewood product")
    p.add_argument("--cube", action="store_true", default=None,
                   help="use eps^3 as the threshold")

    sub.add_parser("triangles", parents=[common],
                   help="atlas of cusp triangles as SVG and CSV (output is a path prefix)")

    p = sub.add_parser("coverage", parents=[common], help="X_eps coverage of [0,T]^2")
    p.add_argument("--max-undecided", type=float, help="warn above this undecided fraction")

    p = sub.add_parser("verify", parents=[common], help="bound checks, witness chain and f_gamma")
    p.add_argument("--L", type=_list, help="comma-separated L values; 'log' means 18(log T)^2")
    p.add_argument("--witness-L", help="area threshold for the witness chain (default 8)")

    p = sub.add_parser("growth", parents=[common], help="count growth over several N")
    p.add_argument("--Ns", type=_list, help="comma-separated bounds, each at least 16")
    return ap


_KEYS = ("alpha", "beta", "T", "N", "eps", "strict", "cube", "grid", "seed", "threads",
         "output", "format", "L", "Ns", "witness_L", "max_undecided")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    values: dict = {}
    if args.config:
        try:
            values.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read config: {e}") from None
        unknown = set(values) - set(_KEYS)
        if unknown:
            raise InputError(f"unknown config keys: {sorted(unknown)}")
    for k in _KEYS:
        v = getattr(args, k, None)
        if v is not None:
            values[k] = v
    if "T" in values and "N" in values and args.T is None and args.N is None:
        raise InputError("config gives both T and N")
    if args.T is not None:
        values.pop("N", None)
    if args.N is not None:
        values.pop("T", None)
    for k in ("alpha", "beta"):
        if k not in values:
            raise InputError(f"--{k} is required")
    try:
        return RunConfig(**values)
    except TypeError as e:
        raise InputError(str(e)) from None


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


@contextmanager
def _sink(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    buf = io.StringIO()
    yield buf
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(buf.getvalue(), newline="")


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _require_T(cfg: RunConfig) -> None:
    if cfg.T is None:
        raise InputError("this command needs --T")
    if not compare(_real(cfg.T), 0, ">").is_true:
        raise InputError("T must be positive")


def _check_rational(cfg: RunConfig) -> None:
    if dio.is_rational_input(_real(cfg.alpha), _real(cfg.beta)):
        _warn("rational input, theorem hypotheses void")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_count(cfg: RunConfig) -> int:
    _check_rational(cfg)
    a, b = _real(cfg.alpha), _real(cfg.beta)
    e = as_expr(_real(cfg.eps))
    thr = mul(e, e, e) if cfg.cube else e
    if compare(e, 0, "<").is_true:
        raise InputError("eps must be nonnegative")
    if cfg.N is None and cfg.T is None:
        raise InputError("give --T or --N")
    N = dio.count_bound(_real(cfg.T)) if cfg.T is not None else cfg.N
    fast = dio.lambda_fast(a, b, eps=thr, strict=cfg.strict, bound_N=N, crossover=0)
    if N <= dio.CROSSOVER:
        brute = dio.lambda_bruteforce(a, b, N, thr, cfg.strict)
        if fast.ns != brute.ns or fast.undecided != brute.undecided:
            print(f"error: fast path {len(fast)} hits, brute force {len(brute)} hits", file=sys.stderr)
            return EXIT_DISAGREE
    if fast.undecided:
        _warn(f"{len(fast.undecided)} memberships undecided: {list(fast.undecided[:5])}")
    fmt = cfg.format or "csv"
    with _sink(cfg.output) as fh:
        if fmt == "json":
            fh.write(ver.dumps({
                "config": cfg.record(),
                "N": N,
                "count": len(fast),
                "hits": [[h.n, h.m1, h.m2] for h in fast.hits],
                "undecided": list(fast.undecided),
            }))
        elif fmt == "csv":
            dio.write_hits_csv(fast.hits, fh)
        else:
            raise InputError("count writes csv or json")
    print(f"count: {len(fast)} of n <= {N}", file=sys.stderr)
    return EXIT_OK


def _prefix(output: str | None, default: str) -> Path:
    p = Path(output or default)
    return p.with_suffix("") if p.suffix in (".svg", ".csv") else p


def cmd_triangles(cfg: RunConfig) -> int:
    _require_T(cfg)
    _check_rational(cfg)
    atlas = geo.triangle_atlas(_real(cfg.alpha), _real(cfg.beta), _real(cfg.T), _real(cfg.eps))
    stem = _prefix(cfg.output, "atlas")
    stem.parent.mkdir(parents=True, exist_ok=True)
    Path(f"{stem}.svg").write_text(geo.atlas_svg(atlas), newline="")
    with open(f"{stem}.csv", "w", newline="") as fh:
        geo.write_atlas_csv(atlas, fh)
    print(f"triangles: {len(atlas.triangles)} from {atlas.scanned} n; wrote {stem}.svg, {stem}.csv",
          file=sys.stderr)
    if not atlas.unique:
        print(f"error: several triangles meet the square for n in {list(atlas.multiple)}", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _coverage_dict(rep: ver.CoverageReport) -> dict:
    d = asdict(rep)
    d["agreement"] = rep.agreement
    d["undecided"] = rep.undecided_fraction
    return d


def cmd_coverage(cfg: RunConfig) -> int:
    _require_T(cfg)
    _check_rational(cfg)
    rep = ver.coverage(_real(cfg.alpha), _real(cfg.beta), _real(cfg.T), _real(cfg.eps),
                       cfg.grid, cfg.threads)
    with _sink(cfg.output) as fh:
        fh.write(ver.dumps({"config": cfg.record(), "coverage": _coverage_dict(rep)}))
    if rep.undecided_fraction > cfg.max_undecided:
        _warn(f"undecided fraction {rep.undecided_fraction:.4g} exceeds {cfg.max_undecided}")
    if not rep.agreement:
        print(f"error: {rep.disagreements} cells disagree between lattice and atlas", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    _require_T(cfg)
    _check_rational(cfg)
    a, b, T, eps = _real(cfg.alpha), _real(cfg.beta), _real(cfg.T), _real(cfg.eps)
    beyond_e = compare(T, math.e, ">").is_true
    Ls = [x for x in cfg.L if beyond_e or x != "log"]
    if len(Ls) < len(cfg.L):
        _warn("T <= e: the 18(log T)^2 choice of L is skipped")
    atlas = geo.triangle_atlas(a, b, T, eps)
    rep = ver.coverage(a, b, T, eps, cfg.grid, cfg.threads, atlas=atlas)
    checks = ver.theorem33_check(a, b, T, eps, [x if x == "log" else _real(x) for x in Ls],
                                 grid=cfg.grid, report=rep)
    status = EXIT_OK
    try:
        witness = ver.fat_triangle_witness(a, b, T, eps, _real(cfg.witness_L), atlas=atlas)
    except ver.WitnessError as e:
        print(f"error: witness chain failed: {e}", file=sys.stderr)
        witness, status = None, EXIT_VIOLATION
    gamma = rep.gamma_lower
    optimal = fgamma = None
    if gamma > 0 and beyond_e:
        optimal = ver.optimal_L(gamma, T)
        fgamma = ver.fgamma_check(ver.f_log, gamma, [T])
    out = ver.verify_report(cfg.record(), rep, checks, witness, optimal, fgamma)
    out["coverage"]["disagreements"] = rep.disagreements
    out["atlas"] = {"triangles": len(atlas.triangles), "unique": atlas.unique,
                    "multiple": list(atlas.multiple)}
    ok = all(c.satisfied for c in checks) and atlas.unique and (fgamma is None or fgamma.holds)
    out["all_satisfied"] = ok and status == EXIT_OK
    with _sink(cfg.output) as fh:
        fh.write(ver.dumps(out))
    if not rep.agreement:
        print(f"error: {rep.disagreements} cells disagree between lattice and atlas", file=sys.stderr)
        return EXIT_DISAGREE
    if not ok:
        print("error: a certified inequality failed", file=sys.stderr)
        return EXIT_VIOLATION
    return status


def cmd_growth(cfg: RunConfig) -> int:
    _check_rational(cfg)
    Ns = cfg.Ns or ([cfg.N] if cfg.N is not None else [])
    if not Ns:
        raise InputError("give --Ns")
    if min(Ns) < 16:
        raise InputError("every N must be at least 16")
    rows = dio.growth_table(_real(cfg.alpha), _real(cfg.beta), _real(cfg.eps), Ns, cfg.strict)
    fmt = cfg.format or "csv"
    with _sink(cfg.output) as fh:
        if fmt == "json":
            fh.write(ver.dumps({"config": cfg.record(), "rows": [asdict(r) for r in rows]}))
        elif fmt == "csv":
            dio.write_growth_csv(rows, fh)
        else:
            raise InputError("growth writes csv or json")
    return EXIT_OK


COMMANDS = {
    "count": cmd_count,
    "triangles": cmd_triangles,
    "coverage": cmd_coverage,
    "verify": cmd_verify,
    "growth": cmd_growth,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except (InputError, geo.DegenerateInputError, RepresentationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
