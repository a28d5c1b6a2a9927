"""Certified real arithmetic.

Three layers live here:

* ``RealSpec`` values (``Rational``, ``QuadraticSurd``, ``DecimalLiteral``) are
  the exact inputs: the pair (alpha, beta), thresholds, flow times.
* ``Radical`` is an exact element of a multiquadratic field, i.e. a finite sum
  ``sum q_r * sqrt(r)`` over square-free ``r``.  Every RealSpec lands there and
  the field is closed under +, -, *, so zero tests are exact (square roots of
  distinct square-free integers are linearly independent over Q).
* ``Expr`` trees mix exact nodes with ``exp``/``log``/``min``/``max``; they are
  evaluated to ``CertifiedInterval`` enclosures with MPFR directed rounding at
  escalating precision.

``compare`` returns a three-valued ``Decision``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple, Union

import gmpy2
from gmpy2 import mpfr, mpq

DEFAULT_PRECISION = 64
MAX_PRECISION = 256
DECIMAL_DEFAULT_BITS = 64

EXACT_TIE = "exact-tie"
MAX_PRECISION_REACHED = "max-precision-reached"


class RepresentationError(ValueError):
    """Malformed real-number description."""


class DomainError(ArithmeticError):
    """log of a non-positive value, division by an exact zero, ..."""


class PrecisionExhausted(ArithmeticError):
    """An enclosure could not be tightened enough at the allowed precision."""


class _NeedPrecision(Exception):
    pass


# ---------------------------------------------------------------------------
# MPFR contexts and intervals
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _down(prec: int):
    return gmpy2.context(precision=prec, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(prec: int):
    return gmpy2.context(precision=prec, round=gmpy2.RoundUp)


def _neg(x):
    # plain -x rounds to the global (53-bit) context; negation at x's own precision is exact
    return _down(x.precision).minus(x)


def _abs(x):
    return _down(x.precision).abs(x)


def _rat_down(q: Fraction, prec: int):
    return mpfr(mpq(q.numerator, q.denominator), prec, _down(prec))


def _rat_up(q: Fraction, prec: int):
    return mpfr(mpq(q.numerator, q.denominator), prec, _up(prec))


@dataclass(frozen=True)
class CertifiedInterval:
    """Closed interval ``[lo, hi]`` with dyadic (MPFR) endpoints."""

    lo: object
    hi: object
    precision: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, q, prec: int = DEFAULT_PRECISION) -> "CertifiedInterval":
        q = Fraction(q)
        return cls(_rat_down(q, prec), _rat_up(q, prec), prec)

    @property
    def lower(self) -> Fraction:
        return Fraction(int(mpq(self.lo).numerator), int(mpq(self.lo).denominator))

    @property
    def upper(self) -> Fraction:
        return Fraction(int(mpq(self.hi).numerator), int(mpq(self.hi).denominator))

    @property
    def width(self):
        return _up(self.precision).sub(self.hi, self.lo)

    @property
    def mid(self) -> float:
        return float((self.lo + self.hi) / 2)

    def contains(self, value) -> bool:
        if isinstance(value, CertifiedInterval):
            return self.lo <= value.lo and value.hi <= self.hi
        if isinstance(value, float):
            value = Fraction(value)
        q = mpq(Fraction(value).numerator, Fraction(value).denominator)
        return self.lo <= q <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def float_bounds(self) -> tuple[float, float]:
        """Binary64 endpoints rounded outward, so ``[lo, hi]`` still encloses."""
        return float(_down(53).add(self.lo, 0)), float(_up(53).add(self.hi, 0))

    def __repr__(self) -> str:
        return f"CertifiedInterval([{self.lo}, {self.hi}], prec={self.precision})"

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce_iv(other, self.precision)
        p = max(self.precision, other.precision)
        return CertifiedInterval(
            _down(p).add(self.lo, other.lo), _up(p).add(self.hi, other.hi), p
        )

    __radd__ = __add__

    def __neg__(self):
        return CertifiedInterval(_neg(self.hi), _neg(self.lo), self.precision)

    def __sub__(self, other):
        return self + (-_coerce_iv(other, self.precision))

    def __rsub__(self, other):
        return _coerce_iv(other, self.precision) - self

    def __mul__(self, other):
        other = _coerce_iv(other, self.precision)
        p = max(self.precision, other.precision)
        d, u = _down(p), _up(p)
        pairs = [(a, b) for a in (self.lo, self.hi) for b in (other.lo, other.hi)]
        return CertifiedInterval(
            min(d.mul(a, b) for a, b in pairs), max(u.mul(a, b) for a, b in pairs), p
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * _coerce_iv(other, self.precision).reciprocal()

    def __rtruediv__(self, other):
        return _coerce_iv(other, self.precision) * self.reciprocal()

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            raise _NeedPrecision("division by interval containing zero")
        p = self.precision
        return CertifiedInterval(_down(p).div(1, self.hi), _up(p).div(1, self.lo), p)

    def __abs__(self):
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertifiedInterval(mpfr(0), max(_neg(self.lo), self.hi), self.precision)

    def exp(self):
        p = self.precision
        return CertifiedInterval(_down(p).exp(self.lo), _up(p).exp(self.hi), p)

    def log(self):
        if self.hi <= 0:
            raise DomainError("log of a non-positive value")
        if self.lo <= 0:
            raise _NeedPrecision("log argument not separated from zero")
        p = self.precision
        return CertifiedInterval(_down(p).log(self.lo), _up(p).log(self.hi), p)

    def sqrt(self):
        if self.hi < 0:
            raise DomainError("sqrt of a negative value")
        p = self.precision
        lo = _down(p).sqrt(self.lo) if self.lo > 0 else mpfr(0)
        return CertifiedInterval(lo, _up(p).sqrt(self.hi), p)

    def square(self):
        a = abs(self)
        p = self.precision
        return CertifiedInterval(_down(p).mul(a.lo, a.lo), _up(p).mul(a.hi, a.hi), p)

    def intersect(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return CertifiedInterval(max(self.lo, other.lo), min(self.hi, other.hi),
                                 max(self.precision, other.precision))


def _coerce_iv(x, prec) -> CertifiedInterval:
    if isinstance(x, CertifiedInterval):
        return x
    return CertifiedInterval.exact(Fraction(x), prec)


def iv_min(a: CertifiedInterval, b: CertifiedInterval) -> CertifiedInterval:
    return CertifiedInterval(min(a.lo, b.lo), min(a.hi, b.hi), max(a.precision, b.precision))


def iv_max(a: CertifiedInterval, b: CertifiedInterval) -> CertifiedInterval:
    return CertifiedInterval(max(a.lo, b.lo), max(a.hi, b.hi), max(a.precision, b.precision))


# ---------------------------------------------------------------------------
# Exact multiquadratic values
# ---------------------------------------------------------------------------


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return ``(k, r)`` with ``n == k*k*r`` and ``r`` square-free."""
    if n <= 0:
        raise ValueError("expected a positive integer")
    k, r = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            r *= p
        p += 1 if p == 2 else 2
    return k, r * n


def is_squarefree(n: int) -> bool:
    return n >= 1 and squarefree_decompose(n)[0] == 1


@lru_cache(maxsize=4096)
def _root_interval(r: int, prec: int) -> "CertifiedInterval":
    return CertifiedInterval(_down(prec).sqrt(r), _up(prec).sqrt(r), prec)


class Radical:
    """Exact ``sum(coef * sqrt(r))`` over square-free radicands ``r``."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        # coefficients are held as gmpy2 mpq; Fraction arithmetic was the hot spot
        acc: dict = {}
        for r, c in terms:
            if c:
                acc[r] = acc[r] + c if r in acc else mpq(c)
        self.terms = tuple(sorted((r, c) for r, c in acc.items() if c))

    @classmethod
    def _raw(cls, terms) -> "Radical":
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def rational(cls, q) -> "Radical":
        q = mpq(q)
        return cls._raw(((1, q),) if q else ())

    @classmethod
    def surd(cls, a, b, d: int) -> "Radical":
        k, r = squarefree_decompose(d)
        return cls(((1, Fraction(a)), (r, Fraction(b) * k)))

    def __repr__(self) -> str:
        if not self.terms:
            return "Radical(0)"
        return "Radical(" + " + ".join(
            f"{c}" if r == 1 else f"{c}*sqrt({r})" for r, c in self.terms) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, Radical) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_rational(self) -> bool:
        return all(r == 1 for r, _ in self.terms)

    @property
    def rational_value(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("irrational value")
        if not self.terms:
            return Fraction(0)
        c = self.terms[0][1]
        return Fraction(int(c.numerator), int(c.denominator))

    def __add__(self, other: "Radical") -> "Radical":
        return Radical(self.terms + other.terms)

    def __neg__(self) -> "Radical":
        return Radical._raw(tuple((r, -c) for r, c in self.terms))

    def __sub__(self, other: "Radical") -> "Radical":
        return self + (-other)

    def __mul__(self, other: "Radical") -> "Radical":
        out = []
        for r1, c1 in self.terms:
            for r2, c2 in other.terms:
                g = math.gcd(r1, r2)
                out.append(((r1 // g) * (r2 // g), c1 * c2 * g))
        return Radical(out)

    def scale(self, q) -> "Radical":
        q = mpq(q)
        if not q:
            return Radical()
        return Radical._raw(tuple((r, c * q) for r, c in self.terms))

    def inverse(self) -> "Radical | None":
        """Exact reciprocal for rationals and ``a + b*sqrt(d)``; None otherwise."""
        if self.is_zero:
            raise DomainError("division by exact zero")
        if self.is_rational:
            return Radical.rational(1 / self.rational_value)
        irr = [(r, c) for r, c in self.terms if r != 1]
        if len(irr) != 1:
            return None
        d, b = irr[0]
        a = dict(self.terms).get(1, mpq(0))
        norm = a * a - b * b * d
        return Radical(((1, a / norm), (d, -b / norm)))

    def sqrt(self) -> "Radical | None":
        if not self.is_rational:
            return None
        q = self.rational_value
        if q < 0:
            raise DomainError("sqrt of a negative value")
        if q == 0:
            return Radical()
        # sqrt(p/q) = sqrt(p*q)/q
        k, r = squarefree_decompose(q.numerator * q.denominator)
        return Radical(((r, Fraction(k, q.denominator)),))

    def interval(self, prec: int) -> CertifiedInterval:
        acc = CertifiedInterval(mpfr(0), mpfr(0), prec)
        for r, c in self.terms:
            term = CertifiedInterval(mpfr(c, prec, _down(prec)), mpfr(c, prec, _up(prec)), prec)
            if r != 1:
                term = term * _root_interval(r, prec)
            acc = acc + term
        return acc

    def sign(self) -> int:
        if self.is_zero:
            return 0
        irr = [(r, c) for r, c in self.terms if r != 1]
        if len(irr) <= 1:
            a = dict(self.terms).get(1, mpq(0))
            if not irr:
                return 1 if a > 0 else -1
            d, b = irr[0]
            sa = (a > 0) - (a < 0)
            sb = 1 if b > 0 else -1
            if sa == 0 or sa == sb:
                return sb
            # opposite signs; a^2 == b^2 d is impossible for square-free d
            return sa if a * a > b * b * d else sb
        prec = DEFAULT_PRECISION
        while True:  # nonzero by linear independence, so this terminates
            iv = self.interval(prec)
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
            prec *= 2

    def __abs__(self) -> "Radical":
        return -self if self.sign() < 0 else self

    def floor(self) -> int:
        if self.is_rational:
            q = self.rational_value
            return q.numerator // q.denominator
        prec = DEFAULT_PRECISION
        while True:  # irrational, so never an integer
            iv = self.interval(prec)
            lo, hi = int(math.floor(mpq(iv.lo))), int(math.floor(mpq(iv.hi)))
            if lo == hi:
                return lo
            prec *= 2

    def to_float(self) -> float:
        return self.interval(80).mid


# ---------------------------------------------------------------------------
# RealSpec
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rational:
    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise RepresentationError("denominator must be positive")
        if math.gcd(self.numerator, self.denominator) != 1:
            raise RepresentationError("rational not in lowest terms")

    @classmethod
    def of(cls, q) -> "Rational":
        q = Fraction(q)
        return cls(q.numerator, q.denominator)

    def exact(self) -> Radical:
        return Radical.rational(Fraction(self.numerator, self.denominator))

    @property
    def is_rational(self) -> bool:
        return True

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


@dataclass(frozen=True)
class QuadraticSurd:
    """``a + b*sqrt(d)``."""

    a: Fraction
    b: Fraction
    d: int

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if self.d < 2 or not is_squarefree(self.d):
            raise RepresentationError(f"radicand {self.d} must be square-free and >= 2")

    def exact(self) -> Radical:
        return Radical.surd(self.a, self.b, self.d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __str__(self) -> str:
        sign = "-" if self.b < 0 else "+"
        return f"{_fmt_q(self.a)}{sign}{_fmt_q(abs(self.b))}*sqrt({self.d})"


@dataclass(frozen=True)
class DecimalLiteral:
    digits: str
    precision: int = DECIMAL_DEFAULT_BITS

    def __post_init__(self):
        if not _DECIMAL_RE.match(self.digits):
            raise RepresentationError(f"not a finite decimal: {self.digits!r}")
        if self.precision < 8:
            raise RepresentationError("declared precision must be >= 8 bits")

    @property
    def value(self) -> Fraction:
        return Fraction(Decimal(self.digits))

    def exact(self) -> Radical:
        return Radical.rational(self.value)

    @property
    def is_rational(self) -> bool:
        return True

    def __str__(self) -> str:
        if self.precision == DECIMAL_DEFAULT_BITS:
            return self.digits
        return f"{self.digits}@{self.precision}"


RealSpec = Union[Rational, QuadraticSurd, DecimalLiteral]


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_RAT = r"[+-]?\d+(?:/\d+)?"
_RATIONAL_RE = re.compile(rf"^{_RAT}$")
_DECIMAL_RE = re.compile(r"^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$")
_SURD_PREFIX_RE = re.compile(
    r"^(?:(?P<a>[+-]?\d+(?:/\d+)?)(?=[+-]))?(?P<b>[+-]?(?:\d+(?:/\d+)?)?)$"
)
_SQRT_RE = re.compile(r"^(?P<prefix>.*?)\*?sqrt\((?P<d>\d+)\)$")


def parse_real(text: str) -> RealSpec:
    """Parse ``"p/q"``, ``"a+b*sqrt(d)"`` or a finite decimal (``"0.25"``, ``"1e-3@128"``)."""
    s = text.replace(" ", "")
    if not s:
        raise RepresentationError("empty real literal")
    m = _SQRT_RE.match(s)
    if m:
        pm = _SURD_PREFIX_RE.match(m.group("prefix"))
        if not pm:
            raise RepresentationError(f"malformed surd: {text!r}")
        a = Fraction(pm.group("a")) if pm.group("a") else Fraction(0)
        braw = pm.group("b")
        if braw in ("", "+"):
            b = Fraction(1)
        elif braw == "-":
            b = Fraction(-1)
        else:
            b = Fraction(braw)
        d = int(m.group("d"))
        if d == 0:
            return Rational.of(a)
        k, r = squarefree_decompose(d)
        if r == 1:
            return Rational.of(a + b * k)
        return QuadraticSurd(a, b * k, r)
    if _RATIONAL_RE.match(s):
        try:
            return Rational.of(Fraction(s))
        except ZeroDivisionError as exc:
            raise RepresentationError("zero denominator") from exc
    digits, _, bits = s.partition("@")
    if _DECIMAL_RE.match(digits):
        try:
            Decimal(digits)
        except InvalidOperation as exc:  # pragma: no cover - regex already guards
            raise RepresentationError(str(exc)) from exc
        return DecimalLiteral(digits, int(bits) if bits else DECIMAL_DEFAULT_BITS)
    raise RepresentationError(f"cannot parse real literal {text!r}")


def format_real(x: RealSpec) -> str:
    return str(x)


def to_realspec(x) -> RealSpec:
    if isinstance(x, (Rational, QuadraticSurd, DecimalLiteral)):
        return x
    if isinstance(x, str):
        return parse_real(x)
    if isinstance(x, (int, Fraction)):
        return Rational.of(x)
    if isinstance(x, float):
        return Rational.of(Fraction(x))
    raise RepresentationError(f"cannot interpret {x!r} as a real")


GOLDEN = QuadraticSurd(Fraction(1, 2), Fraction(1, 2), 5)
SQRT2 = QuadraticSurd(0, 1, 2)
SQRT3 = QuadraticSurd(0, 1, 3)
SQRT5 = QuadraticSurd(0, 1, 5)


def eval_real(x: RealSpec, precision: int = DEFAULT_PRECISION) -> CertifiedInterval:
    """Enclosure of ``x`` with width at most ``2**(1-precision) * max(1, |x|)``."""
    if precision < 8:
        raise ValueError("precision must be >= 8")
    x = to_realspec(x)
    rad = x.exact()
    work = precision + 8
    while True:
        iv = rad.interval(work)
        mag = max(mpfr(1), _abs(iv.lo), _abs(iv.hi))
        bound = _down(work).mul(mag, mpfr(2) ** (1 - precision))
        if iv.width <= bound:
            return iv
        work *= 2


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------


_UNSET = object()


class Expr:
    """Real-valued expression tree over exact atoms."""

    __slots__ = ("_exact", "_ivs")

    def __init__(self):
        self._exact = _UNSET
        self._ivs = {}

    def exact(self) -> Radical | None:
        if self._exact is _UNSET:
            self._exact = self._compute_exact()
        return self._exact

    def interval(self, prec: int = DEFAULT_PRECISION) -> CertifiedInterval:
        iv = self._ivs.get(prec)
        if iv is None:
            ex = self.exact()
            iv = ex.interval(prec) if ex is not None else self._compute_interval(prec)
            self._ivs[prec] = iv
        return iv

    def _compute_exact(self):
        return None

    def _compute_interval(self, prec):  # pragma: no cover - abstract
        raise NotImplementedError

    def structure(self) -> tuple:
        """Structural key: equal keys mean the same real number."""
        if isinstance(self, Const):
            return ("const", self.value)
        kids = []
        for name in ("args", "arg", "a", "b"):
            v = getattr(self, name, None)
            if v is None:
                continue
            kids.extend(v if isinstance(v, (list, tuple)) else (v,))
        return (type(self).__name__, tuple(k.structure() for k in kids))

    def enclose(self, max_precision: int = MAX_PRECISION) -> CertifiedInterval:
        """Enclosure at the lowest precision that evaluates without errors."""
        prec = DEFAULT_PRECISION
        while True:
            try:
                return self.interval(prec)
            except _NeedPrecision:
                if prec >= max_precision:
                    raise PrecisionExhausted(repr(self))
                prec = min(2 * prec, max_precision)

    def to_float(self) -> float:
        return self.enclose().mid

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, neg(other))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return mul(self, inv(other))

    def __rtruediv__(self, other):
        return mul(other, inv(self))

    def __neg__(self):
        return neg(self)

    def __abs__(self):
        return Abs(as_expr(self))


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value: Radical):
        super().__init__()
        self.value = value

    def _compute_exact(self):
        return self.value

    def __repr__(self):
        return f"Const({self.value!r})"


class Add(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        super().__init__()
        self.args = tuple(args)

    def _compute_exact(self):
        acc = Radical()
        for a in self.args:
            ex = a.exact()
            if ex is None:
                return None
            acc = acc + ex
        return acc

    def _compute_interval(self, prec):
        acc = CertifiedInterval(mpfr(0), mpfr(0), prec)
        for a in self.args:
            acc = acc + a.interval(prec)
        return acc

    def __repr__(self):
        return "Add(" + ", ".join(map(repr, self.args)) + ")"


class Mul(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        super().__init__()
        self.args = tuple(args)

    def _compute_exact(self):
        exps = [a for a in self.args if isinstance(a, Exp)]
        rest = [a for a in self.args if not isinstance(a, Exp)]
        acc = Radical.rational(1)
        unknown = False
        for a in rest:
            ex = a.exact()
            if ex is None:
                unknown = True
            elif ex.is_zero:
                return Radical()
            else:
                acc = acc * ex
        if unknown:
            return None
        if exps:
            # exp(u) exp(v) = exp(u + v); exact only if the exponents cancel
            total = Radical()
            for e in exps:
                ex = e.arg.exact()
                if ex is None:
                    return None
                total = total + ex
            if not total.is_zero:
                return None
        return acc

    def _compute_interval(self, prec):
        acc = CertifiedInterval.exact(1, prec)
        for a in self.args:
            acc = acc * a.interval(prec)
        return acc

    def __repr__(self):
        return "Mul(" + ", ".join(map(repr, self.args)) + ")"


class Inv(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg

    def _compute_exact(self):
        ex = self.arg.exact()
        return None if ex is None else ex.inverse()

    def _compute_interval(self, prec):
        return self.arg.interval(prec).reciprocal()


class Exp(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg

    def _compute_exact(self):
        ex = self.arg.exact()
        if ex is not None and ex.is_zero:
            return Radical.rational(1)
        return None

    def _compute_interval(self, prec):
        return self.arg.interval(prec).exp()

    def __repr__(self):
        return f"Exp({self.arg!r})"


class Log(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg

    def _compute_exact(self):
        ex = self.arg.exact()
        if ex is not None:
            if ex.sign() <= 0:
                raise DomainError("log of a non-positive value")
            if ex == Radical.rational(1):
                return Radical()
        return None

    def _compute_interval(self, prec):
        return self.arg.interval(prec).log()

    def __repr__(self):
        return f"Log({self.arg!r})"


class Sqrt(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg

    def _compute_exact(self):
        ex = self.arg.exact()
        return None if ex is None else ex.sqrt()

    def _compute_interval(self, prec):
        return self.arg.interval(prec).sqrt()


class Abs(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg):
        super().__init__()
        self.arg = arg

    def _compute_exact(self):
        ex = self.arg.exact()
        return None if ex is None else abs(ex)

    def _compute_interval(self, prec):
        return abs(self.arg.interval(prec))


class Min(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        super().__init__()
        self.a, self.b = a, b

    def _compute_exact(self):
        x, y = self.a.exact(), self.b.exact()
        if x is None or y is None:
            return None
        return x if (x - y).sign() <= 0 else y

    def _compute_interval(self, prec):
        return iv_min(self.a.interval(prec), self.b.interval(prec))


class Max(Expr):
    __slots__ = ("a", "b")

    def __init__(self, a, b):
        super().__init__()
        self.a, self.b = a, b

    def _compute_exact(self):
        x, y = self.a.exact(), self.b.exact()
        if x is None or y is None:
            return None
        return x if (x - y).sign() >= 0 else y

    def _compute_interval(self, prec):
        return iv_max(self.a.interval(prec), self.b.interval(prec))


ExprLike = Union[Expr, Rational, QuadraticSurd, DecimalLiteral, int, Fraction, float, Radical, str]

_R_ONE = Radical.rational(1)
ZERO = Const(Radical())
ONE = Const(Radical.rational(1))


def as_expr(x: ExprLike) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Radical):
        return Const(x)
    if isinstance(x, bool):
        raise RepresentationError("booleans are not reals")
    if isinstance(x, (int, Fraction)):
        return Const(Radical.rational(x))
    return Const(to_realspec(x).exact())


def _is_zero(e: Expr) -> bool:
    return isinstance(e, Const) and e.value.is_zero


def add(*xs) -> Expr:
    es = [as_expr(x) for x in xs]
    es = [e for e in es if not _is_zero(e)]
    if not es:
        return ZERO
    if all(isinstance(e, Const) for e in es):
        acc = Radical()
        for e in es:
            acc = acc + e.value
        return Const(acc)
    if len(es) == 1:
        return es[0]
    return Add(es)


def mul(*xs) -> Expr:
    es = []
    for x in xs:
        e = as_expr(x)
        es.extend(e.args if isinstance(e, Mul) else (e,))
    if any(_is_zero(e) for e in es):
        return ZERO
    es = [e for e in es if not (isinstance(e, Const) and e.value == _R_ONE)]
    if not es:
        return ONE
    consts = [e for e in es if isinstance(e, Const)]
    if len(consts) == len(es):
        acc = Radical.rational(1)
        for e in consts:
            acc = acc * e.value
        return Const(acc)
    if len(es) == 1:
        return es[0]
    return Mul(es)


def neg(x) -> Expr:
    e = as_expr(x)
    if isinstance(e, Const):
        return Const(-e.value)
    return mul(Const(Radical.rational(-1)), e)


def inv(x) -> Expr:
    e = as_expr(x)
    if isinstance(e, Const):
        r = e.value.inverse()
        if r is not None:
            return Const(r)
    return Inv(e)


def exp(x) -> Expr:
    e = as_expr(x)
    if isinstance(e, Log):
        return e.arg
    return Exp(e)


def log(x) -> Expr:
    e = as_expr(x)
    if isinstance(e, Exp):
        return e.arg
    return Log(e)


def sqrt(x) -> Expr:
    e = as_expr(x)
    if isinstance(e, Const):
        r = e.value.sqrt()
        if r is not None:
            return Const(r)
    return Sqrt(e)


def emin(a, b) -> Expr:
    return Min(as_expr(a), as_expr(b))


def emax(a, b) -> Expr:
    return Max(as_expr(a), as_expr(b))


# ---------------------------------------------------------------------------
# Decisions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decision:
    value: bool | None
    reason: str | None = None

    def __bool__(self):
        raise TypeError("Decision is three-valued; use .is_true / .is_false")

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_undecided(self) -> bool:
        return self.value is None

    @property
    def is_exact_tie(self) -> bool:
        return self.value is None and self.reason == EXACT_TIE

    def tie_as_false(self) -> "Decision":
        """Strict predicates: a proven tie means the strict inequality fails."""
        return FALSE if self.is_exact_tie else self

    def __invert__(self) -> "Decision":
        if self.value is None:
            return self
        return FALSE if self.value else TRUE

    def __repr__(self):
        if self.value is None:
            return f"Undecided({self.reason})"
        return repr(self.value)


TRUE = Decision(True)
FALSE = Decision(False)


def undecided(reason: str) -> Decision:
    return Decision(None, reason)


def all_of(decisions: Iterable[Decision]) -> Decision:
    pending = None
    for d in decisions:
        if d.is_false:
            return FALSE
        if d.is_undecided and pending is None:
            pending = d
    return pending if pending is not None else TRUE


def any_of(decisions: Iterable[Decision]) -> Decision:
    pending = None
    for d in decisions:
        if d.is_true:
            return TRUE
        if d.is_undecided and pending is None:
            pending = d
    return pending if pending is not None else FALSE


_OPS = {"<", "<=", ">", ">=", "==", "!="}


def _decide(sign: int, op: str) -> Decision:
    if sign == 0:
        if op in ("<", ">"):
            return undecided(EXACT_TIE)
        return TRUE if op in ("<=", ">=", "==") else FALSE
    truth = {
        "<": sign < 0, "<=": sign < 0, ">": sign > 0, ">=": sign > 0,
        "==": False, "!=": True,
    }[op]
    return TRUE if truth else FALSE


def sign_of(x: ExprLike, max_precision: int = MAX_PRECISION) -> int | None:
    """Certified sign of ``x``; None if undecidable within ``max_precision``."""
    e = as_expr(x)
    ex = e.exact()
    if ex is not None:
        return ex.sign()
    prec = DEFAULT_PRECISION
    while True:
        try:
            iv = e.interval(prec)
        except _NeedPrecision:
            iv = None
        if iv is not None:
            if iv.lo > 0:
                return 1
            if iv.hi < 0:
                return -1
        if prec >= max_precision:
            return None
        prec = min(2 * prec, max_precision)


def compare(x: ExprLike, y: ExprLike, op: str = "<", max_precision: int = MAX_PRECISION) -> Decision:
    """Certified ``x op y``.

    A proven equality under a strict operator yields ``Undecided(exact-tie)``;
    callers apply their own boundary convention (see ``Decision.tie_as_false``).
    """
    if op not in _OPS:
        raise ValueError(f"unknown comparison {op!r}")
    ex, ey = as_expr(x), as_expr(y)
    if ex.exact() is None and ex.structure() == ey.structure():
        return _decide(0, op)
    s = sign_of(add(as_expr(x), neg(as_expr(y))), max_precision)
    if s is None:
        return undecided(MAX_PRECISION_REACHED)
    return _decide(s, op)


class NearestInteger(NamedTuple):
    k: int
    distance: CertifiedInterval
    tie: bool


def nearest_integer(x: ExprLike, prec: int = DEFAULT_PRECISION) -> NearestInteger:
    """Nearest integer ``k`` and an enclosure of ``<x> = |x - k|``.

    On an exact half-integer the candidate with the smaller ``|k|`` is returned
    and ``tie`` is set.
    """
    e = as_expr(x)
    ex = e.exact()
    half = Radical.rational(Fraction(1, 2))
    if ex is not None:
        f = (ex + half).floor()
        if ex.is_rational and ex.rational_value + Fraction(1, 2) == f:
            k = f if abs(f) < abs(f - 1) else f - 1
            return NearestInteger(k, CertifiedInterval.exact(Fraction(1, 2), prec), True)
        dist = abs(ex - Radical.rational(f)).interval(prec)
        return NearestInteger(f, _clamp_half(dist), False)
    p = prec
    while True:
        try:
            iv = e.interval(p) + Fraction(1, 2)
            lo, hi = int(math.floor(mpq(iv.lo))), int(math.floor(mpq(iv.hi)))
            if lo == hi:
                dist = abs(e.interval(p) - lo)
                return NearestInteger(lo, _clamp_half(dist), False)
        except _NeedPrecision:
            pass
        if p >= MAX_PRECISION:
            raise PrecisionExhausted(f"nearest integer of {e!r}")
        p = min(2 * p, MAX_PRECISION)


def _clamp_half(iv: CertifiedInterval) -> CertifiedInterval:
    half = mpfr(0.5)
    lo = max(iv.lo, mpfr(0))
    hi = min(iv.hi, half)
    return CertifiedInterval(min(lo, hi), hi, iv.precision)


def float_enclosure(x: ExprLike) -> tuple[float, float]:
    """``(f, err)`` with ``|x - f| <= err`` for binary64 ``f``."""
    iv = as_expr(x).enclose()
    if iv.precision < 80:
        try:
            iv = as_expr(x).interval(96)
        except _NeedPrecision:
            pass
    f = float(mpfr((iv.lo + iv.hi) / 2, 53))
    u = _up(64)
    err = max(u.sub(iv.hi, f), u.sub(f, iv.lo), mpfr(0))
    e = float(err)
    if e < err:
        e = math.nextafter(e, math.inf)
    return f, e
