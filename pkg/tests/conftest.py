import os
from decimal import Decimal, getcontext
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from littlewood_lab.realnum import GOLDEN, QuadraticSurd

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SQRT2 = QuadraticSurd(0, 1, 2)
SQRT3 = QuadraticSurd(0, 1, 3)
SQRT5 = QuadraticSurd(0, 1, 5)
NEAR_RATIONAL = (
    QuadraticSurd(Fraction(1, 3), Fraction(1, 10**6), 2),
    QuadraticSurd(Fraction(1, 5), Fraction(1, 10**6), 3),
)
PAIRS = {
    "sqrt2-sqrt3": (SQRT2, SQRT3),
    "golden-sqrt2": (GOLDEN, SQRT2),
    "golden-sqrt5": (GOLDEN, SQRT5),
    "near-rational": NEAR_RATIONAL,
}


def dec(x, digits: int = 60) -> Decimal:
    """Independent high-precision value of a rational or single surd via ``decimal``."""
    getcontext().prec = digits
    if isinstance(x, QuadraticSurd):
        a, b = Decimal(x.a.numerator) / x.a.denominator, Decimal(x.b.numerator) / x.b.denominator
        return a + b * Decimal(x.d).sqrt()
    q = Fraction(x)
    return Decimal(q.numerator) / q.denominator


def dist_dec(x: Decimal) -> Decimal:
    return abs(x - x.to_integral_value(rounding="ROUND_HALF_EVEN"))


@pytest.fixture(params=sorted(PAIRS))
def pair(request):
    return PAIRS[request.param]


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: list[str] = []


def record_criterion(k: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {k:2d}: {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
