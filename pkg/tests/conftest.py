import sys
from fractions import Fraction

import mpmath
import pytest
from hypothesis import strategies as st

from cgclosure.bodies import Ball, VPolytope
from cgclosure.exact import Scalar

mpmath.mp.dps = 60

R2 = Scalar.sqrt(2)
R3 = Scalar.sqrt(3)
R5 = Scalar.sqrt(5)


def to_mp(x) -> mpmath.mpf:
    """High-precision float of a field element, independent of its interval code."""
    if isinstance(x, (int, Fraction)):
        return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
    return sum((mpmath.mpf(q.numerator) / q.denominator * mpmath.sqrt(d) for d, q in x.basis_coords().items()), mpmath.mpf(0))


small_q = st.fractions(min_value=-6, max_value=6, max_denominator=7)


@st.composite
def scalars(draw, keys=(1, 2, 3, 5)):
    return Scalar({k: draw(small_q) for k in keys if draw(st.booleans())})


def triangle() -> VPolytope:
    return VPolytope([(0, 0), (Fraction(3, 2), 0), (0, Fraction(3, 2))])


def ball() -> Ball:
    return Ball((Fraction(1, 2), Fraction(1, 2)), 1)


def segment() -> VPolytope:
    return VPolytope([(0, 0), (1, R2)])


def unit_square() -> VPolytope:
    return VPolytope([(0, 0), (1, 0), (0, 1), (1, 1)])


INSTANCES = {"triangle": triangle, "ball": ball, "segment": segment}


@pytest.fixture(params=sorted(INSTANCES))
def instance(request):
    return request.param, INSTANCES[request.param]()


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
