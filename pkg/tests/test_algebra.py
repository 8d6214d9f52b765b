"""Exact scalars, weighted polynomials and the expression parser."""
import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from semiquasi.polynomial import (
    ParseError,
    Polynomial,
    WeightError,
    WeightSystem,
    nu_C,
    order_key,
    parse_polynomial,
    principal_part,
)
from semiquasi.scalars import Cyclotomic, cyclotomic_polynomial, euler_phi, format_scalar

XYZ = ("x", "y", "z")


def to_complex(c):
    if isinstance(c, Cyclotomic):
        z = cmath.exp(2j * cmath.pi / c.n)
        return sum(float(a) * z ** j for j, a in enumerate(c.coeffs))
    return complex(float(c))


cyclo = st.builds(
    lambda n, cs: Cyclotomic(n, cs),
    st.sampled_from([3, 4, 5, 7, 12, 20, 21]),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=8),
)


# -- scalars -----------------------------------------------------------------------------


def test_cyclotomic_polynomial_degree():
    # [TRIVIAL] deg Phi_n = phi(n)
    for n in (1, 2, 3, 12, 20, 21):
        assert len(cyclotomic_polynomial(n)) - 1 == euler_phi(n)


def test_root_of_unity_order():
    z = Cyclotomic.root(21)
    assert z ** 21 == 1
    assert z ** 7 != 1 and z ** 3 != 1


def test_lift_to_common_conductor():
    # zeta_3 = zeta_21^7
    assert Cyclotomic.root(3) == Cyclotomic.root(21, 7)
    assert format_scalar(Cyclotomic.root(3).lift(21)) == "z21^7"


@settings(max_examples=60, deadline=None)
@given(cyclo, cyclo)
def test_field_operations_match_complex_evaluation(a, b):
    # [DERIVED] independent floating-point evaluation at exp(2 pi i/n)
    assert abs(to_complex(a * b) - to_complex(a) * to_complex(b)) < 1e-6
    assert abs(to_complex(a + b) - (to_complex(a) + to_complex(b))) < 1e-6
    if a != 0:
        inv = a.inverse() if isinstance(a, Cyclotomic) else 1 / a
        assert inv * a == 1


def test_format_scalar_exact():
    assert format_scalar(Fraction(10, 7)) == "10/7"
    assert format_scalar(Fraction(-3)) == "-3"


# -- weights ---------------------------------------------------------------------------------


def test_weight_system_rejects_large_weights():
    with pytest.raises(WeightError):
        WeightSystem((2, 1), 3)


def test_socle_degree():
    # [PAPER] running example: 3*21 - 2*17 = 29, the degree of xyz^5
    assert WeightSystem((7, 7, 3), 21).socle_degree == 29


def test_order_key_ascending_degree():
    w = (7, 7, 3)
    mons = [(1, 1, 5), (0, 0, 0), (0, 0, 7), (3, 0, 0)]
    assert sorted(mons, key=lambda e: order_key(e, w))[0] == (0, 0, 0)
    assert sorted(mons, key=lambda e: order_key(e, w))[-1] == (1, 1, 5)


# -- polynomials -------------------------------------------------------------------------------

small_poly = st.dictionaries(
    st.tuples(*(st.integers(0, 3) for _ in XYZ)),
    st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(bool),
    max_size=5,
).map(lambda d: Polynomial(XYZ, d))


def to_sympy(p: Polynomial):
    x = sympy.symbols(XYZ)
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(v ** e for v, e in zip(x, ex)))
               for ex, c in p.terms.items())


@settings(max_examples=50, deadline=None)
@given(small_poly, small_poly)
def test_product_matches_sympy(a, b):
    # [DERIVED] sympy expansion as an independent multiplication
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@settings(max_examples=50, deadline=None)
@given(small_poly)
def test_parse_format_round_trip(p):
    assert parse_polynomial(p.format(), XYZ) == p


@settings(max_examples=30, deadline=None)
@given(small_poly, small_poly)
def test_derivation_leibniz(a, b):
    assert (a * b).diff(0) == a.diff(0) * b + a * b.diff(0)


def test_parser_grammar():
    p = parse_polynomial("x^3 + y^3 + z^7 - 10/7*x*y*z^3", XYZ)
    assert p.coeff((1, 1, 3)) == Fraction(-10, 7)
    assert p.coeff((3, 0, 0)) == 1
    assert parse_polynomial("2*(x+y)^2", XYZ) == parse_polynomial("2*x^2 + 4*x*y + 2*y^2", XYZ)


def test_parser_rejects_unknown_variable():
    with pytest.raises(ParseError):
        parse_polynomial("x + w", XYZ)


def test_parser_cyclotomic_coefficients():
    p = parse_polynomial("z21^7*x", XYZ)
    assert p.coeff((1, 0, 0)) == Cyclotomic.root(21, 7)


def test_principal_part_and_nu():
    w = WeightSystem((7, 7, 3), 21)
    f = parse_polynomial("x^3 + y^3 + z^7 + x*y*z^4 + z^8", XYZ)
    assert principal_part(f, w) == parse_polynomial("x^3 + y^3 + z^7", XYZ)
    assert nu_C(f, w) == 1


def test_compose_with_truncation():
    w = (1, 1, 1)
    f = parse_polynomial("x^2", XYZ)
    img = [parse_polynomial("x + y^2", XYZ), Polynomial.var(1, XYZ), Polynomial.var(2, XYZ)]
    assert f.compose(img) == parse_polynomial("x^2 + 2*x*y^2 + y^4", XYZ)
    assert f.compose(img, weights=w, max_degree=3) == parse_polynomial("x^2 + 2*x*y^2", XYZ)
