from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qrep.family import u
from qrep.poly import Poly

VARS = [u(1, 2), u(1, 3), u(2, 3)]


@st.composite
def polys(draw, max_terms=4, lo=-2):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = tuple((v, e) for v, e in zip(VARS, draw(st.lists(st.integers(lo, 2), min_size=3, max_size=3))) if e)
        terms[mono] = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
    return Poly(terms)


points = st.fixed_dictionaries({v: st.fractions(min_value=1, max_value=5, max_denominator=7) for v in VARS})


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(polys(), polys(), points)
def test_evaluation_is_a_homomorphism(a, b, pt):
    assert (a * b).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt)
    assert (a + b).evaluate(pt) == a.evaluate(pt) + b.evaluate(pt)


@given(polys(lo=0), st.dictionaries(st.sampled_from(VARS), st.integers(-3, 3)), points)
def test_shift_is_substitution(a, shift, pt):
    moved = {v: pt[v] + shift.get(v, 0) for v in VARS}
    assert a.shift(shift).evaluate(pt) == a.evaluate(moved)


@given(polys(), polys())
def test_leibniz_rule(a, b):
    v = VARS[0]
    assert (a * b).diff(v) == a.diff(v) * b + a * b.diff(v)


def test_shift_of_negative_power_is_rejected():
    with pytest.raises(ValueError):
        Poly.var(VARS[0], -1).shift({VARS[0]: 1})


def test_linear_helpers():
    p = Poly.linear({u(1, 2): 2, u(2, 3): -1}, constant=3)
    assert p.is_affine()
    assert p.constant_term() == 3
    assert p.linear_value({u(1, 2): 1, u(2, 3): 1}) == 1
    assert not (p * p).is_affine()
