from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qrep.family import u
from qrep.poly import Poly
from qrep.shiftop import ShiftOperator, affine_commutator, commutator, compose, make_shift

VARS = [u(1, 2), u(1, 3), u(2, 3)]

affine = st.builds(lambda cs, c0: Poly.linear(dict(zip(VARS, cs)), c0),
                   st.lists(st.integers(-2, 2), min_size=3, max_size=3), st.integers(-2, 2))
shifts = st.builds(lambda es: make_shift(dict(zip(VARS, es))), st.lists(st.integers(-1, 1), min_size=3, max_size=3))
two_term = st.builds(lambda w1, s1, w2, s2: ShiftOperator([(s1, w1), (s2, w2)]), affine, shifts, affine, shifts)
monomials = st.builds(lambda es: Poly({tuple((v, e) for v, e in zip(VARS, es) if e): 1}),
                      st.lists(st.integers(0, 2), min_size=3, max_size=3))


@given(two_term, two_term, two_term, monomials)
def test_composition_is_associative_on_test_functions(a, b, c, f):
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    # both groupings act the same way as applying the factors one by one
    assert compose(compose(a, b), c).apply(f) == a.apply(b.apply(c.apply(f)))


@given(affine, shifts, affine, shifts)
def test_affine_commutator_closed_form(w1, s1, w2, s2):
    p = ShiftOperator([(s1, w1)])
    q = ShiftOperator([(s2, w2)])
    assert commutator(p, q) == affine_commutator(w1, dict(s1), w2, dict(s2))


def test_multiplication_operators_commute():
    h1 = ShiftOperator.multiplication(Poly.linear({VARS[0]: 2, VARS[1]: 1}))
    h2 = ShiftOperator.multiplication(Poly.linear({VARS[2]: -1}, 3))
    assert compose(h1, h2) == compose(h2, h1)


def test_shift_acts_by_translation():
    # (1 + u) T_u f(u) = (1 + u) f(u + 1)
    e = ShiftOperator([({VARS[0]: 1}, Poly.linear({VARS[0]: 1}, 1))])
    f = Poly.var(VARS[0], 2)
    assert e.apply(f) == Poly.linear({VARS[0]: 1}, 1) * Poly.linear({VARS[0]: 1}, 1) ** 2


def test_fractional_shift_rejected():
    with pytest.raises(ValueError):
        make_shift({VARS[0]: Fraction(1, 2)})
