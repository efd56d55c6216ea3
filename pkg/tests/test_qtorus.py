import cmath
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qrep.qtorus import (IncompatibleAlgebras, OrderingViolated, PhaseCoeff, TorusElement, commutator,
                         embed_left, embed_right, heisenberg_signature, numeric_product_symbol, numeric_symbol,
                         q_commutator, q_number, root_b2, swap_sectors, tensor)

SIG = heisenberg_signature([(1, 2), (1, 3)], central=[("a", 1)], sectors=("b", "t"), denominator=2)
LABELS = SIG.labels
U = ("u", 1, 2, "b")
P = ("p", 1, 2, "b")


def mono(entries, coeff=1):
    return SIG.monomial(entries, coeff)


coeffs = st.builds(PhaseCoeff.unit, st.integers(-4, 4), st.integers(-4, 4), st.integers(0, 3))
# half-integral positions, integral momenta: every 2Ω stays an integer
exponents = st.tuples(*[st.sampled_from([Fraction(k, 2) for k in range(-3, 4)]) if l[0] != "p"
                        else st.integers(-2, 2).map(Fraction) for l in LABELS]).map(lambda xs: dict(zip(LABELS, xs)))
monos = st.builds(lambda e, c: mono(e, c), exponents, coeffs)
elements = st.lists(monos, min_size=0, max_size=3).map(lambda ms: sum(ms, SIG.zero()))

ZETA = cmath.exp(0.37j)
ZETAT = cmath.exp(-1.13j)


@given(elements, elements, elements)
def test_multiplication_is_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(elements, elements, elements)
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@given(elements, elements, st.lists(st.floats(-0.5, 0.5), min_size=len(LABELS), max_size=len(LABELS)))
def test_product_matches_dense_float_oracle(a, b, point):
    pt = np.array(point)
    exact = numeric_symbol(a * b, ZETA, ZETAT, pt)
    oracle = numeric_product_symbol(a, b, ZETA, ZETAT, pt)
    assert abs(exact - oracle) <= 1e-9 * max(1.0, abs(oracle))


@given(monos, monos)
def test_order_swap_oracle(a, b):
    # z^v z^w = phase(Ω(v, w)) z^{v+w}, so ab and ba differ by the square of that phase
    ab, ba = a * b, b * a
    ratio = ab.coefficient().specialize(ZETA, ZETAT) / ba.coefficient().specialize(ZETA, ZETAT)
    sig = a.sig
    v = np.array(a.exponent(), float) / sig.denominator
    w = np.array(b.exponent(), float) / sig.denominator
    om = np.array([[float(x) for x in row] for row in sig.omega])
    sector = np.array([l[-1] == "t" for l in sig.labels])
    bb, tt = om * np.outer(~sector, ~sector), om * np.outer(sector, sector)
    cr = om - bb - tt
    want = ZETA ** (4 * v @ bb @ w) * ZETAT ** (4 * v @ tt @ w) * cmath.exp(2j * cmath.pi * (v @ cr @ w))
    assert abs(ratio - want) < 1e-9


@given(elements)
def test_identity_and_self_difference(a):
    assert SIG.one() * a == a == a * SIG.one()
    assert (a - a).is_zero()
    assert q_commutator(a, a, 1).is_zero()


@given(elements)
def test_json_round_trip(a):
    assert TorusElement.from_json(a.to_json()) == a


def test_doubling_of_repeated_monomial():
    z = mono({U: 1})
    s = z + z
    assert len(s) == 1 and s.coefficient() == PhaseCoeff.const(2)


def test_heisenberg_pair_ratio_is_q_squared():
    uu, vv = mono({U: 1}), mono({P: 1})
    # uv = 𝔮 vu with 𝔮 = q²
    assert uu * vv == (vv * uu).scale(PhaseCoeff.q(2))


def test_q_commutator_against_direct_expansion():
    uu, vv = mono({U: 1}), mono({P: 1})
    c = PhaseCoeff.q(-2)
    direct = uu * vv - (vv * uu).scale(c)
    assert q_commutator(uu, vv, c) == direct
    # with uv = q² vu the bracket is (q² - q^{-2}) vu
    assert direct == (vv * uu).scale(PhaseCoeff.q(2) - PhaseCoeff.q(-2))


def test_commuting_monomials():
    a = mono({U: 1, ("u", 1, 3, "b"): 2})
    b = mono({("u", 1, 3, "b"): 1, ("a", 1, "b"): 1})
    assert commutator(a, b).is_zero()


def test_tensor_structure():
    one = SIG.one()
    assert tensor(one, one) == tensor(one, one).sig.one()
    k = mono({U: -1})
    kk = tensor(k, k)
    assert kk.is_monomial()
    d = kk.sig.exponent_dict(kk.exponent())
    assert d == {("L",) + U: -1, ("R",) + U: -1}


@given(monos, monos)
def test_left_and_right_factors_commute(a, b):
    assert embed_left(a) * embed_right(b) == embed_right(b) * embed_left(a)


def test_root_b2_single_monomial():
    z = mono({U: 1})
    assert root_b2(z) == mono({("u", 1, 2, "t"): 1})
    assert swap_sectors(z) == root_b2(z)


def test_root_b2_rejects_bad_orderings():
    uu, vv = mono({U: 1}), mono({P: 1})
    # u and v q²-commute in this order only
    assert root_b2(uu + vv) == mono({("u", 1, 2, "t"): 1}) + mono({("p", 1, 2, "t"): 1})
    with pytest.raises(OrderingViolated):
        root_b2(uu + vv, order=[1, 0])
    with pytest.raises(ValueError):
        root_b2(uu.scale(PhaseCoeff.const(2)))


def test_incompatible_algebras():
    other = heisenberg_signature([(1, 2)], denominator=2)
    with pytest.raises(IncompatibleAlgebras):
        mono({U: 1}) * other.monomial({("u", 1, 2, "b"): 1})


def test_fractional_phase_not_representable():
    a = mono({U: Fraction(1, 2)})
    b = mono({P: Fraction(1, 2)})
    with pytest.raises(ValueError, match="phase not representable"):
        a * b


def test_q_numbers_at_boundary():
    qq = PhaseCoeff.q(1) - PhaseCoeff.q(-1)
    assert q_number(0).is_zero()
    assert q_number(1) == qq
    assert q_number(-1) == qq * -1
