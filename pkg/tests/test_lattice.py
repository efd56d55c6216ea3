import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st
from sympy.matrices.normalforms import smith_normal_form

from qrep.lattice import dual_lattice, gf2_solve, hnf, rational_inverse, same_lattice, smith_invariants

entries = st.integers(-6, 6)


def matrices(rows=st.integers(1, 4), cols=st.integers(1, 4)):
    return st.tuples(rows, cols).flatmap(
        lambda rc: st.lists(st.lists(entries, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


def _row_space_contains(basis, v):
    """Integer membership by solving against an HNF basis."""
    v = list(v)
    for row in basis:
        c = next(k for k, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        f = v[c] // row[c]
        v = [a - f * b for a, b in zip(v, row)]
    return not any(v)


@given(matrices())
def test_hnf_shape_and_row_space(m):
    h = hnf(m)
    pivots = [next(k for k, x in enumerate(r) if x) for r in h]
    assert pivots == sorted(set(pivots))
    for r, c in zip(h, pivots):
        assert r[c] > 0
    for a, (r, c) in enumerate(zip(h, pivots)):
        assert all(0 <= h[b][c] < r[c] for b in range(a))
    assert all(_row_space_contains(h, row) for row in m)
    assert len(h) == sympy.Matrix(m).rank()


@given(matrices())
def test_smith_invariants_match_sympy(m):
    snf = smith_normal_form(sympy.Matrix(m), domain=sympy.ZZ)
    want = [abs(int(snf[k, k])) for k in range(min(snf.shape)) if snf[k, k] != 0]
    got = smith_invariants(m)
    assert got == want
    assert all(b % a == 0 for a, b in zip(got, got[1:]))


@given(matrices(rows=st.just(3), cols=st.just(3)))
def test_rational_inverse(m):
    assume(sympy.Matrix(m).det() != 0)
    inv = rational_inverse([[Fraction(x) for x in r] for r in m])
    assert sympy.Matrix(inv) == sympy.Matrix(m).inv()


def test_dual_lattice_by_enumeration():
    m = [[2, 1], [0, 3], [1, 1]]
    basis = dual_lattice(m)
    grid = [Fraction(k, 12) for k in range(12)]
    hits = {(a, b) for a, b in itertools.product(grid, repeat=2)
            if all((r[0] * a + r[1] * b).denominator == 1 for r in m)}
    gen = {((i * basis[0][0] + j * basis[1][0]) % 1, (i * basis[0][1] + j * basis[1][1]) % 1)
           for i in range(12) for j in range(12)}
    assert hits == gen


def test_dual_lattice_needs_full_rank():
    with pytest.raises(ValueError):
        dual_lattice([[1, 2], [2, 4]])


def test_same_lattice():
    assert same_lattice([[Fraction(1, 2), 0], [0, 1]], [[Fraction(1, 2), 1], [Fraction(1, 2), 0]])
    assert not same_lattice([[1, 0], [0, 1]], [[2, 0], [0, 1]])


@given(st.lists(st.lists(st.integers(0, 1), min_size=4, max_size=4), min_size=1, max_size=5),
       st.lists(st.integers(0, 1), min_size=4, max_size=4))
def test_gf2_solve_consistent_systems(a, x):
    b = [sum(r * v for r, v in zip(row, x)) % 2 for row in a]
    sol = gf2_solve(a, b)
    assert sol is not None
    assert [sum(r * v for r, v in zip(row, sol)) % 2 for row in a] == b


def test_gf2_inconsistent():
    assert gf2_solve([[1, 1], [1, 1]], [0, 1]) is None
