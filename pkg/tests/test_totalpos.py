import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qrep.totalpos import (ClusterChart, DegenerateChart, FactorParams, GaussUndefined, UnipotentMatrix,
                           aux_minors, aux_minors_cluster, aux_minors_det, bijection_checks, cluster_from_factors,
                           cluster_from_matrix, factor_indices, factors_from_cluster, fit_haar_exponents,
                           gauss_lower, gauss_project, haar_density_check, haar_exponents, matmul,
                           matrix_from_factors, random_chart, random_factor_params)

positive = st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=12)


def factor_params(n):
    return st.fixed_dictionaries({idx: positive for idx in factor_indices(n)}).map(lambda a: FactorParams(n, a))


def cofactor_det(m):
    """Laplace expansion along the first row; independent of the library determinant."""
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** c * m[0][c] * cofactor_det([row[:c] + row[c + 1:] for row in m[1:]])
               for c in range(len(m)) if m[0][c])


def test_rank_one_chart_is_the_entry():
    t = Fraction(5, 3)
    assert cluster_from_matrix(UnipotentMatrix(2, {(1, 2): t})).x == {(1, 2): t}
    assert matrix_from_factors(FactorParams(2, {(1, 1): t})).z == {(1, 2): t}
    assert factors_from_cluster(ClusterChart(2, {(1, 2): t})).a == {(1, 1): t}


def test_zero_factors_give_identity():
    m = matrix_from_factors(FactorParams(4, {idx: Fraction(0) for idx in factor_indices(4)}))
    assert all(v == 0 for v in m.z.values())


def test_product_formula_at_rank_three():
    a11, a21, a22 = Fraction(2), Fraction(3), Fraction(5)
    chart = cluster_from_matrix(matrix_from_factors(FactorParams(3, {(1, 1): a11, (2, 1): a21, (2, 2): a22})))
    # x_{i,i+j} = prod_{m<=j} prod_{l<=i} a_{m+l-1,l}
    assert chart.x[(1, 2)] == a11
    assert chart.x[(1, 3)] == a11 * a21
    assert chart.x[(2, 3)] == a11 * a22
    # a_{2,1} = x_{1,3} x_{0,1} / (x_{1,2} x_{0,2}) = x_{13}/x_{12}
    assert factors_from_cluster(chart).a[(2, 1)] == chart.x[(1, 3)] / chart.x[(1, 2)]


def test_cluster_variables_match_cofactor_expansion():
    rng = np.random.default_rng(3)
    z = {(i, j): Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for i in range(1, 5)
         for j in range(i + 1, 5)}
    m = UnipotentMatrix(4, z)
    full = m.full()
    for (i, j), v in cluster_from_matrix(m).x.items():
        block = [row[j - i:j] for row in full[:i]]
        assert v == cofactor_det(block)


@given(factor_params(4))
def test_positive_products_have_positive_initial_minors(a):
    assert matrix_from_factors(a).initial_minors_positive()


@given(st.integers(2, 6).flatmap(factor_params))
def test_factor_cluster_round_trip(a):
    chart = cluster_from_factors(a)
    assert factors_from_cluster(chart).a == a.a
    assert cluster_from_matrix(matrix_from_factors(a)).x == chart.x


def test_round_trip_from_charts_at_rank_five():
    rng = np.random.default_rng(11)
    for _ in range(20):
        chart = random_chart(5, rng)
        assert cluster_from_factors(factors_from_cluster(chart)).x == chart.x


def test_degenerate_chart():
    chart = ClusterChart(3, {(1, 2): Fraction(0), (1, 3): Fraction(1), (2, 3): Fraction(1)})
    with pytest.raises(DegenerateChart):
        factors_from_cluster(chart)


def test_aux_minor_special_values():
    rng = np.random.default_rng(5)
    n = 5
    m = matrix_from_factors(random_factor_params(n, rng))
    chart = cluster_from_matrix(m)
    assert aux_minors_det(m, 1).lower[1] == 1
    for i in range(2, n):
        assert aux_minors_det(m, i).lower[1] == chart.x[(1, i)]
    for i in range(2, n):
        assert aux_minors_det(m, i).upper[1] == chart.x[(1, i + 1)]


@given(factor_params(4))
def test_aux_minors_determinants_equal_cluster_formulas(a):
    m = matrix_from_factors(a)
    chart = cluster_from_matrix(m)
    for i in range(1, 4):
        assert aux_minors_det(m, i) == aux_minors_cluster(chart, i)


def test_aux_minors_reports_violation():
    m = matrix_from_factors(random_factor_params(3, np.random.default_rng(0)))
    assert aux_minors(m, 1) == aux_minors_det(m, 1)


def test_gauss_projection_of_unipotent_is_itself():
    m = matrix_from_factors(random_factor_params(4, np.random.default_rng(2)))
    up, diag, _ = gauss_project(m.full())
    assert up == m and all(d == 1 for d in diag)


def test_gauss_reassembly_exact():
    rng = np.random.default_rng(7)
    g = [[Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 4))) for _ in range(4)] for _ in range(4)]
    up, diag, _ = gauss_project(g)
    low = gauss_lower(g, up, diag)
    d = [[diag[r] if r == c else Fraction(0) for c in range(4)] for r in range(4)]
    assert matmul(matmul(low, d), up.full()) == g
    assert all(low[r][c] == (1 if r == c else 0) for r in range(4) for c in range(r, 4))


def test_gauss_undefined():
    g = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    with pytest.raises(GaussUndefined):
        gauss_project(g)


@pytest.mark.parametrize("i", [1, 2, 3])
def test_lower_generator_projection_case_formulas(i):
    n, t = 4, Fraction(3, 7)
    m = matrix_from_factors(random_factor_params(n, np.random.default_rng(i)))
    f = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
    f[i][i - 1] = t
    up, _, _ = gauss_project(matmul(m.full(), f))

    def z(a, b):
        return Fraction(1) if a == b else m.z.get((a, b), Fraction(0))

    for j, k in itertools.combinations(range(1, n + 1), 2):
        if j < i:
            want = z(j, i) + z(j, i + 1) * t if k == i else z(j, k)
        elif j == i:
            want = z(j, k) / (1 + z(i, i + 1) * t)
        elif j == i + 1:
            want = z(j, k) + t * (z(i, i + 1) * z(i + 1, k) - z(i, k))
        else:
            want = z(j, k)
        assert up.z[(j, k)] == want


def test_haar_exponents_rank_two_trivial():
    assert haar_exponents(2) == {(1, 2): 0}
    rep = haar_density_check(2, samples=20)
    assert rep.passed and rep.max_value() < 1e-12


def test_haar_exponents_match_least_squares_fit():
    fit = fit_haar_exponents(4, samples=40, seed=1)
    for k, e in haar_exponents(4).items():
        assert abs(fit[k] - e) < 1e-6


@pytest.mark.parametrize("n", [3, 4])
def test_haar_density(n):
    rep = haar_density_check(n, samples=100, seed=0, tolerance=1e-8 if n == 3 else 1e-6)
    assert rep.passed, rep.to_text()


def test_bijection_report():
    assert bijection_checks(4, samples=25, seed=3).passed
