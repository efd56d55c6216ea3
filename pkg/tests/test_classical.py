import pytest
from hypothesis import given, strategies as st

from qrep.classical import (build_diff_generators, build_mellin_generators, classical_relation_checks,
                            expected_value_table, infinitesimal_group_check, mellin_equivalence_check,
                            n_lower_cluster, n_upper_cluster, pairing, serre_combination,
                            serre_polynomial_identity, serre_scalar, serre_triples, verify_classical_relations)
from qrep.family import GeneratorFamily, lam, u, x
from qrep.poly import Poly
from qrep.shiftop import commutator, make_shift


def test_rank_one_generators():
    g = build_mellin_generators(2)
    e, f, h = g["E", 1], g["F", 1], g["H", 1]
    assert e.terms == {make_shift({u(1, 2): 1}): 1 + Poly.var(u(1, 2))}
    assert h.terms == {(): Poly.var(u(1, 2)) * -2 + Poly.var(lam(1)) * 2}
    assert commutator(e, f) == h


@pytest.mark.parametrize("kind,i,count", [("E", 1, 2), ("E", 2, 1), ("F", 1, 1), ("F", 2, 2)])
def test_term_counts_at_rank_three(kind, i, count):
    assert len(build_mellin_generators(3)[kind, i].parts) == count


@pytest.mark.parametrize("n", [2, 3, 4])
def test_all_relations_hold_exactly(n):
    rep = verify_classical_relations(n)
    assert rep.passed, [c.relation for c in rep.failures()]


def test_serre_at_rank_three_vanishes_identically():
    g = build_mellin_generators(3)
    for a, b in ((1, 2), (2, 1)):
        assert serre_combination(g["E", a], g["E", b]).is_zero()
        assert serre_combination(g["F", a], g["F", b]).is_zero()
    # the middle coefficient is forced
    assert not serre_combination(g["E", 1], g["E", 2], middle=3).is_zero()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_pairings_match_case_table(n):
    g = build_mellin_generators(n)
    for kind, skind in (("E", "F"), ("E", "E"), ("F", "F")):
        for i in range(1, n):
            for si in range(1, n):
                for k in range(1, (n - i if kind == "E" else i) + 1):
                    for sk in range(1, (n - si if skind == "E" else si) + 1):
                        assert pairing(g, kind, i, k, skind, si, sk) == expected_value_table(kind, n, i, k, skind, si, sk)


def test_serre_triples_satisfy_scalar_criterion():
    for n in (3, 4, 5):
        triples = serre_triples(n, build_mellin_generators(n))
        assert triples and all(serre_scalar(*t) == 0 for t in triples)


def test_serre_cubic_factorization():
    assert serre_polynomial_identity()


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
def test_serre_scalar_vanishing_configurations(a, b, c):
    if (b, c) in ((0, 0), (-1, -1)) or (a, b, c) in ((0, 0, -1), (2, -1, 0)):
        assert serre_scalar(a, b, c) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_differential_and_shift_pictures_agree(n):
    rep = mellin_equivalence_check(n, trials=15, seed=n)
    assert rep.passed, rep.failures()[:2]


@given(st.integers(-5, 5))
def test_rank_one_raising_operator_is_derivative(m):
    e = build_diff_generators(2)["E", 1]
    mono = Poly({((x(1, 2), m),): 1}) if m else Poly.const(1)
    want = Poly({((x(1, 2), m - 1),): m}) if m - 1 else Poly.const(m)
    assert e.apply(mono) == want


def test_coefficients_subtraction_free_at_rank_three():
    for i in (1, 2):
        for j in range(1, 4 - i):
            assert all(c > 0 for _, c in n_lower_cluster(3, i, j).sorted_terms())
        for j in range(1, i):
            assert all(c > 0 for _, c in n_upper_cluster(3, i, j).sorted_terms())


@pytest.mark.parametrize("n", [2, 3])
def test_infinitesimal_action_matches_generators(n):
    rep = infinitesimal_group_check(n, trials=3, seed=1)
    assert rep.passed and rep.max_value() < 1e-6


def test_first_weight_constant_term_breaks_relations():
    fam = build_diff_generators(3, f_constant_index="1")
    mellin = {k: op.mellin() for k, op in fam.items()}
    checks = classical_relation_checks(GeneratorFamily("lam1", 3, mellin))
    assert not all(c.passed for c in checks)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        build_mellin_generators(1)
    with pytest.raises(ValueError):
        build_diff_generators(3, f_constant_index="2")
