from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qrep.qtorus import PhaseCoeff, root_b2
from qrep.quantum import positive_pair
from qrep.modified import (InadmissibleOrientation, OrientationWeights, bold_from_rank, commutant_checks,
                           commutant_solve, congruence_matrix, cross_phases, embedding_checks, full_torus_embed,
                           kkkk_basis, printed_form_checks, tilde_commutativity_check, verify_bold_relations,
                           verify_modified, zero_shift_regression)
from qrep.lattice import same_lattice


def test_standard_orientation_definitions():
    n = 4
    fam, _ = positive_pair(n)
    bold = bold_from_rank(n)
    for i in range(1, n):
        K = fam["K", i]
        assert bold["E", i] == (fam["E", i] * K ** i).scale(PhaseCoeff.q(i))
        assert bold["F", i] == (fam["F", i] * K ** (1 - i)).scale(PhaseCoeff.q(i - 1))
        assert bold["K", i] == K * K and len(bold["K", i]) == 1


@pytest.mark.parametrize("weights", [(1, 2, 3), (3, 2, 1), (1, 0, 1), (0, 1, 0)])
def test_admissible_orientations_satisfy_relations(weights):
    rep = verify_modified(4, OrientationWeights.chain(weights))
    assert rep.passed, [(c.relation, c.indices) for c in rep.failures()][:5]


@given(st.lists(st.sampled_from([1, -1]), min_size=1, max_size=4), st.integers(-3, 3))
def test_chain_orientations_are_admissible(steps, start):
    w = [start]
    for d in steps:
        w.append(w[-1] + d)
    o = OrientationWeights.chain(w)
    assert all(o.s(j) - o.s(i) == 1 for i, j in o.edges) and len(o.edges) == len(steps)


@pytest.mark.parametrize("weights", [(0, 0), (1, 3), (2, 0, 1)])
def test_inadmissible_orientations_raise(weights):
    with pytest.raises(InadmissibleOrientation):
        OrientationWeights.chain(weights)


def test_orientation_rank_must_match():
    with pytest.raises(ValueError):
        bold_from_rank(4, OrientationWeights.standard(2))


def test_rank_one_cleared_bracket():
    bold = bold_from_rank(2)
    e, f, K = bold["E", 1], bold["F", 1], bold["K", 1]
    # [e,f]_𝔮 = e f - q^{-2} f e = (1 - q^{-2})(1 - 𝐊)
    lhs = e * f - (f * e).scale(PhaseCoeff.q(-2))
    assert lhs == (K.sig.one() - K).scale(PhaseCoeff.const(1) - PhaseCoeff.q(-2))


def test_cross_pair_along_arrow_commutes():
    bold = bold_from_rank(3)
    assert bold["E", 1] * bold["F", 2] == bold["F", 2] * bold["E", 1]


def test_cross_pair_against_arrow_picks_up_q_squared():
    bold = bold_from_rank(3)
    E2, F1 = bold["E", 2], bold["F", 1]
    assert E2 * F1 == (F1 * E2).scale(PhaseCoeff.q(2))


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_bold_relations(n):
    rep = verify_bold_relations(bold_from_rank(n))
    assert rep.passed, [(c.relation, c.indices) for c in rep.failures()][:5]


@pytest.mark.parametrize("n", [3, 4])
def test_printed_relation_shapes_fail(n):
    rep = printed_form_checks(bold_from_rank(n))
    assert rep.checks and not any(c.passed for c in rep.checks)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_bold_commutes_with_tilde_bold(n):
    bold = bold_from_rank(n)
    assert tilde_commutativity_check(bold).passed
    assert all(p == {(0, 0, 0)} for p in cross_phases(bold).values())


def test_unmodified_adjacent_pairs_anticommute():
    fam, til = positive_pair(3)
    K1, E2t = fam["K", 1], til["E", 2]
    assert K1 * E2t == (E2t * K1).scale(-1)


def test_bold_transcendental_relations():
    bold = bold_from_rank(3)
    for key, el in bold.gens.items():
        assert root_b2(el) == bold.tilde[key]


@pytest.mark.parametrize("n", [3, 4])
def test_zero_shift_regression(n):
    rep = zero_shift_regression(n)
    assert rep.passed and all(not c.passed for c in rep.checks)


def test_zero_shift_regression_needs_an_edge():
    with pytest.raises(ValueError):
        zero_shift_regression(2)


def test_rank_one_embedding():
    emb, _ = full_torus_embed(bold_from_rank(2))
    e = emb["E", 1]
    assert len(e) == 2
    (a, _), (b, _) = e.items()
    ratio = e.sig.exponent_dict(tuple(x - y for x, y in zip(a, b)))
    assert not any(label[0] == "p" for label in ratio)
    assert all(v.denominator == 1 for ex, _ in emb["K", 1].items() for v in emb.sig.exponent_dict(ex).values())


@pytest.mark.parametrize("n", [2, 3, 4])
def test_embedding_preserves_relations(n):
    rep = embedding_checks(bold_from_rank(n))
    assert rep.passed, [(c.relation, c.indices) for c in rep.failures()][:5]


def test_rank_one_commutant():
    basis = commutant_solve(bold_from_rank(2))
    assert same_lattice(basis, [[Fraction(1, 2)]])


@pytest.mark.parametrize("n", [3, 4, 5])
def test_commutant_matches_fundamental_weight_pattern(n):
    bold = bold_from_rank(n)
    assert same_lattice(commutant_solve(bold), kkkk_basis(n))
    assert commutant_checks(bold).passed


def test_commutant_brute_force_rank_three():
    # every t in (1/3 Z)^2 ∩ [0,1)^2 with integral pairings, by enumeration
    m = congruence_matrix(bold_from_rank(3))
    grid = [Fraction(k, 6) for k in range(6)]
    hits = {(a, b) for a in grid for b in grid
            if all((r[0] * a + r[1] * b).denominator == 1 for r in m)}
    assert hits == {(0, 0), (Fraction(1, 3), Fraction(2, 3)), (Fraction(2, 3), Fraction(1, 3))}
