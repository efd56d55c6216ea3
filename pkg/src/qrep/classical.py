"""Classical U(sl(n)) action: Mellin shift operators, differential operators,
and the exact verification of the Lie algebra relations."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from . import totalpos
from .family import GeneratorFamily, cartan, exists, lam, positions, u, x
from .poly import Poly, poly_sum, var_str
from .report import Check, Report
from .shiftop import ShiftOperator, commutator, compose, make_shift

# ---------------------------------------------------------------------------
# Mellin picture
# ---------------------------------------------------------------------------


def _u_sum(n: int, pairs: Iterable[tuple[int, int]], sign: int = 1) -> Poly:
    coeffs = {}
    for i, j in pairs:
        if exists(n, i, j):
            coeffs[u(i, j)] = coeffs.get(u(i, j), 0) + sign
    return Poly.linear(coeffs)


def _shift(n: int, entries: Iterable[tuple[int, int, int]]) -> dict:
    """Shift vector with boundary coordinates dropped."""
    vec = {}
    for i, j, s in entries:
        if exists(n, i, j):
            vec[u(i, j)] = vec.get(u(i, j), 0) + s
    return vec


def e_shift(n: int, i: int, k: int) -> dict:
    return _shift(n, [(k - 1, i + k - 1, 1), (k - 1, i + k, -1), (k, i + k - 1, -1), (k, i + k, 1)])


def f_shift(n: int, i: int, k: int) -> dict:
    return _shift(n, [(k - 1, i - 1, -1), (k - 1, i, 1), (k, i, 1), (k, i + 1, -1)])


def e_weight_u(n: int, i: int, k: int) -> Poly:
    """u-part of the E_i^k weight: ``sum_{j=k}^{n-i} u_{j,i+j}``."""
    return _u_sum(n, [(j, i + j) for j in range(k, n - i + 1)])


def f_weight_u(n: int, i: int, k: int) -> Poly:
    """u-part of the F_i^k weight: ``sum_{j=k}^{i} u_{ji} - sum_{j>i} u_{ij}``."""
    return (_u_sum(n, [(j, i) for j in range(k, i + 1)])
            - _u_sum(n, [(i, j) for j in range(i + 1, n + 1)]))


def h_weight_u(n: int, i: int) -> Poly:
    return (_u_sum(n, [(j, i) for j in range(1, i)])
            - _u_sum(n, [(i, j) for j in range(i + 1, n + 1)])
            - _u_sum(n, [(j, i + j) for j in range(1, n - i + 1)]))


def e_terms(n: int, i: int) -> list[tuple[Poly, dict]]:
    return [(1 + e_weight_u(n, i, k), e_shift(n, i, k)) for k in range(1, n - i + 1)]


def f_terms(n: int, i: int) -> list[tuple[Poly, dict]]:
    two_lam = Poly.var(lam(i)) * 2
    return [(1 + f_weight_u(n, i, k) + two_lam, f_shift(n, i, k)) for k in range(1, i + 1)]


def h_weight(n: int, i: int) -> Poly:
    return h_weight_u(n, i) + Poly.var(lam(i)) * 2


def _op(terms, name, i, picture="mellin") -> ShiftOperator:
    return ShiftOperator([(s, w) for w, s in terms], name=name, index=i, picture=picture,
                         parts=[(w, make_shift(s)) for w, s in terms])


def build_mellin_generators(n: int) -> GeneratorFamily:
    """E_i, F_i, H_i as shift operators on functions of ``u_{ij}``.

    The weight parameters ``λ_i`` are kept as formal variables ``("lam", i)``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    gens = {}
    for i in range(1, n):
        gens[("E", i)] = _op(e_terms(n, i), "E", i)
        gens[("F", i)] = _op(f_terms(n, i), "F", i)
        gens[("H", i)] = ShiftOperator.multiplication(h_weight(n, i), name="H", index=i)
    return GeneratorFamily("classical-mellin", n, gens, provenance="Mellin-transformed shift action")


# ---------------------------------------------------------------------------
# Differential-operator picture on the cluster coordinate ring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiffOperator:
    """First-order operator ``sum_t c_t(x) d/dx_t + c_0(x)`` on Laurent polynomials in x.

    ``parts`` is a tuple of ``(coefficient, target)``; ``target=None`` marks the
    multiplication part.
    """

    parts: tuple
    name: str = ""
    index: int | None = None

    def apply(self, f: Poly) -> Poly:
        out = Poly()
        for coef, target in self.parts:
            out = out + coef * (f if target is None else f.diff(target))
        return out

    def mellin(self) -> ShiftOperator:
        """Rewrite via ``x^m d/dx_t = x^{m-e_t} (x_t d/dx_t)``, ``x -> shift -1``, ``x d/dx -> u``.

        Coefficients may involve ``λ``; those are passed through as scalars.
        """
        terms = []
        for coef, target in self.parts:
            for mono, c in coef.items():
                xpart = {v: e for v, e in mono if v[0] == "x"}
                scalar = Poly({tuple((v, e) for v, e in mono if v[0] != "x"): c})
                if target is not None:
                    xpart[target] = xpart.get(target, 0) - 1
                shift = {u(v[1], v[2]): -e for v, e in xpart.items() if e}
                if target is None:
                    weight = scalar
                else:
                    tu = u(target[1], target[2])
                    weight = scalar * (Poly.var(tu) - (-shift.get(tu, 0)))
                terms.append((shift, weight))
        return ShiftOperator(terms, name=self.name, index=self.index)

    def to_json(self) -> dict:
        return {"name": self.name, "index": self.index,
                "parts": [{"coefficient": c.to_json(), "derivative": var_str(t) if t else None}
                          for c, t in self.parts]}


def _xv(n: int, i: int, j: int) -> Poly:
    """Cluster variable with the boundary convention ``x_{0,j} = x_{k,k} = 1``."""
    if i == 0 or i == j:
        return Poly.const(1)
    if not 1 <= i < j <= n:
        raise IndexError((i, j))
    return Poly.var(x(i, j))


def cluster_a(n: int, i: int, j: int) -> Poly:
    """``a_{ij} = x_{j,i+1} x_{j-1,i-1} / (x_{j,i} x_{j-1,i})`` as a Laurent monomial."""
    return _xv(n, j, i + 1) * _xv(n, j - 1, i - 1) * _xv(n, j, i) ** -1 * _xv(n, j - 1, i) ** -1


def z_next_cluster(n: int, i: int) -> Poly:
    """``z_{i,i+1} = sum_{j<=i} a_{ij}``."""
    return poly_sum(cluster_a(n, i, j) for j in range(1, i + 1))


def n_lower_cluster(n: int, i: int, j: int) -> Poly:
    """``N_{i;j}`` in cluster variables."""
    s = poly_sum(_xv(n, k - 1, i + k) * _xv(n, k, i + k - 1)
                 * _xv(n, k - 1, i + k - 1) ** -1 * _xv(n, k, i + k) ** -1
                 for k in range(1, j + 1))
    return _xv(n, j, i + j) * s


def n_upper_cluster(n: int, i: int, j: int) -> Poly:
    """``N^{i;j} = x_{j,i} sum_{k<=j} a_{ik}``."""
    return _xv(n, j, i) * poly_sum(cluster_a(n, i, k) for k in range(1, j + 1))


def build_diff_generators(n: int, f_constant_index: str = "i") -> GeneratorFamily:
    """E_i, F_i, H_i as first-order differential operators in the cluster variables.

    ``f_constant_index="1"`` reproduces the literal ``2 z_{i,i+1} λ_1`` constant
    term of F_i; the default uses ``λ_i``.  Only the latter gives a representation
    for n >= 3.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if f_constant_index not in ("i", "1"):
        raise ValueError("f_constant_index must be 'i' or '1'")
    gens = {}
    for i in range(1, n):
        gens[("E", i)] = DiffOperator(tuple(
            (n_lower_cluster(n, i, j), x(j, i + j)) for j in range(1, n - i + 1)), "E", i)
        z = z_next_cluster(n, i)
        li = lam(i) if f_constant_index == "i" else lam(1)
        parts = [(-(Poly.var(x(i, k)) * z), x(i, k)) for k in range(i + 1, n + 1)]
        parts += [(n_upper_cluster(n, i, j), x(j, i)) for j in range(1, i)]
        parts.append((z * Poly.var(li) * 2, None))
        gens[("F", i)] = DiffOperator(tuple(parts), "F", i)
        hparts = [(Poly.var(x(j, i)), x(j, i)) for j in range(1, i)]
        hparts += [(-Poly.var(x(i, k)), x(i, k)) for k in range(i + 1, n + 1)]
        hparts += [(-Poly.var(x(j, i + j)), x(j, i + j)) for j in range(1, n - i + 1)]
        hparts.append((Poly.var(lam(i)) * 2, None))
        gens[("H", i)] = DiffOperator(tuple(hparts), "H", i)
    return GeneratorFamily("classical-diff", n, gens, provenance="infinitesimal action on cluster coordinates",
                           meta={"f_constant_index": f_constant_index})


# ---------------------------------------------------------------------------
# Relation suite
# ---------------------------------------------------------------------------


def _residue_check(name: str, indices, residue: ShiftOperator, formula: str) -> Check:
    return Check(relation=name, indices=tuple(indices), passed=residue.is_zero(),
                 residue_terms=len(residue), formula=formula,
                 detail="" if residue.is_zero() else repr(residue)[:400])


def serre_combination(a: ShiftOperator, b: ShiftOperator, middle: Poly | int = 2) -> ShiftOperator:
    """``a a b - c a b a + b a a`` with classical coefficient ``c``."""
    aa = compose(a, a)
    return compose(aa, b) - compose(compose(a, b), a).scale(middle) + compose(b, aa)


def classical_relation_checks(family: GeneratorFamily) -> list[Check]:
    n = family.n
    r = n - 1
    E = {i: family["E", i] for i in range(1, n)}
    F = {i: family["F", i] for i in range(1, n)}
    H = {i: family["H", i] for i in range(1, n)}
    zero = ShiftOperator()
    checks = []
    for i in range(1, n):
        for j in range(1, n):
            checks.append(_residue_check("[H_i,E_j] = a_ij E_j", (i, j),
                                         commutator(H[i], E[j]) - E[j].scale(cartan(i, j)),
                                         "[H_i,E_j]=a_{ij}E_j"))
            checks.append(_residue_check("[H_i,F_j] = -a_ij F_j", (i, j),
                                         commutator(H[i], F[j]) + F[j].scale(cartan(i, j)),
                                         "[H_i,F_j]=-a_{ij}F_j"))
            target = H[i] if i == j else zero
            checks.append(_residue_check("[E_i,F_j] = δ_ij H_i", (i, j),
                                         commutator(E[i], F[j]) - target,
                                         "[E_i,F_j]=\\delta_{ij}H_i"))
            checks.append(_residue_check("[H_i,H_j] = 0", (i, j), commutator(H[i], H[j]), "[H_i,H_j]=0"))
            if abs(i - j) >= 2 and i < j:
                checks.append(_residue_check("[E_i,E_j] = 0", (i, j), commutator(E[i], E[j]), "[E_i,E_j]=0"))
                checks.append(_residue_check("[F_i,F_j] = 0", (i, j), commutator(F[i], F[j]), "[F_i,F_j]=0"))
    for i in range(1, r):
        for P, label in ((E, "E"), (F, "F")):
            checks.append(_residue_check(f"{label}_i{label}_i{label}_i+1 - 2{label}_i{label}_i+1{label}_i "
                                         f"+ {label}_i+1{label}_i{label}_i = 0", (i, i + 1),
                                         serre_combination(P[i], P[i + 1]), "Serre"))
            checks.append(_residue_check(f"{label}_i+1{label}_i+1{label}_i - 2{label}_i+1{label}_i{label}_i+1 "
                                         f"+ {label}_i{label}_i+1{label}_i+1 = 0", (i + 1, i),
                                         serre_combination(P[i + 1], P[i]), "Serre"))
    return checks


def verify_classical_relations(n: int, family: GeneratorFamily | None = None) -> Report:
    family = family or build_mellin_generators(n)
    rep = Report("classical", n)
    rep.extend(classical_relation_checks(family))
    rep.extend(value_table_checks(n, family))
    rep.extend(serre_triple_checks(n, family))
    return rep


# ---------------------------------------------------------------------------
# Pairing tables P'(e) and the Serre scalar criterion
# ---------------------------------------------------------------------------


def _parts(family: GeneratorFamily, kind: str, i: int) -> list[tuple[Poly, dict]]:
    return [(w, dict(s)) for w, s in family[kind, i].parts]


def pairing(family: GeneratorFamily, kind: str, i: int, k: int, skind: str, si: int, sk: int) -> Fraction:
    """``P'(e)``: linear part of the weight of ``kind_i^k`` on the shift of ``skind_si^sk``."""
    w, _ = _parts(family, kind, i)[k - 1]
    _, s = _parts(family, skind, si)[sk - 1]
    return w.linear_value(s)


def _h_pairing(family, i, skind, si, sk) -> Fraction:
    _, s = _parts(family, skind, si)[sk - 1]
    return family["H", i].terms[()].linear_value(s)


def _nterms(kind: str, n: int, i: int) -> int:
    return n - i if kind == "E" else i


def expected_value_table(kind: str, n: int, i: int, k: int, skind: str, si: int, sk: int) -> int:
    """Closed-form case analysis of the pairing values."""
    if kind == "E" and skind == "F":
        return 1 if (sk, si) == (k, i + k) else -1 if (sk, si) == (k, i + k - 1) else 0
    if kind == "F" and skind == "E":
        # F'_{i'}^{k'}(e_{E_i}^k): here (i', k') = (i, k) and the shift is E_{si}^{sk}
        return 1 if (sk, sk + si) == (k, i) else -1 if (sk, sk + si) == (k, i + 1) else 0
    if kind == "H":
        if skind == "E":
            return -2 if i == si else 1 if abs(i - si) == 1 else 0
        return 2 if i == si else -1 if abs(i - si) == 1 else 0
    if kind == skind and si == i:
        return 0 if k > sk else 1 if k == sk else 2
    if kind == skind == "E" and si == i + 1:
        return 0 if k > sk else -1
    if kind == skind == "E" and si == i - 1:
        return 0 if k >= sk else -1
    if kind == skind == "F" and si == i + 1:
        return 0 if k >= sk else -1
    if kind == skind == "F" and si == i - 1:
        return 0 if k > sk else -1
    if kind == skind and abs(si - i) >= 2:
        return 0
    raise KeyError((kind, i, skind, si))


def value_table_checks(n: int, family: GeneratorFamily) -> list[Check]:
    checks = []
    mismatches = []
    count = 0
    for kind, skind in (("E", "F"), ("F", "E"), ("E", "E"), ("F", "F")):
        for i, si in itertools.product(range(1, n), repeat=2):
            for k in range(1, _nterms(kind, n, i) + 1):
                for sk in range(1, _nterms(skind, n, si) + 1):
                    got = pairing(family, kind, i, k, skind, si, sk)
                    want = expected_value_table(kind, n, i, k, skind, si, sk)
                    count += 1
                    if got != want:
                        mismatches.append((kind, i, k, skind, si, sk, int(got), want))
    for skind in ("E", "F"):
        for i, si in itertools.product(range(1, n), repeat=2):
            for sk in range(1, _nterms(skind, n, si) + 1):
                got = _h_pairing(family, i, skind, si, sk)
                want = expected_value_table("H", n, i, 0, skind, si, sk)
                count += 1
                if got != want:
                    mismatches.append(("H", i, 0, skind, si, sk, int(got), want))
    checks.append(Check("pairing tables P'(e) match the case analysis", (n,), not mismatches,
                        residue_terms=len(mismatches), formula="P'(e) tables",
                        detail=f"{count} entries" + (f"; first mismatches {mismatches[:5]}" if mismatches else "")))
    # symmetry identities consumed by the Serre argument
    bad = []
    for kind in ("E", "F"):
        for i in range(1, n - 1):
            for k, k2 in itertools.product(range(1, _nterms(kind, n, i) + 1), repeat=2):
                s = pairing(family, kind, i, k, kind, i, k2) + pairing(family, kind, i, k2, kind, i, k)
                if s != 2:
                    bad.append((kind, i, k, k2, "same", int(s)))
            for k in range(1, _nterms(kind, n, i) + 1):
                for k3 in range(1, _nterms(kind, n, i + 1) + 1):
                    s = pairing(family, kind, i, k, kind, i + 1, k3) + pairing(family, kind, i + 1, k3, kind, i, k)
                    if s != -1:
                        bad.append((kind, i, k, k3, "adjacent", int(s)))
    checks.append(Check("symmetry identities P(e)+P(e)=2 and =-1", (n,), not bad, residue_terms=len(bad),
                        formula="P_i^k(e_{P_i}^{k'})+P_i^{k'}(e_{P_i}^k)=2",
                        detail=str(bad[:5]) if bad else ""))
    # E and F pairings agree pointwise (drives the [E_i,F_j] computation)
    asym = [(i, k, si, sk) for i, si in itertools.product(range(1, n), repeat=2)
            for k in range(1, n - i + 1) for sk in range(1, si + 1)
            if pairing(family, "E", i, k, "F", si, sk) != pairing(family, "F", si, sk, "E", i, k)]
    checks.append(Check("E'(e_F) = F'(e_E) for all index pairs", (n,), not asym, residue_terms=len(asym),
                        formula="E_i^k(e_F)=F(e_E)"))
    return checks


ALLOWED_CONFIGS = "(a,0,0), (a,-1,-1), (0,0,-1), (2,-1,0)"


def _allowed(a, b, c) -> bool:
    return (b, c) in ((0, 0), (-1, -1)) or (a, b, c) in ((0, 0, -1), (2, -1, 0))


def serre_triples(n: int, family: GeneratorFamily) -> set[tuple]:
    """All ``(a, b, c)`` realized by index configurations of both Serre relations."""
    out = set()
    for kind in ("E", "F"):
        for i in range(1, n - 1):
            for p, q in ((i, i + 1), (i + 1, i)):
                for k, k2 in itertools.product(range(1, _nterms(kind, n, p) + 1), repeat=2):
                    for k3 in range(1, _nterms(kind, n, q) + 1):
                        a = pairing(family, kind, p, k2, kind, p, k)
                        b = pairing(family, kind, q, k3, kind, p, k)
                        c = pairing(family, kind, q, k3, kind, p, k2)
                        out.add((int(a), int(b), int(c)))
    return out


def serre_scalar(a, b, c):
    return b * (2 - a + c) + (a + b) * c


def serre_triple_checks(n: int, family: GeneratorFamily) -> list[Check]:
    triples = serre_triples(n, family)
    failing = sorted(t for t in triples if serre_scalar(*t) != 0)
    outside = sorted(t for t in triples if not _allowed(*t))
    return [
        Check("b(2-a+c)+(a+b)c = 0 on realized triples", (n,), not failing, residue_terms=len(failing),
              formula="b(2-a+c)+(a+b)c=0", detail=f"triples={sorted(triples)}"),
        Check("realized triples lie in " + ALLOWED_CONFIGS, (n,), not outside, residue_terms=len(outside),
              formula="configurations", detail=str(outside) if outside else ""),
    ]


def serre_polynomial_identity() -> bool:
    """Symbolic check that the symmetrized cubic B(a,b,c) factors as claimed."""
    X, Y, Z, a, b, c = (Poly.var(v) for v in ("X", "Y", "Z", "a", "b", "c"))

    def half(X, Y, Z, a, b, c):
        return (X * (Y + a) * (Z + b + c)
                - 2 * X * (Z + b) * (Y + a - c - 1)
                + Z * (X - b - 1) * (Y + a - c - 1))

    B = half(X, Y, Z, a, b, c) + half(Y, X, Z, 2 - a, c, b)
    return B == (X + Y + Z) * (b * (2 - a + c) + (a + b) * c)


# ---------------------------------------------------------------------------
# Cross-checks between the two pictures
# ---------------------------------------------------------------------------


def mellin_equivalence_check(n: int, trials: int = 50, seed: int = 0, max_exp: int = 3) -> Report:
    """Apply both pictures to random Laurent monomials and compare coefficients exactly.

    A monomial ``x^m`` has Mellin coefficient function ``δ_{u=m}``; a shift
    term ``w(u) f(u+e)`` maps it to ``w(m-e) x^{m-e}``.
    """
    rng = random.Random(seed)
    diff = build_diff_generators(n)
    mellin = build_mellin_generators(n)
    rep = Report("mellin-equivalence", n, seed=seed)
    coords = positions(n)
    # operator-level comparison through the Mellin dictionary
    for key, op in diff.items():
        ok = op.mellin() == mellin[key]
        rep.add(Check("Mellin dictionary maps differential to shift generator", key, ok,
                      formula="x d/dx <-> u, x <-> shift -1"))
    bad = []
    for _ in range(trials):
        m = {x(i, j): rng.randint(-max_exp, max_exp) for i, j in coords if rng.random() < 0.7}
        mono = Poly({tuple(sorted((v, e) for v, e in m.items() if e)): 1})
        for key, op in diff.items():
            direct = op.apply(mono)
            via = Poly()
            for shift, w in mellin[key].terms.items():
                target = {u(i, j): m.get(x(i, j), 0) for i, j in coords}
                for v, s in shift:
                    target[v] = target.get(v, 0) - s
                coef = w.subs(target)
                xm = tuple(sorted((x(v[1], v[2]), e) for v, e in target.items() if e))
                via = via + coef * Poly({xm: 1})
            if direct != via:
                bad.append((key, m))
    rep.add(Check("differential and shift pictures agree on random monomials", (n, trials), not bad,
                  residue_terms=len(bad), formula="monomial basis",
                  detail=str(bad[:3]) if bad else f"{trials} monomials x {len(diff.generators)} generators"))
    return rep


def infinitesimal_group_check(n: int, trials: int = 10, seed: int = 0, lam_values=None,
                              h: float = 1e-5, tolerance: float = 1e-6) -> Report:
    """Finite-difference derivative of the group action versus the differential generators.

    The action is ``(g.f)(z) = χ_λ(z g) f([z g]_+)``, differentiated at ``t=0`` for
    ``g = exp(tX)`` and ``f = x_{jk}``.  The character is taken as
    ``prod_i Δ_i^{2 λ_i}`` with ``Δ_i`` the leading principal minors, so that
    ``λ_i`` pairs with the i-th simple coroot.
    """
    rng = np.random.default_rng(seed)
    if lam_values is None:
        lam_values = rng.uniform(-1.0, 1.0, n - 1)
    lam_values = [float(v) for v in lam_values]
    diff = build_diff_generators(n)
    rep = Report("infinitesimal", n, seed=seed)
    worst = 0.0
    worst_at = None
    for _ in range(trials):
        a = totalpos.random_factor_params(n, rng=rng, exact=False)
        zmat = totalpos.matrix_from_factors(a)
        zf = np.array(zmat.to_float())
        cluster = totalpos.cluster_from_matrix(zmat)
        xvals = {x(i, j): float(v) for (i, j), v in cluster.x.items()}
        lvals = {lam(i + 1): lam_values[i] for i in range(n - 1)}
        for (kind, i), op in diff.items():
            gen = totalpos.lie_generator(n, kind, i)
            for (j, k) in positions(n):
                def action(t):
                    g = zf @ totalpos.expm_small(gen * t)
                    proj, diag = totalpos.gauss_project_float(g)
                    minors = np.cumprod(diag)
                    chi = np.prod([minors[m] ** (2 * lam_values[m]) for m in range(n - 1)])
                    return chi * totalpos.minor_float(proj, j, k)
                num = (-action(2 * h) + 8 * action(h) - 8 * action(-h) + action(-2 * h)) / (12 * h)
                exact = op.apply(Poly.var(x(j, k))).evaluate({**xvals, **lvals})
                dev = abs(num - exact) / max(1.0, abs(exact))
                if dev > worst:
                    worst, worst_at = dev, (kind, i, j, k)
    rep.add(Check("d/dt exp(tX).x_jk at t=0 equals X x_jk", (n, trials), worst < tolerance,
                  formula="infinitesimal action", value=worst,
                  detail=f"max relative deviation {worst:.3e} at {worst_at}; λ={lam_values}"))
    return rep
