"""Quantized shift action and the positive representations of U_q(sl(n,R)) in quantum tori.

Two realizations are built and checked independently:

* the q-deformed Mellin action, where every classical weight ``P(u)`` becomes
  ``[P(u)]_q``; it lives in a one-sector torus generated by ``q^{u_{ij}}``,
  ``q^{λ_i}`` and the unit shifts;
* the positive family, where after the complex shift ``u -> u + c`` every
  generator is a sum of unit-coefficient monomials ``e^{πb(±Z + 2P)}`` in
  position/momentum variables, together with the ``b^{-1}`` (tilde) copy.

All relations are checked with denominators cleared, using the rescaled
generators ``ê = (q - q^{-1}) E`` for the first realization and
``e = 2 sin(πb²) E`` for the second.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import classical
from .family import GeneratorFamily, cartan, exists, lam, positions, u
from .poly import Poly
from .qtorus import (AlgebraSignature, OrderingViolated, PhaseCoeff, TorusElement, commutation_phase,
                     heisenberg_signature, multiply, q_commutes, q_number, root_b2, swap_sectors, tensor)
from .report import Check, Report
from .shiftop import ShiftOperator, make_shift

# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------


def _q(k: int) -> PhaseCoeff:
    return PhaseCoeff.q(k)


def q_two() -> PhaseCoeff:
    """``[2]_q = q + q^{-1}``."""
    return _q(1) + _q(-1)


def cleared_q_number(k: int) -> PhaseCoeff:
    return q_number(k)


def quantum_serre_scalar(a: int, b: int, c: int) -> PhaseCoeff:
    """``([b][2-a+c] + [a+b][c]) (q - q^{-1})^2``."""
    return q_number(b) * q_number(2 - a + c) + q_number(a + b) * q_number(c)


def _residue(name, indices, residue: TorusElement, formula="", expected_failure=False) -> Check:
    return Check(name, tuple(indices), residue.is_zero(), residue_terms=len(residue), formula=formula,
                 expected_failure=expected_failure,
                 detail="" if residue.is_zero() else repr(residue)[:400])


def serre_element(a: TorusElement, b: TorusElement) -> TorusElement:
    """``a a b - [2]_q a b a + b a a``."""
    aa = a * a
    return aa * b - (a * b * a).scale(q_two()) + b * aa


# ---------------------------------------------------------------------------
# q-deformed Mellin action
# ---------------------------------------------------------------------------


def mellin_signature(n: int) -> AlgebraSignature:
    """One-sector torus on ``u_{ij}``, their conjugate momenta and central ``λ_i``."""
    return heisenberg_signature(positions(n), [("lam", i) for i in range(1, n)], ("b",),
                                denominator=2 * n, name=f"mellin{n}")


def q_power(sig: AlgebraSignature, weight: Poly) -> TorusElement:
    """``q^{weight}`` for an affine weight in ``u`` and ``λ``: ``q^{u} = z^{u/2}``."""
    if not weight.is_affine():
        raise ValueError("q-powers need affine weights")
    c0 = weight.constant_term()
    if (2 * c0).denominator != 1:
        raise ValueError("constant term must be a half-integer")
    entries = {}
    for v, c in weight.linear_coefficients().items():
        entries[v + ("b",)] = Fraction(c, 2)
    return sig.monomial(entries, PhaseCoeff.unit(int(2 * c0)))


def shift_monomial(sig: AlgebraSignature, shift: dict) -> TorusElement:
    """The operator ``f(u) -> f(u + e)`` as ``z^{-e·p}``."""
    return sig.monomial({("p",) + v[1:] + ("b",): -s for v, s in shift.items()})


@dataclass(frozen=True)
class QShiftOperator:
    """Weights ``[P_k(u)]_q`` with shifts ``e_k``, plus the cleared torus realization."""

    name: str
    index: int
    terms: tuple  # ((Poly weight, shift dict), ...)
    element: TorusElement


def quantize_terms(sig: AlgebraSignature, terms) -> TorusElement:
    """``sum_k (q^{P_k} - q^{-P_k}) T_{e_k}``."""
    out = sig.zero()
    for w, s in terms:
        t = shift_monomial(sig, s)
        out = out + (q_power(sig, w) - q_power(sig, -w)) * t
    return out


def build_quantum_generators(n: int) -> GeneratorFamily:
    """Rescaled ``ê_i = (q - q^{-1}) E_i``, ``f̂_i`` and ``K_i = q^{H_i}``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    sig = mellin_signature(n)
    gens, qops = {}, {}
    for i in range(1, n):
        for kind, terms in (("E", classical.e_terms(n, i)), ("F", classical.f_terms(n, i))):
            el = quantize_terms(sig, terms)
            gens[(kind, i)] = el
            qops[(kind, i)] = QShiftOperator(kind, i, tuple((w, s) for w, s in terms), el)
        gens[("K", i)] = q_power(sig, classical.h_weight(n, i))
    return GeneratorFamily("quantum-mellin", n, gens, provenance="q-deformed Mellin shift action",
                           meta={"signature": sig, "qops": qops, "ef_sign": 1})


def decode_shift_action(sig: AlgebraSignature, element: TorusElement) -> dict:
    """Read a torus element as a q-shift operator on functions of ``u``.

    A normal-ordered ``c z^v`` equals ``c q^{-Ω(v_pos, v_mom)} z^{v_pos} z^{v_mom}``,
    i.e. multiplication by ``c q^{-Ω} q^{M(u)}`` followed by the shift
    ``-v_p``.  Returns ``{shift: [(c, -Ω, M)]}`` with ``M`` an affine weight.
    """
    out: dict = {}
    for e, c in element.items():
        d = sig.exponent_dict(e)
        pos = {l: x for l, x in d.items() if l[0] != "p"}
        mom = {l: x for l, x in d.items() if l[0] == "p"}
        omega = sig.pairing(sig.exponent(pos), sig.exponent(mom))
        weight = Poly.linear({l[:-1]: 2 * x for l, x in pos.items()})
        shift = make_shift({u(*l[1:-1]): -x for l, x in mom.items()})
        out.setdefault(shift, []).append((c, -omega, weight))
    return out


def classical_limit(sig: AlgebraSignature, element: TorusElement) -> ShiftOperator:
    """First-order term at ``q = e^h`` divided by ``q - q^{-1} ≈ 2h``.

    Raises when the zeroth-order term of some shift does not vanish.
    """
    terms = {}
    for shift, parts in decode_shift_action(sig, element).items():
        zeroth = Fraction(0)
        first = Poly()
        for c, om, weight in parts:
            for (zp, ztp), (re, im) in c.terms.items():
                if im or ztp:
                    raise ValueError("classical limit needs real ζ-coefficients")
                zeroth += re
                first = first + (weight + Fraction(zp, 2) + om) * re
        if zeroth:
            raise ValueError("element has no classical limit at this normalization")
        terms[shift] = first * Fraction(1, 2)
    return ShiftOperator(terms)


def specialization_checks(family: GeneratorFamily) -> list[Check]:
    """q -> 1 limit of the cleared generators against the classical Mellin generators."""
    n = family.n
    sig = family.meta["signature"]
    ref = classical.build_mellin_generators(n)
    checks = []
    for i in range(1, n):
        for kind in ("E", "F"):
            got = classical_limit(sig, family[kind, i])
            checks.append(Check("q -> 1 limit equals the classical weights and shifts", (kind, i),
                                got == ref[kind, i], formula="[P]_q -> P",
                                detail="" if got == ref[kind, i] else f"{got} vs {ref[kind, i]}"))
        parts = decode_shift_action(sig, family["K", i])
        (shift, [(c, om, weight)]), = parts.items()
        h = ref["H", i].terms[()]
        ok = shift == () and om == 0 and weight + Fraction(c.unit_parts()[0], 2) == h
        checks.append(Check("K_i = q^{H_i} with the classical H_i weight", ("K", i), ok, formula="K=q^H"))
    return checks


# ---------------------------------------------------------------------------
# relation suite (shared by both realizations)
# ---------------------------------------------------------------------------


def _qpow(a: int) -> str:
    return {0: "", 1: "q", 2: "q²", -1: "q⁻¹", -2: "q⁻²"}.get(a, f"q^{a}")


def quantum_relation_checks(family: GeneratorFamily, tilde: bool = False) -> list[Check]:
    """Cleared relations of U_q(sl(n)) for a rescaled family.

    ``family.meta["ef_sign"]`` is ``+1`` when ``[e_i, f_i] = (q - q^{-1})(K - K^{-1})``
    and ``-1`` for the ``2 sin(πb²)`` normalization of the positive family.
    With ``tilde=True`` the same relations are checked with ``q̃``.
    """
    n = family.n
    sgn = family.meta.get("ef_sign", 1)
    qf = PhaseCoeff.qt if tilde else PhaseCoeff.q
    two = qf(1) + qf(-1)
    pre = "~" if tilde else ""
    E = {i: family["E", i] for i in range(1, n)}
    F = {i: family["F", i] for i in range(1, n)}
    K = {i: family["K", i] for i in range(1, n)}
    Kinv = {i: K[i].inverse() for i in range(1, n)}
    checks = []
    for i in range(1, n):
        for j in range(1, n):
            a = cartan(i, j)
            checks.append(_residue(f"{pre}KE={_qpow(a)}EK", (i, j), K[i] * E[j] - (E[j] * K[i]).scale(qf(a)),
                                   "K_iE_j=q^{a_ij}E_jK_i"))
            checks.append(_residue(f"{pre}KF={_qpow(-a)}FK", (i, j), K[i] * F[j] - (F[j] * K[i]).scale(qf(-a)),
                                   "K_iF_j=q^{-a_ij}F_jK_i"))
            checks.append(_residue(f"{pre}KK=KK", (i, j), K[i] * K[j] - K[j] * K[i], "K_iK_j=K_jK_i"))
            target = (K[i] - Kinv[i]).scale((qf(1) - qf(-1)) * sgn) if i == j else E[i].sig.zero()
            checks.append(_residue(f"{pre}[e,f]=δ(q-q^-1)(K-K^-1)", (i, j), E[i] * F[j] - F[j] * E[i] - target,
                                   "[E_i,F_j]=δ_ij(K_i-K_i^{-1})/(q-q^{-1})"))
            if i < j and j - i >= 2:
                checks.append(_residue(f"{pre}[e_i,e_j]=0", (i, j), E[i] * E[j] - E[j] * E[i], "[E_i,E_j]=0"))
                checks.append(_residue(f"{pre}[f_i,f_j]=0", (i, j), F[i] * F[j] - F[j] * F[i], "[F_i,F_j]=0"))
    for i in range(1, n - 1):
        for P, label in ((E, "e"), (F, "f")):
            for x, y in ((i, i + 1), (i + 1, i)):
                aa = P[x] * P[x]
                res = aa * P[y] - (P[x] * P[y] * P[x]).scale(two) + P[y] * aa
                checks.append(_residue(f"{pre}{label}{label}{label}' - [2]{label}{label}'{label} + "
                                       f"{label}'{label}{label} = 0", (x, y), res, "q-Serre"))
    return checks


def quantum_scalar_checks(n: int) -> list[Check]:
    triples = classical.serre_triples(n, classical.build_mellin_generators(n))
    bad = sorted(t for t in triples if not quantum_serre_scalar(*t).is_zero())
    return [Check("[b][2-a+c]+[a+b][c] = 0 on realized triples", (n,), not bad, residue_terms=len(bad),
                  formula="[b]_q[2-a+c]_q+[a+b]_q[c]_q=0", detail=f"triples={sorted(triples)}")]


def verify_quantum_relations(family: GeneratorFamily, n: int | None = None) -> Report:
    n = n or family.n
    rep = Report(family.name, n)
    rep.extend(quantum_relation_checks(family))
    if "signature" in family.meta and family.name == "quantum-mellin":
        rep.extend(specialization_checks(family))
    rep.extend(quantum_scalar_checks(n))
    rep.add(Check("[n]_q = n for n = 0, 1, -1", (), all(
        q_number(k) == (PhaseCoeff.q(1) - PhaseCoeff.q(-1)) * k for k in (0, 1, -1)), formula="[n]_q"))
    return rep


# ---------------------------------------------------------------------------
# shift solver
# ---------------------------------------------------------------------------


def lam_prime_formula(n: int, k: int) -> Poly:
    """``λ'_k = sum_{m=1}^{n-k} m λ_{n-m} / sum_{m=1}^{n-k} m``."""
    top = n - k
    total = Fraction(top * (top + 1), 2)
    return Poly.linear({lam(n - m): Fraction(m) / total for m in range(1, top + 1)})


def _solve_linear(rows: list[list[Fraction]], rhs: list[Poly]) -> list[Poly]:
    """Gauss-Jordan elimination over the rationals with polynomial right-hand sides."""
    m = len(rows)
    a = [list(r) for r in rows]
    b = list(rhs)
    cols = len(a[0])
    piv_cols = []
    r = 0
    for c in range(cols):
        p = next((k for k in range(r, m) if a[k][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        b[r], b[p] = b[p], b[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        b[r] = b[r] * inv
        for k in range(m):
            if k != r and a[k][c] != 0:
                f = a[k][c]
                a[k] = [x - f * y for x, y in zip(a[k], a[r])]
                b[k] = b[k] - b[r] * f
        piv_cols.append(c)
        r += 1
    if len(piv_cols) != cols:
        raise ArithmeticError("singular shift system")
    for k in range(r, m):
        if not b[k].is_zero():
            raise ArithmeticError("inconsistent shift system")
    out = [Poly()] * cols
    for k, c in enumerate(piv_cols):
        out[c] = b[k]
    return out


@dataclass(frozen=True)
class RepSpec:
    """Parameters of a positive representation.

    ``c`` maps ``(i, j)`` to the complex shift of ``u_{ij}`` as a linear form in
    the ``λ_i``; ``lam_prime`` gives ``λ'_k`` in the same way.  With
    ``λ_i = -1/2 + i α_i`` and ``λ'_k = -1/2 + i α'_k`` the ``α'_k`` are the
    central coordinates of the positive family.
    """

    n: int
    c: dict
    lam_prime: dict
    term_param: dict = field(default_factory=dict)  # (kind, i, k) -> index of λ' in its constant term
    Q: str = "b + 1/b"

    @property
    def positions(self):
        return positions(self.n)

    def real_part(self, i: int, j: int) -> Fraction:
        """``Re c_ij`` at ``λ_m = -1/2 + i α_m``."""
        return -Fraction(1, 2) * sum(self.c[(i, j)].linear_coefficients().values(), Fraction(0))


def solve_positive_shifts(n: int) -> RepSpec:
    """Shift ``c`` such that every H_i constant vanishes and every E_i^k constant is ``λ'_k``."""
    coords = positions(n)
    unknowns = [u(i, j) for i, j in coords] + [("lp", k) for k in range(1, n)]
    col = {v: k for k, v in enumerate(unknowns)}
    rows, rhs = [], []

    def row_of(weight: Poly, extra=None):
        r = [Fraction(0)] * len(unknowns)
        for v, c in weight.linear_coefficients().items():
            if v[0] == "u":
                r[col[v]] += c
        for v, c in (extra or {}).items():
            r[col[v]] += c
        return r

    for i in range(1, n):
        rows.append(row_of(classical.h_weight_u(n, i)))
        rhs.append(Poly.var(lam(i)) * -2)
        for k in range(1, n - i + 1):
            rows.append(row_of(classical.e_weight_u(n, i, k), {("lp", k): -1}))
            rhs.append(Poly())
    sol = _solve_linear(rows, rhs)
    c = {(i, j): sol[col[u(i, j)]] for i, j in coords}
    lp = {k: sol[col[("lp", k)]] for k in range(1, n)}
    cu = {u(i, j): v for (i, j), v in c.items()}
    term_param = {}
    for i in range(1, n):
        for k in range(1, n - i + 1):
            term_param[("E", i, k)] = k
        for k in range(1, i + 1):
            const = classical.f_weight_u(n, i, k).subs(cu) + Poly.var(lam(i)) * 2
            match = [m for m in range(1, n) if lp[m] == const]
            if len(match) != 1:
                raise ArithmeticError(f"F_{i}^{k} constant {const} is not a single λ'")
            term_param[("F", i, k)] = match[0]
    return RepSpec(n, c, lp, term_param)


def shift_solver_checks(spec: RepSpec) -> list[Check]:
    n = spec.n
    c = spec.c
    cu = {u(i, j): v for (i, j), v in c.items()}
    checks = []
    bad = []
    for i in range(1, n):
        if not (classical.h_weight(n, i).subs(cu)).is_zero():
            bad.append(("H", i))
        for k in range(1, n - i + 1):
            if classical.e_weight_u(n, i, k).subs(cu) != spec.lam_prime[k]:
                bad.append(("E", i, k))
        for k in range(1, i + 1):
            const = classical.f_weight_u(n, i, k).subs(cu) + Poly.var(lam(i)) * 2
            if const != spec.lam_prime[spec.term_param[("F", i, k)]]:
                bad.append(("F", i, k))
    checks.append(Check("shifted H constants vanish and E/F constants are λ'_k", (n,), not bad,
                        residue_terms=len(bad), formula="matching constraints", detail=str(bad) if bad else ""))
    f_index = sorted({(i, k, spec.term_param[("F", i, k)]) for i in range(1, n) for k in range(1, i + 1)})
    checks.append(Check("F_i^k constant is λ'_k", (n,), all(k == m for _, k, m in f_index),
                        formula="F constants", detail=str(f_index)))
    pattern = {(i, j): spec.real_part(i, j) for i, j in positions(n)}
    want = {(i, j): (Fraction(-1, 2) if j == n else Fraction(0)) for i, j in positions(n)}
    checks.append(Check("Re c_ij = -1/2 iff j = n, else 0", (n,), pattern == want, formula="Re(c_ij)",
                        detail="" if pattern == want else str(pattern)))
    lp_ok = all(spec.lam_prime[k] == lam_prime_formula(n, k) for k in range(1, n))
    checks.append(Check("λ'_k = sum m λ_{n-m} / sum m", (n,), lp_ok, formula="λ' formula",
                        detail="" if lp_ok else str(spec.lam_prime)))
    re_lp = all(-Fraction(1, 2) * sum(spec.lam_prime[k].linear_coefficients().values()) == Fraction(-1, 2)
                for k in range(1, n))
    checks.append(Check("Re λ'_k = -1/2", (n,), re_lp, formula="Re λ'"))
    return checks


def triangular_form_residuals(spec: RepSpec) -> list[tuple[int, int]]:
    """Index pairs ``(l, k)`` where ``(k-1)x_lk + sum_{m<=k} 2x_lm = 2λ'_{l-k+1}`` fails.

    Here ``x_lm = c_{l-m+1, n-m+1}``.  This reduced form is a diagnostic only:
    the solved shifts are validated against the defining constraints above.
    """
    n, c = spec.n, spec.c
    bad = []
    for l in range(1, n):
        for k in range(1, l + 1):
            lhs = c[(l - k + 1, n - k + 1)] * (k - 1) + sum(
                (c[(l - m + 1, n - m + 1)] * 2 for m in range(1, k + 1)), Poly())
            if lhs != spec.lam_prime[l - k + 1] * 2:
                bad.append((l, k))
    return bad


# ---------------------------------------------------------------------------
# positive family
# ---------------------------------------------------------------------------


def positive_signature(n: int) -> AlgebraSignature:
    """Two-sector torus on ``u_{ij}``, ``p_{ij}`` and central ``α'_k``."""
    return heisenberg_signature(positions(n), [("a", k) for k in range(1, n)], ("b", "t"),
                                denominator=2 * n, name=f"positive{n}")


def _momentum_of_shift(shift: dict) -> dict:
    """Shift ``u -> u ± 1`` is ``e^{∓2πb p}``: a ``+1`` entry becomes ``-p``."""
    return {("p",) + v[1:]: -s for v, s in shift.items()}


def positive_terms(spec: RepSpec, kind: str, i: int) -> list[tuple[dict, dict]]:
    """``(Z_k, P_k)`` for each summand as ``{coordinate: coefficient}`` in units of ``πb``/``2πb``."""
    n = spec.n
    out = []
    if kind == "E":
        for k in range(1, n - i + 1):
            y = classical.e_weight_u(n, i, k)
            out.append((k, y, classical.e_shift(n, i, k)))
    else:
        for k in range(1, i + 1):
            y = classical.f_weight_u(n, i, k)
            out.append((k, y, classical.f_shift(n, i, k)))
    res = []
    for k, y, shift in out:
        m = spec.term_param[(kind, i, k)]
        z = {("a", m): Fraction(1)}
        for v, cc in y.linear_coefficients().items():
            z[v] = z.get(v, 0) - cc
        res.append((z, _momentum_of_shift(shift)))
    return res


def _mono(sig, entries: dict, sector: str) -> TorusElement:
    return sig.monomial({k + (sector,): v for k, v in entries.items() if v})


def _a_pm(sig, z: dict, p: dict, sign: int, sector: str) -> TorusElement:
    """``e^{π b (± Z + 2 P)}``: exponent ``±Z/2 + P`` in units of ``2πb``."""
    ent = {k: Fraction(sign, 2) * v for k, v in z.items()}
    for k, v in p.items():
        ent[k] = ent.get(k, 0) + v
    return _mono(sig, ent, sector)


def build_positive_generators(spec: RepSpec, sector: str = "b") -> GeneratorFamily:
    """Rescaled ``e_i = 2 sin(πb²) E_i``, ``f_i``, and ``K_i`` as positive torus elements.

    Each ``e_i`` is ``sum_k (A_k^+ + A_k^-)``, stored in the order
    ``A_1^+ ... A_s^+ A_s^- ... A_1^-``.  ``sector="t"`` builds the tilde family
    from the same data in the ``b^{-1}`` sector.
    """
    n = spec.n
    sig = positive_signature(n)
    gens, decomp = {}, {}
    for i in range(1, n):
        for kind in ("E", "F"):
            terms = positive_terms(spec, kind, i)
            plus = [_a_pm(sig, z, p, +1, sector) for z, p in terms]
            minus = [_a_pm(sig, z, p, -1, sector) for z, p in terms]
            chain = plus + minus[::-1]
            el = sig.zero()
            for t in chain:
                el = el + t
            gens[(kind, i)] = el
            decomp[(kind, i)] = tuple(chain)
        h = classical.h_weight_u(n, i)
        gens[("K", i)] = _mono(sig, {v: Fraction(c, 2) for v, c in h.linear_coefficients().items()}, sector)
        decomp[("K", i)] = (gens[("K", i)],)
    name = "positive" if sector == "b" else "positive-tilde"
    return GeneratorFamily(name, n, gens, provenance="positive principal series (rescaled)",
                           decomposition=decomp, meta={"signature": sig, "ef_sign": -1, "sector": sector,
                                                       "spec": spec})


def positivity_structure_check(family: GeneratorFamily) -> Report:
    """Unit positive coefficients and the ordered q²-commutation chain for every generator."""
    rep = Report("positivity", family.n)
    tilde = family.meta.get("sector") == "t"
    for key, chain in family.decomposition.items():
        bad_coeff = [k for k, t in enumerate(chain) if t.coefficient() != PhaseCoeff.const(1)]
        rep.add(Check("every summand has coefficient exactly 1", key, not bad_coeff,
                      residue_terms=len(bad_coeff), formula="unit coefficients"))
        bad = [(x, y) for x in range(len(chain)) for y in range(x + 1, len(chain))
               if not q_commutes(chain[x], chain[y], tilde=tilde)]
        rep.add(Check("t_k t_l = q^2 t_l t_k for k < l in the recorded order", key, not bad,
                      residue_terms=len(bad), formula="q^2-commutation chain", detail=str(bad[:5]) if bad else ""))
        total = chain[0].sig.zero()
        for t in chain:
            total = total + t
        rep.add(Check("summands add up to the generator", key, total == family[key], formula="decomposition"))
    return rep


def transcendental_check(family: GeneratorFamily, tilde: GeneratorFamily) -> Report:
    """Term-wise ``1/b²`` powers of the positive family equal the tilde family."""
    rep = Report("transcendental", family.n)
    for key, el in family.items():
        try:
            got = root_b2(el)
            ok = got == tilde[key]
            detail = "" if ok else f"{got} vs {tilde[key]}"
        except (OrderingViolated, ValueError) as exc:
            ok, detail = False, str(exc)
        rep.add(Check(f"{key[0]}_i^(1/b^2) = {key[0]}~_i", key, ok, formula="x^{1/b^2}=x~", detail=detail))
    return rep


def modular_sign_table(family: GeneratorFamily, tilde: GeneratorFamily) -> dict:
    """``ε`` with ``X_i Ỹ_j = ε Ỹ_j X_i`` for ``X, Y`` in E, F, K.

    Raises ``ValueError("not sign-commuting")`` if the phases of the monomial
    pairs disagree or are not signs.
    """
    n = family.n
    table = {}
    for X, Y in itertools.product("EFK", repeat=2):
        for i, j in itertools.product(range(1, n), repeat=2):
            phases = set()
            for a in family[X, i].monomials():
                for b in tilde[Y, j].monomials():
                    phases.add(commutation_phase(a, b))
            if len(phases) != 1:
                raise ValueError(f"not sign-commuting: {X}{i} vs ~{Y}{j} phases {phases}")
            (zp, ztp, k), = phases
            if zp or ztp or k % 2:
                raise ValueError(f"not sign-commuting: {X}{i} vs ~{Y}{j} phase {(zp, ztp, k)}")
            table[(X, i, Y, j)] = 1 if k == 0 else -1
    return table


SIGN_PAIRS = {("E", "E"), ("F", "F"), ("E", "K"), ("K", "E"), ("F", "K"), ("K", "F")}


def expected_sign(X: str, i: int, Y: str, j: int) -> int:
    return -1 if (X, Y) in SIGN_PAIRS and abs(i - j) == 1 else 1


def sign_table_checks(family: GeneratorFamily, tilde: GeneratorFamily) -> Report:
    rep = Report("sign-table", family.n)
    try:
        table = modular_sign_table(family, tilde)
    except ValueError as exc:
        rep.add(Check("cross pairs sign-commute", (), False, detail=str(exc)))
        return rep
    for (X, i, Y, j), eps in sorted(table.items()):
        want = expected_sign(X, i, Y, j)
        rep.add(Check(f"{X}_i {Y}~_j = ε {Y}~_j {X}_i", (X, i, Y, j), eps == want, formula="sign table",
                      detail=f"ε={eps}, expected {want}"))
    # the sign is blind to positive rescaling
    for (X, i, Y, j), eps in table.items():
        a, b = family[X, i].scale(3), tilde[Y, j].scale(Fraction(1, 5))
        if a * b != (b * a).scale(eps):
            rep.add(Check("ε survives positive rescaling", (X, i, Y, j), False))
            break
    else:
        rep.add(Check("ε survives positive rescaling", (), True))
    return rep


# ---------------------------------------------------------------------------
# coproduct
# ---------------------------------------------------------------------------


def coproduct(family: GeneratorFamily) -> GeneratorFamily:
    """``Δe = e⊗K + 1⊗e``, ``Δf = f⊗1 + K^{-1}⊗f``, ``ΔK = K⊗K`` with their summand chains."""
    n = family.n
    gens, decomp = {}, {}
    for i in range(1, n):
        K = family["K", i]
        one = K.sig.one()
        e_chain = [tensor(t, K) for t in family.decomposition[("E", i)]] + \
                  [tensor(one, t) for t in family.decomposition[("E", i)]]
        f_chain = [tensor(K.inverse(), t) for t in family.decomposition[("F", i)]] + \
                  [tensor(t, one) for t in family.decomposition[("F", i)]]
        for key, chain in ((("E", i), e_chain), (("F", i), f_chain)):
            el = chain[0].sig.zero()
            for t in chain:
                el = el + t
            gens[key] = el
            decomp[key] = tuple(chain)
        gens[("K", i)] = tensor(K, K)
        decomp[("K", i)] = (gens[("K", i)],)
    return GeneratorFamily(family.name + "-coproduct", n, gens, provenance="coproduct in the doubled torus",
                           decomposition=decomp, meta={"ef_sign": family.meta.get("ef_sign", 1)})


def coproduct_build_and_check(family: GeneratorFamily, tilde: GeneratorFamily) -> Report:
    d = coproduct(family)
    dt = coproduct(tilde)
    rep = Report("coproduct", family.n)
    rep.merge(positivity_structure_check(d))
    rep.merge(transcendental_check(d, dt))
    for i in range(1, family.n):
        K = family["K", i]
        e = family["E", i]
        x, y = tensor(e, K), tensor(K.sig.one(), e)
        rep.add(_residue("(e⊗K)(1⊗e) = q^2 (1⊗e)(e⊗K)", (i,), x * y - (y * x).scale(PhaseCoeff.q(2)),
                         "summand q^2-commutation"))
    rep.extend(quantum_relation_checks(d))
    return rep


# ---------------------------------------------------------------------------
# convenience
# ---------------------------------------------------------------------------


def positive_pair(n: int) -> tuple[GeneratorFamily, GeneratorFamily]:
    spec = solve_positive_shifts(n)
    return build_positive_generators(spec, "b"), build_positive_generators(spec, "t")


def verify_positive(n: int) -> Report:
    spec = solve_positive_shifts(n)
    fam = build_positive_generators(spec)
    til = build_positive_generators(spec, "t")
    rep = Report("positive", n)
    rep.extend(shift_solver_checks(spec))
    rep.extend(quantum_relation_checks(fam))
    rep.extend(quantum_relation_checks(til, tilde=True))
    rep.merge(positivity_structure_check(fam))
    rep.merge(transcendental_check(fam, til))
    return rep
