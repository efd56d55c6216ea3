"""Shift operators ``(P f)(u) = sum_a P_a(u) f(u + e_a)`` with polynomial weights."""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .poly import Poly, var_str

Shift = tuple  # sorted tuple of (var, nonzero int)


def make_shift(vector: Mapping) -> Shift:
    for v, s in vector.items():
        if int(s) != s:
            raise ValueError(f"shift entries must be integers, got {s} at {var_str(v)}")
    return tuple(sorted((v, int(s)) for v, s in vector.items() if s))


def add_shifts(a: Shift, b: Shift) -> Shift:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, s in b:
        t = out.get(v, 0) + s
        if t:
            out[v] = t
        else:
            del out[v]
    return tuple(sorted(out.items()))


class ShiftOperator:
    """Immutable linear combination of weighted shifts.

    Terms are keyed by shift vector, so two operators compare equal exactly
    when they act identically on all functions.  ``name``/``index``/``picture``
    are metadata and do not take part in equality.
    """

    __slots__ = ("_terms", "name", "index", "picture", "parts")

    def __init__(self, terms: Mapping[Shift, Poly] | Iterable[tuple[Mapping, Poly]] = (),
                 name: str = "", index=None, picture: str = "mellin", parts=None):
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for shift, weight in items:
            key = shift if isinstance(shift, tuple) else make_shift(shift)
            w = acc.get(key)
            acc[key] = weight if w is None else w + weight
        self._terms = {k: w for k, w in acc.items() if not w.is_zero()}
        self.name = name
        self.index = index
        self.picture = picture
        # ordered (weight, shift) list as constructed, before merging equal shifts
        self.parts = tuple(parts) if parts is not None else tuple(
            (w, k) for k, w in self._terms.items())

    @classmethod
    def multiplication(cls, weight: Poly, **meta) -> "ShiftOperator":
        return cls({(): weight}, **meta)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShiftOperator):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other: "ShiftOperator") -> "ShiftOperator":
        out = dict(self._terms)
        for k, w in other._terms.items():
            out[k] = out[k] + w if k in out else w
        return ShiftOperator(out)

    def __neg__(self) -> "ShiftOperator":
        return ShiftOperator({k: -w for k, w in self._terms.items()})

    def __sub__(self, other: "ShiftOperator") -> "ShiftOperator":
        return self + (-other)

    def scale(self, c) -> "ShiftOperator":
        c = c if isinstance(c, Poly) else Poly.const(c)
        return ShiftOperator({k: w * c for k, w in self._terms.items()})

    def __rmul__(self, c) -> "ShiftOperator":
        return self.scale(c)

    def __matmul__(self, other: "ShiftOperator") -> "ShiftOperator":
        return compose(self, other)

    def apply(self, f: Poly) -> Poly:
        """Act on a polynomial test function of the lattice variables."""
        out = Poly()
        for shift, w in self._terms.items():
            out = out + w * f.shift(dict(shift))
        return out

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for shift, w in sorted(self._terms.items(), key=lambda kv: repr(kv[0])):
            s = ",".join(f"{var_str(v)}{'+' if d > 0 else ''}{d}" for v, d in shift) or "id"
            chunks.append(f"({w})·T[{s}]")
        return " + ".join(chunks)

    def to_json(self) -> dict:
        return {"terms": [
            {"weight": w.to_json(), "shift": {var_str(v): d for v, d in shift}}
            for shift, w in sorted(self._terms.items(), key=lambda kv: repr(kv[0]))
        ]}


def compose(p: ShiftOperator, q: ShiftOperator) -> ShiftOperator:
    """``(PQ) f(u) = sum_{a,b} P_a(u) Q_b(u + e_a) f(u + e_a + e_b)``."""
    out: dict = {}
    for ea, pa in p._terms.items():
        shifted = {eb: qb.shift(dict(ea)) for eb, qb in q._terms.items()}
        for eb, qb in shifted.items():
            key = add_shifts(ea, eb)
            term = pa * qb
            out[key] = out[key] + term if key in out else term
    return ShiftOperator(out)


def commutator(p: ShiftOperator, q: ShiftOperator) -> ShiftOperator:
    return compose(p, q) - compose(q, p)


def affine_commutator(p_weight: Poly, p_shift: Mapping, q_weight: Poly, q_shift: Mapping) -> ShiftOperator:
    """Closed form of ``[P1, P2]`` for two single-term operators with affine weights.

    ``(P1(u) P2'(e1) - P2(u) P1'(e2)) f(u + e1 + e2)`` where ``P'(e)`` drops the
    constant term.
    """
    if not (p_weight.is_affine() and q_weight.is_affine()):
        raise ValueError("closed form needs affine weights")
    factor = p_weight * q_weight.linear_value(p_shift) - q_weight * p_weight.linear_value(q_shift)
    return ShiftOperator({add_shifts(make_shift(p_shift), make_shift(q_shift)): factor})


def linear_value(weight: Poly, shift) -> Fraction:
    return weight.linear_value(dict(shift))
