"""Sparse multivariate Laurent polynomials with exact rational coefficients.

Variables are arbitrary sortable hashable keys; the library uses tuples such as
``("u", 1, 2)`` for the Mellin variable ``u_{12}``, ``("x", 1, 2)`` for the
cluster variable ``x_{12}`` and ``("lam", 1)`` for the weight parameter.

A monomial is a tuple of ``(var, exponent)`` pairs sorted by variable with no
zero exponents.  Zero coefficients are never stored, so two polynomials are
equal iff their term dictionaries are equal.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Any, Iterable, Mapping

Monomial = tuple  # tuple[tuple[var, int], ...]

ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for v, e in b:
        s = out.get(v, 0) + e
        if s:
            out[v] = s
        else:
            del out[v]
    return tuple(sorted(out.items()))


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact rational coefficient required, got {type(c).__name__}")


def var_str(v) -> str:
    if isinstance(v, tuple):
        name, *idx = v
        if name == "lam":
            name = "λ"
        return f"{name}[{','.join(map(str, idx))}]" if idx else str(name)
    return str(v)


class Poly:
    """Immutable sparse Laurent polynomial over the rationals."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Any] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({ONE_MONO: c})

    @classmethod
    def var(cls, v, power: int = 1) -> "Poly":
        if power == 0:
            return cls.const(1)
        return cls({((v, power),): 1})

    @classmethod
    def linear(cls, coeffs: Mapping[Any, Any], constant=0) -> "Poly":
        terms = {ONE_MONO: constant}
        for v, c in coeffs.items():
            key = ((v, 1),)
            terms[key] = terms.get(key, 0) + c
        return cls(terms)

    # basic protocol ---------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def variables(self) -> set:
        return {v for m in self._terms for v, _ in m}

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE_MONO, Fraction(0))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def linear_coefficients(self) -> dict:
        """Coefficients of the degree-one monomials ``v**1``."""
        return {m[0][0]: c for m, c in self._terms.items() if len(m) == 1 and m[0][1] == 1}

    def is_affine(self) -> bool:
        return all(not m or (len(m) == 1 and m[0][1] == 1) for m in self._terms)

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(other)

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = _as_fraction(other)
            if not c:
                return Poly()
            return Poly._raw({m: v * c for m, v in self._terms.items()})
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            (m, c), = self._terms.items()
            return Poly({tuple((v, -e) for v, e in m): 1 / c}) ** (-k)
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # substitutions ----------------------------------------------------
    def shift(self, shifts: Mapping[Any, int]) -> "Poly":
        """Substitute ``v -> v + shifts[v]`` for every listed variable."""
        shifts = {v: s for v, s in shifts.items() if s}
        if not shifts or not self._terms:
            return self
        if not (self.variables() & shifts.keys()):
            return self
        cache: dict = {}

        def shifted_power(v, e):
            key = (v, e)
            if key not in cache:
                if e < 0:
                    raise ValueError(f"cannot shift negative power of {var_str(v)}")
                s = shifts[v]
                cache[key] = Poly({(((v, k),) if k else ONE_MONO): comb(e, k) * s ** (e - k)
                                   for k in range(e + 1)})
            return cache[key]

        out = Poly()
        for m, c in self._terms.items():
            rest = tuple((v, e) for v, e in m if v not in shifts)
            piece = Poly._raw({rest: c})
            for v, e in m:
                if v in shifts:
                    piece = piece * shifted_power(v, e)
            out = out + piece
        return out

    def subs(self, values: Mapping[Any, Any]) -> "Poly":
        """Substitute variables by polynomials or numbers (Laurent powers need monomials)."""
        out = Poly()
        for m, c in self._terms.items():
            piece = Poly.const(c)
            for v, e in m:
                if v in values:
                    val = values[v]
                    piece = piece * (val if isinstance(val, Poly) else Poly.const(val)) ** e
                else:
                    piece = piece * Poly.var(v, e)
            out = out + piece
        return out

    def evaluate(self, values: Mapping[Any, Any]):
        """Numeric evaluation; every variable must be assigned."""
        total = 0
        for m, c in self._terms.items():
            t = c
            for v, e in m:
                t = t * values[v] ** e
            total = total + t
        return total

    def linear_value(self, vector: Mapping[Any, int]) -> Fraction:
        """``P(e) - P(0)`` for an affine ``P``: the linear part evaluated on ``e``."""
        lin = self.linear_coefficients()
        return sum((lin.get(v, 0) * s for v, s in vector.items()), Fraction(0))

    def diff(self, v) -> "Poly":
        out = {}
        for m, c in self._terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, 0) + c * e
        return Poly(out)

    # display ----------------------------------------------------------
    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda mc: (sum(abs(e) for _, e in mc[0]), repr(mc[0])))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(var_str(v) if e == 1 else f"{var_str(v)}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            ";".join(f"{var_str(v)}^{e}" for v, e in m) or "1": [c.numerator, c.denominator]
            for m, c in self.sorted_terms()
        }


def poly_sum(items: Iterable[Poly]) -> Poly:
    out = Poly()
    for p in items:
        out = out + p
    return out
