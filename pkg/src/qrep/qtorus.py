"""Exact arithmetic in quantum torus algebras.

A monomial ``z^v`` is labelled by an exponent vector over coordinates that
each belong to one of two sectors: ``"b"`` (the ``e^{2π b X}`` sector) and
``"t"`` (the ``e^{2π b^{-1} X}`` sector).  With ``Ω`` the antisymmetric
pairing of coordinates, products are normal ordered by

    z^v z^w = ζ^{2Ω_bb(v,w)} ζ̃^{2Ω_tt(v,w)} i^{2Ω_cross(v,w)} z^{v+w},

where ``ζ² = q``, ``ζ̃² = q̃`` and ``Ω_bb``, ``Ω_tt``, ``Ω_cross`` collect the
pairings inside each sector and across sectors.  Hence
``z^v z^w = q^{2Ω} z^w z^v`` inside the b sector and cross-sector monomials
commute up to a sign ``(-1)^{2Ω}``.

Exponent entries are rationals with a bounded denominator ``D``; they are
stored as integers scaled by ``D``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

SECTORS = ("b", "t")


class IncompatibleAlgebras(ValueError):
    pass


class OrderingViolated(ValueError):
    pass


# ---------------------------------------------------------------------------
# Coefficients
# ---------------------------------------------------------------------------

_ZERO = Fraction(0)
_ONE = Fraction(1)
# i^k as (re, im)
_I_POW = ((_ONE, _ZERO), (_ZERO, _ONE), (-_ONE, _ZERO), (_ZERO, -_ONE))


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


class PhaseCoeff:
    """Laurent polynomial in ``ζ`` and ``ζ̃`` with Gaussian-rational coefficients.

    Stored as ``{(zeta_pow, zetat_pow): (re, im)}`` with zero entries pruned.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[int, int], tuple] | None = None):
        clean = {}
        for k, (re, im) in (terms or {}).items():
            re, im = Fraction(re), Fraction(im)
            if re or im:
                clean[(int(k[0]), int(k[1]))] = (re, im)
        self._terms = clean

    @classmethod
    def _raw(cls, terms):
        c = cls.__new__(cls)
        c._terms = terms
        return c

    @classmethod
    def const(cls, re=1, im=0) -> "PhaseCoeff":
        return cls({(0, 0): (re, im)})

    @classmethod
    def unit(cls, zeta_pow: int = 0, zetat_pow: int = 0, i_pow: int = 0) -> "PhaseCoeff":
        return cls._raw({(zeta_pow, zetat_pow): _I_POW[i_pow % 4]})

    @classmethod
    def q(cls, k: int = 1) -> "PhaseCoeff":
        """``q^k = ζ^{2k}``."""
        return cls.unit(2 * k)

    @classmethod
    def qt(cls, k: int = 1) -> "PhaseCoeff":
        return cls.unit(0, 2 * k)

    @classmethod
    def coerce(cls, c) -> "PhaseCoeff":
        if isinstance(c, PhaseCoeff):
            return c
        if isinstance(c, complex):
            raise TypeError("floating complex coefficients are not exact")
        return cls.const(c)

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhaseCoeff):
            try:
                other = PhaseCoeff.coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "PhaseCoeff":
        other = PhaseCoeff.coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            if k in out:
                s = (out[k][0] + v[0], out[k][1] + v[1])
                if s[0] or s[1]:
                    out[k] = s
                else:
                    del out[k]
            else:
                out[k] = v
        return PhaseCoeff._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "PhaseCoeff":
        return PhaseCoeff._raw({k: (-v[0], -v[1]) for k, v in self._terms.items()})

    def __sub__(self, other) -> "PhaseCoeff":
        return self + (-PhaseCoeff.coerce(other))

    def __rsub__(self, other) -> "PhaseCoeff":
        return PhaseCoeff.coerce(other) - self

    def __mul__(self, other) -> "PhaseCoeff":
        other = PhaseCoeff.coerce(other)
        out: dict = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                k = (k1[0] + k2[0], k1[1] + k2[1])
                p = _gmul(v1, v2)
                if k in out:
                    p = (out[k][0] + p[0], out[k][1] + p[1])
                out[k] = p
        return PhaseCoeff({k: v for k, v in out.items()})

    __rmul__ = __mul__

    def times_unit(self, zeta_pow: int, zetat_pow: int, i_pow: int) -> "PhaseCoeff":
        rot = _I_POW[i_pow % 4]
        return PhaseCoeff._raw({(a + zeta_pow, c + zetat_pow): _gmul(v, rot)
                                for (a, c), v in self._terms.items()})

    def __pow__(self, k: int) -> "PhaseCoeff":
        if k < 0:
            inv = self.inverse_unit()
            return inv ** (-k)
        out = PhaseCoeff.const(1)
        for _ in range(k):
            out = out * self
        return out

    def unit_parts(self) -> tuple[int, int, int] | None:
        """``(zeta_pow, zetat_pow, i_pow)`` when the coefficient is ``ζ^a ζ̃^c i^k``."""
        if len(self._terms) != 1:
            return None
        (k, v), = self._terms.items()
        if v not in _I_POW:
            return None
        return k[0], k[1], _I_POW.index(v)

    def is_positive_unit(self) -> bool:
        """A single ``ζ^a ζ̃^c`` with coefficient exactly 1."""
        parts = self.unit_parts()
        return parts is not None and parts[2] == 0

    def inverse_unit(self) -> "PhaseCoeff":
        parts = self.unit_parts()
        if parts is None:
            raise ValueError("only unit monomials are invertible")
        a, c, k = parts
        return PhaseCoeff.unit(-a, -c, -k)

    def swap_sectors(self) -> "PhaseCoeff":
        return PhaseCoeff._raw({(c, a): v for (a, c), v in self._terms.items()})

    def specialize(self, zeta=1, zetat=1) -> complex:
        """Numeric value; ``ζ = ζ̃ = 1`` is the classical limit."""
        return sum((complex(float(re), float(im)) * complex(zeta) ** a * complex(zetat) ** c
                    for (a, c), (re, im) in self._terms.items()), 0j)

    def exact_at_one(self) -> tuple[Fraction, Fraction]:
        re = sum((v[0] for v in self._terms.values()), _ZERO)
        im = sum((v[1] for v in self._terms.values()), _ZERO)
        return re, im

    def sorted_items(self):
        return sorted(self._terms.items())

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for (a, c), (re, im) in self.sorted_items():
            num = f"{re}" if not im else f"{im}i" if not re else f"({re}+{im}i)"
            mono = "".join(s for s in (f"ζ^{a}" if a else "", f"ζ̃^{c}" if c else ""))
            out.append(mono if num == "1" and mono else f"{num}{mono}")
        return " + ".join(out)

    def to_json(self) -> list:
        return [{"zeta_pow": a, "zetat_pow": c, "re": [re.numerator, re.denominator],
                 "im": [im.numerator, im.denominator]} for (a, c), (re, im) in self.sorted_items()]

    @classmethod
    def from_json(cls, data: list) -> "PhaseCoeff":
        return cls({(d["zeta_pow"], d["zetat_pow"]): (Fraction(*d["re"]), Fraction(*d["im"])) for d in data})


def q_number(k: int) -> PhaseCoeff:
    """``[k]_q (q - q^{-1}) = q^k - q^{-k}``, the denominator-cleared q-number."""
    return PhaseCoeff.q(k) - PhaseCoeff.q(-k)


# ---------------------------------------------------------------------------
# Signatures
# ---------------------------------------------------------------------------


def label_str(label: tuple) -> str:
    *body, sector = label
    parts = []
    for b in body:
        parts.append(str(b))
    head = parts[0]
    idx = ",".join(parts[1:])
    base = f"{head}[{idx}]" if idx else head
    return base + ("~" if sector == "t" else "")


class AlgebraSignature:
    """Coordinates with sectors plus an antisymmetric pairing ``Ω``.

    ``labels`` are tuples whose last entry is the sector ``"b"`` or ``"t"``.
    ``omega`` maps ordered label pairs to rationals; the antisymmetric
    completion is taken automatically.  ``denominator`` bounds exponent
    denominators.
    """

    def __init__(self, labels: Sequence[tuple], omega: Mapping[tuple, Fraction | int],
                 denominator: int = 2, name: str = ""):
        labels = tuple(tuple(l) for l in labels)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate coordinate labels")
        for l in labels:
            if l[-1] not in SECTORS:
                raise ValueError(f"label {l} must end with a sector in {SECTORS}")
        self.labels = labels
        self.index = {l: k for k, l in enumerate(labels)}
        self.dim = len(labels)
        self.denominator = int(denominator)
        self.name = name
        om = [[_ZERO] * self.dim for _ in range(self.dim)]
        for (a, b), v in omega.items():
            i, j = self.index[a], self.index[b]
            v = Fraction(v)
            if i == j and v:
                raise ValueError("Ω must vanish on the diagonal")
            if om[i][j] and om[i][j] != v:
                raise ValueError(f"conflicting pairing for {a},{b}")
            if om[j][i] and om[j][i] != -v:
                raise ValueError(f"pairing not antisymmetric for {a},{b}")
            om[i][j], om[j][i] = v, -v
        self.omega = tuple(tuple(r) for r in om)
        dens = [(2 * x).denominator for row in om for x in row if x]
        self._scale = lcm(*dens) if dens else 1
        sector = np.array([l[-1] == "t" for l in labels])
        m = np.array([[int(2 * x * self._scale) for x in row] for row in om], dtype=np.int64).reshape(self.dim, self.dim)
        same_b = np.outer(~sector, ~sector)
        same_t = np.outer(sector, sector)
        self._m_bb = np.where(same_b, m, 0)
        self._m_tt = np.where(same_t, m, 0)
        self._m_cross = np.where(~(same_b | same_t), m, 0)
        self._den2 = self._scale * self.denominator ** 2
        self._key = (labels, self.omega, self.denominator)

    def __eq__(self, other):
        return isinstance(other, AlgebraSignature) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"AlgebraSignature({self.name or 'anon'}, dim={self.dim}, D={self.denominator})"

    # exponents -----------------------------------------------------------
    def exponent(self, entries: Mapping[tuple, Fraction | int]) -> tuple:
        """Scaled integer exponent from ``{label: rational}``."""
        vec = [0] * self.dim
        for l, v in entries.items():
            if l not in self.index:
                raise KeyError(f"unknown coordinate {l}")
            s = Fraction(v) * self.denominator
            if s.denominator != 1:
                raise ValueError(f"exponent {v} at {label_str(l)} exceeds denominator bound {self.denominator}")
            vec[self.index[l]] += int(s)
        return tuple(vec)

    def exponent_dict(self, exp: tuple) -> dict:
        return {self.labels[k]: Fraction(e, self.denominator) for k, e in enumerate(exp) if e}

    def pairing_x2(self, v: tuple, w: tuple) -> tuple[int, int, int]:
        """Integers ``(2Ω_bb, 2Ω_tt, 2Ω_cross)`` for two scaled exponents."""
        va, wa = np.array(v, dtype=np.int64), np.array(w, dtype=np.int64)
        out = []
        for m in (self._m_bb, self._m_tt, self._m_cross):
            num = int(va @ m @ wa)
            if num % self._den2:
                raise ValueError("phase not representable: 2Ω is not an integer")
            out.append(num // self._den2)
        return tuple(out)

    def pairing(self, v: tuple, w: tuple) -> Fraction:
        """Total ``Ω(v, w)`` as a rational (no integrality requirement)."""
        va, wa = np.array(v, dtype=np.int64), np.array(w, dtype=np.int64)
        num = int(va @ (self._m_bb + self._m_tt + self._m_cross) @ wa)
        return Fraction(num, 2 * self._den2)

    def _pair_matrices(self, ea: np.ndarray, eb: np.ndarray):
        res = []
        for m in (self._m_bb, self._m_tt, self._m_cross):
            num = ea @ m @ eb.T
            if np.any(num % self._den2):
                raise ValueError("phase not representable: 2Ω is not an integer")
            res.append(num // self._den2)
        return res

    def monomial(self, entries: Mapping[tuple, Fraction | int] | None = None, coeff=1) -> "TorusElement":
        return TorusElement(self, {self.exponent(entries or {}): PhaseCoeff.coerce(coeff)})

    def one(self) -> "TorusElement":
        return self.monomial({})

    def zero(self) -> "TorusElement":
        return TorusElement(self, {})

    def swap_label(self, label: tuple) -> tuple:
        *body, s = label
        return tuple(body) + ("t" if s == "b" else "b",)

    def to_json(self) -> dict:
        return {"dim": self.dim, "denominator": self.denominator,
                "labels": [list(l) for l in self.labels],
                "pairing_x2": [[[(2 * x).numerator, (2 * x).denominator] for x in row] for row in self.omega]}

    @classmethod
    def from_json(cls, data: dict) -> "AlgebraSignature":
        labels = [tuple(l) for l in data["labels"]]
        omega = {}
        for i, row in enumerate(data["pairing_x2"]):
            for j, (num, den) in enumerate(row):
                if i < j and num:
                    omega[(labels[i], labels[j])] = Fraction(num, den) / 2
        return cls(labels, omega, data.get("denominator", 2))


def heisenberg_signature(positions: Iterable[tuple], central: Iterable[tuple] = (),
                         sectors: Sequence[str] = ("b",), denominator: int = 2,
                         name: str = "") -> AlgebraSignature:
    """Position/momentum pairs ``("u", *idx)``/``("p", *idx)`` and central coordinates.

    Every position pairs to 1 with its conjugate momentum in every sector
    combination: ``e^{2πbu} e^{2πbp} = q^2 e^{2πbp} e^{2πbu}`` and the cross
    sector pairings give signs only.
    """
    positions = list(positions)
    central = list(central)
    labels, omega = [], {}
    for s in sectors:
        for idx in positions:
            labels.append(("u",) + tuple(idx) + (s,))
        for idx in positions:
            labels.append(("p",) + tuple(idx) + (s,))
        for c in central:
            labels.append(tuple(c) + (s,))
    for s1 in sectors:
        for s2 in sectors:
            for idx in positions:
                omega[(("u",) + tuple(idx) + (s1,), ("p",) + tuple(idx) + (s2,))] = 1
    return AlgebraSignature(labels, omega, denominator, name)


@lru_cache(maxsize=64)
def doubled(sig: AlgebraSignature) -> AlgebraSignature:
    """Signature of the tensor square: labels prefixed ``"L"``/``"R"``, block-diagonal Ω."""
    labels = [("L",) + l for l in sig.labels] + [("R",) + l for l in sig.labels]
    omega = {}
    for i, a in enumerate(sig.labels):
        for j, b in enumerate(sig.labels):
            if i < j and sig.omega[i][j]:
                omega[(("L",) + a, ("L",) + b)] = sig.omega[i][j]
                omega[(("R",) + a, ("R",) + b)] = sig.omega[i][j]
    return AlgebraSignature(labels, omega, sig.denominator, name=f"{sig.name}⊗{sig.name}")


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------


class TorusElement:
    """Immutable sparse sum ``sum_v c_v z^v``.

    The term dictionary keeps insertion order, which :func:`root_b2` reads as
    the order of the summands; equality ignores it.
    """

    __slots__ = ("sig", "_terms")

    def __init__(self, sig: AlgebraSignature, terms: Mapping[tuple, PhaseCoeff] | None = None):
        self.sig = sig
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != sig.dim:
                raise ValueError("exponent dimension does not match the signature")
            c = PhaseCoeff.coerce(c)
            if e in clean:
                c = clean[e] + c
            if c.is_zero():
                clean.pop(e, None)
            else:
                clean[e] = c
        self._terms = clean

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def monomials(self) -> list["TorusElement"]:
        """Summands in stored order."""
        return [TorusElement(self.sig, {e: c}) for e, c in self._terms.items()]

    def exponent(self) -> tuple:
        if len(self._terms) != 1:
            raise ValueError("not a monomial")
        return next(iter(self._terms))

    def coefficient(self) -> PhaseCoeff:
        if len(self._terms) != 1:
            raise ValueError("not a monomial")
        return next(iter(self._terms.values()))

    def _check(self, other: "TorusElement"):
        if not isinstance(other, TorusElement) or other.sig != self.sig:
            raise IncompatibleAlgebras("incompatible algebras")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.sig == other.sig and self._terms == other._terms

    def __hash__(self):
        return hash((self.sig, frozenset(self._terms.items())))

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out[e] + c if e in out else c
        return TorusElement(self.sig, out)

    def __neg__(self) -> "TorusElement":
        return TorusElement(self.sig, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def scale(self, c) -> "TorusElement":
        c = PhaseCoeff.coerce(c)
        return TorusElement(self.sig, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other) -> "TorusElement":
        if isinstance(other, TorusElement):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "TorusElement":
        return self.scale(other)

    def __pow__(self, k) -> "TorusElement":
        """Integer powers of any element; rational powers of a unit monomial."""
        if isinstance(k, int) and k >= 0:
            out = self.sig.one()
            for _ in range(k):
                out = out * self
            return out
        if not self.is_monomial():
            raise ValueError("only monomials have negative or fractional powers")
        e, c = next(iter(self._terms.items()))
        k = Fraction(k)
        parts = c.unit_parts()
        if parts is None or (k.denominator != 1 and c != PhaseCoeff.const(1)):
            raise ValueError("power needs a unit coefficient (exactly 1 for fractional powers)")
        exp = tuple(int(Fraction(x) * k) if (Fraction(x) * k).denominator == 1 else None for x in e)
        if None in exp:
            raise ValueError("power exceeds the exponent denominator bound")
        if k.denominator == 1:
            a, cc, ip = parts
            coeff = PhaseCoeff.unit(a * int(k), cc * int(k), ip * int(k))
        else:
            coeff = PhaseCoeff.const(1)
        # (c z^v)^k = c^k z^{kv} since z^v commutes with itself
        return TorusElement(self.sig, {exp: coeff})

    def inverse(self) -> "TorusElement":
        return self ** -1

    def sorted_items(self):
        return sorted(self._terms.items())

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for e, c in self._terms.items():
            mono = " ".join(f"{label_str(l)}:{v}" for l, v in self.sig.exponent_dict(e).items()) or "1"
            chunks.append(f"({c})·z[{mono}]")
        return " + ".join(chunks)

    def to_json(self) -> dict:
        out = self.sig.to_json()
        D = self.sig.denominator
        out["terms"] = [{"exp": [[Fraction(x, D).numerator, Fraction(x, D).denominator] for x in e],
                         "coeff": c.to_json()} for e, c in self.sorted_items()]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json(cls, data: dict, sig: AlgebraSignature | None = None) -> "TorusElement":
        sig = sig or AlgebraSignature.from_json(data)
        D = sig.denominator
        terms = {}
        for t in data["terms"]:
            e = tuple(int(Fraction(num, den) * D) for num, den in t["exp"])
            terms[e] = PhaseCoeff.from_json(t["coeff"])
        return cls(sig, terms)


def multiply(a: TorusElement, b: TorusElement) -> TorusElement:
    """Normal-ordered product."""
    a._check(b)
    if a.is_zero() or b.is_zero():
        return a.sig.zero()
    sig = a.sig
    ea = np.array(list(a._terms), dtype=np.int64)
    eb = np.array(list(b._terms), dtype=np.int64)
    bb, tt, cross = sig._pair_matrices(ea, eb)
    ca, cb = list(a._terms.values()), list(b._terms.values())
    out: dict = {}
    for r in range(len(ca)):
        for s in range(len(cb)):
            e = tuple((ea[r] + eb[s]).tolist())
            c = (ca[r] * cb[s]).times_unit(int(bb[r, s]), int(tt[r, s]), int(cross[r, s]))
            out[e] = out[e] + c if e in out else c
    return TorusElement(sig, out)


def q_commutator(a: TorusElement, b: TorusElement, c=1) -> TorusElement:
    """``a b - c b a``."""
    a._check(b)
    return multiply(a, b) - multiply(b, a).scale(c)


def commutator(a: TorusElement, b: TorusElement) -> TorusElement:
    return q_commutator(a, b, 1)


def commutation_phase(a: TorusElement, b: TorusElement) -> tuple[int, int, int]:
    """For monomials, ``(x, y, k)`` with ``a b = ζ^x ζ̃^y i^k b a``."""
    a._check(b)
    bb, tt, cross = a.sig.pairing_x2(a.exponent(), b.exponent())
    return 2 * bb, 2 * tt, (2 * cross) % 4


def q_commutes(a: TorusElement, b: TorusElement, power: int = 2, tilde: bool = False) -> bool:
    """Whether monomials satisfy ``a b = q^power b a`` (``q̃^power`` with ``tilde``)."""
    return commutation_phase(a, b) == ((0, 2 * power, 0) if tilde else (2 * power, 0, 0))


def canonical_form(a: TorusElement) -> TorusElement:
    """Same element with terms in lexicographic exponent order."""
    return TorusElement(a.sig, dict(a.sorted_items()))


def tensor(a: TorusElement, b: TorusElement) -> TorusElement:
    """``a ⊗ b`` in the doubled algebra."""
    a._check(b)
    dsig = doubled(a.sig)
    out = {}
    for ea, ca in a._terms.items():
        for eb, cb in b._terms.items():
            e = ea + eb
            c = ca * cb
            out[e] = out[e] + c if e in out else c
    return TorusElement(dsig, out)


def embed_left(a: TorusElement) -> TorusElement:
    return tensor(a, a.sig.one())


def embed_right(b: TorusElement) -> TorusElement:
    return tensor(b.sig.one(), b)


def swap_sectors(a: TorusElement) -> TorusElement:
    """Exchange the b and t sectors of every coordinate and ``ζ`` with ``ζ̃``."""
    sig = a.sig
    perm = []
    for l in sig.labels:
        s = sig.swap_label(l)
        if s not in sig.index:
            raise ValueError(f"coordinate {label_str(l)} has no partner in the other sector")
        perm.append(sig.index[s])
    out = {}
    for e, c in a._terms.items():
        new = [0] * sig.dim
        for k, x in enumerate(e):
            new[perm[k]] = x
        out[tuple(new)] = c.swap_sectors()
    return TorusElement(sig, out)


def chain_order(a: TorusElement) -> list[int] | None:
    """An order of the summands in which each term q²-commutes with every later one.

    Returns indices into the stored order, or None when no such order exists.
    The relation ``t_k t_l = q^2 t_l t_k`` must be a transitive tournament.
    """
    mons = a.monomials()
    m = len(mons)
    before = [[False] * m for _ in range(m)]
    for k in range(m):
        for l in range(m):
            if k != l:
                before[k][l] = q_commutes(mons[k], mons[l])
    wins = sorted(range(m), key=lambda k: -sum(before[k]))
    for x in range(m):
        for y in range(x + 1, m):
            if not before[wins[x]][wins[y]]:
                return None
    return wins


def root_b2(a: TorusElement, order: Sequence[int] | None = None, search: bool = False) -> TorusElement:
    """Term-wise ``1/b²`` power of a positive sum of q²-commuting monomials.

    By default the summands are taken in stored order; ``order`` gives an
    explicit order and ``search=True`` looks for one.  Each term must have a
    coefficient ``ζ^k`` (exactly one real positive unit) and live in the b
    sector; it is mapped to the same exponent in the other sector with
    ``ζ^k -> ζ̃^k``.
    """
    mons = a.monomials()
    if order is None and search:
        order = chain_order(a)
        if order is None:
            raise OrderingViolated("ordering hypothesis violated: no q²-commuting order exists")
    if order is None:
        order = range(len(mons))
    order = list(order)
    if sorted(order) != list(range(len(mons))):
        raise ValueError("order must be a permutation of the summands")
    for x in range(len(order)):
        for y in range(x + 1, len(order)):
            if not q_commutes(mons[order[x]], mons[order[y]]):
                raise OrderingViolated(f"ordering hypothesis violated between terms {order[x]} and {order[y]}")
    sig = a.sig
    out = sig.zero()
    for t in mons:
        c = t.coefficient()
        parts = c.unit_parts()
        if parts is None or parts[1] != 0 or parts[2] != 0:
            raise ValueError(f"non-monomial coefficient {c}")
        e = t.exponent()
        if any(x and sig.labels[k][-1] != "b" for k, x in enumerate(e)):
            raise ValueError("root_b2 expects b-sector monomials")
        out = out + swap_sectors(t)
    return out


# ---------------------------------------------------------------------------
# Numeric oracle
# ---------------------------------------------------------------------------


def numeric_symbol(a: TorusElement, zeta: complex, zetat: complex, point: np.ndarray) -> complex:
    """``sum_v c_v(ζ, ζ̃) e^{v·point}``: the commutative symbol at a numeric point."""
    D = a.sig.denominator
    total = 0j
    for e, c in a._terms.items():
        total += c.specialize(zeta, zetat) * np.exp(np.dot(np.array(e, dtype=float) / D, point))
    return complex(total)


def numeric_product_symbol(a: TorusElement, b: TorusElement, zeta: complex, zetat: complex,
                           point: np.ndarray) -> complex:
    """Symbol of ``a b`` from a dense float pairing matrix, independent of :func:`multiply`."""
    sig = a.sig
    D = sig.denominator
    om = np.array([[float(x) for x in row] for row in sig.omega])
    sector = np.array([l[-1] == "t" for l in sig.labels])
    bb = om * np.outer(~sector, ~sector)
    tt = om * np.outer(sector, sector)
    cr = om - bb - tt
    total = 0j
    for ea, ca in a._terms.items():
        for eb, cb in b._terms.items():
            va, vb = np.array(ea, float) / D, np.array(eb, float) / D
            ph = (zeta ** (2 * va @ bb @ vb)) * (zetat ** (2 * va @ tt @ vb)) * np.exp(1j * np.pi * (va @ cr @ vb))
            total += ca.specialize(zeta, zetat) * cb.specialize(zeta, zetat) * ph * np.exp((va + vb) @ point)
    return complex(total)
