"""Small exact integer and GF(2) linear algebra for lattice congruences."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def hnf(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row Hermite normal form of an integer matrix; zero rows are dropped.

    Pivots are positive and entries above a pivot are reduced into ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows if any(r)]
    if not a:
        return []
    cols = len(a[0])
    out = []
    r = 0
    for c in range(cols):
        # Euclid on column c among rows r..end
        while True:
            nz = [k for k in range(r, len(a)) if a[k][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda k: abs(a[k][c]))
            a[r], a[p] = a[p], a[r]
            done = True
            for k in range(r + 1, len(a)):
                if a[k][c]:
                    f = a[k][c] // a[r][c]
                    a[k] = [x - f * y for x, y in zip(a[k], a[r])]
                    if a[k][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for k in range(r):
                f = a[k][c] // a[r][c]
                if f:
                    a[k] = [x - f * y for x, y in zip(a[k], a[r])]
            r += 1
            if r == len(a):
                break
    out = [row for row in a[:r] if any(row)]
    return out


def smith_invariants(rows: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ...`` of an integer matrix (nonzero ones only)."""
    a = [list(map(int, r)) for r in rows]
    if not a or not a[0]:
        return []
    m, n = len(a), len(a[0])
    out = []
    t = 0
    while t < min(m, n):
        nz = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        changed = True
        while changed:
            changed = False
            piv = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    f = a[i][t] // piv
                    a[i] = [x - f * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        changed = True
                        break
            if changed:
                continue
            piv = a[t][t]
            for j in range(t + 1, n):
                if a[t][j]:
                    f = a[t][j] // piv
                    for row in a:
                        row[j] -= f * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        changed = True
                        break
            if changed:
                continue
            # divisibility: fold a non-divisible entry into the pivot row
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % a[t][t]), None)
            if bad:
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                changed = True
        out.append(abs(a[t][t]))
        t += 1
    return out


def rational_inverse(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def dual_lattice(rows: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Basis (as rows) of ``{t in Q^r : M t in Z^m}`` for a full-column-rank integer ``M``."""
    b = hnf(rows)
    if not b or len(b) != len(b[0]):
        raise ValueError("congruence matrix must have full column rank")
    inv = rational_inverse(b)  # columns of B^{-1} generate the dual lattice
    r = len(b)
    return [[inv[i][k] for i in range(r)] for k in range(r)]


def lattice_hnf(basis: Sequence[Sequence[Fraction]]) -> tuple[int, list[list[int]]]:
    """Canonical form ``(denominator, HNF of denominator * basis)`` of a rational lattice."""
    den = 1
    for row in basis:
        for x in row:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    return den, hnf([[int(Fraction(x) * den) for x in row] for row in basis])


def same_lattice(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> bool:
    da, ha = lattice_hnf(a)
    db, hb = lattice_hnf(b)
    d = da * db // gcd(da, db)
    return hnf([[x * (d // da) for x in r] for r in ha]) == hnf([[x * (d // db) for x in r] for r in hb])


def gf2_solve(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[int] | None:
    """One solution of ``A x = b`` over GF(2), free variables set to 0; None if inconsistent."""
    a = [[x & 1 for x in r] + [b & 1] for r, b in zip(rows, rhs)]
    if not a:
        return []
    n = len(a[0]) - 1
    piv = []
    r = 0
    for c in range(n):
        p = next((k for k in range(r, len(a)) if a[k][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for k in range(len(a)):
            if k != r and a[k][c]:
                a[k] = [x ^ y for x, y in zip(a[k], a[r])]
        piv.append(c)
        r += 1
    if any(row[-1] and not any(row[:-1]) for row in a):
        return None
    x = [0] * n
    for k, c in enumerate(piv):
        x[c] = a[k][-1]
    return x
