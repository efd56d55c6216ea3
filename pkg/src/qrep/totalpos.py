"""Totally positive upper unipotent matrices in three coordinate systems.

* matrix entries ``z_{ij}`` (:class:`UnipotentMatrix`),
* cluster variables ``x_{ij}``, the initial minors (:class:`ClusterChart`),
* factorization parameters ``a_{ij}`` along the reduced word of the longest
  Weyl group element (:class:`FactorParams`).

Entries are either exact ``Fraction`` values or floats; exact mode is used for
identities and float mode for Jacobians and group-action derivatives.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from .report import Check, Report


class DegenerateChart(ZeroDivisionError):
    pass


class GaussUndefined(ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# exact linear algebra helpers
# ---------------------------------------------------------------------------


def det(m) -> Fraction | float:
    """Determinant by fraction-free-friendly Gaussian elimination (exact for Fractions)."""
    a = [list(row) for row in m]
    k = len(a)
    if k == 0:
        return 1
    exact = all(not isinstance(v, float) for row in a for v in row)
    if not exact:
        return float(np.linalg.det(np.array(a, dtype=float)))
    a = [[Fraction(v) for v in row] for row in a]
    sign = 1
    out = Fraction(1)
    for c in range(k):
        p = next((r for r in range(c, k) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, k):
            f = a[r][c] / a[c][c]
            if f:
                for cc in range(c, k):
                    a[r][cc] -= f * a[c][cc]
    return sign * out


def submatrix(m, rows, cols):
    return [[m[r - 1][c - 1] for c in cols] for r in rows]


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0) if _exact(a) else 0.0)
             for j in range(len(b[0]))] for i in range(len(a))]


def _exact(m) -> bool:
    return not any(isinstance(v, float) for row in m for v in row)


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UnipotentMatrix:
    """Upper unitriangular matrix given by its strictly upper entries ``z[(i, j)]``."""

    n: int
    z: Mapping[tuple[int, int], Fraction | float]

    @classmethod
    def from_full(cls, m) -> "UnipotentMatrix":
        n = len(m)
        for i in range(n):
            for j in range(n):
                want = 1 if i == j else 0
                if j <= i and m[i][j] != want:
                    raise ValueError("matrix is not upper unitriangular")
        return cls(n, {(i + 1, j + 1): m[i][j] for i in range(n) for j in range(i + 1, n)})

    @property
    def exact(self) -> bool:
        return not any(isinstance(v, float) for v in self.z.values())

    def full(self) -> list[list]:
        one, zero = (Fraction(1), Fraction(0)) if self.exact else (1.0, 0.0)
        return [[one if i == j else self.z.get((i, j), zero) if j > i else zero
                 for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def to_float(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.full()]

    def initial_minors_positive(self) -> bool:
        return all(v > 0 for v in cluster_from_matrix(self).x.values())


@dataclass(frozen=True)
class ClusterChart:
    """Cluster variables ``x[(i, j)]`` for ``1 <= i < j <= n``."""

    n: int
    x: Mapping[tuple[int, int], Fraction | float]

    def get(self, i: int, j: int):
        """Value with the boundary convention ``x_{i,i} = x_{i,0} = x_{0,j} = 1``."""
        if i == 0 or j == 0 or i == j:
            return 1
        return self.x[(i, j)]

    def to_json(self) -> dict:
        return {"n": self.n, "x": {f"{i},{j}": [Fraction(v).numerator, Fraction(v).denominator]
                                   for (i, j), v in sorted(self.x.items())}}

    @classmethod
    def from_json(cls, data: dict) -> "ClusterChart":
        x = {tuple(int(t) for t in k.split(",")): Fraction(v[0], v[1]) for k, v in data["x"].items()}
        return cls(int(data["n"]), x)


@dataclass(frozen=True)
class FactorParams:
    """Factorization parameters ``a[(i, j)]`` for ``1 <= j <= i <= n-1``."""

    n: int
    a: Mapping[tuple[int, int], Fraction | float]

    def get(self, i: int, j: int):
        return self.a[(i, j)]


def factor_indices(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n) for j in range(1, i + 1)]


def reduced_word(n: int) -> list[tuple[int, tuple[int, int]]]:
    """Letters ``(s_index, a_index)`` of the longest-element word, left to right."""
    word = []
    for l in range(1, n):
        for k in range(1, n - l + 1):
            word.append((n - k, (n - k, n - k - l + 1)))
    return word


# ---------------------------------------------------------------------------
# coordinate changes
# ---------------------------------------------------------------------------


def cluster_from_matrix(m: UnipotentMatrix) -> ClusterChart:
    """``x_{ij}`` = determinant of rows ``1..i`` and columns ``j-i+1..j``."""
    full = m.full()
    x = {}
    for i in range(1, m.n):
        for j in range(i + 1, m.n + 1):
            x[(i, j)] = det(submatrix(full, range(1, i + 1), range(j - i + 1, j + 1)))
    return ClusterChart(m.n, x)


def matrix_from_factors(a: FactorParams) -> UnipotentMatrix:
    """Ordered product of elementary matrices ``s_i(t) = I + t E_{i,i+1}`` along the reduced word."""
    n = a.n
    exact = not any(isinstance(v, float) for v in a.a.values())
    one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
    m = [[one if r == c else zero for c in range(n)] for r in range(n)]
    for s, idx in reduced_word(n):
        t = a.a[idx]
        # right multiplication by I + t E_{s,s+1}: column s+1 += t * column s
        for r in range(n):
            if m[r][s - 1]:
                m[r][s] = m[r][s] + t * m[r][s - 1]
    return UnipotentMatrix.from_full(m)


def cluster_from_factors(a: FactorParams) -> ClusterChart:
    """``x_{i,i+j} = prod_{m<=j} prod_{l<=i} a_{m+l-1,l}``."""
    n = a.n
    x = {}
    for i in range(1, n):
        for j in range(1, n - i + 1):
            v = 1
            for m in range(1, j + 1):
                for l in range(1, i + 1):
                    v = v * a.a[(m + l - 1, l)]
            x[(i, i + j)] = v
    return ClusterChart(n, x)


def factors_from_cluster(c: ClusterChart) -> FactorParams:
    """``a_{ij} = x_{j,i+1} x_{j-1,i-1} / (x_{j,i} x_{j-1,i})``."""
    a = {}
    for i, j in factor_indices(c.n):
        den = c.get(j, i) * c.get(j - 1, i)
        if den == 0:
            raise DegenerateChart(f"degenerate chart: zero denominator for a[{i},{j}]")
        num = c.get(j, i + 1) * c.get(j - 1, i - 1)
        a[(i, j)] = Fraction(num) / Fraction(den) if not isinstance(num * den, float) else num / den
    return FactorParams(c.n, a)


# ---------------------------------------------------------------------------
# auxiliary minors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AuxMinors:
    i: int
    z_next: Fraction | float
    lower: dict  # j -> N_{i;j}, 1 <= j <= n-i
    upper: dict  # j -> N^{i;j}, 1 <= j < i


def aux_minors_det(m: UnipotentMatrix, i: int) -> AuxMinors:
    """Determinant definitions of ``z_{i,i+1}``, ``N_{i;j}`` and ``N^{i;j}``."""
    n = m.n
    if not 1 <= i <= n - 1:
        raise IndexError(i)
    full = m.full()
    lower = {j: det(submatrix(full, range(1, j + 1), [i] + list(range(i + 2, i + j + 1))))
             for j in range(1, n - i + 1)}
    upper = {j: det(submatrix(full, range(1, j + 1), list(range(i - j + 1, i)) + [i + 1]))
             for j in range(1, i)}
    return AuxMinors(i, m.z[(i, i + 1)], lower, upper)


def aux_minors_cluster(c: ClusterChart, i: int) -> AuxMinors:
    """The same quantities as rational functions of the cluster variables."""
    n = c.n
    X = c.get

    def a(ii, jj):
        return X(jj, ii + 1) * X(jj - 1, ii - 1) / (X(jj, ii) * X(jj - 1, ii))

    z = sum(a(i, j) for j in range(1, i + 1))
    lower = {j: X(j, i + j) * sum(X(k - 1, i + k) * X(k, i + k - 1) / (X(k - 1, i + k - 1) * X(k, i + k))
                                  for k in range(1, j + 1))
             for j in range(1, n - i + 1)}
    upper = {j: X(j, i) * sum(a(i, k) for k in range(1, j + 1)) for j in range(1, i)}
    return AuxMinors(i, z, lower, upper)


def aux_minors(m: UnipotentMatrix, i: int) -> AuxMinors:
    """Determinant values, after asserting they agree with the cluster formulas."""
    by_det = aux_minors_det(m, i)
    chart = cluster_from_matrix(m)
    if m.exact:
        chart = ClusterChart(chart.n, {k: Fraction(v) for k, v in chart.x.items()})
    by_x = aux_minors_cluster(chart, i)
    if by_det != by_x if m.exact else not _close(by_det, by_x):
        raise AssertionError(f"identity violated for auxiliary minors at i={i}: {by_det} vs {by_x}")
    return by_det


def _close(p: AuxMinors, q: AuxMinors, tol=1e-9) -> bool:
    vals = [(p.z_next, q.z_next)] + [(p.lower[j], q.lower[j]) for j in p.lower] + \
        [(p.upper[j], q.upper[j]) for j in p.upper]
    return all(abs(s - t) <= tol * max(1.0, abs(s)) for s, t in vals)


# ---------------------------------------------------------------------------
# Gauss decomposition
# ---------------------------------------------------------------------------


def leading_minors(g) -> list:
    return [det(submatrix(g, range(1, i + 1), range(1, i + 1))) for i in range(1, len(g) + 1)]


def gauss_project(g, lam=None):
    """Return ``([g]_+, diag, χ)`` for ``g = [g]_- · diag · [g]_+``.

    ``[g]_+`` has entries ``z_{ij} = det N_i^j / det N_i`` (rows and columns
    ``1..i`` with column ``i`` replaced by column ``j``), the diagonal is
    ``u_i = Δ_i / Δ_{i-1}`` with ``Δ_i`` the leading principal minors.  When
    real ``lam`` is given, ``χ = prod_i Δ_i^{2 lam_i}`` is returned, otherwise None.
    """
    n = len(g)
    minors = leading_minors(g)
    if any(d == 0 for d in minors):
        raise GaussUndefined("Gauss decomposition undefined: vanishing principal minor")
    z = {}
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            z[(i, j)] = det(submatrix(g, range(1, i + 1), list(range(1, i)) + [j])) / minors[i - 1]
    diag = [minors[0]] + [minors[i] / minors[i - 1] for i in range(1, n)]
    chi = None
    if lam is not None:
        chi = float(np.prod([float(minors[i]) ** (2 * float(lam[i])) for i in range(len(lam))]))
    return UnipotentMatrix(n, z), diag, chi


def gauss_lower(g, upper: UnipotentMatrix, diag):
    """``[g]_-`` computed as ``g · [g]_+^{-1} · diag^{-1}``."""
    n = len(g)
    u_inv = _unitriangular_inverse(upper.full())
    gu = matmul([list(r) for r in g], u_inv)
    return [[gu[r][c] / diag[c] for c in range(n)] for r in range(n)]


def _unitriangular_inverse(u):
    n = len(u)
    inv = [[(1 if r == c else 0) * u[0][0] for c in range(n)] for r in range(n)]
    zero = u[0][0] - u[0][0]
    for c in range(n):
        for r in range(c - 1, -1, -1):
            inv[r][c] = zero - sum((u[r][k] * inv[k][c] for k in range(r + 1, c + 1)), zero)
    return inv


def gauss_project_float(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Float version returning the dense ``[g]_+`` and the diagonal."""
    n = g.shape[0]
    minors = np.array([np.linalg.det(g[:i, :i]) for i in range(1, n + 1)])
    if np.any(np.abs(minors) < 1e-300):
        raise GaussUndefined("Gauss decomposition undefined: vanishing principal minor")
    up = np.eye(n)
    for i in range(1, n):
        for j in range(i + 1, n + 1):
            cols = list(range(i - 1)) + [j - 1]
            up[i - 1, j - 1] = np.linalg.det(g[:i, cols]) / minors[i - 1]
    diag = minors / np.concatenate([[1.0], minors[:-1]])
    return up, diag


def minor_float(m: np.ndarray, i: int, j: int) -> float:
    """Cluster variable ``x_{ij}`` of a dense unipotent matrix."""
    return float(np.linalg.det(m[:i, j - i:j]))


def lie_generator(n: int, kind: str, i: int) -> np.ndarray:
    """Chevalley generators of sl(n) as dense matrices."""
    m = np.zeros((n, n))
    if kind == "E":
        m[i - 1, i] = 1.0
    elif kind == "F":
        m[i, i - 1] = 1.0
    elif kind == "H":
        m[i - 1, i - 1], m[i, i] = 1.0, -1.0
    else:
        raise ValueError(kind)
    return m


def expm_small(a: np.ndarray, terms: int = 20) -> np.ndarray:
    """Matrix exponential by Taylor series; only used for tiny ``t`` times nilpotent/diagonal matrices."""
    out = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


# ---------------------------------------------------------------------------
# sampling and the Haar density check
# ---------------------------------------------------------------------------


def random_factor_params(n: int, rng=None, exact: bool = True, denominator: int = 16) -> FactorParams:
    """Positive parameters drawn uniformly from the grid ``k/denominator`` in ``[1/2, 2]``."""
    rng = rng if rng is not None else np.random.default_rng()
    a = {}
    for idx in factor_indices(n):
        k = int(rng.integers(denominator // 2, 2 * denominator + 1))
        a[idx] = Fraction(k, denominator) if exact else k / denominator
    return FactorParams(n, a)


def random_chart(n: int, rng=None) -> ClusterChart:
    return cluster_from_factors(random_factor_params(n, rng))


def haar_exponents(n: int) -> dict[tuple[int, int], int]:
    """Exponents of ``x_{ij}`` in the Haar density with respect to ``prod dx_{ij}``.

    The density is ``prod_{1<=i<j<n} x_{ij}^{-1}``: the last column carries no factor.
    """
    return {(i, j): (-1 if j < n else 0) for i in range(1, n) for j in range(i + 1, n + 1)}


def jacobian_x_of_z(z: np.ndarray, n: int, h: float = 1e-3) -> np.ndarray:
    """Central-difference Jacobian of ``z -> x``.

    Each cluster variable is affine in every single entry, so the symmetric
    difference is exact up to rounding.
    """
    idx = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    jac = np.zeros((len(idx), len(idx)))
    for c, (i, j) in enumerate(idx):
        zp, zm = z.copy(), z.copy()
        zp[i - 1, j - 1] += h
        zm[i - 1, j - 1] -= h
        for r, (k, l) in enumerate(idx):
            jac[r, c] = (minor_float(zp, k, l) - minor_float(zm, k, l)) / (2 * h)
    return jac


def fit_haar_exponents(n: int, samples: int = 40, seed: int = 0) -> dict[tuple[int, int], float]:
    """Least-squares fit of ``log|det dz/dx|`` against ``log x_{ij}``.

    Used to pin the density's exponents from data instead of reading them off a formula.
    """
    rng = np.random.default_rng(seed)
    idx = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
    rows, rhs = [], []
    for _ in range(samples):
        a = random_factor_params(n, rng, exact=False)
        z = np.array(matrix_from_factors(a).to_float())
        chart = cluster_from_matrix(matrix_from_factors(a))
        jac = jacobian_x_of_z(z, n)
        rows.append([1.0] + [np.log(chart.x[k]) for k in idx])
        rhs.append(-np.log(abs(np.linalg.det(jac))))
    coef, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return {k: float(c) for k, c in zip(idx, coef[1:])} | {"const": float(coef[0])}


def haar_density_check(n: int, samples: int = 100, seed: int = 0, tolerance: float = 1e-6) -> Report:
    """Compare ``|det dx/dz|^{-1}`` with ``prod x_{ij}^{e_{ij}}`` at random positive points."""
    if n > 6:
        raise ValueError("haar_density_check supports n <= 6")
    rng = np.random.default_rng(seed)
    expo = haar_exponents(n)
    worst, used = 0.0, 0
    while used < samples:
        a = random_factor_params(n, rng, exact=False)
        m = matrix_from_factors(a)
        z = np.array(m.to_float())
        jd = np.linalg.det(jacobian_x_of_z(z, n))
        if abs(jd) < 1e-12:
            continue  # singular Jacobian: resample
        chart = cluster_from_matrix(m)
        density = float(np.prod([chart.x[k] ** e for k, e in expo.items()]))
        worst = max(worst, abs(1.0 / abs(jd) - density) / density)
        used += 1
    rep = Report("haar", n, seed=seed)
    rep.add(Check("|det dz/dx| = prod_{i<j<n} 1/x_ij", (n, samples), worst < tolerance,
                  formula="Haar density", value=worst, detail=f"max relative deviation {worst:.3e}"))
    return rep


def bijection_checks(n: int, samples: int = 100, seed: int = 0, aux: bool = True) -> Report:
    """Exact round trips factors -> matrix -> cluster chart -> factors.

    Also checks that every initial minor of a positive product is positive and,
    when ``aux`` is set, that the auxiliary minors agree with their cluster formulas.
    """
    rng = np.random.default_rng(seed)
    trips = minors = aux_ok = 0
    first_bad = ""
    for s in range(samples):
        a = random_factor_params(n, rng)
        m = matrix_from_factors(a)
        chart = cluster_from_matrix(m)
        if factors_from_cluster(chart).a == a.a and cluster_from_factors(a).x == chart.x:
            trips += 1
        elif not first_bad:
            first_bad = f"sample {s}"
        minors += m.initial_minors_positive()
        if aux:
            try:
                for i in range(1, n):
                    aux_minors(m, i)
                aux_ok += 1
            except AssertionError as exc:
                first_bad = first_bad or str(exc)
    rep = Report("totalpos", n, seed=seed)
    rep.add(Check("factors -> matrix -> cluster -> factors is the identity", (n, samples), trips == samples,
                  residue_terms=samples - trips, detail=first_bad))
    rep.add(Check("initial minors of a positive product are positive", (n, samples), minors == samples,
                  residue_terms=samples - minors))
    if aux:
        rep.add(Check("auxiliary minors: determinant = cluster formula", (n, samples), aux_ok == samples,
                      residue_terms=samples - aux_ok))
    return rep
