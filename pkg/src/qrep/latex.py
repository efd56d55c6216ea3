"""LaTeX rendering of polynomials, shift operators, torus elements and generator families."""
from __future__ import annotations

from fractions import Fraction

from .poly import Poly
from .qtorus import PhaseCoeff, TorusElement

_GREEK = {"lam": r"\lambda", "a": r"\alpha'"}


def _frac(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return rf"{sign}\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def symbol(name: str, idx) -> str:
    base = _GREEK.get(name, name)
    sub = "".join(map(str, idx))
    return f"{base}_{{{sub}}}" if sub else base


def _linear(items) -> str:
    """``sum c_k s_k`` for ``(coefficient, symbol)`` pairs; constant when symbol is empty."""
    out = ""
    for c, s in items:
        c = Fraction(c)
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not s:
            body = _frac(mag)
        elif mag == 1:
            body = s
        else:
            body = _frac(mag) + s
        out += f" {sign} {body}" if out else ("-" + body if sign == "-" else body)
    return out or "0"


def latex_poly(p: Poly) -> str:
    items = []
    for mono, c in p.sorted_terms():
        s = "".join(symbol(v[0], v[1:]) + (f"^{{{e}}}" if e != 1 else "") for v, e in mono)
        items.append((c, s))
    return _linear(items)


def latex_shift(shift) -> str:
    if not shift:
        return ""
    return "".join(rf"T_{{{''.join(map(str, v[1:]))}}}^{{{e}}}" if e != 1 else rf"T_{{{''.join(map(str, v[1:]))}}}"
                   for v, e in shift)


def latex_shift_operator(op) -> str:
    """``sum_k w_k(u) T^{shift_k}`` in stored part order."""
    parts = op.parts or tuple((w, tuple(sorted(s.items()))) for s, w in op.terms.items())
    out = []
    for w, s in parts:
        out.append(f"\\left({latex_poly(w)}\\right){latex_shift(s)}")
    return " + ".join(out) if out else "0"


def latex_diff_operator(op) -> str:
    out = []
    for coef, target in op.parts:
        c = latex_poly(coef) if isinstance(coef, Poly) else str(coef)
        d = rf"\partial_{{{symbol(target[0], target[1:])}}}" if target else ""
        out.append(f"\\left({c}\\right){d}" if d else c)
    return " + ".join(out)


def latex_coefficient(c: PhaseCoeff) -> str:
    """Coefficients in powers of ``q = ζ²`` and ``q̃``."""
    if c == PhaseCoeff.const(1):
        return ""
    out = []
    for (a, t), (re, im) in c.sorted_items():
        num = _frac(re) if not im else (_frac(im) + "i" if not re else f"({_frac(re)}+{_frac(im)}i)")
        mono = ""
        if a:
            mono += f"q^{{{_frac(Fraction(a, 2))}}}"
        if t:
            mono += rf"\tilde q^{{{_frac(Fraction(t, 2))}}}"
        if mono and num == "1":
            out.append(mono)
        elif mono and num == "-1":
            out.append("-" + mono)
        else:
            out.append(num + mono)
    return out[0] if len(out) == 1 else "(" + " + ".join(out) + ")"


def latex_monomial(el: TorusElement, exponent) -> str:
    d = el.sig.exponent_dict(exponent)
    groups = {"b": [], "t": []}
    for label, v in d.items():
        name, *idx, sector = label
        groups[sector].append((v, symbol(name, idx)))
    chunks = []
    for sector, base in (("b", "b"), ("t", "b^{-1}")):
        if groups[sector]:
            chunks.append(rf"e^{{2\pi {base}({_linear(groups[sector])})}}")
    return "".join(chunks) or "1"


def latex_torus(el: TorusElement) -> str:
    out = []
    for e, c in el.items():
        coef = latex_coefficient(c)
        mono = latex_monomial(el, e)
        out.append(coef + ("" if mono == "1" and coef else mono))
    return " + ".join(out).replace("+ -", "- ") if out else "0"


def _render(value) -> str:
    if isinstance(value, TorusElement):
        return latex_torus(value)
    if hasattr(value, "terms") and hasattr(value, "parts"):
        return latex_shift_operator(value)
    if hasattr(value, "parts"):
        return latex_diff_operator(value)
    return str(value)


def latex_generators(gens: dict, bold: bool = False, tilde: bool = False) -> str:
    """One aligned line per generator, e.g. ``e_{1} &= ...``."""
    lines = []
    for (kind, i), v in sorted(gens.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        sym = kind.lower() if kind in "EF" and isinstance(v, TorusElement) else kind
        if bold:
            sym = rf"\mathbf{{{sym}}}"
        if tilde:
            sym = rf"\tilde{{{sym}}}"
        lines.append(rf"{sym}_{{{i}}} &= {_render(v)}")
    return "\\begin{align*}\n" + " \\\\\n".join(lines) + "\n\\end{align*}\n"


def latex_commutant(n: int, basis) -> str:
    """``prod_j 𝐊̃_j^{t_j}`` for each basis row."""
    lines = []
    for k, row in enumerate(basis, start=1):
        factors = "".join(rf"\tilde{{\mathbf K}}_{{{j}}}^{{{_frac(t)}}}" for j, t in enumerate(row, start=1) if t)
        lines.append(rf"\omega_{{{k}}} &= {factors or '1'}")
    return "\\begin{align*}\n" + " \\\\\n".join(lines) + "\n\\end{align*}\n"
