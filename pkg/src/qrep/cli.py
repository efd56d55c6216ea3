"""Command-line front end: ``qrep verify | formulas | numeric``.

Exit codes: 0 when every check matches its prediction, 1 on any relation
failure or tolerance breach, 2 on a configuration or I/O error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .report import Check, Report, dumps

SCHEMA = 1
N_MIN, N_MAX = 2, 6
VERIFY_SUITES = ("classical", "serre", "quantum", "positive", "tilde", "bold", "embedding", "commutant", "totalpos")
NUMERIC_SUITES = ("haar", "infinitesimal", "mellin")
FORMULA_FAMILIES = ("classical", "diff", "quantum", "positive", "tilde", "bold", "embedded", "commutant")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int = 3
    suites: tuple = ("all",)
    seed: int = 0
    format: str = "text"
    orientation: tuple | None = None
    tolerance: float = 1e-8
    out: str | None = None
    timing: bool = False
    samples: int = 100

    def validate(self, allowed) -> "RunConfig":
        if not N_MIN <= self.n <= N_MAX:
            raise ConfigError(f"n must be in {N_MIN}..{N_MAX}, got {self.n}")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be positive")
        if self.seed < 0:
            raise ConfigError("seed must be an unsigned integer")
        if self.samples < 1:
            raise ConfigError("samples must be positive")
        bad = [s for s in self.suites if s != "all" and s not in allowed]
        if bad:
            raise ConfigError(f"unknown suite(s): {', '.join(bad)}; choose from {', '.join(allowed)}")
        if self.orientation is not None and len(self.orientation) not in (self.n - 1, self.n):
            raise ConfigError(f"orientation needs {self.n - 1} weights, got {len(self.orientation)}")
        return self

    def selected(self, allowed) -> tuple:
        return tuple(allowed) if "all" in self.suites else tuple(s for s in allowed if s in self.suites)

    def weights(self):
        """Orientation weights; a trailing n-th entry is accepted and ignored."""
        if self.orientation is None:
            return None
        return tuple(self.orientation[: self.n - 1])


# ---------------------------------------------------------------------------
# suites; each returns a Report and is a top-level function so it pickles
# ---------------------------------------------------------------------------


def _orientation(cfg: RunConfig):
    from .modified import InadmissibleOrientation, OrientationWeights

    w = cfg.weights()
    if w is None:
        return OrientationWeights.standard(cfg.n - 1), True
    try:
        return OrientationWeights.chain(w), True
    except InadmissibleOrientation:
        return OrientationWeights.chain(w, validate=False), False


def suite_classical(cfg: RunConfig) -> Report:
    from .classical import build_diff_generators, build_mellin_generators, verify_classical_relations

    rep = verify_classical_relations(cfg.n)
    rep.suite = "classical"
    mellin = build_mellin_generators(cfg.n)
    for key, op in build_diff_generators(cfg.n).items():
        rep.add(Check("differential generator maps to the shift generator", key,
                      op.mellin() == mellin[key], formula="Mellin dictionary"))
    return rep


def suite_serre(cfg: RunConfig) -> Report:
    from .classical import build_mellin_generators, serre_polynomial_identity, serre_triple_checks
    from .quantum import quantum_scalar_checks

    rep = Report("serre", cfg.n)
    rep.extend(serre_triple_checks(cfg.n, build_mellin_generators(cfg.n)))
    rep.add(Check("b(2-a+c)+(a+b)c vanishes on the scalar Serre expansion", (), serre_polynomial_identity(),
                  formula="B(a,b,c)"))
    rep.extend(quantum_scalar_checks(cfg.n))
    return rep


def suite_quantum(cfg: RunConfig) -> Report:
    from .quantum import build_quantum_generators, verify_quantum_relations

    rep = verify_quantum_relations(build_quantum_generators(cfg.n))
    rep.suite = "quantum"
    return rep


def suite_positive(cfg: RunConfig) -> Report:
    from .quantum import coproduct_build_and_check, positive_pair, verify_positive

    rep = verify_positive(cfg.n)
    fam, til = positive_pair(cfg.n)
    rep.merge(coproduct_build_and_check(fam, til))
    return rep


def suite_tilde(cfg: RunConfig) -> Report:
    from .modified import bold_from_rank, tilde_commutativity_check
    from .quantum import positive_pair, sign_table_checks

    fam, til = positive_pair(cfg.n)
    rep = sign_table_checks(fam, til)
    rep.suite = "tilde"
    w, admissible = _orientation(cfg)
    rep.merge(tilde_commutativity_check(bold_from_rank(cfg.n, w), expect_fail=not admissible))
    return rep


def suite_bold(cfg: RunConfig) -> Report:
    from .modified import bold_from_rank, bold_transcendental_check, verify_bold_relations

    w, admissible = _orientation(cfg)
    bold = bold_from_rank(cfg.n, w)
    rep = verify_bold_relations(bold, expect_fail=not admissible)
    rep.suite = "bold"
    rep.meta["admissible"] = admissible
    rep.merge(bold_transcendental_check(bold))
    if admissible and cfg.weights() is None and cfg.n >= 3:
        from .modified import zero_shift_regression

        rep.merge(zero_shift_regression(cfg.n))
    return rep


def suite_embedding(cfg: RunConfig) -> Report:
    from .modified import bold_from_rank, embedding_checks

    w, admissible = _orientation(cfg)
    if not admissible:
        raise ConfigError("the embedding suite needs an admissible orientation")
    return embedding_checks(bold_from_rank(cfg.n, w))


def suite_commutant(cfg: RunConfig) -> Report:
    from .modified import bold_from_rank, commutant_checks

    w, admissible = _orientation(cfg)
    if not admissible:
        raise ConfigError("the commutant suite needs an admissible orientation")
    return commutant_checks(bold_from_rank(cfg.n, w))


def suite_totalpos(cfg: RunConfig) -> Report:
    from .totalpos import bijection_checks

    return bijection_checks(cfg.n, samples=cfg.samples, seed=cfg.seed, aux=cfg.n <= 5)


def suite_haar(cfg: RunConfig) -> Report:
    from .totalpos import haar_density_check

    return haar_density_check(cfg.n, samples=cfg.samples, seed=cfg.seed, tolerance=cfg.tolerance)


def suite_infinitesimal(cfg: RunConfig) -> Report:
    from .classical import infinitesimal_group_check

    return infinitesimal_group_check(cfg.n, seed=cfg.seed, tolerance=cfg.tolerance)


def suite_mellin(cfg: RunConfig) -> Report:
    from .classical import mellin_equivalence_check

    return mellin_equivalence_check(cfg.n, trials=min(cfg.samples, 50), seed=cfg.seed)


SUITES = {name: globals()[f"suite_{name}"] for name in VERIFY_SUITES + NUMERIC_SUITES}


def _run_one(args) -> tuple[str, dict, float]:
    name, cfg = args
    t0 = time.perf_counter()
    rep = SUITES[name](cfg)
    if rep.seed is None:
        rep.seed = cfg.seed
    return name, rep.to_json(), time.perf_counter() - t0


def _workers() -> int:
    raw = os.environ.get("QREP_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"QREP_THREADS must be an integer, got {raw!r}")


def run_suites(cfg: RunConfig, names) -> list[tuple[str, dict, float]]:
    """Run suites, in a process pool when ``QREP_THREADS > 1``; results keep ``names`` order."""
    jobs = [(name, cfg) for name in names]
    workers = min(_workers(), len(jobs))
    if workers <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def assemble(command: str, cfg: RunConfig, results) -> dict:
    doc = {"schema": SCHEMA, "command": command, "n": cfg.n, "seed": cfg.seed, "tolerance": cfg.tolerance,
           "orientation": list(cfg.weights()) if cfg.weights() is not None else None,
           "suites": [r for _, r, _ in results]}
    doc["passed"] = all(r["passed"] for r in doc["suites"])
    if cfg.timing:
        doc["timing"] = {name: round(t, 4) for name, _, t in results}
    return doc


def render_text(doc: dict) -> str:
    lines = []
    for rep in doc["suites"]:
        checks = rep["checks"]
        ok = sum(1 for c in checks if (c["status"] == "pass") != c.get("expected_failure", False))
        lines.append(f"[{'PASS' if rep['passed'] else 'FAIL'}] {rep['suite']} n={rep['n']}: {ok}/{len(checks)}")
        for c in checks:
            idx = ",".join(map(str, c["indices"]))
            mark = c["status"]
            if c.get("expected_failure"):
                mark += " (expected failure)" if c["status"] == "fail" else " (UNEXPECTED PASS)"
            val = f" [{c['value']:.3e}]" if "value" in c else ""
            lines.append(f"  {c['relation']} @({idx}): {mark}{val}")
    if "timing" in doc:
        lines.append("timing: " + ", ".join(f"{k}={v:.2f}s" for k, v in doc["timing"].items()))
    lines.append(f"overall: {'pass' if doc['passed'] else 'fail'} (seed {doc['seed']})")
    return "\n".join(lines) + "\n"


def render_latex(doc: dict) -> str:
    lines = [r"\begin{tabular}{lll}", r"suite & relation & status \\ \hline"]
    for rep in doc["suites"]:
        seen = {}
        for c in rep["checks"]:
            key = c["relation"]
            good = (c["status"] == "pass") != c.get("expected_failure", False)
            seen[key] = seen.get(key, True) and good
        for rel, good in seen.items():
            rel_tex = rel.replace("_", r"\_").replace("^", r"\^{}")
            lines.append(f"{rep['suite']} & {rel_tex} & {'pass' if good else 'fail'} \\\\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(doc) + "\n"
    if fmt == "latex":
        return render_latex(doc)
    return render_text(doc)


def cmd_verify(cfg: RunConfig) -> int:
    cfg.validate(VERIFY_SUITES)
    doc = assemble("verify", cfg, run_suites(cfg, cfg.selected(VERIFY_SUITES)))
    _emit(_render(doc, cfg.format), cfg.out)
    return 0 if doc["passed"] else 1


def cmd_numeric(cfg: RunConfig) -> int:
    cfg.validate(NUMERIC_SUITES)
    doc = assemble("numeric", cfg, run_suites(cfg, cfg.selected(NUMERIC_SUITES)))
    _emit(_render(doc, cfg.format), cfg.out)
    return 0 if doc["passed"] else 1


# ---------------------------------------------------------------------------
# formulas
# ---------------------------------------------------------------------------


def family_generators(name: str, cfg: RunConfig):
    """``(generators dict, bold, tilde)`` for one emitted family."""
    n = cfg.n
    if name == "classical":
        from .classical import build_mellin_generators
        return build_mellin_generators(n).generators, False, False
    if name == "diff":
        from .classical import build_diff_generators
        return build_diff_generators(n).generators, False, False
    if name == "quantum":
        from .quantum import build_quantum_generators
        return build_quantum_generators(n).generators, False, False
    if name in ("positive", "tilde"):
        from .quantum import positive_pair
        fam, til = positive_pair(n)
        return (fam if name == "positive" else til).generators, False, name == "tilde"
    from .modified import bold_from_rank, full_torus_embed
    w, admissible = _orientation(cfg)
    bold = bold_from_rank(n, w)
    if name == "bold":
        return bold.gens, True, False
    if name == "embedded":
        if not admissible:
            raise ConfigError("the embedding needs an admissible orientation")
        return full_torus_embed(bold)[0].gens, True, False
    raise ConfigError(f"unknown family {name}")


def _key(k) -> str:
    return f"{k[0]}{k[1]}"


def formulas_document(cfg: RunConfig, names) -> tuple[dict, str, str]:
    from . import latex
    from .modified import bold_from_rank, commutant_solve

    doc = {"schema": SCHEMA, "command": "formulas", "n": cfg.n, "families": {}}
    tex, text = [], []
    for name in names:
        if name == "commutant":
            w, admissible = _orientation(cfg)
            if not admissible:
                raise ConfigError("the commutant needs an admissible orientation")
            basis = commutant_solve(bold_from_rank(cfg.n, w))
            doc["families"][name] = {"exponents": [[[x.numerator, x.denominator] for x in row] for row in basis]}
            tex.append(f"% commutant, n={cfg.n}\n" + latex.latex_commutant(cfg.n, basis))
            text.append(f"commutant n={cfg.n}:\n" + "\n".join("  " + " ".join(map(str, r)) for r in basis))
            continue
        gens, bold, tilde = family_generators(name, cfg)
        doc["families"][name] = {_key(k): v.to_json() for k, v in sorted(gens.items(), key=lambda kv: (kv[0][1], kv[0][0]))}
        tex.append(f"% {name}, n={cfg.n}\n" + latex.latex_generators(gens, bold=bold, tilde=tilde))
        text.append(f"{name} n={cfg.n}:\n" + "\n".join(f"  {_key(k)} = {v!r}" for k, v in
                                                        sorted(gens.items(), key=lambda kv: (kv[0][1], kv[0][0]))))
    return doc, "\n".join(tex), "\n\n".join(text) + "\n"


def cmd_formulas(cfg: RunConfig) -> int:
    cfg.validate(FORMULA_FAMILIES)
    doc, tex, text = formulas_document(cfg, cfg.selected(FORMULA_FAMILIES))
    out = dumps(doc) + "\n" if cfg.format == "json" else tex if cfg.format == "latex" else text
    _emit(out, cfg.out)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _int_list(s: str) -> tuple:
    try:
        return tuple(int(x) for x in s.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def _suite_list(s: str) -> tuple:
    return tuple(x for x in s.replace(" ", "").split(",") if x)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qrep", description="Positive representations of the modular double "
                                "of U_q(sl(n,R)): exact construction and verification.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, suites, default_fmt, help_suite):
        sp.add_argument("--n", type=int, default=3, help=f"rank data n ({N_MIN}..{N_MAX})")
        sp.add_argument("--suite", type=_suite_list, default=("all",), help=help_suite)
        sp.add_argument("--seed", type=int, default=0, help="seed for sampled checks (recorded in the report)")
        sp.add_argument("--format", choices=("json", "latex", "text"), default=default_fmt)
        sp.add_argument("--orientation", type=_int_list, default=None,
                        help="comma-separated weights s_1..s_{n-1}; an extra trailing entry is ignored")
        sp.add_argument("--tolerance", type=float, default=1e-8, help="numeric tolerance (default 1e-8)")
        sp.add_argument("--out", default=None, help="write the output here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="record wall-clock timings (breaks byte-identity)")
        sp.add_argument("--samples", type=int, default=100, help="sample count for sampled checks")

    common(sub.add_parser("verify", help="run exact verification suites"), VERIFY_SUITES, "text",
           "comma list of " + ", ".join(VERIFY_SUITES) + " or all")
    common(sub.add_parser("formulas", help="emit generator formulas"), FORMULA_FAMILIES, "latex",
           "comma list of " + ", ".join(FORMULA_FAMILIES) + " or all")
    common(sub.add_parser("numeric", help="run numeric cross-checks"), NUMERIC_SUITES, "text",
           "comma list of " + ", ".join(NUMERIC_SUITES) + " or all")
    return p


def config_from_args(ns) -> RunConfig:
    return RunConfig(n=ns.n, suites=ns.suite, seed=ns.seed, format=ns.format, orientation=ns.orientation,
                     tolerance=ns.tolerance, out=ns.out, timing=ns.timing, samples=ns.samples)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    cfg = config_from_args(ns)
    handler = {"verify": cmd_verify, "formulas": cmd_formulas, "numeric": cmd_numeric}[ns.command]
    try:
        return handler(cfg)
    except ConfigError as exc:
        print(f"qrep: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"qrep: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
