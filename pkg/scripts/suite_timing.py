"""Wall-clock time of each exact verification suite for a range of ranks."""
import argparse
import time
from dataclasses import dataclass

from qrep import classical, modified, quantum


@dataclass(frozen=True)
class TimingConfig:
    ranks: tuple = (2, 3, 4, 5)
    repeats: int = 1


def _suites(n):
    yield "classical", lambda: classical.verify_classical_relations(n)
    yield "quantum", lambda: quantum.verify_quantum_relations(quantum.build_quantum_generators(n))
    yield "positive", lambda: quantum.verify_positive(n)
    yield "bold", lambda: modified.verify_modified(n)
    yield "embedding", lambda: modified.embedding_checks(modified.bold_from_rank(n))
    yield "commutant", lambda: modified.commutant_checks(modified.bold_from_rank(n))


def run(cfg: TimingConfig) -> None:
    print(f"{'n':>2} {'suite':<10} {'seconds':>8} {'checks':>7} passed")
    for n in cfg.ranks:
        for name, fn in _suites(n):
            best = float("inf")
            for _ in range(cfg.repeats):
                t0 = time.perf_counter()
                rep = fn()
                best = min(best, time.perf_counter() - t0)
            print(f"{n:>2} {name:<10} {best:8.3f} {len(rep.checks):7d} {rep.passed}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ranks", default="2,3,4,5")
    p.add_argument("--repeats", type=int, default=1)
    a = p.parse_args()
    run(TimingConfig(tuple(int(x) for x in a.ranks.split(",")), a.repeats))
