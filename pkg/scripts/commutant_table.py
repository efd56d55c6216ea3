"""Print the solved commutant basis, its Smith invariants and the closed-form exponents."""
import argparse
from dataclasses import dataclass

from qrep.lattice import same_lattice, smith_invariants
from qrep.modified import bold_from_rank, commutant_solve, congruence_matrix, kkkk_basis


@dataclass(frozen=True)
class CommutantConfig:
    ranks: tuple = (2, 3, 4, 5)


def run(cfg: CommutantConfig) -> None:
    for n in cfg.ranks:
        bold = bold_from_rank(n)
        basis = commutant_solve(bold)
        closed = kkkk_basis(n)
        print(f"n={n}: invariant factors {smith_invariants(congruence_matrix(bold))}, "
              f"matches closed form: {same_lattice(basis, closed)}")
        for k, row in enumerate(closed, start=1):
            print(f"  ω_{k}: " + " ".join(str(t) for t in row))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ranks", default="2,3,4,5")
    a = p.parse_args()
    run(CommutantConfig(tuple(int(x) for x in a.ranks.split(","))))
