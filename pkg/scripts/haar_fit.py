"""Fit the Haar density exponents from sampled Jacobians and compare with the closed form."""
import argparse
from dataclasses import dataclass

from qrep.totalpos import fit_haar_exponents, haar_density_check, haar_exponents


@dataclass(frozen=True)
class HaarFitConfig:
    ranks: tuple = (2, 3, 4, 5)
    samples: int = 60
    seed: int = 0


def run(cfg: HaarFitConfig) -> None:
    for n in cfg.ranks:
        fit = fit_haar_exponents(n, samples=cfg.samples, seed=cfg.seed)
        closed = haar_exponents(n)
        worst = max(abs(fit[k] - closed[k]) for k in closed)
        dev = haar_density_check(n, samples=cfg.samples, seed=cfg.seed).max_value()
        print(f"n={n}: max |fit - closed form| = {worst:.2e}, density deviation = {dev:.2e}")
        for k in sorted(closed):
            print(f"  x{k[0]}{k[1]}: fit {fit[k]:+.6f}  closed {closed[k]:+d}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--ranks", default="2,3,4,5")
    p.add_argument("--samples", type=int, default=60)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    run(HaarFitConfig(tuple(int(x) for x in a.ranks.split(",")), a.samples, a.seed))
