"""Index conventions and the generator-family container shared by all pictures."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping


def u(i: int, j: int):
    return ("u", i, j)


def x(i: int, j: int):
    return ("x", i, j)


def lam(i: int):
    return ("lam", i)


def positions(n: int) -> list[tuple[int, int]]:
    """All index pairs ``(i, j)`` with ``1 <= i < j <= n`` in row-major order."""
    return [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]


def exists(n: int, i: int, j: int) -> bool:
    """Whether ``u_{ij}`` is a lattice coordinate.

    ``u_{0,j}`` and ``u_{k,k}`` are the boundary coordinates; they are
    identically zero and have no shift.  Any other out-of-range index is a bug.
    """
    if 1 <= i < j <= n:
        return True
    if (i == 0 and 0 <= j <= n) or (i == j and 0 <= i <= n):
        return False
    raise IndexError(f"index ({i},{j}) is neither a coordinate nor a boundary for n={n}")


def cartan(i: int, j: int) -> int:
    if i == j:
        return 2
    return -1 if abs(i - j) == 1 else 0


@dataclass(frozen=True)
class GeneratorFamily:
    """Named generators ``(kind, index) -> element`` with provenance.

    ``decomposition`` holds, for generators realized as positive sums, the
    ordered list of summands in which each term q^2-commutes with the later ones.
    """

    name: str
    n: int
    generators: Mapping[tuple[str, int], Any]
    provenance: str = ""
    decomposition: Mapping[tuple[str, int], tuple] = field(default_factory=dict)
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __getitem__(self, key: tuple[str, int]):
        return self.generators[key]

    def get(self, key, default=None):
        return self.generators.get(key, default)

    def kinds(self) -> list[str]:
        return sorted({k for k, _ in self.generators}, key="EFHK".find)

    @property
    def rank(self) -> int:
        return self.n - 1

    def items(self):
        return self.generators.items()
