"""Hilbert series of weighted projective spaces and weighted complete intersections."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product


@dataclass(frozen=True)
class WeightedFamily:
    weights: tuple[int, ...]
    degrees: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "degrees", tuple(self.degrees))
        if not self.weights or any(w <= 0 for w in self.weights + self.degrees):
            raise ValueError("weights and degrees must be positive")
        if len(self.degrees) >= len(self.weights):
            raise ValueError("need fewer degrees than weights")


def series(family: WeightedFamily, terms: int) -> list[int]:
    """First `terms` coefficients of prod(1 - t^d) / prod(1 - t^w)."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    c = [1] + [0] * (terms - 1)
    for w in family.weights:
        # multiply by 1/(1 - t^w)
        for i in range(w, terms):
            c[i] += c[i - w]
    for d in family.degrees:
        for i in range(terms - 1, d - 1, -1):
            c[i] -= c[i - d]
    return c


def monomial_count(weights: tuple[int, ...], degree: int) -> int:
    """Number of monomials of the given weighted degree, by direct enumeration."""
    ranges = [range(degree // w + 1) for w in weights]
    return sum(1 for exps in product(*ranges)
               if sum(e * w for e, w in zip(exps, weights)) == degree)
