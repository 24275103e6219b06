"""Baskets of virtual terminal quotient points and the per-basket numerical skeleton."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterator, Literal

from .rr import reid_table

Mode = Literal["coprime", "general"]

# Admissible Q-Fano indices of terminal Q-Fano threefolds.
ALLOWED_Q = (3, 4, 5, 6, 7, 8, 9, 11, 13, 17, 19)
KAWAMATA_BOUND = Fraction(24)


@dataclass(frozen=True, order=True)
class BasketPoint:
    """Virtual cyclic quotient point 1/r(1,-1,b); b is stored in canonical form b <= r-b."""

    r: int
    b: int

    def __post_init__(self) -> None:
        if self.r < 2:
            raise ValueError(f"index must be >= 2, got {self.r}")
        if not 1 <= self.b < self.r or gcd(self.b, self.r) != 1:
            raise ValueError(f"invalid local parameter b={self.b} for r={self.r}")
        if self.b > self.r - self.b:
            object.__setattr__(self, "b", self.r - self.b)

    def __str__(self) -> str:
        return f"{self.r}:{self.b}"

    @classmethod
    def parse(cls, text: str) -> BasketPoint:
        r, _, b = text.strip().partition(":")
        return cls(int(r), int(b) if b else 1)


def point_defect(r: int, summand: str = "kawamata") -> Fraction:
    if summand == "kawamata":
        return Fraction(r * r - 1, r)
    if summand == "printed":
        # (r-1)/r: kept only for auditing, it does not bound the index.
        return Fraction(r - 1, r)
    raise ValueError(f"unknown defect summand {summand!r}")


@dataclass(frozen=True, order=True)
class Basket:
    points: tuple[BasketPoint, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "points", tuple(sorted(self.points)))

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> Basket:
        return cls(tuple(BasketPoint(r, b) for r, b in pairs))

    @classmethod
    def parse(cls, text: str) -> Basket:
        """Parse "2:1,9:4"; an empty string, "-" or "()" is the empty basket."""
        text = text.strip().strip("()")
        if text in ("", "-"):
            return cls()
        return cls(tuple(BasketPoint.parse(tok) for tok in text.split(",")))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __str__(self) -> str:
        return ",".join(str(p) for p in self.points) or "-"

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(p.r for p in self.points)

    @property
    def gorenstein_index(self) -> int:
        return reduce(lcm, self.indices, 1)

    def short(self) -> str:
        """Indices with exponents, e.g. (2^2,3,9)."""
        out: list[str] = []
        for r in sorted(set(self.indices)):
            k = self.indices.count(r)
            out.append(f"{r}^{k}" if k > 1 else str(r))
        return "(" + ",".join(out) + ")"


def kawamata_defect(basket: Basket, summand: str = "kawamata") -> Fraction:
    return sum((point_defect(p.r, summand) for p in basket), Fraction(0))


def point_types(max_index: int = 24) -> list[BasketPoint]:
    return [BasketPoint(r, b) for r in range(2, max_index + 1)
            for b in range(1, r // 2 + 1) if gcd(b, r) == 1]


def enumerate_baskets(max_defect: Fraction | int = KAWAMATA_BOUND,
                      max_index: int | None = None,
                      summand: str = "kawamata") -> Iterator[Basket]:
    """All baskets with defect < max_defect, sorted by size then lexicographically."""
    max_defect = Fraction(max_defect)
    if max_defect > KAWAMATA_BOUND:
        raise ValueError("max_defect must not exceed 24")
    if max_index is None:
        if summand != "kawamata":
            raise ValueError("the printed summand needs an explicit max_index")
        # r - 1/r < 24 forces r <= 24
        max_index = 24
    types = [t for t in point_types(max_index) if point_defect(t.r, summand) < max_defect]
    found: list[tuple[BasketPoint, ...]] = []

    def rec(start: int, budget: Fraction, cur: list[BasketPoint]) -> None:
        found.append(tuple(cur))
        for i in range(start, len(types)):
            d = point_defect(types[i].r, summand)
            if d < budget:
                cur.append(types[i])
                rec(i, budget - d, cur)
                cur.pop()

    rec(0, max_defect, [])
    found.sort(key=lambda pts: (len(pts), pts))
    for pts in found:
        yield Basket(pts)


LocalClassAssignment = tuple[int, ...]


def coprime_local_class(q: int, r: int) -> int:
    """The l with 1 + q*l = 0 mod r."""
    return (-pow(q, -1, r)) % r


def local_classes(q: int, basket: Basket, mode: Mode = "coprime") -> list[LocalClassAssignment]:
    if q < 3:
        raise ValueError("q must be >= 3")
    if mode == "coprime":
        if any(gcd(q, p.r) != 1 for p in basket):
            return []
        return [tuple(coprime_local_class(q, p.r) for p in basket)]
    if mode == "general":
        out: list[LocalClassAssignment] = [()]
        for p in basket:
            out = [l + (x,) for l in out for x in range(p.r)]
        return out
    raise ValueError(f"unknown mode {mode!r}")


def fano_cube(q: int, basket: Basket, l: LocalClassAssignment, Ac2: Fraction) -> Fraction:
    """A^3 from the vanishing chi(-A) = 0."""
    if q < 3:
        raise ValueError("the A^3 formula needs q >= 3")
    s = sum((reid_table(p.r, p.b)[(-x) % p.r] for p, x in zip(basket, l)), Fraction(0))
    return Fraction(12, (q - 1) * (q - 2)) * (1 - Fraction(Ac2) / 12 + s)


def bmy_filter(q: int, A3: Fraction, minus_K_c2: Fraction) -> bool:
    if q in (4, 5):
        return q ** 3 * A3 <= Fraction(25, 8) * minus_K_c2
    return q ** 3 * A3 < 3 * minus_K_c2


@dataclass(frozen=True)
class NumericalSkeleton:
    q: int
    basket: Basket
    l: LocalClassAssignment
    A3: Fraction
    Ac2: Fraction
    minus_K_c2: Fraction
    gorenstein_index: int
    qW_equals_qQ: bool = True

    @classmethod
    def build(cls, q: int, basket: Basket, l: LocalClassAssignment | None = None,
              qW_equals_qQ: bool = True) -> NumericalSkeleton:
        """Skeleton with A^3 from the Riemann-Roch formula; l defaults to the coprime class."""
        if l is None:
            ls = local_classes(q, basket, "coprime")
            if not ls:
                raise ValueError(f"q={q} is not coprime to every index of {basket}")
            l = ls[0]
        if len(l) != len(basket):
            raise ValueError("one local class per basket point is required")
        l = tuple(x % p.r for x, p in zip(l, basket))
        mkc2 = KAWAMATA_BOUND - kawamata_defect(basket)
        Ac2 = mkc2 / q
        return cls(q, basket, l, fano_cube(q, basket, l, Ac2), Ac2, mkc2,
                   basket.gorenstein_index, qW_equals_qQ)

    @property
    def mode(self) -> Mode:
        return "coprime" if self.qW_equals_qQ else "general"

    def passes_index_filters(self) -> bool:
        """A^3 > 0, r*A^3 integral and the Bogomolov-Miyaoka bound."""
        if self.A3 <= 0 or self.minus_K_c2 <= 0:
            return False
        if (self.gorenstein_index * self.A3).denominator != 1:
            return False
        return bmy_filter(self.q, self.A3, self.minus_K_c2)
