"""Exact orbifold Riemann-Roch: Reid corrections, Euler characteristics, Hilbert tables."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .baskets import NumericalSkeleton
    from .torsion import TorsionData


class CandidateRejected(ValueError):
    """A numerical invariant that must be integral or non-negative is not."""


@lru_cache(maxsize=None)
def reid_table(r: int, b: int) -> tuple[Fraction, ...]:
    """c(r, b, i) for i = 0..r-1."""
    out = [Fraction(0)] * r
    acc = Fraction(0)
    for i in range(1, r):
        if i >= 2:
            x = (i - 1) * b % r
            acc += Fraction(x * (r - x), 2 * r)
        out[i] = Fraction(-i * (r * r - 1), 12 * r) + acc
    return tuple(out)


def reid_correction(r: int, b: int, i: int) -> Fraction:
    """Local correction of a point 1/r(1,-1,b) for a divisor locally ~ iK."""
    if r < 2 or not 1 <= b < r or gcd(b, r) != 1:
        raise ValueError(f"invalid point ({r},{b})")
    if not 0 <= i < r:
        raise ValueError(f"i={i} out of range for r={r}")
    return reid_table(r, b)[i]


@dataclass(frozen=True)
class HilbertTable:
    """h^0(mA + jT): rows m = 0..terms, columns j = 0..N-1."""

    coeffs: tuple[tuple[int, ...], ...]

    @property
    def N(self) -> int:
        return len(self.coeffs[0])

    @property
    def terms(self) -> int:
        return len(self.coeffs) - 1

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.coeffs]

    def truncate(self, terms: int) -> HilbertTable:
        return HilbertTable(self.coeffs[: terms + 1])

    def render(self, terms: int | None = None) -> str:
        """Polynomial in t and s (s stands for the torsion grading sigma)."""
        rows = self.coeffs if terms is None else self.coeffs[: terms + 1]
        parts: list[str] = []
        for m, row in enumerate(rows):
            for j, v in enumerate(row):
                if v == 0:
                    continue
                mono = "".join(x for x in (
                    "" if m == 0 else ("t" if m == 1 else f"t^{m}"),
                    "" if j == 0 else ("s" if j == 1 else f"s^{j}")) if x)
                if not mono:
                    parts.append(str(v))
                else:
                    parts.append(mono if v == 1 else f"{v}{mono}")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class RRContext:
    skeleton: NumericalSkeleton
    torsion: TorsionData | None = None
    series_terms: int = 10

    @property
    def N(self) -> int:
        return 1 if self.torsion is None else self.torsion.N

    def lprime(self) -> tuple[int, ...]:
        if self.torsion is None:
            return (0,) * len(self.skeleton.basket)
        return tuple(self.torsion.lprime)


def euler_char(ctx: RRContext, m: int, j: int = 0) -> Fraction:
    sk = ctx.skeleton
    if ctx.torsion is None and j != 0:
        raise ValueError("torsion twist requested without torsion data")
    q = sk.q
    v = 1 + Fraction(m * (m + q) * (2 * m + q), 12) * sk.A3 + m * sk.Ac2 / 12
    for p, l, lp in zip(sk.basket, sk.l, ctx.lprime()):
        v += reid_table(p.r, p.b)[(m * l + j * lp) % p.r]
    return v


def genus(ctx: RRContext) -> int:
    """g = -K^3/2 + 1 - sum b(r-b)/2r with -K^3 = q^3 A^3."""
    sk = ctx.skeleton
    g = Fraction(sk.q ** 3, 2) * sk.A3 + 1 - sum(
        (Fraction(p.b * (p.r - p.b), 2 * p.r) for p in sk.basket), Fraction(0))
    if g.denominator != 1:
        raise CandidateRejected(f"non-integral genus {g}")
    return int(g)


def hilbert_table(ctx: RRContext) -> HilbertTable:
    N = ctx.N
    rows: list[tuple[int, ...]] = [(1,) + (0,) * (N - 1)]
    for m in range(1, ctx.series_terms + 1):
        row = []
        for j in range(N):
            v = euler_char(ctx, m, j)
            if v.denominator != 1 or v < 0:
                raise CandidateRejected(f"chi({m}A+{j}T) = {v}")
            row.append(int(v))
        rows.append(tuple(row))
    return HilbertTable(tuple(rows))


def p_n(ctx: RRContext, n: int, table: HilbertTable | None = None) -> int:
    if not 1 <= n <= ctx.series_terms:
        raise ValueError(f"n={n} outside 1..{ctx.series_terms}")
    table = table or hilbert_table(ctx)
    return max(table.coeffs[n])


def vanishing_ok(ctx: RRContext) -> bool:
    q = ctx.skeleton.q
    return all(euler_char(ctx, m, j) == 0 for m in range(-q + 1, 0) for j in range(ctx.N))
