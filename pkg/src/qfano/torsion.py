"""Torsion data (N, l') and canonical form of sigma-graded Hilbert tables."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import gcd, lcm
from typing import Iterable, Iterator

from .baskets import NumericalSkeleton
from .rr import HilbertTable, RRContext, reid_table, vanishing_ok


@dataclass(frozen=True)
class TorsionData:
    N: int
    lprime: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.N < 2:
            raise ValueError("torsion order must be >= 2")
        object.__setattr__(self, "lprime", tuple(self.lprime))


def _order(x: int, r: int) -> int:
    return r // gcd(x, r)


def _assignments(skeleton: NumericalSkeleton, N: int) -> Iterator[tuple[int, ...]]:
    """l' per point with N*l' = 0 mod r; multisets inside groups of equal (r, b, l)."""
    groups: dict[tuple[int, int, int], list[int]] = defaultdict(list)
    for pos, (p, l) in enumerate(zip(skeleton.basket, skeleton.l)):
        groups[(p.r, p.b, l)].append(pos)
    keys = sorted(groups)
    options = []
    for key in keys:
        r = key[0]
        allowed = [x for x in range(r) if (N * x) % r == 0]
        options.append(list(combinations_with_replacement(allowed, len(groups[key]))))
    n = len(skeleton.basket)
    for choice in product(*options):
        lp = [0] * n
        for key, combo in zip(keys, choice):
            for pos, x in zip(groups[key], combo):
                lp[pos] = x
        yield tuple(lp)


def anticanonical_consistent(skeleton: NumericalSkeleton, td: TorsionData) -> bool:
    """Some j0 has -K ~ qA + j0*T locally at every point: 1 + q*l + j0*l' = 0 mod r."""
    q = skeleton.q
    return any(all((1 + q * l + j0 * lp) % p.r == 0
                   for p, l, lp in zip(skeleton.basket, skeleton.l, td.lprime))
               for j0 in range(td.N))


def torsion_chi_ok(skeleton: NumericalSkeleton, N: int, lprime: Iterable[int]) -> bool:
    """chi(jT) = 0 for 1 <= j < N."""
    pts = [(reid_table(p.r, p.b), p.r, x) for p, x in zip(skeleton.basket, lprime)]
    return all(1 + sum((t[(j * x) % r] for t, r, x in pts), Fraction(0)) == 0
               for j in range(1, N))


def enumerate_torsion(skeleton: NumericalSkeleton, N_max: int = 6, *,
                      exact_order: bool = True,
                      anticanonical: bool = True) -> list[TorsionData]:
    """All torsion data with 2 <= N <= N_max passing the chi(jT) and vanishing conditions.

    exact_order asks lcm of the local orders to equal N; anticanonical asks
    -K ~ qA + j0*T to be locally consistent for some j0.
    """
    if N_max < 2:
        raise ValueError("N_max must be >= 2")
    out: list[TorsionData] = []
    pts = list(skeleton.basket)
    for N in range(2, N_max + 1):
        for lp in _assignments(skeleton, N):
            orders = [_order(x, p.r) for p, x in zip(pts, lp)]
            L = lcm(*orders) if orders else 1
            if exact_order and L != N:
                continue
            if not exact_order and N % L:
                continue
            if not torsion_chi_ok(skeleton, N, lp):
                continue
            td = TorsionData(N, lp)
            if anticanonical and not anticanonical_consistent(skeleton, td):
                continue
            if not vanishing_ok(RRContext(skeleton, td)):
                continue
            out.append(td)
    return out


def coprime_shifts(q: int, N: int) -> list[int]:
    """Shifts A -> A + sT that keep -K ~ qA."""
    return [s for s in range(N) if (q * s) % N == 0]


def transform(coeffs: tuple[tuple[int, ...], ...], u: int, s: int) -> tuple[tuple[int, ...], ...]:
    """Relabel sigma -> sigma^u after shifting A -> A + sT."""
    N = len(coeffs[0])
    out = []
    for m, row in enumerate(coeffs):
        new = [0] * N
        for j, v in enumerate(row):
            new[(u * (j + s * m)) % N] = v
        out.append(tuple(new))
    return tuple(out)


def canonicalize_grading(table: HilbertTable, shifts: Iterable[int] | None = None) -> HilbertTable:
    """Lexicographically smallest table over relabelings and the given shifts (default all)."""
    N = table.N
    if N == 1:
        return table
    shifts = list(range(N)) if shifts is None else sorted({s % N for s in shifts})
    best = min(transform(table.coeffs, u, s)
               for u in range(1, N) if gcd(u, N) == 1 for s in shifts)
    return HilbertTable(best)
