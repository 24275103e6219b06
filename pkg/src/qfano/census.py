"""Full candidate pipeline: baskets -> skeletons -> torsion -> Hilbert tables -> filters."""
from __future__ import annotations

import hashlib
import json
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations_with_replacement
from math import floor, gcd
from typing import Iterable, Iterator

from .baskets import (ALLOWED_Q, KAWAMATA_BOUND, Basket, Mode, NumericalSkeleton,
                      enumerate_baskets, kawamata_defect, local_classes)
from .filters import FilterExpr
from .rr import (CandidateRejected, HilbertTable, RRContext, genus, hilbert_table,
                 reid_table, vanishing_ok)
from .torsion import TorsionData, canonicalize_grading, coprime_shifts, enumerate_torsion

WORKERS_ENV = "QFANO_WORKERS"


@dataclass(frozen=True)
class Candidate:
    skeleton: NumericalSkeleton
    torsion: TorsionData | None
    genus: int
    table: HilbertTable
    p: tuple[int, ...]
    id: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "id", candidate_id(self))

    @property
    def N(self) -> int:
        return 1 if self.torsion is None else self.torsion.N

    @property
    def q(self) -> int:
        return self.skeleton.q

    @property
    def basket(self) -> Basket:
        return self.skeleton.basket

    @property
    def A3(self) -> Fraction:
        return self.skeleton.A3

    def key(self) -> tuple:
        """Numerical identity: two candidates with equal keys are indistinguishable."""
        return (self.q, self.skeleton.qW_equals_qQ, self.N, self.A3,
                self.basket, self.table.coeffs)

    def sort_key(self) -> tuple:
        sk = self.skeleton
        lp = self.torsion.lprime if self.torsion else ()
        return (sk.q, not sk.qW_equals_qQ, self.N, sk.A3, sk.basket.points,
                self.table.coeffs, sk.l, lp)


def canonical_record(c: Candidate) -> dict:
    sk = c.skeleton
    return {
        "q": sk.q,
        "mode": sk.mode,
        "basket": str(sk.basket),
        "l": list(sk.l),
        "A3": str(sk.A3),
        "Ac2": str(sk.Ac2),
        "N": c.N,
        "lprime": list(c.torsion.lprime) if c.torsion else [],
        "genus": c.genus,
        "p": list(c.p),
        "table": [list(row) for row in c.table.coeffs],
    }


def candidate_id(c: Candidate) -> str:
    blob = json.dumps(canonical_record(c), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class CensusConfig:
    q: int
    mode: Mode = "coprime"
    torsion: int | None = None          # N_max; None means torsion-free only
    include_torsion_free: bool = False  # with torsion on, also emit N = 1
    filter: FilterExpr = field(default_factory=FilterExpr)
    series_terms: int = 10
    max_defect: Fraction = KAWAMATA_BOUND
    max_index: int | None = None
    exact_order: bool = True
    anticanonical: bool = False
    workers: int | None = None

    def __post_init__(self) -> None:
        if self.q not in ALLOWED_Q:
            raise ValueError(f"q={self.q} is not an admissible Q-Fano index {ALLOWED_Q}")
        if self.mode not in ("coprime", "general"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.torsion is not None and self.torsion < 2:
            raise ValueError("torsion N_max must be >= 2")
        if self.mode == "general" and self.torsion is None:
            raise ValueError("general mode (qW != qQ) needs torsion on")
        if self.series_terms < 5:
            raise ValueError("series_terms must be >= 5")

    def digest(self) -> dict:
        return {
            "q": self.q, "mode": self.mode, "torsion": self.torsion,
            "include_torsion_free": self.include_torsion_free,
            "filter": self.filter.source, "series_terms": self.series_terms,
            "max_defect": str(self.max_defect), "max_index": self.max_index,
            "exact_order": self.exact_order, "anticanonical": self.anticanonical,
        }


def _scaled_group_sums(q: int, r: int, b: int, k: int, D: int) -> list[tuple[int, tuple[int, ...]]]:
    """(D * sum of c(-l), l-multiset) for every multiset of k local classes at (r, b)."""
    t = reid_table(r, b)
    vals = [int(t[(-x) % r] * D) for x in range(r)]
    return [(sum(vals[x] for x in combo), combo)
            for combo in combinations_with_replacement(range(r), k)]


def general_local_classes(q: int, basket: Basket) -> Iterator[tuple[int, ...]]:
    """Local classes whose A^3 is positive, satisfies BMY and has r*A^3 integral.

    Equivalent to filtering local_classes(q, basket, "general") by those three
    conditions, but pruned with interval bounds on sum c(-l).
    """
    R = basket.gorenstein_index
    D = 12 * R
    mkc2 = KAWAMATA_BOUND - kawamata_defect(basket)
    Ac2 = mkc2 / q
    scale = Fraction(12, (q - 1) * (q - 2))
    bound = Fraction(25, 8) * mkc2 if q in (4, 5) else 3 * mkc2
    # A3 = scale * (1 - Ac2/12 + S), S = sum c(-l); need 0 < A3 and q^3 A3 <= bound
    lo = (Ac2 / 12 - 1) * D
    hi = (bound / q ** 3 / scale + Ac2 / 12 - 1) * D
    lo_i, hi_i = floor(lo) + 1, floor(hi)

    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for pos, p in enumerate(basket):
        groups[(p.r, p.b)].append(pos)
    keys = sorted(groups)
    opts = [_scaled_group_sums(q, r, b, len(groups[(r, b)]), D) for r, b in keys]
    # suffix bounds for pruning
    smin = [0] * (len(opts) + 1)
    smax = [0] * (len(opts) + 1)
    for i in range(len(opts) - 1, -1, -1):
        smin[i] = smin[i + 1] + min(v for v, _ in opts[i])
        smax[i] = smax[i + 1] + max(v for v, _ in opts[i])
    n = len(basket)
    chosen: list[tuple[int, ...]] = [()] * len(opts)

    def rec(i: int, acc: int) -> Iterator[tuple[int, ...]]:
        if acc + smax[i] < lo_i or acc + smin[i] > hi_i:
            return
        if i == len(opts):
            A3 = scale * (1 - Ac2 / 12 + Fraction(acc, D))
            if (R * A3).denominator != 1:
                return
            l = [0] * n
            for key, combo in zip(keys, chosen):
                for pos, x in zip(groups[key], combo):
                    l[pos] = x
            yield tuple(l)
            return
        for v, combo in opts[i]:
            chosen[i] = combo
            yield from rec(i + 1, acc + v)

    yield from rec(0, 0)


def _skeletons(cfg: CensusConfig, basket: Basket) -> Iterator[NumericalSkeleton]:
    q = cfg.q
    if cfg.mode == "coprime":
        for l in local_classes(q, basket, "coprime"):
            yield NumericalSkeleton.build(q, basket, l, True)
        return
    if gcd(q, basket.gorenstein_index) == 1:
        return
    for l in general_local_classes(q, basket):
        yield NumericalSkeleton.build(q, basket, l, False)


def _genus_ok(sk: NumericalSkeleton) -> int | None:
    try:
        return genus(RRContext(sk))
    except CandidateRejected:
        return None


def _candidates_for_basket(cfg: CensusConfig, basket: Basket) -> list[Candidate]:
    out: list[Candidate] = []
    for sk in _skeletons(cfg, basket):
        if not sk.passes_index_filters():
            continue
        g = _genus_ok(sk)
        if g is None:
            continue
        plain = RRContext(sk, None, cfg.series_terms)
        if not vanishing_ok(plain):
            continue
        contexts: list[RRContext] = []
        if sk.qW_equals_qQ and (cfg.torsion is None or cfg.include_torsion_free):
            contexts.append(plain)
        if cfg.torsion is not None:
            for td in enumerate_torsion(sk, cfg.torsion, exact_order=cfg.exact_order,
                                        anticanonical=cfg.anticanonical):
                contexts.append(RRContext(sk, td, cfg.series_terms))
        for ctx in contexts:
            try:
                table = hilbert_table(ctx)
            except CandidateRejected:
                continue
            if ctx.torsion is not None:
                shifts = coprime_shifts(sk.q, ctx.N) if sk.qW_equals_qQ else None
                table = canonicalize_grading(table, shifts)
            p = tuple(max(row) for row in table.coeffs[1:])
            out.append(Candidate(sk, ctx.torsion, g, table, p))
    return out


def _worker(args: tuple[CensusConfig, list[Basket]]) -> list[Candidate]:
    cfg, baskets = args
    out: list[Candidate] = []
    for b in baskets:
        out.extend(_candidates_for_basket(cfg, b))
    return out


def resolve_workers(requested: int | None) -> int:
    if requested is not None:
        return max(1, requested)
    env = os.environ.get(WORKERS_ENV, "").strip()
    return max(1, int(env)) if env.isdigit() else 1


def merge(candidates: Iterable[Candidate]) -> list[Candidate]:
    """Deduplicate numerically identical candidates and sort canonically."""
    best: dict[tuple, Candidate] = {}
    for c in sorted(candidates, key=Candidate.sort_key):
        best.setdefault(c.key(), c)
    return sorted(best.values(), key=Candidate.sort_key)


def run_census(cfg: CensusConfig) -> list[Candidate]:
    baskets = list(enumerate_baskets(cfg.max_defect, cfg.max_index))
    workers = resolve_workers(cfg.workers)
    if workers == 1:
        found = _worker((cfg, baskets))
    else:
        chunks = [baskets[i::workers * 4] for i in range(workers * 4)]
        with ProcessPoolExecutor(workers) as pool:
            found = [c for part in pool.map(_worker, [(cfg, ch) for ch in chunks]) for c in part]
    return [c for c in merge(found) if cfg.filter(c)]


def run_many(configs: Iterable[CensusConfig]) -> list[Candidate]:
    found: list[Candidate] = []
    for cfg in configs:
        found.extend(run_census(cfg))
    return merge(found)


def with_filter(cfg: CensusConfig, expr: FilterExpr) -> CensusConfig:
    return replace(cfg, filter=cfg.filter & expr)
