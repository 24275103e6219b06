"""Numerical Sarkisov links: solutions of k*qhat = q*s_k + (q*beta_k - k*alpha)*e."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd
from typing import Iterable, Literal

from .baskets import KAWAMATA_BOUND, Basket, BasketPoint, NumericalSkeleton, kawamata_defect
from .rr import RRContext, genus

QHAT_VALUES = (1, 2, 3, 4, 5, 6, 7, 8, 9, 11, 13, 17, 19)
FIBRATION_QHAT = (1, 2, 3)
PointKind = Literal["cyclic", "cA", "gorenstein", "free"]


def local_mult(q: int, n: int, r: int) -> int | None:
    """Smallest 0 < m < r with m*q = n mod r, so that nA ~ m(-K) near a point of index r."""
    if r < 2:
        raise ValueError("r must be >= 2")
    for m in range(1, r):
        if (m * q - n) % r == 0:
            return m
    return None


def discrepancy_candidates(point: BasketPoint | int, kind: PointKind = "cyclic", *,
                           npoints: int = 1, alpha_max: int = 1,
                           a_max: int | None = None) -> set[Fraction]:
    """Possible discrepancies of an extremal blowup centred at the point.

    cyclic: 1/r.  cA: a/r with a | npoints.  gorenstein: 1..alpha_max.
    free: a/r for 1 <= a <= a_max (no restriction from the type of the point).
    """
    r = point.r if isinstance(point, BasketPoint) else int(point)
    if kind == "cyclic":
        return {Fraction(1, r)}
    if kind == "cA":
        if npoints < 1:
            raise ValueError("npoints must be >= 1")
        return {Fraction(a, r) for a in range(1, npoints + 1) if npoints % a == 0}
    if kind == "gorenstein":
        return {Fraction(a) for a in range(1, alpha_max + 1)}
    if kind == "free":
        if a_max is None:
            raise ValueError("free discrepancies need a_max")
        return {Fraction(a, r) for a in range(1, a_max + 1)}
    raise ValueError(f"unknown point kind {kind!r}")


@dataclass(frozen=True)
class RationalityRules:
    """Pruning: qhat >= cutoff is rational; qhat >= threshold needs s_k >= min_s for mobile k."""

    pairs: tuple[tuple[int, int], ...] = ()
    cutoff: int | None = 8
    nonrational: bool = True

    def __post_init__(self) -> None:
        th = [t for t, _ in self.pairs]
        if any(a >= b for a, b in zip(th, th[1:])):
            raise ValueError("rule thresholds must be strictly increasing")

    def min_s(self, qhat: int) -> int:
        need = 0
        for t, s in self.pairs:
            if qhat >= t:
                need = max(need, s)
        return need


RULE_PRESETS: dict[str, RationalityRules] = {
    "off": RationalityRules((), None, False),
    "standard": RationalityRules(((4, 2), (6, 3))),
    "prop3": RationalityRules(((4, 2), (7, 3))),
    "prop4": RationalityRules(((5, 2),)),
    "prop5": RationalityRules(((6, 2),)),
}


@dataclass(frozen=True)
class BlownPoint:
    r: int               # 1 for a Gorenstein centre
    alphas: tuple[Fraction, ...]


@dataclass(frozen=True)
class LinkInput:
    q: int
    n: int
    points: tuple[BlownPoint, ...]
    ks: tuple[int, ...] = ()              # degrees evaluated; n is always included
    mobile: tuple[int, ...] = ()          # k with p_k(X) >= 2; n is always mobile
    integral: tuple[int, ...] | None = None  # k with q*beta_k - k*alpha integral; None = all
    rules: RationalityRules = field(default_factory=RationalityRules)
    e_max: int | None = None
    beta_den_max: int | None = None

    def __post_init__(self) -> None:
        if not 1 <= self.n < self.q:
            raise ValueError("need 1 <= n < q")
        ks = tuple(sorted(set(self.ks) | {self.n}))
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "mobile", tuple(sorted(set(self.mobile) | {self.n})))
        if self.integral is None:
            object.__setattr__(self, "integral", ks)

    @classmethod
    def from_basket(cls, q: int, n: int, basket: Basket, *, kind: PointKind = "cyclic",
                    p: Iterable[int] = (), min_index: int = 2, gorenstein: int = 0,
                    coprime: bool = True, **kw) -> LinkInput:
        """Blown points at the basket indices >= min_index, plus Gorenstein centres if asked.

        p lists p_1, p_2, ... of X and fixes which degrees are mobile.
        """
        ks = tuple(kw.pop("ks", ()))
        cut = kw["rules"].cutoff if "rules" in kw else RationalityRules().cutoff
        qhat_max = max(v for v in QHAT_VALUES if cut is None or v < cut)
        pts: list[BlownPoint] = []
        for r in sorted(set(basket.indices)):
            if r < min_index:
                continue
            alphas = discrepancy_candidates(
                r, kind, npoints=basket.indices.count(r),
                a_max=n * qhat_max * r if kind == "free" else None)
            pts.append(BlownPoint(r, tuple(sorted(alphas))))
        if gorenstein:
            pts.append(BlownPoint(1, tuple(sorted(discrepancy_candidates(1, "gorenstein",
                                                                          alpha_max=gorenstein)))))
        mobile = tuple(k for k, v in enumerate(p, start=1) if v >= 2)
        return cls(q, n, tuple(pts), ks=ks, mobile=mobile,
                   integral=None if coprime else (), **kw)


@dataclass(frozen=True)
class LinkSolution:
    r: int
    alpha: Fraction
    e: int
    qhat: int
    beta: tuple[tuple[int, Fraction], ...]
    s: tuple[tuple[int, int], ...]
    m: tuple[tuple[int, int | None], ...]
    kind: Literal["birational", "fibration"]

    def b(self, k: int) -> Fraction:
        return dict(self.beta)[k]

    def s_of(self, k: int) -> int:
        return dict(self.s)[k]

    def m_of(self, k: int) -> int | None:
        return dict(self.m)[k]


def _qhat_range(inp: LinkInput) -> list[int]:
    cut = inp.rules.cutoff
    return [v for v in QHAT_VALUES if cut is None or v < cut]


def _default_e_max(inp: LinkInput, alpha: Fraction) -> int:
    # (q beta_n - n alpha) e <= n qhat and q beta_n - n alpha >= alpha (>= 1 if integral)
    low = Fraction(1) if inp.n in inp.integral else alpha
    return floor(inp.n * max(_qhat_range(inp)) / low)


def _tn_lower(inp: LinkInput, r: int, alpha: Fraction) -> Fraction:
    """Lower bound for q*beta_n - n*alpha from the ct bound and integrality."""
    low = alpha
    m = local_mult(inp.q, inp.n, r) if r >= 2 else None
    if m is not None:
        low = max(low, (inp.q * m - inp.n) * alpha)
    if inp.n in inp.integral:
        low = max(low, Fraction(1))
    return low


def _accept(inp: LinkInput, qhat: int, s: dict[int, int]) -> str | None:
    """Kind of the link, or None when the rules prune it."""
    rules = inp.rules
    if s[inp.n] == 0:
        allowed = (1,) if rules.nonrational else FIBRATION_QHAT
        return "fibration" if qhat in allowed else None
    if rules.nonrational:
        need = rules.min_s(qhat)
        for k in inp.mobile:
            if k in s and s[k] < max(1, need):
                return None
    return "birational"


def _k_options(inp: LinkInput, r: int, alpha: Fraction, e: int, qhat: int, k: int
               ) -> list[tuple[int, Fraction]]:
    q = inp.q
    m = local_mult(q, k, r) if r >= 2 else None
    out = []
    s_hi = floor((k * qhat + k * alpha * e) / q)
    for s in range(s_hi + 1):
        t = Fraction(k * qhat - q * s, e)       # q beta_k - k alpha
        beta = (t + k * alpha) / q
        if beta < 0 or (beta * r).denominator != 1:
            continue
        if inp.beta_den_max is not None and beta.denominator > inp.beta_den_max:
            continue
        if k in inp.integral and t.denominator != 1:
            continue
        if k == inp.n and t < alpha:
            continue
        if m is not None and k in inp.mobile and beta < m * alpha:
            continue
        out.append((s, beta))
    return out


def solve_links(inp: LinkInput) -> list[LinkSolution]:
    out: list[LinkSolution] = []
    top = inp.n * max(_qhat_range(inp))
    for pt in inp.points:
        for alpha in pt.alphas:
            low = _tn_lower(inp, pt.r, alpha)
            if low > top:
                continue
            e_max = floor(top / low)
            if inp.e_max is not None:
                e_max = min(e_max, inp.e_max)
            for e in range(1, e_max + 1):
                for qhat in _qhat_range(inp):
                    if low * e > inp.n * qhat:
                        continue
                    first = _k_options(inp, pt.r, alpha, e, qhat, inp.n)
                    if not first:
                        continue
                    per_k = [first if k == inp.n else _k_options(inp, pt.r, alpha, e, qhat, k)
                             for k in inp.ks]
                    combos: list[list[tuple[int, Fraction]]] = [[]]
                    for opts in per_k:
                        combos = [c + [o] for c in combos for o in opts]
                    for combo in combos:
                        s = {k: sv for k, (sv, _) in zip(inp.ks, combo)}
                        kind = _accept(inp, qhat, s)
                        if kind is None:
                            continue
                        out.append(LinkSolution(
                            pt.r, alpha, e, qhat,
                            tuple((k, b) for k, (_, b) in zip(inp.ks, combo)),
                            tuple(sorted(s.items())),
                            tuple((k, local_mult(inp.q, k, pt.r) if pt.r >= 2 else None)
                                  for k in inp.ks),
                            kind))
    out.sort(key=lambda x: (x.r, x.alpha, x.e, x.qhat, x.s, x.beta))
    return out


def brute_force_links(inp: LinkInput, beta_max: Fraction | None = None,
                      s_max: int | None = None) -> list[LinkSolution]:
    """Grid search over (alpha, e, qhat, beta_k, s_k) checking every condition directly."""
    q = inp.q
    out: list[LinkSolution] = []
    for pt in inp.points:
        r = pt.r
        for alpha in pt.alphas:
            e_max = inp.e_max if inp.e_max is not None else _default_e_max(inp, alpha)
            for e in range(1, e_max + 1):
                for qhat in _qhat_range(inp):
                    grids = []
                    for k in inp.ks:
                        bm = beta_max if beta_max is not None else Fraction(k * qhat, q) + k * alpha + 1
                        sm = s_max if s_max is not None else k * qhat
                        cells = []
                        for s in range(sm + 1):
                            for num in range(int(bm * r) + 1):
                                beta = Fraction(num, r)
                                if k * qhat != q * s + (q * beta - k * alpha) * e:
                                    continue
                                t = q * beta - k * alpha
                                if inp.beta_den_max is not None and beta.denominator > inp.beta_den_max:
                                    continue
                                if k in inp.integral and t.denominator != 1:
                                    continue
                                if k == inp.n and not t >= alpha > 0:
                                    continue
                                m = local_mult(q, k, r) if r >= 2 else None
                                if m is not None and k in inp.mobile and beta < m * alpha:
                                    continue
                                cells.append((s, beta))
                        grids.append(cells)
                    combos: list[list[tuple[int, Fraction]]] = [[]]
                    for cells in grids:
                        combos = [c + [x] for c in combos for x in cells]
                    for combo in combos:
                        s = {k: sv for k, (sv, _) in zip(inp.ks, combo)}
                        kind = _accept(inp, qhat, s)
                        if kind is None:
                            continue
                        out.append(LinkSolution(
                            r, alpha, e, qhat,
                            tuple((k, b) for k, (_, b) in zip(inp.ks, combo)),
                            tuple(sorted(s.items())),
                            tuple((k, local_mult(q, k, r) if r >= 2 else None) for k in inp.ks),
                            kind))
    out.sort(key=lambda x: (x.r, x.alpha, x.e, x.qhat, x.s, x.beta))
    return out


def predicted_torsion_order(d: int, e: int) -> int:
    """|Clt| of the target of a link from a torsion-free X."""
    if e <= 0 or d % e:
        raise ValueError(f"e={e} does not divide d={d}")
    return d // e


def p3_blowdown_enum(divisibility: int) -> list[tuple[int, int, Fraction, int]]:
    """Weighted blowups (1, w1, w2) of a smooth point of P^3 keeping -K divisible.

    Returns (w1, w2, A^3, genus) with A = -K/divisibility.
    """
    D = divisibility
    if D < 2:
        raise ValueError("divisibility must be >= 2")
    out = []
    # (w1+w2)^3/(w1 w2) >= 4(w1+w2), so w1 + w2 < 16
    for total in range(D, 16, D):
        for w1 in range(1, total // 2 + 1):
            w2 = total - w1
            if gcd(w1, w2) != 1:
                continue
            mk3 = 64 - Fraction(total ** 3, w1 * w2)
            if mk3 <= 0:
                continue
            pts = [BasketPoint(w, other % w) for w, other in ((w1, w2), (w2, w1)) if w > 1]
            basket = Basket(tuple(pts))
            A3 = mk3 / D ** 3
            mkc2 = KAWAMATA_BOUND - kawamata_defect(basket)
            sk = NumericalSkeleton(D, basket, (0,) * len(basket), A3, mkc2 / D, mkc2,
                                   basket.gorenstein_index, True)
            out.append((w1, w2, A3, genus(RRContext(sk))))
    return sorted(out)
