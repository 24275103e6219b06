"""Command-line front end: census, hilbert, links, blowdowns, wps, diff."""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .baskets import Basket, NumericalSkeleton
from .census import CensusConfig, run_many
from .filters import FilterError, FilterExpr
from .presets import available, load_preset
from .records import ReferenceError, diff_runs, load_records, to_structured, to_tabular
from .rr import RRContext, euler_char, reid_table
from .sarkisov import RULE_PRESETS, LinkInput, p3_blowdown_enum, solve_links
from .torsion import TorsionData
from .wps import WeightedFamily, series


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _basket(text: str) -> Basket:
    try:
        return Basket.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def stamp(payload: object) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return f"# qfano {__version__} config={hashlib.sha256(blob.encode()).hexdigest()[:16]}"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_census(a: argparse.Namespace) -> int:
    torsion: int | None | str
    if a.torsion is None:
        torsion = "keep" if a.preset else None
    elif a.torsion == "off":
        torsion = None
    else:
        try:
            torsion = int(a.torsion)
        except ValueError:
            raise UsageError(f"--torsion expects N_MAX or off, got {a.torsion!r}")
    extra = FilterExpr.all_of(a.filter) if a.filter else None
    if a.preset:
        try:
            preset = load_preset(a.preset)
        except KeyError as exc:
            raise UsageError(str(exc.args[0]))
        configs = preset.configs(q=a.q, torsion=torsion, extra_filter=extra,
                                 series_terms=a.terms)
    else:
        if not a.q:
            raise UsageError("census needs --q or --preset")
        configs = [CensusConfig(q=q, mode=a.mode, torsion=torsion,  # type: ignore[arg-type]
                                include_torsion_free=a.with_torsion_free,
                                filter=extra or FilterExpr(), series_terms=a.terms)
                   for q in a.q]
    cands = run_many(configs)
    body = to_structured(cands) if a.format == "structured" else to_tabular(cands)
    _emit(stamp([c.digest() for c in configs]) + "\n" + body, a.out)
    return 0


def cmd_hilbert(a: argparse.Namespace) -> int:
    sk = NumericalSkeleton.build(a.q, a.basket, tuple(a.l) if a.l else None,
                                 qW_equals_qQ=not a.l)
    td = None
    if a.torsion:
        n, _, lp = a.torsion.partition(":")
        td = TorsionData(int(n), tuple(_ints(lp)))
        if len(td.lprime) != len(sk.basket):
            raise UsageError("--torsion needs one l' per basket point")
    ctx = RRContext(sk, td, a.terms)
    g = Fraction(sk.q ** 3, 2) * sk.A3 + 1 - sum(
        (Fraction(p.b * (p.r - p.b), 2 * p.r) for p in sk.basket), Fraction(0))
    rows = [[euler_char(ctx, m, j) for j in range(ctx.N)] for m in range(a.terms + 1)]
    print(stamp({"q": a.q, "basket": str(a.basket), "l": list(sk.l),
                 "torsion": a.torsion, "terms": a.terms}))
    print(f"q\t{sk.q}")
    print(f"basket\t{sk.basket}")
    print(f"l\t{','.join(map(str, sk.l))}")
    print(f"A3\t{sk.A3}")
    print(f"Ac2\t{sk.Ac2}")
    print(f"genus\t{g}")
    vanish = all(euler_char(ctx, m, j) == 0 for m in range(-sk.q + 1, 0) for j in range(ctx.N))
    print(f"vanishing\t{'ok' if vanish else 'fails'}")
    print("p\t" + " ".join(str(r[0]) for r in rows[1:]))
    for m, r in enumerate(rows):
        print(f"h{m}\t" + " ".join(str(v) for v in r))
    return 0


def cmd_links(a: argparse.Namespace) -> int:
    caps = dict(kv.split("=") for kv in a.caps.split(",")) if a.caps else {}
    bad = set(caps) - {"e_max", "beta_den_max"}
    if bad:
        raise UsageError(f"unknown caps {sorted(bad)}")
    rules = RULE_PRESETS.get(a.rules)
    if rules is None:
        raise UsageError(f"unknown rules {a.rules!r}; choose from {', '.join(RULE_PRESETS)}")
    p = a.p
    if p is None:
        sk = NumericalSkeleton.build(a.q, a.basket)
        ctx = RRContext(sk, None, max(a.n, 5))
        p = [int(euler_char(ctx, m)) for m in range(1, max(a.n, 5) + 1)]
    inp = LinkInput.from_basket(
        a.q, a.n, a.basket, kind=a.kind, p=p, min_index=a.min_index, gorenstein=a.gorenstein,
        ks=a.ks or (), rules=rules,
        e_max=int(caps["e_max"]) if "e_max" in caps else None,
        beta_den_max=int(caps["beta_den_max"]) if "beta_den_max" in caps else None)
    sols = solve_links(inp)
    print(stamp({"q": a.q, "n": a.n, "basket": str(a.basket), "kind": a.kind,
                 "rules": a.rules, "caps": caps, "ks": list(inp.ks)}))
    head = ["r", "alpha", "e", "qhat", "kind"]
    for k in inp.ks:
        head += [f"s{k}", f"beta{k}", f"m{k}"]
    print("\t".join(head))
    for s in sols:
        row = [str(s.r), str(s.alpha), str(s.e), str(s.qhat), s.kind]
        for k in inp.ks:
            m = s.m_of(k)
            row += [str(s.s_of(k)), str(s.b(k)), "-" if m is None else str(m)]
        print("\t".join(row))
    return 0


def cmd_blowdowns(a: argparse.Namespace) -> int:
    print(stamp({"divisibility": a.divisibility}))
    print("w1\tw2\tA3\tgenus")
    for w1, w2, A3, g in p3_blowdown_enum(a.divisibility):
        print(f"{w1}\t{w2}\t{A3}\t{g}")
    return 0


def cmd_wps(a: argparse.Namespace) -> int:
    fam = WeightedFamily(tuple(a.weights), tuple(a.degrees or ()))
    print(" ".join(str(c) for c in series(fam, a.terms)))
    return 0


def cmd_diff(a: argparse.Namespace) -> int:
    report = diff_runs(load_records(a.against), load_records(a.reference))
    print(report.render())
    return 0 if report.clean else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qfano", description=__doc__)
    ap.add_argument("--version", action="version", version=f"qfano {__version__}")
    sub = ap.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("census", help="enumerate numerical candidates")
    c.add_argument("--q", type=_ints, help="Q-Fano index, or a comma list")
    c.add_argument("--mode", choices=("coprime", "general"), default="coprime")
    c.add_argument("--torsion", help="N_MAX or off")
    c.add_argument("--with-torsion-free", action="store_true",
                   help="with torsion on, also list torsion-free candidates")
    c.add_argument("--preset", help=f"one of: {', '.join(available())}")
    c.add_argument("--filter", action="append", help="filter expression (repeatable)")
    c.add_argument("--terms", type=int, default=10)
    c.add_argument("--format", choices=("table", "structured"), default="table")
    c.add_argument("--out")
    c.set_defaults(func=cmd_census)

    h = sub.add_parser("hilbert", help="Riemann-Roch invariants of one skeleton")
    h.add_argument("--q", type=int, required=True)
    h.add_argument("--basket", type=_basket, required=True)
    h.add_argument("--l", type=_ints)
    h.add_argument("--torsion", help="N:LP,LP,...")
    h.add_argument("--terms", type=int, default=10)
    h.set_defaults(func=cmd_hilbert)

    k = sub.add_parser("links", help="solve the Sarkisov-link relation")
    k.add_argument("--q", type=int, required=True)
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--basket", type=_basket, required=True)
    k.add_argument("--ks", type=_ints, help="degrees k to evaluate besides n")
    k.add_argument("--p", type=_ints, help="p_1,p_2,... (default: from Riemann-Roch)")
    k.add_argument("--kind", choices=("cyclic", "cA", "free"), default="cyclic")
    k.add_argument("--min-index", type=int, default=2)
    k.add_argument("--gorenstein", type=int, default=0, help="also blow up a Gorenstein point, alpha <= this")
    k.add_argument("--caps", help="e_max=..,beta_den_max=..")
    k.add_argument("--rules", default="standard")
    k.set_defaults(func=cmd_links)

    b = sub.add_parser("blowdowns", help="weighted blowups of P^3 with divisible -K")
    b.add_argument("--divisibility", type=int, required=True)
    b.set_defaults(func=cmd_blowdowns)

    w = sub.add_parser("wps", help="Hilbert series of a weighted complete intersection")
    w.add_argument("--weights", type=_ints, required=True)
    w.add_argument("--degrees", type=_ints)
    w.add_argument("--terms", type=int, required=True)
    w.set_defaults(func=cmd_wps)

    d = sub.add_parser("diff", help="compare a run with a reference list")
    d.add_argument("--reference", required=True)
    d.add_argument("--against", required=True)
    d.set_defaults(func=cmd_diff)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        return a.func(a)
    except (UsageError, FilterError, ReferenceError, ValueError, KeyError, OSError) as exc:
        ap.error(str(exc))
    return 2


if __name__ == "__main__":
    sys.exit(main())
