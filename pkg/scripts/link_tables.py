"""Solve the link relation for the candidates of a preset and print the solution table.

    python3 scripts/link_tables.py                 # q=5, n=2 table for the prop5a candidates
    python3 scripts/link_tables.py --q 4 --n 1 --basket 7:3 --p 2,5,9 --rules prop4
"""
from __future__ import annotations

import argparse

from qfano.baskets import Basket
from qfano.census import run_many
from qfano.presets import load_preset
from qfano.sarkisov import RULE_PRESETS, LinkInput, solve_links


def show(label: str, inp: LinkInput) -> None:
    sols = solve_links(inp)
    print(f"{label}: {len(sols)} solution(s)")
    for s in sols:
        cols = " ".join(f"s{k}={s.s_of(k)} b{k}={s.b(k)}" for k in inp.ks)
        print(f"    r={s.r} alpha={s.alpha} e={s.e} qhat={s.qhat} {s.kind:10s} {cols} "
              f"m={s.m_of(inp.n)}")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", default="prop5a")
    ap.add_argument("--q", type=int)
    ap.add_argument("--n", type=int, default=1)
    ap.add_argument("--basket")
    ap.add_argument("--p", default="")
    ap.add_argument("--rules", default="standard")
    a = ap.parse_args()
    if a.basket:
        p = [int(x) for x in a.p.split(",") if x]
        inp = LinkInput.from_basket(a.q, a.n, Basket.parse(a.basket), p=p,
                                    rules=RULE_PRESETS[a.rules])
        show(a.basket, inp)
        return
    preset = load_preset(a.preset)
    L = preset.links
    if not L:
        raise SystemExit(f"preset {a.preset} carries no link settings")
    rows = set()
    for c in run_many(preset.configs()):
        inp = LinkInput.from_basket(c.q, L["n"], c.basket, kind=L["kind"], p=c.p,
                                    min_index=L["min_index"], ks=L["ks"],
                                    rules=RULE_PRESETS[L["rules"]])
        show(f"{c.basket.short()} A3={c.A3} p={c.p[:3]}", inp)
        rows |= {(s.r, s.s_of(L["n"]), s.qhat, s.alpha, s.b(1), s.b(2), s.m_of(L["n"]))
                 for s in solve_links(inp)}
    print("\nr  s2 qhat alpha beta1 beta2 m")
    for r in sorted(rows):
        print("  ".join(str(x) for x in r))


if __name__ == "__main__":
    main()
