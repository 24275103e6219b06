"""Run every shipped preset and diff it against the transcribed reference tables.

    python3 scripts/reproduce_tables.py [--only prop4,prop3] [--out results/]
"""
from __future__ import annotations

import argparse
import time
from pathlib import Path

from qfano.census import run_many
from qfano.presets import available, load_preset
from qfano.records import diff_runs, load_records, to_tabular

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"
REFERENCE = {
    "prop-tor": "prop_tor.tsv", "prop-qw-neq-qq": "prop_qw_neq_qq.tsv",
    "prop-tor-new": "prop_tor_new.tsv", "cor-q6-7": "cor_q6_7.tsv", "prop5": "prop5.tsv",
    "prop4": "prop4.tsv", "prop4-relaxed": "prop4.tsv", "prop3": "prop3.tsv",
    "prop3-shortlist": "prop3_shortlist.tsv",
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--only", help="comma-separated preset names")
    ap.add_argument("--out", type=Path, help="directory for per-preset TSV output")
    a = ap.parse_args()
    names = a.only.split(",") if a.only else available()
    if a.out:
        a.out.mkdir(parents=True, exist_ok=True)
    for name in names:
        t0 = time.perf_counter()
        cands = run_many(load_preset(name).configs())
        dt = time.perf_counter() - t0
        ref = REFERENCE.get(name)
        status = "no reference"
        if ref:
            rep = diff_runs(cands, load_records(FIXTURES / ref))
            status = "match" if rep.clean else rep.render().replace("\n", "; ")
        print(f"{name:16s} {len(cands):3d} rows  {dt:6.1f}s  {status}")
        for c in cands:
            print(f"    q={c.q} N={c.N} A3={c.A3} {c.basket.short()} g={c.genus} "
                  f"p={','.join(map(str, c.p[:4]))}")
        if a.out:
            (a.out / f"{name}.tsv").write_text(to_tabular(cands))


if __name__ == "__main__":
    main()
