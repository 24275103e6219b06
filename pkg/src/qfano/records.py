"""Candidate export (structured and tabular), reference files and run diffs."""
from __future__ import annotations

import csv
import io
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .census import Candidate, canonical_record

TABLE_COLUMNS = ("q", "mode", "basket", "A3", "N", "genus", "p1", "p2", "p3", "p4", "p5",
                 "series", "id")


class ReferenceError(ValueError):
    pass


def to_structured(cands: Iterable[Candidate]) -> str:
    lines = []
    for c in cands:
        rec = canonical_record(c)
        rec["id"] = c.id
        lines.append(json.dumps(rec, sort_keys=True, separators=(",", ":")))
    return "".join(line + "\n" for line in lines)


def series_cell(rows: Sequence[Sequence[int]]) -> str:
    """Rows separated by ';', torsion columns by spaces."""
    return ";".join(" ".join(str(v) for v in row) for row in rows)


def parse_series_cell(text: str) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row.split()) for row in text.split(";") if row.strip())


def to_tabular(cands: Iterable[Candidate]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter="\t", lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for c in cands:
        p = list(c.p[:5]) + [""] * (5 - len(c.p[:5]))
        w.writerow([c.q, c.skeleton.mode, str(c.basket), str(c.A3), c.N, c.genus, *p,
                    series_cell(c.table.coeffs), c.id])
    return buf.getvalue()


_EXP = re.compile(r"^(\d+)\^(\d+)$")


def parse_basket_key(text: str) -> tuple[tuple[int, int | None], ...]:
    """'2:1,9:4', '2,9', '(2^2,3,9)' or '-' as a sorted tuple of (r, b-or-None)."""
    text = text.strip().strip("()")
    if text in ("", "-", "∅"):
        return ()
    out: list[tuple[int, int | None]] = []
    for tok in text.split(","):
        tok = tok.strip()
        m = _EXP.match(tok)
        if m:
            out.extend([(int(m.group(1)), None)] * int(m.group(2)))
        elif ":" in tok:
            r, b = (int(x) for x in tok.split(":"))
            out.append((r, min(b % r, r - b % r)))
        else:
            out.append((int(tok), None))
    return tuple(sorted(out, key=lambda x: (x[0], x[1] or 0)))


@dataclass(frozen=True)
class Row:
    q: int
    basket: tuple[tuple[int, int | None], ...]
    A3: Fraction
    N: int
    genus: int
    extra: dict = field(default_factory=dict, compare=False, hash=False)

    def key(self, loose: bool) -> tuple:
        b = tuple(sorted(r for r, _ in self.basket)) if loose else self.basket
        return (self.q, b, self.A3, self.N, self.genus)

    @property
    def has_b(self) -> bool:
        return all(b is not None for _, b in self.basket)


def row_of(c: Candidate) -> Row:
    return Row(c.q, tuple((p.r, p.b) for p in c.basket), c.A3, c.N, c.genus,
               {"id": c.id, "p": list(c.p)})


def _row_from_mapping(d: dict, where: str) -> Row:
    try:
        return Row(int(d["q"]), parse_basket_key(str(d["basket"])), Fraction(str(d["A3"])),
                   int(d.get("N") or 1), int(d["genus"]),
                   {k: v for k, v in d.items() if k not in ("q", "basket", "A3", "N", "genus")})
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise ReferenceError(f"{where}: cannot read row ({exc})") from None


def parse_records(text: str, where: str = "<text>") -> list[Row]:
    """Read either export format; '#' lines are comments."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        return []
    if lines[0].lstrip().startswith("{"):
        rows = []
        for i, ln in enumerate(lines, 1):
            try:
                d = json.loads(ln)
            except json.JSONDecodeError as exc:
                raise ReferenceError(f"{where}:{i}: {exc.msg}") from None
            rows.append(_row_from_mapping(d, f"{where}:{i}"))
        return rows
    reader = csv.DictReader(lines, delimiter="\t")
    missing = {"q", "basket", "A3", "genus"} - set(reader.fieldnames or ())
    if missing:
        raise ReferenceError(f"{where}: missing columns {sorted(missing)}")
    return [_row_from_mapping(d, f"{where}:{i}") for i, d in enumerate(reader, 2)]


def load_records(path: str | Path) -> list[Row]:
    p = Path(path)
    return parse_records(p.read_text(), str(p))


@dataclass
class DiffReport:
    matched: list[tuple]
    missing: list[tuple]
    extra: list[tuple]

    @property
    def clean(self) -> bool:
        return not self.missing and not self.extra

    def render(self) -> str:
        def fmt(k: tuple) -> str:
            q, b, A3, N, g = k
            bs = ",".join(str(x) if not isinstance(x, tuple) else
                          (f"{x[0]}:{x[1]}" if x[1] is not None else str(x[0])) for x in b) or "-"
            return f"q={q} basket=({bs}) A3={A3} N={N} genus={g}"
        out = [f"matched {len(self.matched)}, missing {len(self.missing)}, extra {len(self.extra)}"]
        out += [f"missing: {fmt(k)}" for k in self.missing]
        out += [f"extra: {fmt(k)}" for k in self.extra]
        return "\n".join(out)


def diff_runs(run: Iterable[Candidate | Row], reference: Iterable[Row] | str | Path) -> DiffReport:
    """Multiset comparison on (q, basket, A3, N, genus).

    When any basket in either side lists only indices, baskets are compared by index.
    """
    if isinstance(reference, (str, Path)):
        reference = load_records(reference)
    ref = list(reference)
    got = [row_of(x) if isinstance(x, Candidate) else x for x in run]
    loose = not all(r.has_b for r in ref + got)
    a = Counter(r.key(loose) for r in got)
    b = Counter(r.key(loose) for r in ref)
    matched = sorted((a & b).elements(), key=str)
    missing = sorted((b - a).elements(), key=str)
    extra = sorted((a - b).elements(), key=str)
    return DiffReport(matched, missing, extra)
