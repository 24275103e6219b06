"""Named search configurations shipped as JSON data files."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from ..census import CensusConfig
from ..filters import FilterExpr


@dataclass(frozen=True)
class Preset:
    name: str
    version: int
    description: str
    runs: tuple[dict, ...]
    links: dict = field(default_factory=dict)

    def configs(self, q: list[int] | None = None, torsion: int | None | str = "keep",
                extra_filter: FilterExpr | None = None, series_terms: int = 10,
                workers: int | None = None) -> list[CensusConfig]:
        """Expand into census configs; q and torsion override the stored values."""
        out = []
        for run in self.runs:
            qs = run["q"] if q is None else [x for x in q if x in run["q"]]
            flt = FilterExpr(run.get("filter", "True"))
            if extra_filter is not None:
                flt = flt & extra_filter
            tors = run.get("torsion") if torsion == "keep" else torsion
            for qq in qs:
                out.append(CensusConfig(
                    q=qq, mode=run.get("mode", "coprime"), torsion=tors,
                    include_torsion_free=run.get("include_torsion_free", False),
                    filter=flt, series_terms=series_terms, workers=workers))
        return out


def available() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__package__).iterdir()
                  if p.name.endswith(".json"))


def load_preset(name: str) -> Preset:
    path = resources.files(__package__) / f"{name}.json"
    if not path.is_file():
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(available())}")
    d = json.loads(path.read_text())
    return Preset(d["name"], d["version"], d["description"], tuple(d["runs"]), d.get("links", {}))
