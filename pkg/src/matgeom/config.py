"""Run-time settings: enumeration caps, default seed, output directory.

Settings load from a JSON file such as::

    {"fields": {"4": "field p=2 k=2 poly=1,1,1"},
     "enumeration_cap": 10000000,
     "search_budget": 100000000,
     "seed": 0,
     "output_dir": "out"}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import MatGeomError


@dataclass(frozen=True)
class Config:
    field_table: str | None = None
    enumeration_cap: int = 10**7
    search_budget: int = 10**8
    seed: int = 0
    output_dir: str = "."
    jobs: int = 1
    fields: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.enumeration_cap <= 0 or self.search_budget <= 0:
            raise MatGeomError("caps must be positive")
        if self.jobs < 1:
            raise MatGeomError("jobs must be >= 1")


_current = Config()


def get() -> Config:
    return _current


def set_config(cfg: Config) -> Config:
    global _current
    _current = cfg
    return cfg


def update(**kwargs) -> Config:
    return set_config(replace(_current, **kwargs))


def load(path: str | Path) -> Config:
    """Read a JSON config file and install its field overrides."""
    from .fields import FieldSpec, override_fields

    raw = json.loads(Path(path).read_text())
    fields = {int(q): FieldSpec.parse(text) for q, text in raw.pop("fields", {}).items()}
    override_fields(fields)
    known = {k: raw[k] for k in ("enumeration_cap", "search_budget", "seed", "output_dir", "jobs") if k in raw}
    return set_config(Config(field_table=str(path), fields={q: f.to_text() for q, f in fields.items()}, **known))
