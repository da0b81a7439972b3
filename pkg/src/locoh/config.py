"""Run configuration: built-in defaults, then the file named by LOCOH_CONFIG, then flags.

The file is plain ``key = value`` lines; ``#`` starts a comment.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, fields, replace

from .cohomology import DEFAULT_UNKNOWN_CAP
from .groups import DEFAULT_CLOSURE_CAP
from .oracle import ORACLE_MAX_GROUP, ORACLE_MAX_MODULE

ENV_VAR = "LOCOH_CONFIG"


@dataclass(frozen=True)
class RunConfig:
    closure_cap: int = DEFAULT_CLOSURE_CAP
    unknown_cap: int = DEFAULT_UNKNOWN_CAP
    oracle_max_group: int = ORACLE_MAX_GROUP
    oracle_max_module: int = ORACLE_MAX_MODULE
    jobs: int = 1
    output: str | None = None

    def __post_init__(self):
        for f in ("closure_cap", "unknown_cap", "oracle_max_group", "oracle_max_module", "jobs"):
            if getattr(self, f) < 1:
                raise ValueError(f"{f} must be positive")

    def override(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def parse_config_text(text: str) -> dict:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",))
    cp.read_string("[locoh]\n" + text)
    known = {f.name: f.type for f in fields(RunConfig)}
    out = {}
    for key, raw in cp["locoh"].items():
        key = key.replace("-", "_")
        if key not in known:
            raise ValueError(f"unknown config key {key!r}")
        out[key] = raw if key == "output" else int(raw)
    return out


def load_config(path: str | None = None) -> RunConfig:
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return RunConfig()
    with open(path) as fh:
        return RunConfig(**parse_config_text(fh.read()))


__all__ = ["RunConfig", "load_config", "parse_config_text", "ENV_VAR"]
