"""JSON Schemas for every document the command line emits."""

from __future__ import annotations

import json
from importlib import resources

NAMES = ("report", "pairs", "geom_check", "hurwitz_returns", "hurwitz_report", "error")


def load(name: str) -> dict:
    text = resources.files(__name__).joinpath(f"{name}.json").read_text(encoding="utf-8")
    return json.loads(text)
