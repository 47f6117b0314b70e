"""Bundled nine-field flight-search example with its gold tree and merge trace."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from ..documents import load_layout_doc
from ..model import Layout, QueryTree, parse_tree


def fixture_path(name: str) -> Path:
    """On-disk path of a bundled fixture file, for command-line use."""
    return Path(str(resources.files(__package__).joinpath(name)))


def _read(name: str) -> object:
    return json.loads(resources.files(__package__).joinpath(name).read_text(encoding="utf-8"))


def flight_layout() -> Layout:
    return load_layout_doc(_read("flight_search.layout.json"))


def flight_gold() -> QueryTree:
    return parse_tree(_read("flight_search.gold.json"))


def flight_trace() -> dict:
    """The recorded round-by-round radii and merges for the flight fixture."""
    trace = _read("flight_search.trace.json")
    assert isinstance(trace, dict)
    return trace
