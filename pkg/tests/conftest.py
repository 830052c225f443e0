from __future__ import annotations

import csv
import json
from functools import lru_cache
from pathlib import Path

import pytest

from slicetorus.catalog import load_catalog
from slicetorus.diagram import parse_pd

FIXTURES = Path(__file__).parent / "fixtures"


@lru_cache(maxsize=None)
def catalog_rows() -> dict:
    return {e.name: e for e in load_catalog()}


@lru_cache(maxsize=None)
def extra_rows() -> dict:
    with open(FIXTURES / "knotinfo_extra.csv") as fh:
        return {r["name"]: r for r in csv.DictReader(fh)}


def knot(name: str):
    return parse_pd(catalog_rows()[name].pd, name=name)


def knot_names(max_crossings: int, include_unknot: bool = False) -> list[str]:
    out = []
    for name in catalog_rows():
        c = int(name.split("_")[0])
        if c == 0 and not include_unknot:
            continue
        if c <= max_crossings:
            out.append(name)
    return out


# at most 7 crossings plus the three non-QA knots from 8-9 crossings
PROPERTY_KNOTS = knot_names(7) + ["8_19", "9_42", "9_46"]


def knotinfo_jones(name: str) -> dict[int, int]:
    v = json.loads(extra_rows()[name]["jones_vector"])
    if isinstance(v, int):
        return {0: v}
    lo = v[0]
    return {lo + k: c for k, c in enumerate(v[2:]) if c}


@pytest.fixture
def k942():
    return knot("9_42")
