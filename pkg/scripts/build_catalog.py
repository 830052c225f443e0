"""Regenerate the shipped knot/link fixtures from the ``database_knotinfo`` package.

    pip install database_knotinfo
    python scripts/build_catalog.py

Writes ``src/slicetorus/data/knots.csv`` (catalog columns), ``links.csv`` and
``tests/fixtures/knotinfo_extra.csv`` (Rasmussen s, Jones and reduced
Khovanov vectors used only as cross-checks in the test suite).
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import database_knotinfo
import pandas as pd

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "slicetorus" / "data"
FIXTURES = ROOT / "tests" / "fixtures"
SRC = Path(database_knotinfo.__file__).parent / "csv_data"

CATALOG_COLUMNS = [
    "name", "pd", "signature", "g4", "det", "alternating", "quasi_alternating",
    "quasipositive", "positive", "braid_positive", "strongly_quasipositive", "slice",
]
LINKS = ["L2a1{0}", "L4a1{0}", "L6n1{0,0}", "L7n1{0}"]


def yn(v) -> str:
    if isinstance(v, str) and v.strip():
        return "Y" if v.strip().upper().startswith("Y") else "N"
    return ""


def main() -> None:
    knots = pd.read_csv(SRC / "knotinfo_data_complete.csv", sep="|", dtype=str, nrows=260).iloc[1:]
    knots = knots[knots.crossing_number.astype(int) <= 10]
    DATA.mkdir(parents=True, exist_ok=True)
    FIXTURES.mkdir(parents=True, exist_ok=True)
    with open(DATA / "knots.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CATALOG_COLUMNS)
        for _, r in knots.iterrows():
            g4 = int(r.smooth_four_genus)
            pd_code = r.pd_notation if isinstance(r.pd_notation, str) else "[]"
            flags = {
                "quasipositive": yn(r.quasipositive),
                "positive": yn(r.positive),
                "braid_positive": yn(r.positive_braid),
                "strongly_quasipositive": yn(r.strongly_quasipositive),
            }
            if r["name"] == "0_1":
                flags = dict.fromkeys(flags, "Y")
            w.writerow([
                r["name"], pd_code.replace(" ", ""), int(r.signature), g4, int(r.determinant) or 1,
                yn(r.alternating), yn(r.quasi_alternating), flags["quasipositive"], flags["positive"],
                flags["braid_positive"], flags["strongly_quasipositive"], "Y" if g4 == 0 else "N",
            ])
    with open(FIXTURES / "knotinfo_extra.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "rasmussen", "jones_vector", "kh_reduced_vector"])
        for _, r in knots.iterrows():
            w.writerow([r["name"], r.rasmussen_invariant if isinstance(r.rasmussen_invariant, str) else "0",
                        r.jones_polynomial_vector, r.khovanov_reduced_integral_vector])

    links = pd.read_csv(SRC / "linkinfo_data_complete.csv", sep="|", dtype=str)
    with open(DATA / "links.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "pd", "det", "components", "alternating"])
        for name in LINKS:
            r = links[links.name == name].iloc[0]
            pd_code = json.loads(r.pd_notation_vector.replace("{", "[").replace("}", "]"))
            w.writerow([name.split("{")[0], json.dumps(pd_code).replace(" ", ""), int(r.determinant),
                        int(r.components), yn(r.alternating)])


if __name__ == "__main__":
    main()
