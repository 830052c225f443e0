"""Grading-support checks for spectral sequences out of triply graded homology.

Entries live in gradings (q, a, delta).  A differential d_k (k >= 2) of
the sl_k spectral sequence shifts (q, a, delta) by (2k, -2, 2k - 2); the
i-th differential of the k = 1 sequence shifts by (2i, -2i, 2 - 2i).  When
no pair of occupied gradings differs by such an offset the differential
vanishes for degree reasons.  Everything here depends only on the support.

The external inputs (the first-differential formula for a separable
potential and translation invariance of the resulting invariant) are
assumptions recorded in each verdict's provenance.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

__all__ = [
    "SlnInapplicable",
    "TriplyGradedTable",
    "CollapseVerdict",
    "delta_thickness",
    "dk_vanishes",
    "d1_page_vanishes",
    "conclude",
    "parse_n_range",
]

Grading = tuple[int, int, int]

PROVENANCE = (
    "grading argument only; assumes the first differential of a separable potential is a "
    "combination of the d_k (k < N) and that the invariant is translation invariant"
)


class SlnInapplicable(ValueError):
    """The grading argument does not decide the spectral sequence."""


@dataclass(frozen=True)
class TriplyGradedTable:
    entries: dict[Grading, int]
    knot: str | None = None

    def __post_init__(self) -> None:
        for g, v in self.entries.items():
            if v < 0:
                raise ValueError(f"negative dimension at {g}")

    @property
    def support(self) -> set[Grading]:
        return {g for g, v in self.entries.items() if v > 0}

    def total(self) -> int:
        return sum(self.entries.values())

    def deltas(self) -> list[int]:
        return sorted({g[2] for g in self.support})

    def slice_dim(self, delta: int) -> int:
        return sum(v for g, v in self.entries.items() if g[2] == delta)

    def shifted(self, dq: int = 0, da: int = 0, ddelta: int = 0) -> TriplyGradedTable:
        return TriplyGradedTable(
            {(q + dq, a + da, d + ddelta): v for (q, a, d), v in self.entries.items()}, self.knot
        )

    @classmethod
    def from_csv(cls, source: str | Path | io.TextIOBase, knot: str | None = None) -> TriplyGradedTable:
        if isinstance(source, (str, Path)):
            text = Path(source).read_text()
        else:
            text = source.read()
        entries: dict[Grading, int] = {}
        for n, row in enumerate(csv.DictReader(io.StringIO(text)), start=2):
            try:
                g = (int(row["q"]), int(row["a"]), int(row["delta"]))
                v = int(row["dim"])
            except (KeyError, TypeError, ValueError):
                raise ValueError(f"line {n}: expected integer columns q,a,delta,dim") from None
            entries[g] = entries.get(g, 0) + v
        return cls(entries, knot)

    def to_csv(self) -> str:
        lines = ["q,a,delta,dim"]
        for (q, a, d), v in sorted(self.entries.items(), key=lambda kv: (kv[0][2], -kv[0][1], kv[0][0])):
            lines.append(f"{q},{a},{d},{v}")
        return "\n".join(lines) + "\n"


def delta_thickness(t: TriplyGradedTable) -> int:
    if not t.support:
        raise ValueError("empty table")
    return len(t.deltas())


def _hits(t: TriplyGradedTable, offset: Grading, sources: Iterable[Grading] | None = None) -> list[tuple[Grading, Grading]]:
    sup = t.support
    src = sup if sources is None else set(sources) & sup
    out = []
    for g in sorted(src):
        h = (g[0] + offset[0], g[1] + offset[1], g[2] + offset[2])
        if h in sup:
            out.append((g, h))
    return out


def dk_offset(k: int) -> Grading:
    return 2 * k, -2, 2 * k - 2


def d1_offset(i: int) -> Grading:
    return 2 * i, -2 * i, 2 - 2 * i


def dk_vanishes(t: TriplyGradedTable, k: int) -> bool:
    """True when no two occupied gradings differ by the d_k offset."""
    if k < 2:
        raise ValueError("d_k is considered for k >= 2")
    return not _hits(t, dk_offset(k))


def d1_page_vanishes(t: TriplyGradedTable, i: int, source_delta: int | None = None) -> dict[tuple[int, int], bool]:
    """Per (source delta, target delta) pair: does d_1^(i) vanish for degree reasons?"""
    if i < 1:
        raise ValueError("page index starts at 1")
    off = d1_offset(i)
    deltas = t.deltas() if source_delta is None else [source_delta]
    out = {}
    for d in deltas:
        src = [g for g in t.support if g[2] == d]
        out[(d, d + off[2])] = not _hits(t, off, src)
    return out


def _max_page(t: TriplyGradedTable) -> int:
    qs = [g[0] for g in t.support]
    return max(1, (max(qs) - min(qs)) // 2 + 1)


@dataclass
class CollapseVerdict:
    delta_thickness: int
    dk_vanish: dict[int, bool]
    d1_higher_vanish: dict[int, bool]
    survivor: Grading
    surviving_q: int
    s_values: dict[int, Fraction] = field(default_factory=dict)
    provenance: str = PROVENANCE

    def to_json(self) -> dict:
        return {
            "delta_thickness": self.delta_thickness,
            "dk_vanish": {str(k): v for k, v in self.dk_vanish.items()},
            "d1_higher_vanish": {str(k): v for k, v in self.d1_higher_vanish.items()},
            "survivor": list(self.survivor),
            "surviving_q": self.surviving_q,
            "s_values": {str(n): str(v) for n, v in self.s_values.items()},
            "provenance": self.provenance,
        }


def conclude(t: TriplyGradedTable, n_range: Iterable[int]) -> CollapseVerdict:
    """Decide collapse by grading support and report s = q / (2(N - 1))."""
    ns = sorted(set(n_range))
    if not ns or ns[0] < 3:
        raise ValueError("N must be at least 3; N = 2 is Rasmussen's s, computed from Khovanov homology")
    thick = delta_thickness(t)
    if thick > 2:
        raise SlnInapplicable(f"delta-thickness {thick} > 2: the grading argument does not apply")
    dk = {k: dk_vanishes(t, k) for k in range(2, ns[-1])}
    if not all(dk.values()):
        bad = [k for k, v in dk.items() if not v]
        raise SlnInapplicable(f"d_k may be nonzero for k in {bad}")
    higher = {i: all(d1_page_vanishes(t, i).values()) for i in range(2, _max_page(t) + 1)}
    if not all(higher.values()):
        bad = [i for i, v in higher.items() if not v]
        raise SlnInapplicable(f"higher d_1 pages may be nonzero for i in {bad}")
    # a delta-slice untouched by d_1 in or out, of total dimension 1, must carry the survivor
    off = d1_offset(1)
    touched = set()
    for g, h in _hits(t, off):
        touched.add(g)
        touched.add(h)
    free_slices = [d for d in t.deltas() if not any(g in touched for g in t.support if g[2] == d)]
    cands = [d for d in free_slices if t.slice_dim(d) == 1]
    if len(cands) != 1:
        raise SlnInapplicable(
            f"no unique d_1-isolated delta-slice of dimension 1 (isolated slices: {free_slices})"
        )
    survivor = next(g for g in t.support if g[2] == cands[0])
    q = survivor[0]
    s_vals = {n: Fraction(q, 2 * (n - 1)) for n in ns}
    return CollapseVerdict(thick, dk, higher, survivor, q, s_vals)


def parse_n_range(text: str) -> list[int]:
    """``3..10``, ``3-10`` or ``3,4,7``."""
    text = text.strip()
    for sep in ("..", "-"):
        if sep in text and not text.startswith("-"):
            lo, hi = text.split(sep, 1)
            return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x.strip()]
