"""Knot catalogs, the q_M / theta rule system and table regeneration.

q_M and theta are never computed from first principles.  Each value is
the intersection of the intervals allowed by the rules that apply:

* bounds: ``q_M <= theta <= g4``, ``-sigma/2 <= theta`` and ``|q_M| <= g4``;
* slice knots: both vanish;
* quasipositive knots: both equal g4;
* quasi-alternating knots, or knots whose branched double cover is an
  F2 L-space: both equal ``-sigma/2``.

An empty intersection is a contradiction and is reported for that row only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .diagram import PlanarDiagram, canonical_key, mirror, parse_pd
from .invariants import TorusKnotParams, signature_gl, torus_signature, torus_slice_torus_value

__all__ = [
    "CATALOG_COLUMNS",
    "FLAGS",
    "CatalogError",
    "DerivationConflict",
    "CatalogEntry",
    "DerivedValue",
    "Derivation",
    "TableRow",
    "KnownKnot",
    "FormalSum",
    "ingest",
    "load_catalog",
    "lookup",
    "normalize_chirality",
    "derive",
    "formal_sum",
    "torus_term",
    "build_table",
    "render_table",
    "read_table",
    "diff_table",
    "shipped_table_fixture",
    "CellDiff",
    "default_evidence",
    "residual_knots",
]

FLAGS = (
    "alternating",
    "quasi_alternating",
    "quasipositive",
    "positive",
    "braid_positive",
    "strongly_quasipositive",
    "slice",
)
CATALOG_COLUMNS = ("name", "pd", "signature", "g4", "det") + FLAGS
TABLE_COLUMNS = ("name", "neg_half_sigma", "q_M", "theta", "g4", "qa", "positivity")
# strongest first: BP => P => SQ => QP
POSITIVITY = (("braid_positive", "BP"), ("positive", "P"), ("strongly_quasipositive", "SQ"), ("quasipositive", "QP"))


class CatalogError(ValueError):
    pass


class DerivationConflict(ValueError):
    def __init__(self, name: str, detail: str) -> None:
        super().__init__(f"{name}: {detail}")
        self.name = name
        self.detail = detail


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    pd: str
    signature: int
    g4: int
    flags: frozenset[str] = frozenset()
    det: int | None = None
    mirrored: bool = False

    def __post_init__(self) -> None:
        if self.g4 < 0:
            raise CatalogError(f"{self.name}: negative g4")
        unknown = set(self.flags) - set(FLAGS)
        if unknown:
            raise CatalogError(f"{self.name}: unknown flags {sorted(unknown)}")
        chain = [f for f, _ in POSITIVITY]
        for stronger, weaker in zip(chain, chain[1:]):
            if stronger in self.flags and weaker not in self.flags:
                raise CatalogError(f"{self.name}: {stronger} without {weaker} breaks BP => P => SQ => QP")
        if "slice" in self.flags and self.g4 != 0:
            raise CatalogError(f"{self.name}: slice but g4 = {self.g4}")

    def has(self, flag: str) -> bool:
        return flag in self.flags

    @property
    def crossing_number(self) -> int | None:
        head = self.name.split("_", 1)[0]
        return int(head) if head.isdigit() else None

    def diagram(self) -> PlanarDiagram:
        d = parse_pd(self.pd or "[]", name=self.name)
        return mirror(d).with_name(self.name) if self.mirrored else d

    def positivity(self) -> str:
        for f, tag in POSITIVITY:
            if f in self.flags:
                return tag
        return "-"

    def qa_class(self) -> str:
        if self.has("alternating"):
            return "alt"
        if self.has("quasi_alternating"):
            return "q.alt"
        return "non-q.alt!"


def _yn(value: str, name: str, col: str) -> bool:
    v = value.strip().upper()
    if v in ("Y", "YES", "TRUE", "1"):
        return True
    if v in ("N", "NO", "FALSE", "0", ""):
        return False
    raise CatalogError(f"{name}: column {col} has {value!r}, expected Y/N")


def ingest(source: str | Path | io.TextIOBase) -> list[CatalogEntry]:
    """Read a catalog CSV; the header must contain the catalog columns."""
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    if not text.strip():
        return []
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in CATALOG_COLUMNS if c not in (reader.fieldnames or [])]
    if missing:
        raise CatalogError(f"missing columns: {missing}")
    out = []
    seen = set()
    for line, row in enumerate(reader, start=2):
        name = (row["name"] or "").strip()
        if not name:
            raise CatalogError(f"line {line}: empty name")
        if name in seen:
            raise CatalogError(f"line {line}: duplicate entry {name}")
        seen.add(name)
        try:
            sig = int(row["signature"])
            g4 = int(row["g4"])
            det = int(row["det"]) if (row["det"] or "").strip() else None
        except (TypeError, ValueError):
            raise CatalogError(f"line {line} ({name}): non-integer signature, g4 or det") from None
        flags = frozenset(f for f in FLAGS if _yn(row[f] or "", name, f))
        out.append(CatalogEntry(name, (row["pd"] or "[]").strip(), sig, g4, flags, det))
    return out


def load_catalog() -> list[CatalogEntry]:
    """The shipped catalog of prime knots with at most 10 crossings (plus the unknot)."""
    text = resources.files("slicetorus").joinpath("data/knots.csv").read_text()
    return ingest(io.StringIO(text))


def lookup(name: str, catalog: Iterable[CatalogEntry] | None = None) -> CatalogEntry:
    for e in catalog if catalog is not None else load_catalog():
        if e.name == name:
            return e
    raise KeyError(name)


def normalize_chirality(e: CatalogEntry, recompute: bool = True) -> CatalogEntry:
    """Pick the chirality with sigma <= 0.

    With ``recompute`` the signature is recomputed from the PD code and must
    agree with the catalog.  Positivity flags are kept on mirroring: the
    shipped catalog records positivity for the sigma <= 0 chirality.
    """
    sig = e.signature
    if recompute:
        got = signature_gl(e.diagram())
        if got != e.signature:
            raise CatalogError(f"{e.name}: catalog signature {e.signature}, PD code gives {got}")
        sig = got
    if sig > 0:
        return replace(e, signature=-sig, mirrored=not e.mirrored)
    return e


# -- derived values ------------------------------------------------------------------


@dataclass(frozen=True)
class DerivedValue:
    lo: int | None = None
    hi: int | None = None
    provenance: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.lo is not None and self.hi is not None and self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, v: int, rule: str) -> DerivedValue:
        return cls(v, v, (rule,))

    @property
    def is_exact(self) -> bool:
        return self.lo is not None and self.lo == self.hi

    @property
    def value(self) -> int:
        if not self.is_exact:
            raise ValueError(f"not determined: {self}")
        return self.lo  # type: ignore[return-value]

    def contains(self, v: int) -> bool:
        return (self.lo is None or self.lo <= v) and (self.hi is None or v <= self.hi)

    def narrow(self, lo: int | None, hi: int | None, rule: str) -> DerivedValue:
        nlo = lo if self.lo is None else (self.lo if lo is None else max(self.lo, lo))
        nhi = hi if self.hi is None else (self.hi if hi is None else min(self.hi, hi))
        if nlo is not None and nhi is not None and nlo > nhi:
            raise ValueError(f"{rule} forces [{lo}, {hi}], disjoint from [{self.lo}, {self.hi}]")
        prov = self.provenance if (nlo, nhi) == (self.lo, self.hi) and self.provenance else self.provenance + (rule,)
        return DerivedValue(nlo, nhi, prov)

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        if self.lo is None and self.hi is None:
            return "?"
        lo = "-inf" if self.lo is None else str(self.lo)
        hi = "inf" if self.hi is None else str(self.hi)
        return f"[{lo},{hi}]"


@dataclass(frozen=True)
class Derivation:
    q_M: DerivedValue
    theta: DerivedValue
    rules: tuple[str, ...]

    @property
    def determined(self) -> bool:
        return self.q_M.is_exact and self.theta.is_exact


RULE_BOUNDS = "bounds: q_M <= theta <= g4, -sigma/2 <= theta, |q_M| <= g4"
RULE_SLICE = "slice: q_M = theta = 0"
RULE_QP = "quasipositive: q_M = theta = g4"
RULE_QA = "quasi-alternating: q_M = theta = -sigma/2"
RULE_LSPACE = "F2 L-space branched double cover: q_M = theta = -sigma/2"
NOTE_THETA = "theta is rule-derived only"


def _evidence_applies(e: CatalogEntry, verdict) -> bool:
    if verdict is None or not getattr(verdict, "is_lspace_over_F2", False):
        return False
    key = getattr(verdict, "root_key", None)
    if key is None:
        return True
    # the branched double cover of the mirror is the same manifold reversed
    d = e.diagram()
    return key in (canonical_key(d), canonical_key(mirror(d)))


def derive(e: CatalogEntry, evidence=None) -> Derivation:
    """Apply every rule that fits ``e`` (in its recorded chirality) and intersect."""
    if e.signature % 2:
        raise DerivationConflict(e.name, f"odd signature {e.signature} for a knot")
    half = -e.signature // 2
    exact: list[tuple[str, int]] = []
    if e.has("slice"):
        exact.append((RULE_SLICE, 0))
    if e.has("quasipositive"):
        exact.append((RULE_QP, e.g4))
    if e.has("quasi_alternating") or e.has("alternating"):
        exact.append((RULE_QA, half))
    if _evidence_applies(e, evidence):
        exact.append((RULE_LSPACE, half))
    q = DerivedValue()
    t = DerivedValue()
    rules = []
    try:
        for rule, v in exact:
            q = q.narrow(v, v, rule)
            t = t.narrow(v, v, rule)
            rules.append(rule)
        t = t.narrow(half, e.g4, RULE_BOUNDS)
        q = q.narrow(-e.g4, e.g4, RULE_BOUNDS)
        q = q.narrow(None, t.hi, RULE_BOUNDS)
        t = t.narrow(q.lo, None, RULE_BOUNDS)
    except ValueError as exc:
        raise DerivationConflict(e.name, str(exc)) from None
    rules.append(RULE_BOUNDS)
    t = replace(t, provenance=t.provenance + (NOTE_THETA,))
    return Derivation(q, t, tuple(rules))


def residual_knots(entries: Iterable[CatalogEntry]) -> list[str]:
    """Names of knots that neither the quasi-alternating nor the quasipositive rule settles."""
    return [
        e.name
        for e in entries
        if not (e.has("alternating") or e.has("quasi_alternating") or e.has("quasipositive"))
    ]


# -- formal sums ---------------------------------------------------------------------


@dataclass(frozen=True)
class KnownKnot:
    name: str
    q_M: int | None
    sigma: int
    g4: int


@dataclass(frozen=True)
class FormalSum:
    q_M: int
    sigma: int
    theta: DerivedValue


def torus_term(p: int, q: int) -> KnownKnot:
    """Positive torus knots are quasipositive, so q_M = g4 = (p-1)(q-1)/2."""
    t = TorusKnotParams(p, q)
    g = torus_slice_torus_value(t)
    return KnownKnot(f"T({p},{q})", g, torus_signature(t), g)


def formal_sum(terms: Iterable[tuple[int, KnownKnot]]) -> FormalSum:
    """Connected sum with multiplicities; a negative multiplicity is the concordance inverse."""
    q_m = sig = g4 = 0
    for m, k in terms:
        if k.q_M is None:
            raise ValueError(f"{k.name}: q_M is not known exactly")
        q_m += m * k.q_M
        sig += m * k.sigma
        g4 += abs(m) * k.g4
    lo = max(-sig // 2, q_m)
    theta = DerivedValue(lo, g4, ("additivity of q_M and sigma", RULE_BOUNDS, NOTE_THETA))
    return FormalSum(q_m, sig, theta)


# -- tables --------------------------------------------------------------------------


@dataclass
class TableRow:
    name: str
    neg_half_sigma: int
    g4: int
    qa: str
    positivity: str
    derivation: Derivation | None = None
    error: str | None = None

    def cells(self) -> list[str]:
        if self.derivation is None:
            q = t = "ERROR"
        else:
            q, t = str(self.derivation.q_M), str(self.derivation.theta)
        return [self.name, str(self.neg_half_sigma), q, t, str(self.g4), self.qa, self.positivity]


def default_evidence() -> dict[str, object]:
    """L-space verdicts shipped with the package, keyed by knot name."""
    from .lspace import load_tree, verify_lspace_tree

    path = resources.files("slicetorus").joinpath("data/lspace_tree_9_42.json")
    with resources.as_file(path) as p:
        return {"9_42": verify_lspace_tree(load_tree(p))}


def build_table(
    entries: Iterable[CatalogEntry],
    evidence: Mapping[str, object] | None = None,
    recompute_signature: bool = True,
) -> list[TableRow]:
    evidence = evidence or {}
    rows = []
    for e in entries:
        try:
            n = normalize_chirality(e, recompute_signature)
        except (CatalogError, ValueError) as exc:
            rows.append(TableRow(e.name, -e.signature // 2, e.g4, e.qa_class(), e.positivity(), None, str(exc)))
            continue
        row = TableRow(n.name, -n.signature // 2, n.g4, n.qa_class(), n.positivity())
        try:
            row.derivation = derive(n, evidence.get(n.name))
        except DerivationConflict as exc:
            row.error = str(exc)
        else:
            _assert_bounds(n, row.derivation)
        rows.append(row)
    return rows


def _assert_bounds(e: CatalogEntry, dv: Derivation) -> None:
    q, t = dv.q_M, dv.theta
    if q.is_exact and t.is_exact:
        assert q.value <= t.value <= e.g4, e.name
    if t.is_exact:
        assert -e.signature // 2 <= t.value, e.name


def render_table(rows: Iterable[TableRow], fmt: str = "csv") -> str:
    """Byte-stable rendering; conflicting rows show ERROR and are listed after the table."""
    rows = list(rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        for r in rows:
            w.writerow(r.cells())
        body = buf.getvalue()
    elif fmt == "text":
        grid = [list(TABLE_COLUMNS)] + [r.cells() for r in rows]
        widths = [max(len(row[i]) for row in grid) for i in range(len(TABLE_COLUMNS))]
        body = "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in grid)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    errors = [r for r in rows if r.error]
    if errors:
        body += "".join(f"# {r.error}\n" for r in errors)
    return body


def read_table(source: str | Path | io.TextIOBase) -> dict[str, dict[str, str]]:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    lines = [l for l in text.splitlines() if l and not l.startswith("#")]
    return {r["name"]: r for r in csv.DictReader(lines)}


def shipped_table_fixture() -> dict[str, dict[str, str]]:
    """Published values for the prime knots with at most 9 crossings."""
    text = resources.files("slicetorus").joinpath("data/table_le9.csv").read_text()
    return read_table(io.StringIO(text))


@dataclass(frozen=True)
class CellDiff:
    name: str
    column: str
    ours: str
    fixture: str


def diff_table(rows: Iterable[TableRow], fixture: Mapping[str, Mapping[str, str]],
               columns: Iterable[str] = TABLE_COLUMNS[1:]) -> list[CellDiff]:
    """Cell-by-cell differences; rows missing on either side are reported in column ``name``."""
    cols = list(columns)
    ours = {r.name: dict(zip(TABLE_COLUMNS, r.cells())) for r in rows}
    out = []
    for name in sorted(set(ours) | set(fixture), key=_knot_order):
        if name not in ours or name not in fixture:
            out.append(CellDiff(name, "name", "present" if name in ours else "missing",
                                "present" if name in fixture else "missing"))
            continue
        for c in cols:
            a, b = ours[name][c], fixture[name][c].strip()
            if a != b:
                out.append(CellDiff(name, c, a, b))
    return out


def _knot_order(name: str) -> tuple:
    parts = name.split("_")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        return (10**9, name)
