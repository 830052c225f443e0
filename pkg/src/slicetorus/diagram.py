"""Planar diagram (PD code) link diagrams.

A crossing is a quadruple of edge labels listed counterclockwise, starting
from the incoming under-strand (the KnotInfo convention).  Slots 0 and 2
carry the under-strand (in, out); slots 1 and 3 carry the over-strand.

Crossingless components are kept as labelled ``loops`` so that split
resolutions (dotted unlinks and the like) stay representable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Iterable, Sequence

__all__ = [
    "DiagramError",
    "PlanarDiagram",
    "CrossingSite",
    "parse_pd",
    "from_json",
    "to_json",
    "mirror",
    "resolve",
    "connected_sum",
    "faces",
    "checkerboard",
    "Checkerboard",
    "greedy_simplify",
    "is_alternating",
    "is_connected",
    "is_unlink_diagram",
    "reverse_components",
    "canonical_key",
    "from_quads",
    "from_braid",
    "split_pieces",
    "r3_moves",
    "reidemeister_search",
]

Dart = tuple[int, int]  # (crossing index, slot)
Quad = tuple[int, int, int, int]


class DiagramError(ValueError):
    """Malformed or inconsistent diagram data."""


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smallest label wins so relabelling is deterministic
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class CrossingSite:
    index: int
    resolution_label: int = 0

    def __post_init__(self) -> None:
        if self.resolution_label not in (0, 1):
            raise DiagramError(f"resolution label must be 0 or 1, got {self.resolution_label}")


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: tuple[Quad, ...]
    loops: tuple[int, ...] = ()
    base_point: int | None = None
    dots: frozenset[int] = field(default_factory=frozenset)
    name: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "crossings", tuple(tuple(int(v) for v in x) for x in self.crossings))
        object.__setattr__(self, "loops", tuple(int(v) for v in self.loops))
        object.__setattr__(self, "dots", frozenset(int(v) for v in self.dots))
        counts: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have four entries")
            for e in x:
                if e <= 0:
                    raise DiagramError(f"edge labels must be positive, got {e}")
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, c in counts.items() if c != 2)
        if bad:
            raise DiagramError(f"edges {bad} do not appear exactly twice")
        if len(set(self.loops)) != len(self.loops) or set(self.loops) & counts.keys():
            raise DiagramError("loop labels must be distinct and unused by crossings")
        labels = counts.keys() | set(self.loops)
        if self.base_point is not None and self.base_point not in labels:
            raise DiagramError(f"base point {self.base_point} is not an edge")
        if not self.dots <= labels:
            raise DiagramError(f"dots {sorted(self.dots - labels)} are not edges")
        self._orientation  # validates strand directions

    # -- structure -----------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def edge_labels(self) -> tuple[int, ...]:
        return tuple(sorted({e for x in self.crossings for e in x} | set(self.loops)))

    @cached_property
    def partner(self) -> dict[Dart, Dart]:
        """Other endpoint of the edge leaving each dart."""
        seen: dict[int, Dart] = {}
        out: dict[Dart, Dart] = {}
        for c, x in enumerate(self.crossings):
            for k, e in enumerate(x):
                if e in seen:
                    other = seen.pop(e)
                    out[other] = (c, k)
                    out[(c, k)] = other
                else:
                    seen[e] = (c, k)
        return out

    @cached_property
    def _orientation(self) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
        """Incoming over-slot per crossing and the oriented edge cycles."""
        n = self.n
        over_in = [0] * n
        visited: set[Dart] = set()
        cycles: list[tuple[int, ...]] = []

        def walk(start: Dart) -> None:
            # start is an outgoing dart
            edges = []
            dart = start
            while True:
                c, k = dart
                visited.add(dart)
                edges.append(self.crossings[c][k])
                c2, k2 = self.partner[dart]
                if k2 == 2:
                    raise DiagramError(
                        f"inconsistent orientation: edge {self.crossings[c][k]} enters crossing {c2} at its outgoing under-slot"
                    )
                if k2 in (1, 3):
                    if over_in[c2] and over_in[c2] != k2:
                        raise DiagramError(f"inconsistent orientation of the over-strand at crossing {c2}")
                    over_in[c2] = k2
                visited.add((c2, k2))
                dart = (c2, (k2 + 2) % 4)
                if dart == start:
                    break
                if dart in visited:
                    raise DiagramError("inconsistent orientation while following a strand")
            cycles.append(tuple(edges))

        for c in range(n):
            if (c, 2) not in visited:
                walk((c, 2))
        # components that only pass over other strands
        for c in range(n):
            for k in (1, 3):
                if (c, k) not in visited:
                    walk((c, k))
        for c in range(n):
            if not over_in[c]:
                raise DiagramError(f"could not orient crossing {c}")
        for e in self.loops:
            cycles.append((e,))
        cycles.sort(key=min)
        return tuple(over_in), tuple(cycles)

    @property
    def over_in(self) -> tuple[int, ...]:
        return self._orientation[0]

    @cached_property
    def signs(self) -> tuple[int, ...]:
        """Crossing signs: +1 when the over-strand runs from slot 3 to slot 1."""
        return tuple(1 if s == 3 else -1 for s in self.over_in)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return self.n - self.n_plus

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    @property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Edge cycles of the link components, in orientation order, sorted by smallest label."""
        return self._orientation[1]

    @property
    def num_components(self) -> int:
        return len(self.components)

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {e: i for i, comp in enumerate(self.components) for e in comp}

    @cached_property
    def edge_orientations(self) -> dict[int, tuple[Dart | None, Dart | None]]:
        """Edge label -> (tail dart, head dart); ``None`` ends for crossingless loops."""
        out: dict[int, tuple[Dart | None, Dart | None]] = {e: (None, None) for e in self.loops}
        for c, x in enumerate(self.crossings):
            o = self.over_in[c]
            for k, e in ((2, x[2]), ((o + 2) % 4, x[(o + 2) % 4])):
                out[e] = ((c, k), self.partner[(c, k)])
        return out

    @property
    def dotted_components(self) -> frozenset[int]:
        return frozenset(self.component_of[e] for e in self.dots)

    def with_name(self, name: str | None) -> PlanarDiagram:
        return replace(self, name=name)

    def pd_string(self) -> str:
        return "PD[" + ", ".join("X[{},{},{},{}]".format(*x) for x in self.crossings) + "]"

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        loops = f", loops={len(self.loops)}" if self.loops else ""
        return f"PlanarDiagram({label}n={self.n}{loops})"


# -- construction helpers -------------------------------------------------


def _orient_quads(quads: Sequence[Sequence[int]]) -> list[Quad]:
    """Rotate quadruples so slot 0 is the incoming under-strand.

    Input quadruples only need the under-strand at slots {0, 2}; each
    component keeps the direction of its first under-crossing.
    """
    quads = [tuple(x) for x in quads]
    n = len(quads)
    ends: dict[int, list[Dart]] = {}
    for c, x in enumerate(quads):
        for k, e in enumerate(x):
            ends.setdefault(e, []).append((c, k))
    partner: dict[Dart, Dart] = {}
    for e, ds in ends.items():
        if len(ds) != 2:
            raise DiagramError(f"edge {e} appears {len(ds)} times")
        partner[ds[0]] = ds[1]
        partner[ds[1]] = ds[0]

    flip = [False] * n
    decided = [False] * n
    seen: set[Dart] = set()
    for c0 in range(n):
        for k0 in (0, 2):
            if (c0, k0) in seen:
                continue
            # traverse the strand through (c0, k0) entering there
            path: list[Dart] = []
            dart = (c0, k0)
            while True:
                c, k = dart
                path.append(dart)
                seen.add(dart)
                seen.add((c, (k + 2) % 4))
                dart = partner[(c, (k + 2) % 4)]
                if dart == (c0, k0):
                    break
            entered = {}
            for c, k in path:
                if k % 2 == 0:
                    entered.setdefault(c, []).append(k)
            for c, ks in entered.items():
                if decided[c]:
                    continue
                # this strand is the under-strand at c; it enters at ks[0]
                # (a self-crossing of the under-strand cannot happen in a PD code)
                flip[c] = ks[0] == 2
                decided[c] = True
    out = []
    for c, x in enumerate(quads):
        out.append((x[2], x[3], x[0], x[1]) if flip[c] else x)
    return out


def _splice(
    d: PlanarDiagram,
    keep: Iterable[int],
    joins: Iterable[tuple[int, int]],
    name: str | None = None,
) -> PlanarDiagram:
    """Drop crossings not in ``keep`` and identify edges along ``joins``.

    Edge classes are relabelled by their smallest member; classes that no
    longer touch a crossing become crossingless loops.
    """
    uf = _UnionFind()
    for e in d.edge_labels:
        uf.find(e)
    for a, b in joins:
        uf.union(a, b)
    kept = [d.crossings[c] for c in sorted(set(keep))]
    quads = [tuple(uf.find(e) for e in x) for x in kept]
    used = {e for x in quads for e in x}
    loops = sorted({uf.find(e) for e in d.edge_labels} - used)
    bp = uf.find(d.base_point) if d.base_point is not None else None
    dots = frozenset(uf.find(e) for e in d.dots)
    return PlanarDiagram(tuple(_orient_quads(quads)), tuple(loops), bp, dots, name)


# -- parsing ----------------------------------------------------------------

_PD_RE = re.compile(r"^\s*PD\s*[\[\(](.*)[\]\)]\s*$", re.S)
_X_RE = re.compile(r"X\s*[\[\(]\s*([^\]\)]*)[\]\)]")


def parse_pd(text: str, *, name: str | None = None, base_point: int | None = None) -> PlanarDiagram:
    """Parse ``PD[X[a,b,c,d], ...]`` (round brackets allowed), a nested list
    ``[[a,b,c,d], ...]``, or the JSON object form.

    ``PD[]`` is the crossingless unknot.
    """
    text = text.strip()
    if text.startswith("{"):
        return from_json(text)
    m = _PD_RE.match(text)
    if m:
        body = m.group(1).strip()
        quads = []
        pos = 0
        for xm in _X_RE.finditer(body):
            if body[pos : xm.start()].strip(" ,\n\t"):
                raise DiagramError(f"unexpected text in PD code: {body[pos:xm.start()]!r}")
            pos = xm.end()
            quads.append(_parse_quad(xm.group(1)))
        if body[pos:].strip(" ,\n\t"):
            raise DiagramError(f"unexpected text in PD code: {body[pos:]!r}")
    elif text.startswith("["):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed PD list: {exc}") from None
        if not isinstance(raw, list) or not all(isinstance(x, list) for x in raw):
            raise DiagramError("PD list must be a list of quadruples")
        quads = [_parse_quad(",".join(str(v) for v in x)) for x in raw]
    else:
        raise DiagramError(f"unrecognised PD code: {text[:40]!r}")
    return from_quads(quads, name=name, base_point=base_point)


def _parse_quad(body: str) -> Quad:
    parts = [p.strip() for p in body.split(",")]
    if len(parts) != 4:
        raise DiagramError(f"crossing needs four edge labels: {body!r}")
    try:
        vals = tuple(int(p) for p in parts)
    except ValueError:
        raise DiagramError(f"non-integer edge label in {body!r}") from None
    return vals  # type: ignore[return-value]


def from_quads(
    quads: Sequence[Sequence[int]],
    *,
    loops: int = 0,
    name: str | None = None,
    base_point: int | None = None,
    dots: Iterable[int] = (),
) -> PlanarDiagram:
    """Build a diagram; ``loops`` extra crossingless components are appended.

    ``dots`` are component indices; the default base point is the smallest edge.
    """
    quads = [tuple(int(v) for v in x) for x in quads]
    used = {e for x in quads for e in x}
    top = max(used, default=0)
    loop_labels = tuple(range(top + 1, top + 1 + loops))
    if not quads and not loops:
        loop_labels = (1,)
    d = PlanarDiagram(tuple(quads), loop_labels, None, frozenset(), name)  # type: ignore[arg-type]
    dot_edges = []
    for i in dots:
        if not 0 <= i < d.num_components:
            raise DiagramError(f"dot on missing component {i}")
        dot_edges.append(min(d.components[i]))
    if base_point is None:
        base_point = min(d.edge_labels)
    return replace(d, base_point=base_point, dots=frozenset(dot_edges))


def from_json(obj: str | dict) -> PlanarDiagram:
    """JSON form ``{"name", "pd", "base_point", "dots", "loops", "mirror", "reverse"}``."""
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed JSON diagram: {exc}") from None
    if not isinstance(obj, dict) or "pd" not in obj:
        raise DiagramError("JSON diagram needs a 'pd' field")
    pd = obj["pd"]
    if isinstance(pd, str):
        quads = list(parse_pd(pd).crossings) if pd.strip() not in ("PD[]", "[]") else []
    else:
        quads = [_parse_quad(",".join(str(v) for v in x)) for x in pd]
    d = from_quads(
        quads,
        loops=int(obj.get("loops", 0)),
        name=obj.get("name"),
        base_point=obj.get("base_point"),
        dots=obj.get("dots", ()),
    )
    if obj.get("reverse"):
        d = reverse_components(d, obj["reverse"])
    if obj.get("mirror"):
        d = mirror(d)
    return d


def to_json(d: PlanarDiagram) -> dict:
    return {
        "name": d.name,
        "pd": [list(x) for x in d.crossings],
        "loops": len(d.loops),
        "base_point": d.base_point,
        "dots": sorted(d.dotted_components),
    }


def from_braid(word: Sequence[int], strands: int | None = None, *, name: str | None = None) -> PlanarDiagram:
    """Closure of a braid word; generator ``i`` (or ``-i``) crosses strands i and i+1.

    In a positive generator the left strand passes over, giving a positive crossing.
    """
    if not word:
        raise DiagramError("empty braid word")
    n = strands if strands is not None else max(abs(g) for g in word) + 1
    pos = list(range(1, n + 1))
    nxt = n + 1
    quads: list[Quad] = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < n - 1:
            raise DiagramError(f"generator {g} out of range for {n} strands")
        a, b = pos[i], pos[i + 1]
        c, e = nxt, nxt + 1
        nxt += 2
        # a: bottom left, b: bottom right, c: top left, e: top right; a -> e and b -> c
        quads.append((b, e, c, a) if g > 0 else (a, b, e, c))
        pos[i], pos[i + 1] = c, e
    close = {pos[k]: k + 1 for k in range(n)}
    quads = [tuple(close.get(v, v) for v in x) for x in quads]  # type: ignore[misc]
    if set(range(1, n + 1)) - {v for x in quads for v in x}:
        raise DiagramError("every strand must take part in a crossing")
    return from_quads(quads, name=name)


# -- operations ---------------------------------------------------------------


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Swap over and under at every crossing."""
    quads = []
    for x, o in zip(d.crossings, d.over_in):
        a, b, c, e = x
        quads.append((e, a, b, c) if o == 3 else (b, c, e, a))
    return PlanarDiagram(tuple(quads), d.loops, d.base_point, d.dots, d.name and _mirror_name(d.name))


def _mirror_name(name: str) -> str:
    if name.startswith("m(") and name.endswith(")"):
        return name[2:-1]
    return f"m({name})"


def reverse_components(d: PlanarDiagram, comps: Iterable[int]) -> PlanarDiagram:
    """Reverse the orientation of the given components."""
    flip = {e for i in set(comps) for e in d.components[i]}
    quads = [(x[2], x[3], x[0], x[1]) if x[0] in flip else x for x in d.crossings]
    return PlanarDiagram(tuple(quads), d.loops, d.base_point, d.dots, d.name)


def resolve(d: PlanarDiagram, site: CrossingSite | int, label: int | None = None) -> PlanarDiagram:
    """Smooth one crossing.

    Label 0 joins slots (0,1) and (2,3); label 1 joins (0,3) and (1,2).
    The 0-smoothing is the oriented one at a positive crossing.
    """
    if isinstance(site, CrossingSite):
        index, lab = site.index, site.resolution_label if label is None else label
    else:
        index, lab = site, 0 if label is None else label
    if not 0 <= index < d.n:
        raise DiagramError(f"crossing index {index} out of range for {d.n} crossings")
    if lab not in (0, 1):
        raise DiagramError(f"resolution label must be 0 or 1, got {lab}")
    a, b, c, e = d.crossings[index]
    joins = [(a, b), (c, e)] if lab == 0 else [(a, e), (b, c)]
    return _splice(d, (i for i in range(d.n) if i != index), joins)


def _default_cut(d: PlanarDiagram) -> int:
    return d.base_point if d.base_point is not None else min(d.edge_labels)


def connected_sum(a: PlanarDiagram, b: PlanarDiagram) -> PlanarDiagram:
    """Band-sum two knots along their base-point edges."""
    if a.num_components != 1 or b.num_components != 1:
        raise DiagramError("connected sum needs two knot diagrams")
    name = f"{a.name}#{b.name}" if a.name and b.name else None
    if a.n == 0:
        return replace(b, name=name)
    if b.n == 0:
        return replace(a, name=name)
    shift = max(a.edge_labels)
    bq = [tuple(e + shift for e in x) for x in b.crossings]
    ea = _default_cut(a)
    eb = _default_cut(b) + shift
    head_a = a.edge_orientations[ea][1]
    bshift = PlanarDiagram(tuple(bq), name=None)  # type: ignore[arg-type]
    head_b = bshift.edge_orientations[eb][1]
    quads = [list(x) for x in a.crossings] + [list(x) for x in bq]
    quads[head_a[0]][head_a[1]] = eb
    quads[a.n + head_b[0]][head_b[1]] = ea
    return PlanarDiagram(tuple(tuple(x) for x in quads), (), a.base_point if a.base_point is not None else ea, frozenset(), name)  # type: ignore[arg-type]


# -- faces and colourings -----------------------------------------------------


def _corner_cycles(d: PlanarDiagram) -> list[list[Dart]]:
    """Faces as cycles of corners; corner (c, k) is the angle from slot k to k+1."""
    seen: set[Dart] = set()
    cycles = []
    for c in range(d.n):
        for k in range(4):
            if (c, k) in seen:
                continue
            cyc = []
            cur = (c, k)
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                cc, kk = cur
                cur = d.partner[(cc, (kk + 1) % 4)]
            cycles.append(cyc)
    return cycles


def faces(d: PlanarDiagram) -> list[tuple[int, ...]]:
    """Faces of a connected diagram as cyclic edge sequences."""
    if not is_connected(d):
        raise DiagramError("faces() needs a connected diagram; split it into components first")
    if d.n == 0:
        e = d.loops[0]
        return [(e,), (e,)]
    out = [tuple(d.crossings[c][(k + 1) % 4] for c, k in cyc) for cyc in _corner_cycles(d)]
    if d.n - 2 * d.n + len(out) != 2:
        raise DiagramError("Euler characteristic check failed: PD code is not planar")
    return out


@dataclass(frozen=True)
class Checkerboard:
    """Two-colouring of faces.

    ``corner_face[(c, k)]`` is the face index of corner (c, k); ``white_corner[c]``
    is 0 when the white corners at crossing c are {0, 2}, else 1.
    """

    faces: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    corner_face: dict[Dart, int]
    white_corner: tuple[int, ...]
    signs: tuple[int, ...]

    def flipped(self) -> Checkerboard:
        return Checkerboard(
            self.faces,
            tuple(1 - c for c in self.colors),
            self.corner_face,
            tuple(1 - w for w in self.white_corner),
            self.signs,
        )

    @property
    def white_faces(self) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c == 0]


def checkerboard(d: PlanarDiagram) -> Checkerboard:
    """Colour faces so that faces sharing an edge differ; face 0 is white."""
    fs = faces(d)
    if d.n == 0:
        return Checkerboard(tuple(fs), (0, 1), {}, (), ())
    cycles = _corner_cycles(d)
    corner_face = {cn: i for i, cyc in enumerate(cycles) for cn in cyc}
    adj: dict[int, set[int]] = {i: set() for i in range(len(cycles))}
    for c in range(d.n):
        for k in range(4):
            f1, f2 = corner_face[(c, (k - 1) % 4)], corner_face[(c, k)]
            adj[f1].add(f2)
            adj[f2].add(f1)
    colors: dict[int, int] = {0: 0}
    stack = [0]
    while stack:
        f = stack.pop()
        for g in adj[f]:
            if g not in colors:
                colors[g] = 1 - colors[f]
                stack.append(g)
            elif colors[g] == colors[f]:
                raise DiagramError("face graph is not bipartite: corrupted PD code")
    white = tuple(0 if colors[corner_face[(c, 0)]] == 0 else 1 for c in range(d.n))
    return Checkerboard(tuple(fs), tuple(colors[i] for i in range(len(cycles))), corner_face, white, d.signs)


# -- simplification -----------------------------------------------------------


def _find_r1(d: PlanarDiagram) -> PlanarDiagram | None:
    for c, x in enumerate(d.crossings):
        for k in range(4):
            if d.partner[(c, k)] == (c, (k + 1) % 4):
                loop, p, q = x[k], x[(k + 2) % 4], x[(k + 3) % 4]
                return _splice(d, (i for i in range(d.n) if i != c), [(loop, p), (p, q)], d.name)
    return None


def _find_r2(d: PlanarDiagram) -> PlanarDiagram | None:
    for cyc in _corner_cycles(d):
        if len(cyc) != 2:
            continue
        (c1, k1), (c2, k2) = cyc
        if c1 == c2:
            continue
        # the bigon's edges leave c1 at slot k1+1 and c2 at slot k2+1
        s1, s2 = (k1 + 1) % 4, (k2 + 1) % 4
        e, f = d.crossings[c1][s1], d.crossings[c2][s2]
        t1, t2 = d.partner[(c1, s1)], d.partner[(c2, s2)]
        # e runs c1:s1 -> c2:t1[1]; f runs c2:s2 -> c1:t2[1]
        if t1[0] != c2 or t2[0] != c1:
            continue
        if s1 % 2 != t1[1] % 2 or s2 % 2 != t2[1] % 2:
            continue
        x1, x2 = d.crossings[c1], d.crossings[c2]
        joins = [
            (x1[(s1 + 2) % 4], e),
            (e, x2[(t1[1] + 2) % 4]),
            (x2[(s2 + 2) % 4], f),
            (f, x1[(t2[1] + 2) % 4]),
        ]
        return _splice(d, (i for i in range(d.n) if i not in (c1, c2)), joins, d.name)
    return None


def greedy_simplify(d: PlanarDiagram) -> PlanarDiagram:
    """Remove crossings by Reidemeister I and II moves until none applies."""
    while d.n:
        nxt = _find_r1(d) or _find_r2(d)
        if nxt is None:
            break
        d = nxt
    return d


def r3_moves(d: PlanarDiagram) -> list[PlanarDiagram]:
    """All diagrams one Reidemeister III move away.

    A triangular face qualifies when one of its three strands lies on the
    same level (over or under) at both of its triangle crossings.  Each
    triangle crossing keeps its strands and levels; inner and outer edges
    trade places, which pushes the crossing across the triangle.
    """
    out = []
    seen: set[frozenset[int]] = set()
    for cyc in _corner_cycles(d):
        if len(cyc) != 3:
            continue
        cs = [c for c, _ in cyc]
        if len(set(cs)) != 3 or frozenset(cs) in seen:
            continue
        inner = {c: (k, (k + 1) % 4) for c, k in cyc}
        edges = {d.crossings[c][s] for c, ks in inner.items() for s in ks}
        if len(edges) != 3:
            continue
        new = {c: list(d.crossings[c]) for c in cs}
        ok = True
        same_level = False
        for c, ks in inner.items():
            for s in ks:
                c2, s2 = d.partner[(c, s)]
                if c2 not in inner or s2 not in inner[c2]:
                    ok = False
                    break
                ext = d.crossings[c2][(s2 + 2) % 4]
                if ext in edges:
                    ok = False
                    break
                new[c][s] = ext
                new[c][(s + 2) % 4] = d.crossings[c][s]
                if s % 2 == s2 % 2:
                    same_level = True
            if not ok:
                break
        if not ok or not same_level:
            continue
        seen.add(frozenset(cs))
        quads = [tuple(new[c]) if c in new else x for c, x in enumerate(d.crossings)]
        try:
            out.append(PlanarDiagram(tuple(quads), d.loops, d.base_point, d.dots, d.name))  # type: ignore[arg-type]
        except DiagramError:
            continue
    return out


def reidemeister_search(
    d: PlanarDiagram,
    goal: Callable[[PlanarDiagram], bool],
    max_states: int = 500,
) -> PlanarDiagram | None:
    """Breadth-first search through R3 moves, greedily simplifying by R1/R2
    after each, for a diagram satisfying ``goal``.  Sound, not complete."""
    start = greedy_simplify(d)
    if goal(start):
        return start
    seen = {canonical_key(start, simplify=False)}
    queue = [start]
    qi = 0
    while qi < len(queue) and len(seen) < max_states:
        cur = queue[qi]
        qi += 1
        for nb in r3_moves(cur):
            nb = greedy_simplify(nb)
            key = canonical_key(nb, simplify=False)
            if key in seen:
                continue
            seen.add(key)
            if goal(nb):
                return nb
            queue.append(nb)
    return None


# -- predicates -----------------------------------------------------------------


def is_alternating(d: PlanarDiagram) -> bool:
    """Every component alternates over/under along its orientation."""
    for comp in d.components:
        if len(comp) == 1 and comp[0] in d.loops:
            continue
        levels = []
        for e in comp:
            _, head = d.edge_orientations[e]
            levels.append(head[1] % 2)  # 0 = arrives as under-strand
        if any(levels[i] == levels[i - 1] for i in range(len(levels))):
            return False
    return True


def _crossing_groups(d: PlanarDiagram) -> int:
    uf = _UnionFind()
    for c in range(d.n):
        uf.find(c)
    for (c1, _), (c2, _) in d.partner.items():
        uf.union(c1, c2)
    return len({uf.find(c) for c in range(d.n)})


def is_connected(d: PlanarDiagram) -> bool:
    """The diagram's projection is connected (crossingless loops count as pieces)."""
    pieces = _crossing_groups(d) + len(d.loops)
    return pieces == 1


def split_pieces(d: PlanarDiagram) -> int:
    return _crossing_groups(d) + len(d.loops)


def is_unlink_diagram(d: PlanarDiagram, k: int) -> bool:
    """Sound but incomplete: true when R1/R2 moves reach a k-loop crossingless diagram."""
    s = greedy_simplify(d)
    return s.n == 0 and len(s.loops) == k


def canonical_key(d: PlanarDiagram, simplify: bool = True) -> tuple:
    """Relabelling-invariant key, by default of the R1/R2-simplified diagram."""
    s = greedy_simplify(d) if simplify else d
    dotted = s.dotted_components
    if s.n == 0:
        return ((), len(s.loops), len(dotted))
    best = None
    n = s.n
    for c0 in range(n):
        for k0 in range(4):
            # breadth-first relabelling from dart (c0, k0), rotating each crossing
            # so that the slot reached first is listed first (ties by slot parity kept)
            cmap: dict[int, int] = {c0: 0}
            rot: dict[int, int] = {c0: k0}
            queue = [c0]
            emap: dict[int, int] = {}
            qi = 0
            while qi < len(queue):
                c = queue[qi]
                qi += 1
                for j in range(4):
                    k = (rot[c] + j) % 4
                    e = s.crossings[c][k]
                    if e not in emap:
                        emap[e] = len(emap) + 1
                    c2, k2 = s.partner[(c, k)]
                    if c2 not in cmap:
                        cmap[c2] = len(cmap)
                        rot[c2] = k2
                        queue.append(c2)
            if len(cmap) < n:
                # several pieces: fall back to a start-independent summary
                continue
            quads = [None] * n
            for c, i in cmap.items():
                x = s.crossings[c]
                quads[i] = (rot[c] % 2, tuple(emap[x[(rot[c] + j) % 4]] for j in range(4)))
            dots = tuple(
                sorted(tuple(sorted(emap[e] for e in s.components[i] if e in emap)) for i in dotted)
            )
            key = (tuple(quads), dots)
            if best is None or key < best:
                best = key
    if best is None:
        best = (tuple(sorted(s.crossings)), tuple(sorted(s.components[i] for i in dotted)))
    return (best, len(s.loops))
