"""Classical and slice-torus invariants of diagrams.

Signature and determinant come from the Goeritz matrix with the
Gordon-Litherland correction.  The Jones polynomial is an independent
Kauffman-bracket state sum.  ss~ and s are read off the free summand of
reduced Bar-Natan homology.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import gcd

from .diagram import (
    DiagramError,
    PlanarDiagram,
    _UnionFind,
    checkerboard,
    from_braid,
    is_connected,
    mirror,
    split_pieces,
)
from .exactalg import det, symmetric_signature

__all__ = [
    "GoeritzData",
    "InvariantReport",
    "TorusKnotParams",
    "goeritz",
    "signature_gl",
    "determinant",
    "kauffman_bracket",
    "jones_polynomial",
    "jones_at",
    "khovanov_euler_characteristic",
    "ss_tilde",
    "rasmussen_s",
    "torus_knot_diagram",
    "torus_slice_torus_value",
    "torus_signature",
    "invariant_report",
    "JONES_CROSSING_LIMIT",
]

JONES_CROSSING_LIMIT = 16


@dataclass(frozen=True)
class GoeritzData:
    matrix: tuple[tuple[int, ...], ...]
    mu: int
    white_faces: tuple[int, ...]


def goeritz(d: PlanarDiagram, flip_coloring: bool = False) -> GoeritzData:
    """Goeritz matrix on the white faces (first one dropped) and the
    Gordon-Litherland correction mu.

    At each crossing eta = +1 when the white corners are corners 0 and 2
    (``white_corner == 0``) and -1 otherwise.  A crossing is of
    type II when its oriented smoothing joins the black corners; mu sums
    eta over type II crossings.
    """
    if not is_connected(d):
        raise DiagramError("Goeritz matrix needs a connected diagram")
    cb = checkerboard(d)
    if flip_coloring:
        cb = cb.flipped()
    white = cb.white_faces
    idx = {f: i for i, f in enumerate(white)}
    m = len(white)
    g = [[0] * m for _ in range(m)]
    mu = 0
    signs = d.signs
    for c in range(d.n):
        w = cb.white_corner[c]
        eta = 1 if w == 0 else -1
        f1 = cb.corner_face[(c, w)]
        f2 = cb.corner_face[(c, w + 2)]
        if f1 != f2:
            i, j = idx[f1], idx[f2]
            g[i][j] -= eta
            g[j][i] -= eta
            g[i][i] += eta
            g[j][j] += eta
        joined = 1 if signs[c] > 0 else 0
        if joined != w:
            mu += eta
    reduced = tuple(tuple(row[1:]) for row in g[1:])
    return GoeritzData(reduced, mu, tuple(white))


def signature_gl(d: PlanarDiagram, flip_coloring: bool = False) -> int:
    """Signature by Gordon-Litherland; the positive trefoil has signature -2."""
    if d.n == 0:
        if len(d.loops) != 1:
            raise DiagramError("signature of a split diagram is not computed")
        return 0
    gd = goeritz(d, flip_coloring)
    return symmetric_signature(gd.matrix) - gd.mu


def determinant(d: PlanarDiagram) -> int:
    """|det| of the Goeritz matrix; 0 for split diagrams."""
    if split_pieces(d) > 1:
        return 0
    if d.n == 0:
        return 1
    return abs(det(goeritz(d).matrix))


# -- Jones polynomial ---------------------------------------------------------------


def _padd(p: dict, q: dict, scale: int = 1) -> dict:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


def _pmul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, x in p.items():
        for b, y in q.items():
            out[a + b] = out.get(a + b, 0) + x * y
    return {k: v for k, v in out.items() if v}


def kauffman_bracket(d: PlanarDiagram) -> dict[int, int]:
    """<D> as {power of A: coefficient}, normalised so a single circle is 1.

    The A-smoothing at a crossing joins slots (0,1) and (2,3).
    """
    if d.n > JONES_CROSSING_LIMIT:
        raise DiagramError(f"{d.n} crossings exceeds the state-sum limit of {JONES_CROSSING_LIMIT}")
    labels = d.edge_labels
    # count states by (#A - #B, circles)
    counts: dict[tuple[int, int], int] = {}
    n = d.n
    for state in range(1 << n):
        uf = _UnionFind()
        for e in labels:
            uf.find(e)
        for p, (a, b, c, e) in enumerate(d.crossings):
            if state >> p & 1:
                uf.union(a, e)
                uf.union(b, c)
            else:
                uf.union(a, b)
                uf.union(c, e)
        circles = len({uf.find(e) for e in labels})
        ones = bin(state).count("1")
        key = (n - 2 * ones, circles)
        counts[key] = counts.get(key, 0) + 1
    delta = {2: -1, -2: -1}
    out: dict[int, int] = {}
    powers = {0: {0: 1}}
    for (a, circles), k in counts.items():
        if circles - 1 not in powers:
            p = {0: 1}
            for _ in range(circles - 1):
                p = _pmul(p, delta)
            powers[circles - 1] = p
        out = _padd(out, _pmul({a: k}, powers[circles - 1]))
    return dict(sorted(out.items()))


def jones_polynomial(d: PlanarDiagram) -> dict[Fraction, int]:
    """V(t) as {exponent of t: coefficient}; half-integer exponents for even links."""
    bracket = kauffman_bracket(d)
    w = d.writhe
    # (-A^3)^(-w) <D>, then A = t^(-1/4)
    sign = -1 if w % 2 else 1
    out: dict[Fraction, int] = {}
    for e, v in bracket.items():
        out[Fraction(-(e - 3 * w), 4)] = sign * v
    return dict(sorted(out.items()))


def jones_at(d: PlanarDiagram, value) -> Fraction | complex:
    """Exact V(value).  Half-integer powers use the root t^(1/2) = i at t = -1
    and the positive rational square root otherwise."""
    poly = jones_polynomial(d)
    value = Fraction(value)
    if all(e.denominator == 1 for e in poly):
        return sum((Fraction(v) * value ** int(e) for e, v in poly.items()), Fraction(0))
    if value == -1:
        re = im = 0
        for e, v in poly.items():
            k = int(2 * e) % 4
            if k == 0:
                re += v
            elif k == 1:
                im += v
            elif k == 2:
                re -= v
            else:
                im -= v
        return complex(re, im)
    root = _rational_sqrt(value)
    if root is None:
        raise ValueError(f"t^(1/2) is not rational at t = {value}")
    return sum((Fraction(v) * root ** int(2 * e) for e, v in poly.items()), Fraction(0))


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    from math import isqrt

    n, m = isqrt(x.numerator), isqrt(x.denominator)
    if n * n == x.numerator and m * m == x.denominator:
        return Fraction(n, m)
    return None


def khovanov_euler_characteristic(d: PlanarDiagram) -> dict[int, int]:
    """(q + 1/q) V(t) with t^(1/2) = -q, as {power of q: coefficient}.

    This is the graded Euler characteristic of the unreduced complex.
    """
    poly = jones_polynomial(d)
    out: dict[int, int] = {}
    for e, v in poly.items():
        k = int(2 * e)
        sgn = -1 if k % 2 else 1
        for s in (1, -1):
            out[k + s] = out.get(k + s, 0) + sgn * v
    return {k: v for k, v in sorted(out.items()) if v}


# -- slice-torus invariants ----------------------------------------------------------


def _free_q(d: PlanarDiagram, coeffs: str) -> int:
    from .complex import build_cube, gauss_eliminate
    from .exactalg import ring_from_tag
    from .homology import free_part_bigradings, homology_pid, homology_zh

    if d.num_components != 1:
        raise DiagramError("ss~ and s are defined here for knots only")
    ring = ring_from_tag(coeffs)
    if ring.name == "Z[H]" or ring.name == "Z":
        c = gauss_eliminate(build_cube(d, reduced=True, ring="Z"))
        m = homology_zh(c)
    else:
        c = gauss_eliminate(build_cube(d, reduced=True, ring=ring))
        m = homology_pid(c)
    free = free_part_bigradings(m)
    if len(free) != 1:
        raise ValueError(f"reduced homology has free rank {len(free)}, expected 1")
    return free[0][1]


def ss_tilde(d: PlanarDiagram, coeffs: str = "ZH") -> int:
    """Half the quantum grading of the free summand of reduced homology over coeffs[H]."""
    q = _free_q(d, coeffs)
    if q % 2:
        raise ValueError(f"free summand sits in odd quantum grading {q}")
    return q // 2


def rasmussen_s(d: PlanarDiagram, field: str = "Q") -> int:
    if field.upper() in ("Z", "ZH", "Z[H]"):
        raise ValueError("rasmussen_s needs a field")
    return 2 * ss_tilde(d, field)


# -- torus knots ---------------------------------------------------------------------


@dataclass(frozen=True)
class TorusKnotParams:
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 2 or self.q < 2:
            raise ValueError("torus knot parameters must be at least 2")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"T({self.p},{self.q}) is not a knot: parameters share a factor")


def torus_knot_diagram(t: TorusKnotParams) -> PlanarDiagram:
    """Closure of (s_1 ... s_{p-1})^q: the positive torus knot."""
    word = list(range(1, t.p)) * t.q
    return from_braid(word, t.p, name=f"T({t.p},{t.q})")


def torus_slice_torus_value(t: TorusKnotParams) -> int:
    return (t.p - 1) * (t.q - 1) // 2


def torus_signature(t: TorusKnotParams) -> int:
    """Signature of the positive torus knot from the lattice-point count
    over 0 < i < p, 0 < j < q of i/p + j/q inside or outside (1/2, 3/2)."""
    inside = 0
    total = (t.p - 1) * (t.q - 1)
    for i in range(1, t.p):
        for j in range(1, t.q):
            x = Fraction(i, t.p) + Fraction(j, t.q)
            if Fraction(1, 2) < x < Fraction(3, 2):
                inside += 1
    return (total - inside) - inside


# -- reports -------------------------------------------------------------------------


@dataclass
class InvariantReport:
    knot: str | None
    ss_tilde_H: int | None = None
    s_field: dict[str, int] = field(default_factory=dict)
    signature: int | None = None
    determinant: int | None = None
    chirality_note: str = ""

    def to_json(self) -> dict:
        return asdict(self)


def invariant_report(d: PlanarDiagram, fields: tuple[str, ...] = ("Q",), homology: bool = True) -> InvariantReport:
    sig = signature_gl(d)
    rep = InvariantReport(d.name, signature=sig, determinant=determinant(d))
    rep.chirality_note = (
        "diagram as given; the mirror has signature {}".format(-sig) if sig else "signature 0 in both chiralities"
    )
    if homology:
        rep.ss_tilde_H = ss_tilde(d, "ZH")
        rep.s_field = {f: rasmussen_s(d, f) for f in fields}
    return rep


def mirror_report(d: PlanarDiagram, **kw) -> tuple[InvariantReport, InvariantReport]:
    return invariant_report(d, **kw), invariant_report(mirror(d), **kw)
