"""Bar-Natan cube complexes over R[H] and their Gaussian-elimination simplification.

The Frobenius algebra is A = R[H]<1, X> with X^2 = H X,
    m(1,1) = 1, m(1,X) = m(X,1) = X, m(X,X) = H X,
    D(1) = 1(x)X + X(x)1 - H 1(x)1,  D(X) = X(x)X,
graded by deg 1 = +1, deg X = -1, deg H = -2.

Differentials are homogeneous, so an entry from generator s to generator t
is always a * H^k with k = (q_t - q_s) / 2.  Only the scalar a is stored;
the H-power is read off the gradings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Iterator

from .diagram import PlanarDiagram, _UnionFind
from .exactalg import QQ, ZZ, GF, PolyRing, Ring, SparseMatrix, ring_from_tag

__all__ = [
    "ComplexError",
    "FrobeniusData",
    "BigradedComplex",
    "build_cube",
    "gauss_eliminate",
    "crossing_order",
    "DEFAULT_CROSSING_LIMIT",
]

DEFAULT_CROSSING_LIMIT = 16


class ComplexError(ValueError):
    pass


class FrobeniusData:
    """Structure constants of the Bar-Natan algebra on the basis (1, X).

    Elements are dicts {(basis index, H power): coefficient} with basis 0 = 1, 1 = X.
    """

    deg = (1, -1)
    h_deg = -2

    @staticmethod
    def mult(x: int, y: int) -> list[tuple[int, int, int]]:
        """Terms (coefficient, H power, basis) of x*y."""
        if x == 0:
            return [(1, 0, y)]
        if y == 0:
            return [(1, 0, x)]
        return [(1, 1, 1)]

    @staticmethod
    def comult(x: int) -> list[tuple[int, int, int, int]]:
        """Terms (coefficient, H power, left, right) of D(x)."""
        if x == 0:
            return [(1, 0, 0, 1), (1, 0, 1, 0), (-1, 1, 0, 0)]
        return [(1, 0, 1, 1)]

    @classmethod
    def check_axioms(cls) -> None:
        """Exhaustively check associativity, coassociativity, the Frobenius
        relation and homogeneity on basis elements."""

        def mul_el(a: dict, b: dict) -> dict:
            out: dict = {}
            for (x, hx), cx in a.items():
                for (y, hy), cy in b.items():
                    for c, h, z in cls.mult(x, y):
                        key = (z, hx + hy + h)
                        out[key] = out.get(key, 0) + c * cx * cy
            return {k: v for k, v in out.items() if v}

        basis = [{(0, 0): 1}, {(1, 0): 1}]
        for a, b, c in product(basis, repeat=3):
            if mul_el(mul_el(a, b), c) != mul_el(a, mul_el(b, c)):
                raise AssertionError("multiplication is not associative")
        for x in (0, 1):
            # (D (x) id) D == (id (x) D) D
            left: dict = {}
            right: dict = {}
            for c, h, l, r in cls.comult(x):
                for c2, h2, l2, r2 in cls.comult(l):
                    key = (l2, r2, r, h + h2)
                    left[key] = left.get(key, 0) + c * c2
                for c2, h2, l2, r2 in cls.comult(r):
                    key = (l, l2, r2, h + h2)
                    right[key] = right.get(key, 0) + c * c2
            if {k: v for k, v in left.items() if v} != {k: v for k, v in right.items() if v}:
                raise AssertionError("comultiplication is not coassociative")
            # homogeneity: each term has degree deg(x) - 1
            for c, h, l, r in cls.comult(x):
                if cls.deg[l] + cls.deg[r] + cls.h_deg * h != cls.deg[x] - 1:
                    raise AssertionError("comultiplication is not homogeneous")
        for x, y in product((0, 1), repeat=2):
            for c, h, z in cls.mult(x, y):
                if cls.deg[z] + cls.h_deg * h != cls.deg[x] + cls.deg[y] - 1:
                    raise AssertionError("multiplication is not homogeneous")
            # Frobenius: D(x*y) == (x (x) 1) * D(y)  (bimodule map)
            lhs: dict = {}
            for c, h, z in cls.mult(x, y):
                for c2, h2, l, r in cls.comult(z):
                    key = (l, r, h + h2)
                    lhs[key] = lhs.get(key, 0) + c * c2
            rhs: dict = {}
            for c, h, l, r in cls.comult(y):
                for c2, h2, l2 in cls.mult(x, l):
                    key = (l2, r, h + h2)
                    rhs[key] = rhs.get(key, 0) + c * c2
            if {k: v for k, v in lhs.items() if v} != {k: v for k, v in rhs.items() if v}:
                raise AssertionError("comultiplication is not a bimodule map")


FrobeniusData.check_axioms()


@dataclass
class BigradedComplex:
    """Free bigraded complex over ring[H]; ``d[s][t]`` is the scalar of the
    entry s -> t (H-power implied by the gradings)."""

    ring: Ring
    hdeg: list[int]
    qdeg: list[int]
    d: dict[int, dict[int, Any]]
    labels: list[Any] = field(default_factory=list)
    reduced: bool = False

    def __len__(self) -> int:
        return len(self.hdeg)

    @property
    def generators(self) -> list[tuple[int, int]]:
        return list(zip(self.hdeg, self.qdeg))

    def hpow(self, s: int, t: int) -> int:
        return (self.qdeg[t] - self.qdeg[s]) // 2

    def entries(self) -> Iterator[tuple[int, int, Any, int]]:
        for s in sorted(self.d):
            for t in sorted(self.d[s]):
                yield s, t, self.d[s][t], self.hpow(s, t)

    def counts(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = {}
        for g in self.generators:
            out[g] = out.get(g, 0) + 1
        return dict(sorted(out.items()))

    def degrees(self) -> list[int]:
        return sorted(set(self.hdeg))

    def check_homogeneous(self) -> None:
        for s, t, a, k in self.entries():
            if self.hdeg[t] != self.hdeg[s] + 1:
                raise ComplexError(f"entry {s}->{t} does not raise homological degree by one")
            dq = self.qdeg[t] - self.qdeg[s]
            if dq % 2 or dq < 0:
                raise ComplexError(f"entry {s}->{t} is not a monomial a*H^k with k >= 0 (dq={dq})")

    def check_d_squared(self) -> None:
        R = self.ring
        for s, row in self.d.items():
            acc: dict[int, Any] = {}
            for t, a in row.items():
                for u, b in self.d.get(t, {}).items():
                    acc[u] = R.add(acc.get(u, R.zero), R.mul(a, b))
            bad = [u for u, v in acc.items() if not R.is_zero(v)]
            if bad:
                raise ComplexError(f"d o d != 0 starting from generator {s}")

    def euler_characteristic(self) -> dict[int, int]:
        """q-degree -> sum of (-1)^i over generators (graded rank at H = 0)."""
        out: dict[int, int] = {}
        for i, q in self.generators:
            out[q] = out.get(q, 0) + (-1) ** (i % 2)
        return {q: v for q, v in sorted(out.items()) if v}

    def indices_in_degree(self, i: int) -> list[int]:
        return [g for g, h in enumerate(self.hdeg) if h == i]

    def differential_matrix(self, i: int, poly: bool = True) -> tuple[SparseMatrix, list[int], list[int]]:
        """Matrix of d: C_i -> C_{i+1} (rows = targets) with entries in ring[H]."""
        src = self.indices_in_degree(i)
        tgt = self.indices_in_degree(i + 1)
        col = {g: j for j, g in enumerate(src)}
        row = {g: j for j, g in enumerate(tgt)}
        if poly:
            P = PolyRing(self.ring)
            entries = {
                (row[t], col[s]): P.monomial(a, self.hpow(s, t))
                for s in src
                for t, a in self.d.get(s, {}).items()
            }
            return SparseMatrix(len(tgt), len(src), entries, P), src, tgt
        entries = {(row[t], col[s]): a for s in src for t, a in self.d.get(s, {}).items()}
        return SparseMatrix(len(tgt), len(src), entries, self.ring), src, tgt

    def to_json(self) -> dict:
        return {
            "ring": self.ring.name,
            "reduced": self.reduced,
            "generators": [{"i": i, "q": q} for i, q in self.generators],
            "differentials": [
                {"from": s, "to": t, "coeff": _jsonable(a), "hpow": k} for s, t, a, k in self.entries()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, obj: dict | str) -> BigradedComplex:
        if isinstance(obj, str):
            obj = json.loads(obj)
        ring = ring_from_tag(obj.get("ring", "Z"))
        hdeg = [g["i"] for g in obj["generators"]]
        qdeg = [g["q"] for g in obj["generators"]]
        d: dict[int, dict[int, Any]] = {}
        for e in obj["differentials"]:
            s, t = e["from"], e["to"]
            k = (qdeg[t] - qdeg[s]) // 2
            if "hpow" in e and e["hpow"] != k:
                raise ComplexError(f"entry {s}->{t}: hpow {e['hpow']} inconsistent with gradings (expected {k})")
            d.setdefault(s, {})[t] = ring(_from_jsonable(e["coeff"]))
        c = cls(ring, hdeg, qdeg, d, list(range(len(hdeg))), bool(obj.get("reduced", False)))
        c.check_homogeneous()
        return c

    def change_ring(self, ring: Ring) -> BigradedComplex:
        d = {}
        for s, row in self.d.items():
            new = {t: ring(_to_int(a, self.ring)) for t, a in row.items()}
            new = {t: a for t, a in new.items() if not ring.is_zero(a)}
            if new:
                d[s] = new
        return BigradedComplex(ring, list(self.hdeg), list(self.qdeg), d, list(self.labels), self.reduced)


def _to_int(a, ring: Ring) -> int:
    if ring is ZZ:
        return a
    if isinstance(ring, GF):
        return a if a <= ring.p // 2 else a - ring.p
    if a.denominator != 1:
        raise ComplexError("cannot move a non-integral coefficient to another ring")
    return int(a)


def _jsonable(a):
    return int(a) if getattr(a, "denominator", 1) == 1 else str(a)


def _from_jsonable(a):
    from fractions import Fraction

    return Fraction(a) if isinstance(a, str) else a


# -- cube construction ----------------------------------------------------------


def crossing_order(d: PlanarDiagram) -> list[int]:
    """Greedy ordering: next crossing shares the most edges with those chosen."""
    n = d.n
    if n == 0:
        return []
    chosen = [0]
    edges = set(d.crossings[0])
    rest = set(range(1, n))
    while rest:
        c = max(sorted(rest), key=lambda c: sum(1 for e in d.crossings[c] if e in edges))
        chosen.append(c)
        edges.update(d.crossings[c])
        rest.remove(c)
    return chosen


def build_cube(
    d: PlanarDiagram,
    reduced: bool = True,
    ring: Ring | str = ZZ,
    limit: int = DEFAULT_CROSSING_LIMIT,
) -> BigradedComplex:
    """Khovanov cube of ``d`` with the Bar-Natan Frobenius algebra over ring[H].

    Gradings: i = |v| - n_-, q = (#1 - #X) + |v| + n_+ - 2 n_- (+1 when reduced).
    The reduced complex fixes X on the circle through the base point.
    """
    if isinstance(ring, str):
        ring = ring_from_tag(ring)
    if not ring.euclidean and ring.name == "Z[H]":
        ring = ZZ
    if d.n > limit:
        raise ComplexError(f"{d.n} crossings exceeds the configured limit of {limit}")
    if reduced and d.base_point is None:
        raise ComplexError("reduced complex needs a base point")
    order = crossing_order(d)
    n = d.n
    quads = [d.crossings[c] for c in order]
    nplus = sum(1 for c in order if d.signs[c] > 0)
    nminus = n - nplus
    labels = d.edge_labels
    shift_q = nplus - 2 * nminus + (1 if reduced else 0)

    # circles at each vertex
    circ: list[dict[int, int]] = []
    ncirc: list[int] = []
    for v in range(1 << n):
        uf = _UnionFind()
        for e in labels:
            uf.find(e)
        for p, (a, b, c, e) in enumerate(quads):
            if v >> p & 1:
                uf.union(a, e)
                uf.union(b, c)
            else:
                uf.union(a, b)
                uf.union(c, e)
        roots = sorted({uf.find(e) for e in labels})
        idx = {r: i for i, r in enumerate(roots)}
        circ.append({e: idx[uf.find(e)] for e in labels})
        ncirc.append(len(roots))

    hdeg: list[int] = []
    qdeg: list[int] = []
    glabels: list[Any] = []
    offset: list[dict[int, int]] = []
    for v in range(1 << n):
        k = ncirc[v]
        based = circ[v][d.base_point] if reduced else -1
        ids: dict[int, int] = {}
        r = bin(v).count("1")
        for mask in range(1 << k):
            if reduced and not mask >> based & 1:
                continue
            ids[mask] = len(hdeg)
            nx = bin(mask).count("1")
            hdeg.append(r - nminus)
            qdeg.append(k - 2 * nx + r + shift_q)
            glabels.append((v, mask))
        offset.append(ids)

    one = ring(1)
    mone = ring(-1)
    dmap: dict[int, dict[int, Any]] = {}
    for v in range(1 << n):
        cv = circ[v]
        for p in range(n):
            if v >> p & 1:
                continue
            w = v | (1 << p)
            cw = circ[w]
            sign = -1 if bin(v & ((1 << p) - 1)).count("1") % 2 else 1
            a, b, c, e = quads[p]
            A, B = cv[a], cv[c]
            # where each v-circle goes in w (not meaningful for the changed ones)
            rep: dict[int, int] = {}
            for lab, ci in cv.items():
                rep.setdefault(ci, cw[lab])
            others = [(ci, rep[ci]) for ci in range(ncirc[v]) if ci not in (A, B)]
            src_ids = offset[v]
            tgt_ids = offset[w]
            if A != B:
                M = cw[a]
                for mask, s in src_ids.items():
                    base = 0
                    for ci, wi in others:
                        if mask >> ci & 1:
                            base |= 1 << wi
                    xa, xb = mask >> A & 1, mask >> B & 1
                    terms = [(1, base | ((xa | xb) << M))]
                    _add_terms(ring, dmap, s, tgt_ids, terms, sign, one, mone)
            else:
                A1, A2 = cw[a], cw[b]
                for mask, s in src_ids.items():
                    base = 0
                    for ci, wi in others:
                        if mask >> ci & 1:
                            base |= 1 << wi
                    if mask >> A & 1:
                        terms = [(1, base | (1 << A1) | (1 << A2))]
                    else:
                        terms = [(1, base | (1 << A2)), (1, base | (1 << A1)), (-1, base)]
                    _add_terms(ring, dmap, s, tgt_ids, terms, sign, one, mone)
    return BigradedComplex(ring, hdeg, qdeg, dmap, glabels, reduced)


def _add_terms(ring, dmap, s, tgt_ids, terms, sign, one, mone) -> None:
    row = dmap.get(s)
    for coeff, mask in terms:
        t = tgt_ids.get(mask)
        if t is None:
            # reduced complex: the based circle carries X; other targets do not exist
            continue
        if row is None:
            row = dmap[s] = {}
        val = one if coeff * sign > 0 else mone
        if t in row:
            val = ring.add(row[t], val)
            if ring.is_zero(val):
                del row[t]
                continue
        row[t] = val


# -- simplification -------------------------------------------------------------


def gauss_eliminate(c: BigradedComplex) -> BigradedComplex:
    """Cancel pairs joined by a unit scalar times H^0 until none remain.

    Each cancellation of s -> t (scalar u) replaces d(z -> w) by
    d(z -> w) - d(s -> w) u^{-1} d(z -> t); the result is chain homotopy
    equivalent over ring[H].
    """
    R = c.ring
    q = c.qdeg
    out: dict[int, dict[int, Any]] = {s: dict(row) for s, row in c.d.items() if row}
    inn: dict[int, dict[int, Any]] = {}
    for s, row in out.items():
        for t, a in row.items():
            inn.setdefault(t, {})[s] = a
    alive = set(range(len(c)))

    def pivot_of(s: int) -> int | None:
        best = None
        for t, a in out.get(s, {}).items():
            if q[t] == q[s] and R.is_unit(a):
                cost = len(inn[t])
                if best is None or cost < best[0]:
                    best = (cost, t)
        return None if best is None else best[1]

    work = sorted(out, key=lambda s: len(out[s]))
    while work:
        nxt = []
        for s in work:
            if s not in alive:
                continue
            t = pivot_of(s)
            if t is None:
                continue
            u_inv = R.unit_inverse(out[s][t])
            srow = {w: b for w, b in out[s].items() if w != t}
            tcol = {z: a for z, a in inn[t].items() if z != s}
            for z, a in tcol.items():
                f = R.mul(a, u_inv)
                zrow = out[z]
                for w, b in srow.items():
                    val = R.sub(zrow.get(w, R.zero), R.mul(f, b))
                    if R.is_zero(val):
                        if w in zrow:
                            del zrow[w]
                            del inn[w][z]
                    else:
                        zrow[w] = val
                        inn.setdefault(w, {})[z] = val
                nxt.append(z)
            for g in (s, t):
                for w in list(out.get(g, {})):
                    del inn[w][g]
                out.pop(g, None)
                for z in list(inn.get(g, {})):
                    del out[z][g]
                inn.pop(g, None)
                alive.discard(g)
        work = sorted(set(nxt) & alive)
        if not work:
            # a final sweep catches pivots created away from the touched rows
            work = [s for s in sorted(alive) if pivot_of(s) is not None]
    keep = sorted(alive)
    new = {g: i for i, g in enumerate(keep)}
    d = {}
    for s in keep:
        row = {new[t]: a for t, a in out.get(s, {}).items()}
        if row:
            d[new[s]] = row
    labels = c.labels if c.labels else list(range(len(c)))
    return BigradedComplex(
        R, [c.hdeg[g] for g in keep], [c.qdeg[g] for g in keep], d, [labels[g] for g in keep], c.reduced
    )
