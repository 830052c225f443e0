"""Exact linear algebra over Z, Q, F_p and the polynomial rings F[H].

Everything here is exact: Python integers, ``fractions.Fraction`` and
residues mod p.  Smith normal form runs over any Euclidean domain in this
module (Z, Q[H], F_p[H]); Z[H] is rejected, callers route it through the
quantum-slice method in :mod:`slicetorus.homology`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence

__all__ = [
    "RingNotEuclidean",
    "Ring",
    "ZZ",
    "QQ",
    "GF",
    "PolyRing",
    "ZH",
    "ring_from_tag",
    "SparseMatrix",
    "SNFResult",
    "smith_normal_form",
    "rank",
    "kernel_basis",
    "image_basis",
    "det",
    "symmetric_signature",
]


class RingNotEuclidean(TypeError):
    """Raised when an operation needs a Euclidean domain but got Z[H]."""


class Ring:
    """Base class for the coefficient rings; elements are plain Python values."""

    name = "?"
    is_field = False
    euclidean = True

    zero: Any = 0
    one: Any = 1

    def __call__(self, v: Any) -> Any:
        return v

    def add(self, a, b):
        return self(a + b)

    def sub(self, a, b):
        return self(a - b)

    def mul(self, a, b):
        return self(a * b)

    def neg(self, a):
        return self(-a)

    def is_zero(self, a) -> bool:
        return a == 0

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def unit_inverse(self, a):
        raise NotImplementedError

    def divmod(self, a, b):
        raise NotImplementedError

    def norm(self, a) -> int:
        raise NotImplementedError

    def normal_unit(self, a):
        """Unit u with u*a in canonical form."""
        return self.one

    def __repr__(self) -> str:
        return self.name

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)


class _Integers(Ring):
    name = "Z"

    def __call__(self, v):
        return int(v)

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def unit_inverse(self, a):
        return a

    def divmod(self, a, b):
        return divmod(a, b)

    def norm(self, a) -> int:
        return abs(a)

    def normal_unit(self, a):
        return -1 if a < 0 else 1


class _Rationals(Ring):
    name = "Q"
    is_field = True

    def __call__(self, v):
        return Fraction(v)

    def is_unit(self, a) -> bool:
        return a != 0

    def unit_inverse(self, a):
        return 1 / Fraction(a)

    def divmod(self, a, b):
        return Fraction(a) / b, Fraction(0)

    def norm(self, a) -> int:
        return 0

    def normal_unit(self, a):
        return 1 / Fraction(a) if a else Fraction(1)


class GF(Ring):
    """Prime field F_p; elements are integers in [0, p)."""

    is_field = True

    def __init__(self, p: int) -> None:
        if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def __call__(self, v):
        return int(v) % self.p

    def is_unit(self, a) -> bool:
        return a % self.p != 0

    def unit_inverse(self, a):
        return pow(int(a), -1, self.p)

    def divmod(self, a, b):
        return self(a * self.unit_inverse(b)), 0

    def norm(self, a) -> int:
        return 0

    def normal_unit(self, a):
        return self.unit_inverse(a) if a % self.p else 1


ZZ = _Integers()
QQ = _Rationals()


class PolyRing(Ring):
    """Univariate polynomials in H over a field; elements are coefficient
    tuples, lowest degree first, with no trailing zeros."""

    def __init__(self, base: Ring) -> None:
        if not base.is_field:
            raise RingNotEuclidean(f"{base}[H] is not a Euclidean domain; use the slice method")
        self.base = base
        self.name = f"{base.name}[H]"
        self.zero = ()
        self.one = (base.one,)

    def __call__(self, v) -> tuple:
        if isinstance(v, tuple):
            coeffs = [self.base(c) for c in v]
        else:
            coeffs = [self.base(v)]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return tuple(coeffs)

    def monomial(self, a, k: int) -> tuple:
        return self((0,) * k + (a,))

    def add(self, a, b):
        n = max(len(a), len(b))
        return self(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def neg(self, a):
        return tuple(self.base(-c) for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [self.base.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return self(tuple(out))

    def is_zero(self, a) -> bool:
        return not a

    def is_unit(self, a) -> bool:
        return len(a) == 1

    def unit_inverse(self, a):
        return (self.base.unit_inverse(a[0]),)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(a)
        q = [self.base.zero] * max(len(a) - len(b) + 1, 0)
        lead_inv = self.base.unit_inverse(b[-1])
        while len(rem) >= len(b) and rem:
            shift = len(rem) - len(b)
            c = self.base(rem[-1] * lead_inv)
            q[shift] = c
            for i, y in enumerate(b):
                rem[shift + i] = self.base(rem[shift + i] - c * y)
            while rem and rem[-1] == 0:
                rem.pop()
        return self(tuple(q)), self(tuple(rem))

    def norm(self, a) -> int:
        return len(a) - 1

    def normal_unit(self, a):
        return (self.base.unit_inverse(a[-1]),) if a else self.one

    def degree(self, a) -> int:
        return len(a) - 1

    def format(self, a) -> str:
        if not a:
            return "0"
        terms = []
        for k, c in enumerate(a):
            if c == 0:
                continue
            h = "" if k == 0 else ("H" if k == 1 else f"H^{k}")
            if not h:
                terms.append(str(c))
            elif c == 1:
                terms.append(h)
            else:
                terms.append(f"{c}{h}")
        return " + ".join(terms)


class _ZH(Ring):
    """Z[H]: a tag only; not Euclidean."""

    name = "Z[H]"
    euclidean = False


ZH = _ZH()


def ring_from_tag(tag: str) -> Ring:
    """``Z``, ``Q``, ``F2``, ``F_3``, ``GF(5)`` -> coefficient ring."""
    t = tag.strip().upper().replace("_", "").replace("GF(", "F").rstrip(")")
    if t in ("Z", "ZZ"):
        return ZZ
    if t in ("Q", "QQ"):
        return QQ
    if t in ("ZH", "Z[H]"):
        return ZH
    if t.startswith("F") and t[1:].isdigit():
        return GF(int(t[1:]))
    raise ValueError(f"unknown ring tag {tag!r}")


# -- sparse matrices ------------------------------------------------------------


@dataclass
class SparseMatrix:
    nrows: int
    ncols: int
    entries: dict[tuple[int, int], Any] = field(default_factory=dict)
    ring: Ring = ZZ

    def __post_init__(self) -> None:
        for (r, c) in self.entries:
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise IndexError(f"entry ({r}, {c}) outside {self.nrows}x{self.ncols}")
        self.entries = {k: v for k, v in self.entries.items() if not self.ring.is_zero(v)}

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[Any]], ring: Ring = ZZ, ncols: int | None = None) -> SparseMatrix:
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        entries = {(i, j): ring(v) for i, row in enumerate(rows) for j, v in enumerate(row)}
        return cls(nrows, ncols, entries, ring)

    def to_dense(self) -> list[list[Any]]:
        out = [[self.ring.zero] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def dump(self) -> str:
        """Coordinate text format ``row col coeff hpow`` (one line per entry)."""
        lines = []
        for (r, c), v in sorted(self.entries.items()):
            if isinstance(self.ring, PolyRing):
                for k, a in enumerate(v):
                    if a != 0:
                        lines.append(f"{r} {c} {a} {k}")
            else:
                lines.append(f"{r} {c} {v} 0")
        return "\n".join(lines)


@dataclass
class SNFResult:
    diagonal: list[Any]
    left: list[list[Any]] | None = None
    right: list[list[Any]] | None = None
    left_inverse: list[list[Any]] | None = None

    @property
    def rank(self) -> int:
        return len(self.diagonal)


def _check_ring(ring: Ring) -> None:
    if not ring.euclidean:
        raise RingNotEuclidean(f"{ring} is not Euclidean; use homology.homology_zh")


def _identity(n: int, ring: Ring) -> list[list[Any]]:
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def smith_normal_form(m: SparseMatrix, with_transforms: bool = False) -> SNFResult:
    """Diagonalise ``m`` so that L*A*R = D with each entry dividing the next.

    ``diagonal`` lists only the nonzero invariant factors, in canonical form
    (positive integers, monic polynomials).  Pivots are chosen by smallest
    Euclidean norm, ties broken by a Markowitz fill estimate.
    """
    ring = m.ring
    _check_ring(ring)
    R = ring
    a = m.to_dense()
    nr, nc = m.nrows, m.ncols
    L = _identity(nr, R) if with_transforms else None
    Li = _identity(nr, R) if with_transforms else None
    Rt = _identity(nc, R) if with_transforms else None

    def row_op(i: int, j: int, q) -> None:
        # row_i -= q * row_j
        ai, aj = a[i], a[j]
        for k in range(nc):
            if not R.is_zero(aj[k]):
                ai[k] = R.sub(ai[k], R.mul(q, aj[k]))
        if L is not None:
            Lri, Lrj = L[i], L[j]
            for k in range(nr):
                if not R.is_zero(Lrj[k]):
                    Lri[k] = R.sub(Lri[k], R.mul(q, Lrj[k]))
            # inverse: col_j += q * col_i
            for row in Li:
                if not R.is_zero(row[i]):
                    row[j] = R.add(row[j], R.mul(q, row[i]))

    def col_op(i: int, j: int, q) -> None:
        # col_i -= q * col_j
        for row in a:
            if not R.is_zero(row[j]):
                row[i] = R.sub(row[i], R.mul(q, row[j]))
        if Rt is not None:
            for row in Rt:
                if not R.is_zero(row[j]):
                    row[i] = R.sub(row[i], R.mul(q, row[j]))

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        if L is not None:
            L[i], L[j] = L[j], L[i]
            for row in Li:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in a:
            row[i], row[j] = row[j], row[i]
        if Rt is not None:
            for row in Rt:
                row[i], row[j] = row[j], row[i]

    def scale_row(i: int, u) -> None:
        a[i] = [R.mul(u, v) for v in a[i]]
        if L is not None:
            L[i] = [R.mul(u, v) for v in L[i]]
            ui = R.unit_inverse(u)
            for row in Li:
                row[i] = R.mul(row[i], ui)

    diag = []
    t = 0
    while t < min(nr, nc):
        # pivot search on the trailing block
        best = None
        row_nnz = [sum(1 for j in range(t, nc) if not R.is_zero(a[i][j])) for i in range(nr)]
        col_nnz = [sum(1 for i in range(t, nr) if not R.is_zero(a[i][j])) for j in range(nc)]
        for i in range(t, nr):
            for j in range(t, nc):
                v = a[i][j]
                if R.is_zero(v):
                    continue
                key = (R.norm(v), (row_nnz[i] - 1) * (col_nnz[j] - 1), i, j)
                if best is None or key < best:
                    best = key
        if best is None:
            break
        swap_rows(t, best[2])
        swap_cols(t, best[3])
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, nr):
                if not R.is_zero(a[i][t]):
                    q, r = R.divmod(a[i][t], p)
                    row_op(i, t, q)
                    if not R.is_zero(r):
                        done = False
            for j in range(t + 1, nc):
                if not R.is_zero(a[t][j]):
                    q, r = R.divmod(a[t][j], p)
                    col_op(j, t, q)
                    if not R.is_zero(r):
                        done = False
            if not done:
                # move the smallest leftover in row/column t to the pivot
                cand = [(R.norm(a[i][t]), i, "r") for i in range(t, nr) if not R.is_zero(a[i][t])]
                cand += [(R.norm(a[t][j]), j, "c") for j in range(t, nc) if not R.is_zero(a[t][j])]
                _, idx, kind = min(cand)
                if kind == "r":
                    swap_rows(t, idx)
                else:
                    swap_cols(t, idx)
                continue
            # divisibility of the remaining block
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if not R.is_zero(a[i][j]) and not R.is_zero(R.divmod(a[i][j], p)[1]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, R.neg(R.one))
        u = R.normal_unit(a[t][t])
        if u != R.one:
            scale_row(t, u)
        diag.append(a[t][t])
        t += 1
    if with_transforms:
        return SNFResult(diag, L, Rt, Li)
    return SNFResult(diag)


def rank(m: SparseMatrix) -> int:
    return smith_normal_form(m).rank


def kernel_basis(m: SparseMatrix) -> list[list[Any]]:
    """Basis of the kernel (column vectors) as lists; a direct summand over a PID."""
    res = smith_normal_form(m, with_transforms=True)
    r = res.rank
    return [[res.right[i][j] for i in range(m.ncols)] for j in range(r, m.ncols)]


def image_basis(m: SparseMatrix) -> list[list[Any]]:
    """Basis of the column space, as vectors in the target."""
    R = m.ring
    res = smith_normal_form(m, with_transforms=True)
    return [[R.mul(res.diagonal[k], res.left_inverse[i][k]) for i in range(m.nrows)] for k in range(res.rank)]


# -- determinants and signatures over Z -----------------------------------------


def det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(map(int, r)) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def symmetric_signature(rows: Sequence[Sequence[Any]]) -> int:
    """Signature (positive minus negative eigenvalue count) of a symmetric
    rational matrix, by congruence diagonalisation."""
    a = [[Fraction(v) for v in r] for r in rows]
    n = len(a)
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix is not symmetric")
    sig = 0
    idx = list(range(n))
    while idx:
        piv = next((i for i in idx if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in idx for j in idx if i < j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # e_i <- e_i + e_j makes the diagonal entry 2*a_ij nonzero
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        sig += 1 if p > 0 else -1
        idx.remove(piv)
        for i in idx:
            if a[i][piv] != 0:
                f = a[i][piv] / p
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][i] -= f * a[k][piv]
    return sig


def hnf_lattice(vectors: Iterable[Sequence[int]], dim: int) -> list[list[int]]:
    """Row-style basis of the Z-lattice spanned by ``vectors`` (echelon form)."""
    rows = [list(map(int, v)) for v in vectors if any(v)]
    basis: list[list[int]] = []
    col = 0
    while rows and col < dim:
        nz = [r for r in rows if r[col] != 0]
        if not nz:
            col += 1
            continue
        zero = [r for r in rows if r[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            new = [p]
            for r in nz[1:]:
                q = r[col] // p[col]
                r2 = [x - q * y for x, y in zip(r, p)]
                if r2[col] != 0:
                    new.append(r2)
                elif any(r2):
                    zero.append(r2)
            nz = new
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        rows = zero
        col += 1
    return basis
