from __future__ import annotations

import json
from collections import Counter

import pytest

from conftest import PROPERTY_KNOTS, extra_rows, knot, knot_names
from slicetorus.complex import BigradedComplex, build_cube, gauss_eliminate
from slicetorus.diagram import mirror
from slicetorus.exactalg import GF, QQ, ZZ
from slicetorus.homology import (
    DecompositionIncomplete,
    GradedModule,
    Summand,
    free_part_bigradings,
    homology_pid,
    homology_zh,
)

# published homology grid of 9_42, for the chirality with signature -2
GRID_942 = [
    (0, 0, "free", 0),
    (2, 6, "hcyclic", 1),
    (0, 2, "hcyclic", 1),
    (-1, 0, "hcyclic", 1),
    (-3, -4, "hcyclic", 1),
]


def reduced(d, ring=ZZ):
    return gauss_eliminate(build_cube(d, reduced=True, ring=ring))


def key(m: GradedModule):
    return sorted((s.i, s.q, s.kind, s.k) for s in m.summands)


def test_table2_grid(k942):
    m = homology_zh(reduced(mirror(k942)))
    assert m.complete
    assert key(m) == sorted(GRID_942)


def dual(summands):
    """Mirror duality: free at (i,q) -> (-i,-q); H-torsion of order k at (i,q) -> (1-i, 2k-q)."""
    out = []
    for i, q, kind, k in summands:
        out.append((-i, -q, kind, k) if kind == "free" else (1 - i, 2 * k - q, kind, k))
    return sorted(out)


def test_table2_given_chirality_is_dual(k942):
    m = homology_zh(reduced(k942))
    assert key(m) == dual(GRID_942)


@pytest.mark.parametrize("name", PROPERTY_KNOTS)
def test_mirror_duality(name):
    d = knot(name)
    a = key(homology_zh(reduced(d)))
    b = key(homology_zh(reduced(mirror(d))))
    assert all(kind in ("free", "hcyclic") for _, _, kind, _ in a)
    assert b == dual(a)


def test_grid_rendering():
    m = homology_zh(reduced(knot("3_1")))
    lines = m.grid().splitlines()
    assert lines[0].split("|")[1].split() == ["0", "1", "2", "3"]
    assert lines[2].startswith("8 |") and lines[2].endswith("Z[H]/(H)")
    assert "Z[H]" in lines[-1]


@pytest.mark.parametrize("name", PROPERTY_KNOTS)
def test_free_rank_one(name):
    for ring in (ZZ, QQ, GF(2), GF(3)):
        c = reduced(knot(name), ring)
        m = homology_zh(c) if ring is ZZ else homology_pid(c)
        assert m.free_rank() == 1


@pytest.mark.parametrize("name", PROPERTY_KNOTS)
def test_mirror_reflects_free_summand(name):
    d = knot(name)
    (i, q), = free_part_bigradings(homology_zh(reduced(d)))
    (mi, mq), = free_part_bigradings(homology_zh(reduced(mirror(d))))
    assert (i, mi) == (0, 0) and mq == -q


@pytest.mark.parametrize("name", knot_names(9))
def test_khovanov_over_z_matches_knotinfo(name):
    kh = Counter()
    for s in homology_pid(reduced(knot(name)), h_zero=True).summands:
        kh[(s.n if s.kind == "int" else 0, s.i, s.q)] += 1
    ref = Counter({(t, i, q): m for t, m, i, q in json.loads(extra_rows()[name]["kh_reduced_vector"])})
    assert kh == ref


@pytest.mark.parametrize("name", knot_names(8) + ["9_42", "9_46"])
def test_zh_agrees_with_qh(name):
    c = reduced(knot(name))
    assert key(homology_zh(c)) == key(homology_pid(c.change_ring(QQ)))


def test_819_has_h_squared_torsion():
    m = homology_zh(reduced(knot("8_19")))
    assert (5, 16, "hcyclic", 2) in key(m)


def _tiny(hdeg, qdeg, d):
    return BigradedComplex(ZZ, list(hdeg), list(qdeg), d, [None] * len(hdeg), True)


def test_integer_torsion_summand():
    m = homology_zh(_tiny([0, 1], [0, 0], {0: {1: 2}}))
    assert m.summands == [Summand(1, 0, "int", n=2)]
    assert m.summands[0].name() == "Z[H]/(2)"
    assert m.summands[0].name(with_h=False) == "Z/2"


def test_mixed_summand():
    m = homology_zh(_tiny([0, 0, 1], [2, 0, 2], {0: {2: 2}, 1: {2: 1}}))
    assert m.complete
    assert key(m) == [(0, 0, "free", 0), (1, 2, "mixed", 1)]
    assert m.summands[1].name() == "Z[H]/(2,H)"


def test_non_cyclic_cokernel_is_flagged():
    # Z[H]/(2H) is not a sum of the supported cyclic summands
    m = homology_zh(_tiny([0, 1], [0, 2], {0: {1: 2}}))
    assert not m.complete
    with pytest.raises(DecompositionIncomplete):
        free_part_bigradings(m)


def test_module_json():
    m = homology_zh(reduced(knot("3_1")))
    obj = json.loads(m.dumps())
    assert obj["complete"] and {s["name"] for s in obj["summands"]} == {"Z[H]", "Z[H]/(H)"}
