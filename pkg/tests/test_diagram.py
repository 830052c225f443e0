from __future__ import annotations

import json
import random

import pytest

from conftest import PROPERTY_KNOTS, catalog_rows, knot, knot_names
from slicetorus.diagram import (
    DiagramError,
    PlanarDiagram,
    canonical_key,
    checkerboard,
    connected_sum,
    faces,
    from_braid,
    from_json,
    greedy_simplify,
    is_alternating,
    is_connected,
    is_unlink_diagram,
    mirror,
    parse_pd,
    r3_moves,
    reidemeister_search,
    resolve,
    split_pieces,
    to_json,
)
from slicetorus.invariants import jones_polynomial, signature_gl

TREFOIL = "[[1,5,2,4],[3,1,4,6],[5,3,6,2]]"


def consecutive_signs(quads):
    """Signs from KnotInfo's consecutive edge numbering: the over strand
    runs from the larger label to the next one."""
    n2 = 2 * len(quads)
    out = []
    for a, b, c, d in quads:
        out.append(1 if (b - d) % n2 == 1 else -1)
    return out


def test_942_shape(k942):
    assert k942.n == 9
    assert k942.num_components == 1
    assert k942.writhe == k942.n_plus - k942.n_minus == -1
    assert not is_alternating(k942)


@pytest.mark.parametrize("name", knot_names(9))
def test_signs_match_edge_numbering(name):
    quads = json.loads(catalog_rows()[name].pd)
    assert list(knot(name).signs) == consecutive_signs(quads)


def test_parse_formats_agree():
    a = parse_pd(TREFOIL)
    b = parse_pd("PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]")
    c = parse_pd("PD(X(1,5,2,4),X(3,1,4,6),X(5,3,6,2))")
    assert a.crossings == b.crossings == c.crossings
    assert from_json(json.dumps(to_json(a))).crossings == a.crossings


def test_unknot_and_errors():
    u = parse_pd("PD[]")
    assert u.n == 0 and u.num_components == 1
    with pytest.raises(DiagramError):
        parse_pd("[[1,2,3,4]]")
    with pytest.raises(DiagramError):
        parse_pd("[[1,5,2,4],[3,1,4,6],[5,3,6,0]]")
    with pytest.raises(DiagramError):
        parse_pd("hello")


def test_mirror_involution_and_signs():
    d = knot("8_19")
    m = mirror(d)
    assert [-s for s in d.signs] == list(m.signs)
    assert mirror(m).crossings == d.crossings


def test_resolution_labels_swap_under_mirror(k942):
    for c in range(k942.n):
        for label in (0, 1):
            a = resolve(mirror(k942), c, label)
            b = mirror(resolve(k942, c, 1 - label))
            assert canonical_key(a) == canonical_key(b)


def test_resolve_942_crossing_a(k942):
    from slicetorus.invariants import determinant

    k0, k1 = resolve(k942, 2, 0), resolve(k942, 2, 1)
    assert k0.num_components == 1 and determinant(k0) == 3
    assert k1.num_components == 2 and determinant(k1) == 4


def test_faces_euler_characteristic():
    for name in PROPERTY_KNOTS:
        d = knot(name)
        if d.n == 0:
            continue
        # V - E + F = 2 for the 4-valent projection graph
        assert d.n - 2 * d.n + len(faces(d)) == 2


def test_checkerboard_is_proper(k942):
    cb = checkerboard(k942)
    assert set(cb.white_faces).isdisjoint(cb.flipped().white_faces)


def test_braid_closure_trefoil():
    t = from_braid([1, 1, 1], 2)
    assert t.num_components == 1 and t.writhe == 3
    assert jones_polynomial(t) == jones_polynomial(knot("3_1"))


def test_connected_sum():
    t = knot("3_1")
    s = connected_sum(t, t)
    assert s.n == 6 and s.num_components == 1
    assert signature_gl(s) == 2 * signature_gl(t)
    with pytest.raises(DiagramError):
        connected_sum(parse_pd("[[4,1,3,2],[2,3,1,4]]"), t)


def test_greedy_simplify_removes_kinks():
    # a single-crossing kink is the unknot
    kink = parse_pd("[[1,1,2,2]]")
    assert is_unlink_diagram(kink, 1)
    assert greedy_simplify(knot("3_1")).n == 3


def test_split_pieces():
    hopf = parse_pd("[[4,1,3,2],[2,3,1,4]]")
    assert split_pieces(hopf) == 1 and is_connected(hopf)


def test_r3_moves_preserve_invariants():
    rng = random.Random(7)
    moved = 0
    for name in knot_names(9):
        d = knot(name)
        j, s = jones_polynomial(d), signature_gl(d)
        for _ in range(4):
            opts = r3_moves(d)
            if not opts:
                break
            d = rng.choice(opts)
            moved += 1
            assert jones_polynomial(d) == j
            assert signature_gl(d) == s
    assert moved > 20


def test_reidemeister_search_finds_goal():
    d = knot("4_1")
    hit = reidemeister_search(d, lambda x: x.n == 4)
    assert hit is not None


def test_canonical_key_ignores_labels():
    d = knot("5_2")
    shift = {e: e + 100 for e in d.edge_labels}
    e = PlanarDiagram(tuple(tuple(shift[v] for v in x) for x in d.crossings))
    assert canonical_key(d) == canonical_key(e)
    assert canonical_key(d) != canonical_key(mirror(d))
