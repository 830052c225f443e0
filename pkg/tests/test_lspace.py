from __future__ import annotations

import copy
import json
from importlib import resources

import pytest

from conftest import catalog_rows, knot
from slicetorus.diagram import mirror
from slicetorus.lspace import (
    DeterminantMismatch,
    Inconclusive,
    StructuralMismatch,
    TreeError,
    UnjustifiedLeaf,
    mirror_tree,
    qa_certify,
    qm_from_lspace,
    tree_from_json,
    tree_to_json,
    verify_lspace_tree,
    verify_qa_certificate,
)


def shipped() -> dict:
    return json.loads(resources.files("slicetorus").joinpath("data/lspace_tree_9_42.json").read_text())


def test_shipped_tree_verifies(k942):
    v = verify_lspace_tree(tree_from_json(shipped()))
    assert v.is_lspace_over_F2
    assert v.dim_upper == v.h1_order == 7
    assert qm_from_lspace(k942, v) == -1
    assert any("8_19" in line for line in v.report)


def test_json_round_trip():
    obj = shipped()
    assert tree_to_json(tree_from_json(obj)) == obj


def test_mirror_tree(k942):
    v = verify_lspace_tree(mirror_tree(tree_from_json(shipped())))
    assert v.dim_upper == 7
    assert qm_from_lspace(mirror(k942), v) == 1
    with pytest.raises(ValueError):
        qm_from_lspace(k942, v)


def corrupt(fn):
    obj = copy.deepcopy(shipped())
    fn(obj)
    return obj


def _swap_children(o):
    o["children"].reverse()


def _move_site(o):
    o["site"] = [4]


def _wrong_root_det(o):
    o["det"] = 8


def _wrong_leaf_det(o):
    o["children"][1]["children"][1]["children"][1]["det"] = 5


def _fake_alternating(o):
    o["children"][0]["just"] = "alt"


def _flip_child_crossing(o):
    a, b, c, d = o["children"][0]["pd"][1]
    o["children"][0]["pd"][1] = [b, c, d, a]


def _unknot_claim(o):
    o["children"][1]["children"][1]["children"][1]["just"] = "unknot"


@pytest.mark.parametrize(
    "fn,err",
    [
        (_swap_children, StructuralMismatch),
        (_move_site, StructuralMismatch),
        (_flip_child_crossing, StructuralMismatch),
        (_wrong_root_det, DeterminantMismatch),
        (_wrong_leaf_det, DeterminantMismatch),
        (_fake_alternating, UnjustifiedLeaf),
        (_unknot_claim, UnjustifiedLeaf),
    ],
)
def test_corrupted_trees_rejected(fn, err):
    with pytest.raises(err):
        verify_lspace_tree(tree_from_json(corrupt(fn)))


def test_malformed_json():
    with pytest.raises(TreeError):
        tree_from_json({"pd": [], "just": "branch", "det": 1})
    with pytest.raises(TreeError):
        tree_from_json({"pd": [], "just": "mystery", "det": 1})
    with pytest.raises(TreeError):
        tree_from_json({"pd": []})


NON_ALT_QA = [n for n, e in catalog_rows().items()
              if e.has("quasi_alternating") and not e.has("alternating") and (e.crossing_number or 0) <= 9]


@pytest.mark.parametrize("name", NON_ALT_QA + ["3_1", "7_4", "8_17"])
def test_qa_certificates(name):
    t = qa_certify(knot(name))
    assert not isinstance(t, Inconclusive), t
    verify_qa_certificate(t)
    assert t.det == catalog_rows()[name].det


@pytest.mark.parametrize("name", ["9_42", "9_46", "8_19"])
def test_non_qa_knots_inconclusive(name):
    res = qa_certify(knot(name))
    assert isinstance(res, Inconclusive) and not res


def test_budget_exhaustion():
    res = qa_certify(knot("8_20"), budget=1)
    assert isinstance(res, Inconclusive)
