"""Regenerate the shipped resolution tree for 9_42 (branched double cover is an L-space).

    python scripts/build_lspace_tree_9_42.py

Starting from the catalog diagram of 9_42, crossing A = 2 resolves to 8_19
(det 3) and 7n1 (det 4).  With dots on both components of 7n1, crossing B = 3
gives a dotted two-component unlink and L6n1; crossing C = 3 of L6n1 gives a
dotted unlink and L4a1.  The script asserts these identifications by
determinant, component count and Jones polynomial before writing.
"""

from __future__ import annotations

import csv
import itertools
import json
from dataclasses import replace
from pathlib import Path

from slicetorus.diagram import mirror, parse_pd, resolve, reverse_components
from slicetorus.invariants import determinant, jones_polynomial
from slicetorus.lspace import (
    Alternating,
    AssertedTQA,
    Branch,
    DottedUnlink,
    KnownLSpaceCover,
    TreeNode,
    tree_to_json,
    verify_lspace_tree,
)

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "src" / "slicetorus" / "data"
A, B, C = 2, 3, 3


def jones_forms(d):
    out = set()
    for rev in itertools.product([0, 1], repeat=d.num_components):
        dd = reverse_components(d, [i for i, x in enumerate(rev) if x])
        for m in (dd, mirror(dd)):
            out.add(tuple(sorted(jones_polynomial(m).items())))
    return out


def same_link(d, pd_text):
    return bool(jones_forms(d) & jones_forms(parse_pd(pd_text)))


def main() -> None:
    knots = {r["name"]: r for r in csv.DictReader(open(DATA / "knots.csv"))}
    links = {r["name"]: r for r in csv.DictReader(open(DATA / "links.csv"))}
    k = parse_pd(knots["9_42"]["pd"], name="9_42")
    k819 = resolve(k, A, 0).with_name("8_19")
    l7 = resolve(k, A, 1).with_name("7n1")
    l7 = replace(l7, dots=frozenset(min(c) for c in l7.components))
    u1 = resolve(l7, B, 0).with_name("U2")
    l6 = resolve(l7, B, 1).with_name("L6n1")
    u2 = resolve(l6, C, 0).with_name("U2")
    l4 = resolve(l6, C, 1).with_name("L4a1")
    assert same_link(k819, knots["8_19"]["pd"]) and determinant(k819) == 3
    assert same_link(l7, links["L7n1"]["pd"]) and determinant(l7) == 4
    assert same_link(l6, links["L6n1"]["pd"]) and l6.num_components == 3
    assert same_link(l4, links["L4a1"]["pd"]) and determinant(l4) == 4

    def node(d, just):
        return TreeNode(d, determinant(d), just)

    inner = Branch(C, node(u2, DottedUnlink()), node(l4, Alternating()))
    tqa = Branch(B, node(u1, DottedUnlink()), node(l6, inner))
    tree = node(
        k,
        Branch(
            A,
            node(k819, KnownLSpaceCover("S(2,3,4) = branched double cover of T(3,4), positive scalar curvature")),
            node(l7, AssertedTQA("two-fold quasi-alternating via dotted resolutions", tqa)),
        ),
    )
    verdict = verify_lspace_tree(tree)
    assert verdict.is_lspace_over_F2 and verdict.dim_upper == 7
    (DATA / "lspace_tree_9_42.json").write_text(json.dumps(tree_to_json(tree), indent=1) + "\n")
    print("\n".join(verdict.report))


if __name__ == "__main__":
    main()
