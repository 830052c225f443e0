"""Resolution-tree certificates: quasi-alternating search and the branched
double cover dimension count.

For a crossing of L with resolutions L0 and L1, the surgery exact triangle
bounds dim HF(S(L)) <= dim HF(S(L0)) + dim HF(S(L1)), with S the branched
double cover, while dim HF(S(L)) >= |H_1| = det(L) always holds.  A tree
whose leaves are L-space covers therefore proves S(L) is an L-space as soon
as the leaf determinants add up to det(L).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Union

from .diagram import (
    CrossingSite,
    DiagramError,
    PlanarDiagram,
    canonical_key,
    from_json,
    greedy_simplify,
    is_alternating,
    is_connected,
    is_unlink_diagram,
    mirror,
    reidemeister_search,
    resolve,
    to_json,
)
from .invariants import determinant, signature_gl

__all__ = [
    "TreeError",
    "StructuralMismatch",
    "DeterminantMismatch",
    "UnjustifiedLeaf",
    "Alternating",
    "Unknot",
    "DottedUnlink",
    "KnownLSpaceCover",
    "AssertedTQA",
    "Branch",
    "TreeNode",
    "LSpaceVerdict",
    "Inconclusive",
    "verify_lspace_tree",
    "verify_qa_certificate",
    "qa_certify",
    "qm_from_lspace",
    "mirror_tree",
    "tree_from_json",
    "tree_to_json",
    "load_tree",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 100_000
R3_SEARCH_STATES = 200


class TreeError(ValueError):
    pass


class StructuralMismatch(TreeError):
    pass


class DeterminantMismatch(TreeError):
    pass


class UnjustifiedLeaf(TreeError):
    pass


@dataclass(frozen=True)
class Alternating:
    pass


@dataclass(frozen=True)
class Unknot:
    pass


@dataclass(frozen=True)
class DottedUnlink:
    """Two-component unlink with a dot on each component."""


@dataclass(frozen=True)
class KnownLSpaceCover:
    name: str


@dataclass(frozen=True)
class Branch:
    site: int
    child0: TreeNode
    child1: TreeNode


@dataclass(frozen=True)
class AssertedTQA:
    """Leaf whose cover is taken to be an L-space on the strength of ``reference``.

    ``subtree``, when present, is the dotted resolution tree; it is checked
    structurally (resolutions, dotted unlinks, alternating terminal leaf)
    but no determinant law is enforced inside it.
    """

    reference: str
    subtree: Branch | None = None


Justification = Union[Alternating, Unknot, DottedUnlink, KnownLSpaceCover, AssertedTQA, Branch]


@dataclass(frozen=True)
class TreeNode:
    diagram: PlanarDiagram
    det: int
    just: Justification

    @property
    def name(self) -> str | None:
        return self.diagram.name


@dataclass
class LSpaceVerdict:
    is_lspace_over_F2: bool
    dim_upper: int
    h1_order: int
    report: list[str] = field(default_factory=list)
    root_key: Any = None

    def to_json(self) -> dict:
        return {
            "is_lspace_over_F2": self.is_lspace_over_F2,
            "dim_upper": self.dim_upper,
            "h1_order": self.h1_order,
            "report": self.report,
        }


@dataclass
class Inconclusive:
    reason: str
    nodes: int = 0

    def __bool__(self) -> bool:
        return False


# -- leaf checks ----------------------------------------------------------------------


def _alternating_witness(d: PlanarDiagram) -> PlanarDiagram | None:
    return reidemeister_search(
        d, lambda x: x.n > 0 and is_connected(x) and is_alternating(x), max_states=R3_SEARCH_STATES
    )


def _leaf_goal(x: PlanarDiagram) -> bool:
    if x.n == 0:
        return len(x.loops) == 1
    return is_connected(x) and is_alternating(x)


def _is_unknot(d: PlanarDiagram) -> bool:
    return reidemeister_search(d, lambda x: x.n == 0 and len(x.loops) == 1, max_states=R3_SEARCH_STATES) is not None


def _is_dotted_unlink(d: PlanarDiagram) -> bool:
    s = greedy_simplify(d)
    return is_unlink_diagram(d, 2) and len(s.dotted_components) == 2


def _label(node: TreeNode) -> str:
    return node.name or f"<{node.diagram.n} crossings>"


def _check_det(node: TreeNode) -> None:
    actual = determinant(node.diagram)
    if actual != node.det:
        raise DeterminantMismatch(f"{_label(node)}: recorded det {node.det}, computed {actual}")


def _undotted(d: PlanarDiagram) -> PlanarDiagram:
    return replace(d, dots=frozenset()) if d.dots else d


def _check_branch(node: TreeNode, br: Branch, dotted: bool = False) -> None:
    """Children must be the two resolutions up to R1/R2 moves and relabelling.

    Outside dotted (TQA) subtrees dots are ignored, so a child may introduce them.
    """
    d = node.diagram
    if not 0 <= br.site < d.n:
        raise StructuralMismatch(f"{_label(node)}: site {br.site} out of range")
    for lab, child in ((0, br.child0), (1, br.child1)):
        expect = resolve(d, CrossingSite(br.site, lab))
        got = child.diagram
        if not dotted:
            expect, got = _undotted(expect), _undotted(got)
        if canonical_key(expect) != canonical_key(got):
            raise StructuralMismatch(
                f"{_label(node)}: child {lab} is not the {lab}-resolution at crossing {br.site}"
            )


def _walk_tqa(node: TreeNode, br: Branch, report: list[str], depth: int) -> None:
    _check_branch(node, br, dotted=True)
    pad = "  " * depth
    for child in (br.child0, br.child1):
        _check_det(child)
        j = child.just
        if isinstance(j, DottedUnlink):
            if not _is_dotted_unlink(child.diagram):
                raise UnjustifiedLeaf(f"{_label(child)} is not recognised as a dotted two-component unlink")
            report.append(f"{pad}  {_label(child)}: dotted unlink, det {child.det}")
        elif isinstance(j, Alternating):
            w = _alternating_witness(child.diagram)
            if w is None:
                raise UnjustifiedLeaf(f"{_label(child)}: no connected alternating diagram found")
            report.append(f"{pad}  {_label(child)}: connected alternating ({w.n} crossings), det {child.det}")
        elif isinstance(j, Branch):
            report.append(f"{pad}  {_label(child)}: det {child.det}, resolve crossing {j.site}")
            _walk_tqa(child, j, report, depth + 1)
        else:
            raise UnjustifiedLeaf(f"{_label(child)}: justification {type(j).__name__} not allowed in a TQA tree")


def _dim_upper(node: TreeNode, report: list[str], depth: int) -> int:
    _check_det(node)
    pad = "  " * depth
    j = node.just
    label = _label(node)
    if isinstance(j, Branch):
        return _dim(node, report, depth)
    if isinstance(j, Unknot):
        if not _is_unknot(node.diagram):
            raise UnjustifiedLeaf(f"{label}: not recognised as the unknot")
        report.append(f"{pad}{label}: unknot, dim 1")
        return 1
    if node.det < 1:
        raise UnjustifiedLeaf(f"{label}: determinant 0 cannot be an L-space leaf")
    if isinstance(j, Alternating):
        w = _alternating_witness(node.diagram)
        if w is None:
            raise UnjustifiedLeaf(f"{label}: no connected alternating diagram found")
        report.append(f"{pad}{label}: connected alternating, dim = det = {node.det}")
        return node.det
    if isinstance(j, KnownLSpaceCover):
        report.append(f"{pad}{label}: known L-space cover ({j.name}), dim = det = {node.det} [trusted]")
        return node.det
    if isinstance(j, AssertedTQA):
        report.append(f"{pad}{label}: two-fold quasi-alternating ({j.reference}), dim = det = {node.det} [asserted]")
        if j.subtree is not None:
            _walk_tqa(node, j.subtree, report, depth + 1)
        return node.det
    raise UnjustifiedLeaf(f"{label}: justification {type(j).__name__} cannot close a branch")


def verify_lspace_tree(t: TreeNode) -> LSpaceVerdict:
    """Check a resolution tree and return the dimension-count verdict."""
    report: list[str] = []
    dim = _dim(t, report, 0)
    ok = t.det >= 1 and dim == t.det
    report.append(
        f"dim_upper = {dim}, |H_1| = {t.det}: " + ("L-space" if ok else "not proved to be an L-space")
    )
    return LSpaceVerdict(ok, dim, t.det, report, canonical_key(t.diagram))


def _dim(node: TreeNode, report: list[str], depth: int) -> int:
    # wrapper that places branch summaries before their children
    j = node.just
    if isinstance(j, Branch):
        _check_det(node)
        _check_branch(node, j)
        at = len(report)
        a = _dim(j.child0, report, depth + 1)
        b = _dim(j.child1, report, depth + 1)
        law = "=" if node.det == j.child0.det + j.child1.det else "!="
        report.insert(
            at,
            "  " * depth
            + f"{_label(node)}: det {node.det} {law} {j.child0.det} + {j.child1.det}; dim <= {a} + {b} = {a + b}",
        )
        return a + b
    return _dim_upper(node, report, depth)


def qm_from_lspace(d: PlanarDiagram, verdict: LSpaceVerdict) -> int:
    """q_M = theta = -sigma/2 when the branched double cover is an L-space."""
    if not verdict.is_lspace_over_F2:
        raise ValueError("the verdict does not establish an L-space; q_M is not determined by this rule")
    if d.num_components != 1:
        raise DiagramError("q_M is defined for knots")
    if verdict.root_key is not None and verdict.root_key != canonical_key(d):
        raise ValueError("the verdict was computed for a different diagram")
    return -signature_gl(d) // 2


# -- quasi-alternating search --------------------------------------------------------


class _BudgetExhausted(Exception):
    pass


def qa_certify(d: PlanarDiagram, budget: int = DEFAULT_BUDGET) -> TreeNode | Inconclusive:
    """Depth-first search for a quasi-alternating certificate.

    Memoised on the simplified, relabelling-invariant key.  Sound but not
    complete: failure returns Inconclusive, never a claim of non-QA.
    """
    det0 = determinant(d)
    if det0 == 0:
        raise ValueError("quasi-alternating certification needs a diagram with nonzero determinant")
    memo: dict[Any, TreeNode | None] = {}
    count = [0]

    def leaf(x: PlanarDiagram, det_x: int) -> TreeNode | None:
        w = reidemeister_search(x, _leaf_goal, max_states=R3_SEARCH_STATES)
        if w is None:
            return None
        return TreeNode(x, det_x, Unknot() if w.n == 0 else Alternating())

    def search(x: PlanarDiagram, det_x: int) -> TreeNode | None:
        key = canonical_key(x)
        if key in memo:
            # a hit is R1/R2-equivalent to x up to relabelling, which is all a parent checks
            return memo[key]
        count[0] += 1
        if count[0] > budget:
            raise _BudgetExhausted
        found = leaf(x, det_x)
        if found is None:
            s = greedy_simplify(x)
            for c in range(s.n):
                r0, r1 = resolve(s, c, 0), resolve(s, c, 1)
                d0, d1 = determinant(r0), determinant(r1)
                if d0 < 1 or d1 < 1 or d0 + d1 != det_x:
                    continue
                t0 = search(r0, d0)
                if t0 is None:
                    continue
                t1 = search(r1, d1)
                if t1 is None:
                    continue
                # sites index the simplified diagram, so the node records it
                found = TreeNode(s, det_x, Branch(c, t0, t1))
                break
        memo[key] = found
        return found

    try:
        res = search(d, det0)
    except _BudgetExhausted:
        return Inconclusive(f"search budget of {budget} nodes exhausted", count[0])
    if res is None:
        return Inconclusive("no quasi-alternating resolution tree found", count[0])
    return res


def verify_qa_certificate(t: TreeNode) -> None:
    """Re-check a certificate: resolutions, determinants and additivity at every branch."""
    _check_det(t)
    j = t.just
    if isinstance(j, Branch):
        _check_branch(t, j)
        if j.child0.det < 1 or j.child1.det < 1 or t.det != j.child0.det + j.child1.det:
            raise DeterminantMismatch(f"{_label(t)}: det {t.det} != {j.child0.det} + {j.child1.det}")
        verify_qa_certificate(j.child0)
        verify_qa_certificate(j.child1)
    elif isinstance(j, Unknot):
        if not _is_unknot(t.diagram):
            raise UnjustifiedLeaf(f"{_label(t)}: not recognised as the unknot")
    elif isinstance(j, Alternating):
        if _alternating_witness(t.diagram) is None:
            raise UnjustifiedLeaf(f"{_label(t)}: no connected alternating diagram found")
    else:
        raise UnjustifiedLeaf(f"{_label(t)}: {type(j).__name__} leaves are not allowed in a QA certificate")


# -- transformations and serialisation ------------------------------------------------


def mirror_tree(t: TreeNode) -> TreeNode:
    """Mirror every diagram; mirroring swaps the two resolutions at each crossing."""
    j = t.just
    if isinstance(j, Branch):
        j = _mirror_branch(j)
    elif isinstance(j, AssertedTQA) and j.subtree is not None:
        j = AssertedTQA(j.reference, _mirror_branch(j.subtree))
    return TreeNode(mirror(t.diagram), t.det, j)


def _mirror_branch(br: Branch) -> Branch:
    return Branch(br.site, mirror_tree(br.child1), mirror_tree(br.child0))


def _just_to_str(j: Justification) -> str:
    if isinstance(j, Alternating):
        return "alt"
    if isinstance(j, Unknot):
        return "unknot"
    if isinstance(j, DottedUnlink):
        return "unlink2"
    if isinstance(j, KnownLSpaceCover):
        return f"lspace:{j.name}"
    if isinstance(j, AssertedTQA):
        return f"tqa:{j.reference}"
    return "branch"


def tree_to_json(t: TreeNode) -> dict:
    out = to_json(t.diagram)
    out["det"] = t.det
    out["just"] = _just_to_str(t.just)
    br = t.just if isinstance(t.just, Branch) else getattr(t.just, "subtree", None)
    if br is not None:
        out["site"] = [br.site]
        out["children"] = [tree_to_json(br.child0), tree_to_json(br.child1)]
    return out


def tree_from_json(obj: dict | str) -> TreeNode:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        diagram = from_json({k: obj[k] for k in ("pd", "name", "loops", "base_point", "dots") if k in obj})
        det = int(obj["det"])
        just = str(obj.get("just", "branch"))
    except (KeyError, TypeError, ValueError) as exc:
        raise TreeError(f"malformed tree node: {exc}") from None
    branch = None
    if "children" in obj:
        kids = obj["children"]
        site = obj.get("site")
        if not isinstance(kids, list) or len(kids) != 2 or not site:
            raise TreeError("a branch needs a site and exactly two children")
        branch = Branch(int(site[0]), tree_from_json(kids[0]), tree_from_json(kids[1]))
    if just == "branch":
        if branch is None:
            raise TreeError("branch node without children")
        return TreeNode(diagram, det, branch)
    if just.startswith("tqa:"):
        return TreeNode(diagram, det, AssertedTQA(just[4:], branch))
    if branch is not None:
        raise TreeError(f"leaf justification {just!r} cannot have children")
    if just == "alt":
        j: Justification = Alternating()
    elif just == "unknot":
        j = Unknot()
    elif just == "unlink2":
        j = DottedUnlink()
    elif just.startswith("lspace:"):
        j = KnownLSpaceCover(just[7:])
    else:
        raise TreeError(f"unknown justification {just!r}")
    return TreeNode(diagram, det, j)


def load_tree(path: str | Path) -> TreeNode:
    return tree_from_json(Path(path).read_text())

