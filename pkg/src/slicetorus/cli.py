"""``sts``: command-line access to the invariants, checkers and tables.

Exit codes: 0 success, 2 inconclusive or inapplicable, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from importlib import resources
from pathlib import Path

from .diagram import DiagramError, PlanarDiagram, mirror, parse_pd

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2

_TORUS_RE = re.compile(r"^T\((\d+),\s*(\d+)\)$")


class UsageError(ValueError):
    pass


def _shipped_links() -> dict[str, str]:
    text = resources.files("slicetorus").joinpath("data/links.csv").read_text()
    return {r["name"]: r["pd"] for r in csv.DictReader(io.StringIO(text))}


def resolve_knot(text: str) -> PlanarDiagram:
    """A catalog name (``9_42``, ``m(9_42)``), a link name (``L7n1`` or ``7n1``),
    ``T(p,q)``, an inline PD code, or a path to a file holding one."""
    from .catalog import load_catalog

    text = text.strip()
    if text.startswith("m(") and text.endswith(")"):
        return mirror(resolve_knot(text[2:-1]))
    m = _TORUS_RE.match(text)
    if m:
        from .invariants import TorusKnotParams, torus_knot_diagram

        return torus_knot_diagram(TorusKnotParams(int(m.group(1)), int(m.group(2))))
    if text[:1] in "[{" or text.upper().startswith("PD"):
        return parse_pd(text)
    for e in load_catalog():
        if e.name == text:
            return e.diagram()
    links = _shipped_links()
    for key in (text, "L" + text):
        if key in links:
            return parse_pd(links[key], name=key)
    p = Path(text)
    if p.is_file():
        return parse_pd(p.read_text(), name=p.stem)
    raise UsageError(f"unknown knot {text!r}: not in the shipped catalog, not a PD code, not a file")


def _print_json(obj) -> None:
    print(json.dumps(obj, indent=1, sort_keys=False))


def count_grid(counts: dict[tuple[int, int], int]) -> str:
    """Generator counts with q rows (descending) and i columns."""
    if not counts:
        return "(no generators)"
    i_vals = range(min(i for i, _ in counts), max(i for i, _ in counts) + 1)
    qs = sorted({q for _, q in counts}, reverse=True)
    q_vals = range(qs[0], qs[-1] - 1, -2 if all((q - qs[0]) % 2 == 0 for q in qs) else -1)
    w = max(len(str(x)) for x in list(i_vals) + list(counts.values()))
    qw = max(len(str(q)) for q in q_vals)
    head = " " * qw + " | " + " ".join(str(i).rjust(w) for i in i_vals)
    lines = [head, "-" * len(head)]
    for q in q_vals:
        row = [str(counts[(i, q)]).rjust(w) if (i, q) in counts else " " * w for i in i_vals]
        lines.append((str(q).rjust(qw) + " | " + " ".join(row)).rstrip())
    return "\n".join(lines)


def _ring_tag(text: str) -> str:
    t = text.strip().upper()
    return {"ZH": "Z[H]", "Z[H]": "Z[H]", "QH": "Q", "Q[H]": "Q"}.get(t, text.strip())


# -- subcommands ---------------------------------------------------------------------


def cmd_invariants(a) -> int:
    from .invariants import invariant_report

    d = resolve_knot(a.knot)
    rep = invariant_report(d, fields=tuple(a.fields.split(",")), homology=not a.no_homology)
    _print_json(rep.to_json())
    return EXIT_OK


def cmd_ckh(a) -> int:
    from .complex import build_cube, gauss_eliminate

    d = resolve_knot(a.knot)
    c = build_cube(d, reduced=a.reduced, ring=_ring_tag(a.ring))
    if a.simplify:
        c = gauss_eliminate(c)
    if a.json:
        print(c.dumps())
    else:
        print(f"{d.name or 'diagram'}: {len(c)} generators ({'reduced' if a.reduced else 'unreduced'}, ring {c.ring.name}[H])")
        print(count_grid(c.counts()))
    return EXIT_OK


def _homology(d: PlanarDiagram, ring: str, reduced: bool, h_zero: bool):
    from .complex import build_cube, gauss_eliminate
    from .homology import homology_pid, homology_zh

    c = gauss_eliminate(build_cube(d, reduced=reduced, ring=ring))
    if h_zero or ring not in ("Z[H]", "Z"):
        return c, homology_pid(c, h_zero=h_zero)
    return c, homology_zh(c)


def cmd_homology(a) -> int:
    from .invariants import signature_gl

    d = resolve_knot(a.knot)
    ring = _ring_tag(a.ring)
    diagrams = [d] if a.as_given else [d, mirror(d)]
    out = []
    incomplete = False
    for x in diagrams:
        sig = signature_gl(x) if x.num_components == 1 else None
        c, m = _homology(x, ring, a.reduced, a.h_zero)
        incomplete |= not m.complete
        out.append((x, sig, c, m))
    if a.json:
        _print_json([{"diagram": x.name, "signature": s, "homology": m.to_json()} for x, s, _, m in out])
    else:
        for n, (x, sig, c, m) in enumerate(out):
            if n:
                print()
            label = "as given" if n == 0 else "mirror"
            print(f"{x.name or 'diagram'} ({label}, signature {sig})")
            print(f"simplified complex: {len(c)} generators")
            print(count_grid(c.counts()))
            print(f"homology over {m.ring}:")
            print(m.grid())
            if not m.complete:
                print("decomposition incomplete: " + m.note)
    return EXIT_INCONCLUSIVE if incomplete else EXIT_OK


def cmd_ss(a) -> int:
    from .invariants import ss_tilde

    d = resolve_knot(a.knot)
    print(ss_tilde(d, _ring_tag(a.ring)))
    return EXIT_OK


def cmd_s(a) -> int:
    from .invariants import rasmussen_s

    print(rasmussen_s(resolve_knot(a.knot), a.field))
    return EXIT_OK


def cmd_sig(a) -> int:
    from .invariants import signature_gl

    print(signature_gl(resolve_knot(a.knot)))
    return EXIT_OK


def cmd_det(a) -> int:
    from .invariants import determinant

    print(determinant(resolve_knot(a.knot)))
    return EXIT_OK


def cmd_qa(a) -> int:
    from .lspace import Inconclusive, qa_certify, tree_to_json

    d = resolve_knot(a.knot)
    res = qa_certify(d, budget=a.budget)
    if isinstance(res, Inconclusive):
        print(f"inconclusive: {res.reason} ({res.nodes} nodes)")
        return EXIT_INCONCLUSIVE
    if a.json:
        _print_json(tree_to_json(res))
    else:
        print(f"{d.name or 'diagram'} is quasi-alternating (certificate with det {res.det})")
    return EXIT_OK


def cmd_lspace_verify(a) -> int:
    from .lspace import load_tree, verify_lspace_tree

    v = verify_lspace_tree(load_tree(a.tree))
    if a.json:
        _print_json(v.to_json())
    else:
        print("\n".join(v.report))
        print(f"dim_upper = {v.dim_upper}, |H_1| = {v.h1_order}: "
              + ("L-space over F2" if v.is_lspace_over_F2 else "not shown to be an L-space"))
    return EXIT_OK if v.is_lspace_over_F2 else EXIT_INCONCLUSIVE


def cmd_sln_check(a) -> int:
    from .slnss import SlnInapplicable, TriplyGradedTable, conclude, parse_n_range

    t = TriplyGradedTable.from_csv(a.table)
    try:
        v = conclude(t, parse_n_range(a.n))
    except SlnInapplicable as exc:
        print(f"inapplicable: {exc}")
        return EXIT_INCONCLUSIVE
    _print_json(v.to_json())
    return EXIT_OK


def cmd_table(a) -> int:
    from .catalog import build_table, default_evidence, diff_table, ingest, load_catalog, read_table, render_table

    entries = ingest(a.catalog) if a.catalog else load_catalog()
    if a.max_crossings is not None:
        entries = [e for e in entries if (e.crossing_number or 0) <= a.max_crossings]
    evidence = {} if a.no_evidence else default_evidence()
    rows = build_table(entries, evidence)
    if a.diff:
        diffs = diff_table(rows, read_table(a.diff))
        for x in diffs:
            print(f"{x.name}\t{x.column}\tours={x.ours}\tfixture={x.fixture}")
        print(f"{len(diffs)} differing cells")
        code = EXIT_OK if not diffs else EXIT_ERROR
    else:
        sys.stdout.write(render_table(rows, a.format))
        code = EXIT_OK
    if any(r.error for r in rows):
        for r in rows:
            if r.error:
                print(f"error: {r.error}", file=sys.stderr)
        code = EXIT_ERROR
    return code


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sts", description="Slice-torus invariants, Bar-Natan homology and q_M tables.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("invariants", help="signature, determinant, ss~ and s as JSON")
    s.add_argument("knot")
    s.add_argument("--fields", default="Q,F2")
    s.add_argument("--no-homology", action="store_true")
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("ckh", help="Bar-Natan complex generator counts")
    s.add_argument("knot")
    s.add_argument("--ring", default="Z")
    s.add_argument("--reduced", action="store_true")
    s.add_argument("--simplify", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_ckh)

    s = sub.add_parser("homology", help="Bar-Natan homology grid (both chiralities unless --as-given)")
    s.add_argument("knot")
    s.add_argument("--ring", default="ZH")
    s.add_argument("--reduced", action="store_true", default=True)
    s.add_argument("--unreduced", dest="reduced", action="store_false")
    s.add_argument("--h-zero", action="store_true", help="set H = 0 (Khovanov homology)")
    s.add_argument("--as-given", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("ss", help="ss~ over the given coefficients")
    s.add_argument("knot")
    s.add_argument("--ring", default="ZH")
    s.set_defaults(func=cmd_ss)

    s = sub.add_parser("s", help="Rasmussen s over a field")
    s.add_argument("knot")
    s.add_argument("--field", default="Q")
    s.set_defaults(func=cmd_s)

    for name, fn in (("sig", cmd_sig), ("det", cmd_det)):
        s = sub.add_parser(name)
        s.add_argument("knot")
        s.set_defaults(func=fn)

    s = sub.add_parser("qa", help="search for a quasi-alternating certificate")
    s.add_argument("knot")
    s.add_argument("--budget", type=int, default=100_000)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_qa)

    s = sub.add_parser("lspace-verify", help="verify a resolution-tree certificate")
    s.add_argument("tree")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_lspace_verify)

    s = sub.add_parser("sln-check", help="grading check on a triply graded table (CSV q,a,delta,dim)")
    s.add_argument("table")
    s.add_argument("--n", default="3..10")
    s.set_defaults(func=cmd_sln_check)

    s = sub.add_parser("table", help="derive q_M and theta for a catalog")
    s.add_argument("catalog", nargs="?")
    s.add_argument("--diff")
    s.add_argument("--format", choices=("csv", "text"), default="csv")
    s.add_argument("--max-crossings", type=int)
    s.add_argument("--no-evidence", action="store_true")
    s.set_defaults(func=cmd_table)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DiagramError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
