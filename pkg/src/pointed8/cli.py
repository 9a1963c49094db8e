"""Command-line front end: ``pointed8 <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from typing import Optional, Sequence

from .cohomology import INT, TORUS, NotInGroup, StabilizationError, cohomology_group
from .config import Config
from .doubles import AssociativityFailure, CensusInconsistent, double_census
from .exactlinalg import MAX_EXP
from .groups import CATALOG_NAMES, GroupError, NotACocycle, automorphisms, catalog, catalog_group
from .morita import EXPECTED_COUNT, REFERENCE_COUNT, morita_partition, omega_subgroup, validate_witness
from .orbits import equivalence_census, orbit_table
from .report import ReportInconsistent, build_report

CONTRACT_ERRORS = (
    CensusInconsistent,
    AssociativityFailure,
    NotACocycle,
    NotInGroup,
    StabilizationError,
    ReportInconsistent,
    GroupError,
    AssertionError,
)


def _k(text: str) -> int:
    k = int(text)
    if not 4 <= k <= MAX_EXP - 4:
        raise argparse.ArgumentTypeError(f"must be between 4 and {MAX_EXP - 4}")
    return k


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _elements(text: str) -> tuple[int, ...]:
    try:
        els = tuple(sorted({int(x) for x in text.split(",") if x.strip()}))
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated element indices")
    if not els or min(els) < 0 or max(els) > 7:
        raise argparse.ArgumentTypeError("element indices must lie in 0..7")
    return els


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pointed8", description=__doc__)
    p.add_argument("--max-denominator-exp", type=_k, default=Config.max_denominator_exp, metavar="K",
                   help="torus values live in 2^-K Z / Z (default %(default)s)")
    p.add_argument("--cache-dir", default=None, help="directory for cached H^3 bases")
    p.add_argument("--threads", type=_positive, default=1)
    p.add_argument("--verify", action="store_true", help="re-validate every Morita witness")
    p.add_argument("--json", action="store_true", help="print results as JSON")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("groups", help="the catalog of order-8 groups")
    g.add_argument("action", choices=["list"])

    c = sub.add_parser("cohomology", help="H^n(G, Z) or H^n(G, C*)")
    c.add_argument("--group", required=True, choices=CATALOG_NAMES)
    c.add_argument("--degree", required=True, type=int, choices=range(0, 6))
    c.add_argument("--coeffs", choices=[INT, TORUS], default=INT)

    o = sub.add_parser("orbits", help="Aut(G)-orbits on H^3(G, C*)")
    o.add_argument("--group", required=True, choices=CATALOG_NAMES)

    w = sub.add_parser("omega", help="the realizable classes Omega(H; A)")
    w.add_argument("--group", required=True, choices=CATALOG_NAMES)
    w.add_argument("--subgroup", required=True, type=_elements, metavar="ELEMS")

    k = sub.add_parser("classify", help="tensor or Morita classification")
    k.add_argument("kind", choices=["tensor", "morita"])

    d = sub.add_parser("doubles", help="commutativity of the twisted doubles")
    d.add_argument("action", choices=["census"])

    r = sub.add_parser("report", help="write the full classification report")
    r.add_argument("--format", choices=["json", "md", "csv"], default="json")
    r.add_argument("--out", default="-", help="output path, '-' for stdout")
    return p


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _cmd_groups(args, config) -> dict:
    rows = []
    for G in catalog():
        rows.append({"name": G.name, "order": G.order, "abelian": G.is_abelian,
                     "element_orders": G.element_orders.tolist(), "aut_order": len(automorphisms(G))})
    return {"groups": rows, "text": "\n".join(f"{r['name']:6} order {r['order']}  |Aut| = {r['aut_order']}" for r in rows)}


def _cmd_cohomology(args, config) -> dict:
    G = catalog_group(args.group)
    H = cohomology_group(G, args.degree, args.coeffs, config.max_denominator_exp)
    facs = list(H.invariant_factors)
    return {"group": G.name, "degree": args.degree, "coeffs": args.coeffs, "invariant_factors": facs,
            "text": f"H^{args.degree}({G.name}, {args.coeffs}) invariant factors {facs}"}


def _cmd_orbits(args, config) -> dict:
    t = orbit_table(catalog_group(args.group), config)
    rows = [{"id": o.id, "size": o.size, "class_order": o.class_order, "canonical": list(o.canonical)} for o in t.orbits]
    text = [f"{t.group.name}: {len(rows)} orbits, |Aut| = {t.aut_order}, H^3 factors {list(t.h3.invariant_factors)}"]
    text += [f"  o{r['id']:<3} size {r['size']:<3} order {r['class_order']}  {tuple(r['canonical'])}" for r in rows]
    return {"group": t.group.name, "orbits": rows, "text": "\n".join(text)}


def _cmd_omega(args, config) -> dict:
    H = catalog_group(args.group)
    try:
        om = omega_subgroup(H, args.subgroup, config)
    except ValueError as exc:
        raise _BadArgs(str(exc))
    classes = [list(c) for c in sorted(om)]
    return {"group": H.name, "subgroup": list(args.subgroup), "order": len(om), "classes": classes,
            "text": f"|Omega({H.name}; {set(args.subgroup)})| = {len(om)}"}


def _cmd_classify(args, config) -> dict:
    census = equivalence_census(config, fingerprints=False)
    if args.kind == "tensor":
        per = {t.group.name: len(t.orbits) for t in census.tables}
        return {"count": len(census), "per_group": per,
                "text": f"{len(census)}\n" + ", ".join(f"{k}: {v}" for k, v in per.items())}
    P = morita_partition(census, config=config)
    if config.verify:
        bad = [e for e in P.edges if not validate_witness(e, census)]
        if bad:
            raise ReportInconsistent(f"{len(bad)} Morita witnesses failed re-validation")
    sigs = {"+".join(k): v for k, v in P.merged_signatures().items()}
    return {"count": P.count, "reference_count": REFERENCE_COUNT, "expected_count": EXPECTED_COUNT,
            "discrepancy": P.count != REFERENCE_COUNT, "note": P.discrepancy_note, "merged": sigs,
            "singletons": P.singletons, "classes": P.classes,
            "text": f"{P.count}\nnote: {P.discrepancy_note}"}


def _cmd_doubles(args, config) -> dict:
    census = equivalence_census(config, fingerprints=False)
    D = double_census(morita_partition(census, config=config), config)
    c, n = D.counts
    return {**D.to_json(), "text": f"{c} commutative, {n} noncommutative"}


def _cmd_report(args, config) -> dict:
    rep = build_report(config)
    text = rep.render(args.format)
    if args.out == "-":
        return {"text": text.rstrip("\n"), "raw": True}
    _write_atomic(args.out, text)
    return {"path": args.out, "format": args.format, "text": f"wrote {args.out}"}


class _BadArgs(Exception):
    pass


COMMANDS = {
    "groups": _cmd_groups,
    "cohomology": _cmd_cohomology,
    "orbits": _cmd_orbits,
    "omega": _cmd_omega,
    "classify": _cmd_classify,
    "doubles": _cmd_doubles,
    "report": _cmd_report,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    config = Config(args.max_denominator_exp, args.cache_dir, args.threads, args.verify)
    try:
        out = COMMANDS[args.command](args, config)
    except _BadArgs as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except CONTRACT_ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc), "command": args.command}))
        return 1
    if args.json and not out.get("raw"):
        print(json.dumps({k: v for k, v in out.items() if k != "text"}, sort_keys=True))
    else:
        print(out["text"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
