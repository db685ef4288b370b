"""Command line interface: construct, check, classify, corpus, tower.

Exit codes: 0 success / in-class / classified; 1 not in class or corpus
mismatch; 2 constraint or parameter violation (citing the failed condition);
3 cap exceeded or unclassifiable; 4 malformed input document.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import constructors as cons
from . import corpus as corpus_mod
from . import report as report_mod
from . import serialize
from . import xcheck
from .classifier import classify, cross_validate
from .engine import ENUM_CAP_DEFAULT
from .errors import (
    CapExceeded,
    ConstraintViolation,
    InvalidParameter,
    ParseError,
    SearchFailed,
    Unclassified,
)
from .tower import TowerSpec, build_tower, verify_tower

EXIT_OK = 0
EXIT_NOT_X = 1
EXIT_CONSTRAINT = 2
EXIT_CAP = 3
EXIT_PARSE = 4


def _caps_from_args(args) -> tuple[int, int]:
    env_cap = os.environ.get("XGROUP_CAP")
    brute = args.brute_cap
    enum = args.enum_cap
    if env_cap is not None:
        if brute is None:
            brute = int(env_cap)
        if enum is None:
            enum = int(env_cap)
    if brute is None:
        brute = xcheck.BRUTE_CAP_DEFAULT
    if enum is None:
        enum = ENUM_CAP_DEFAULT
    return brute, enum


def _emit(doc: dict, args) -> None:
    if args.format == "pretty":
        for key, value in doc.items():
            if isinstance(value, list):
                print(f"{key}:")
                for item in value:
                    print(f"  - {item}")
            else:
                print(f"{key}: {value}")
    else:
        sys.stdout.write(serialize.dumps_doc(doc))


# ---------------------------------------------------------------------------


def _parse_complement(text: str) -> tuple:
    if ":" in text:
        kind, params = text.split(":", 1)
        values = tuple(int(x) for x in params.split(","))
        return (kind, *values)
    return (text,)


def _build_record(args) -> cons.ConstructionRecord:
    family = args.family
    if family == "basic_abelian":
        factors = [int(x) for x in args.factors.split(",")]
        return cons.basic_abelian(factors)
    if family == "two_group":
        return cons.two_group(args.kind, args.order)
    if family == "extraspecial":
        return cons.extraspecial(args.p, args.exponent_kind)
    if family == "sym_alt":
        return cons.sym_alt(args.n, args.alternating)
    if family == "matrix_group":
        return cons.matrix_group(args.kind, args.q)
    if family == "pgl2":
        return cons.pgl2(args.q)
    if family == "sl2p_dot2":
        return cons.sl2p_dot2(args.p)
    if family == "m10":
        return cons.m10()
    if family == "metacyclic":
        return cons.metacyclic(args.m, args.n, args.u)
    if family == "quaternion_metacyclic":
        return cons.quaternion_metacyclic(args.m, args.q_order)
    if family == "affine":
        return cons.affine_frobenius(args.p, _parse_complement(args.complement))
    if family == "extraspecial_frobenius":
        return cons.extraspecial_frobenius(args.p, args.d, args.s)
    if family == "heisenberg_extension":
        return cons.heisenberg_extension(args.p, args.k)
    raise InvalidParameter(f"unknown family {family!r}")


def cmd_construct(args) -> int:
    try:
        record = _build_record(args)
    except ConstraintViolation as exc:
        print(f"constraint violated: {exc} [{exc.condition}]", file=sys.stderr)
        return EXIT_CONSTRAINT
    except (InvalidParameter, SearchFailed) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    name = args.name or args.family
    group_path = outdir / f"{name}.group.json"
    prov_path = outdir / f"{name}.provenance.json"
    serialize.write_group(record.group, group_path)
    prov_path.write_text(
        serialize.dumps_doc(serialize.provenance_doc(record)),
        encoding="utf-8")
    _emit({"written": [str(group_path), str(prov_path)],
           "order": record.group.order,
           "intended_case": record.intended_case}, args)
    return EXIT_OK


def cmd_check(args) -> int:
    brute_cap, _ = _caps_from_args(args)
    try:
        group = serialize.read_group(args.group_file)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    methods = ["brute", "recursive"] if args.method == "both" else [args.method]
    verdicts = []
    try:
        for method in methods:
            if method == "brute":
                verdicts.append(xcheck.is_x_bruteforce(group, cap=brute_cap))
            else:
                verdicts.append(xcheck.is_x_recursive(group, cap=brute_cap))
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    doc = {"order": group.order, "verdicts": []}
    for v in verdicts:
        entry = {"method": v.method, "result": v.result,
                 "pairs_scanned": v.stats.get("pairs_scanned", 0)}
        if v.witness is not None and args.emit_witness:
            entry["witness"] = v.witness.words(group)
            entry["witness_valid"] = xcheck.verify_witness(group, v.witness)
        doc["verdicts"].append(entry)
    doc["result"] = verdicts[0].result
    doc["agreement"] = len({v.result for v in verdicts}) == 1
    _emit(doc, args)
    return EXIT_OK if all(v.is_x for v in verdicts) else EXIT_NOT_X


def cmd_classify(args) -> int:
    brute_cap, _ = _caps_from_args(args)
    try:
        group = serialize.read_group(args.group_file)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        case = classify(group, brute_cap=brute_cap)
    except Unclassified as exc:
        print(f"unclassified: {exc}", file=sys.stderr)
        return EXIT_CAP
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    confirmation = "structural-only"
    if group.order <= brute_cap:
        verdict = xcheck.is_x_bruteforce(group, cap=brute_cap)
        agreed = verdict.is_x == case.is_x
        confirmation = "brute" if agreed else "brute-disagrees"
    doc = {"label": case.label,
           "parameters": _jsonable(case.parameters),
           "evidence": case.evidence,
           "confirmation": confirmation}
    _emit(doc, args)
    return EXIT_OK if case.is_x else EXIT_NOT_X


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (int, float, str, bool)) or value is None:
        return value
    return str(value)


def cmd_corpus(args) -> int:
    brute_cap, enum_cap = _caps_from_args(args)
    try:
        entries = corpus_mod.resolve_suite(args.suite)
    except KeyError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_PARSE
    built = corpus_mod.build_entries(entries)
    summary = cross_validate(
        [(n, r) for n, r in built], brute_cap=brute_cap, workers=args.workers)
    properties = {
        "oracle_agreement": corpus_mod.oracle_agreement_failures(
            built, brute_cap),
        "fstar_self_centralizing":
            corpus_mod.fstar_self_centralizing_failures(built),
        "frobenius_composition": corpus_mod.frobenius_composition_failures(
            built, brute_cap),
        "pair_reduction": corpus_mod.pair_reduction_failures(built),
        "subgroup_closedness": corpus_mod.subgroup_closedness_failures(
            built, enum_cap=enum_cap),
    }
    text = report_mod.corpus_tsv(summary)
    for prop in sorted(properties):
        failures = properties[prop]
        state = "pass" if not failures else "FAIL:" + ",".join(failures)
        text += f"# property {prop}={state}\n"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "summary.tsv").write_text(text, encoding="utf-8")
        report_mod.render_corpus_figures(summary, outdir)
        print(f"wrote {outdir}/summary.tsv and figures")
    else:
        sys.stdout.write(text)
    failed = summary["mismatches"] > 0 or any(
        properties[p] for p in properties)
    return EXIT_NOT_X if failed else EXIT_OK


def cmd_tower(args) -> int:
    brute_cap, _ = _caps_from_args(args)
    kind = args.kind.replace("-", "_")
    spec = TowerSpec(kind=kind, depth=args.depth, p=args.p or 0,
                     d=args.d or 0, y_order=args.y_order or 0)
    try:
        levels = build_tower(spec, cap=brute_cap)
        rep = verify_tower(levels, spec, cap=brute_cap)
    except InvalidParameter as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    text = report_mod.tower_tsv(rep)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "tower_report.tsv").write_text(text, encoding="utf-8")
        report_mod.render_tower_figure(rep, outdir)
        print(f"wrote {outdir}/tower_report.tsv and figure")
    else:
        sys.stdout.write(text)
    ok = (rep.all_is_x and rep.labels_constant and rep.embeddings_ok
          and rep.stabilization_ok)
    return EXIT_OK if ok else EXIT_NOT_X


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xgroup",
        description="finite group construction, membership checking, "
                    "classification, and tower verification")
    parser.add_argument("--brute-cap", type=int, default=None)
    parser.add_argument("--enum-cap", type=int, default=None)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0,
                        help="seed recorded for reproducibility; all searches "
                             "are deterministic")
    parser.add_argument("--format", choices=("doc", "pretty"), default="doc")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a named family member")
    c.add_argument("--family", required=True)
    c.add_argument("--factors", default="")
    c.add_argument("--kind", default="")
    c.add_argument("--order", type=int, default=0)
    c.add_argument("--p", type=int, default=0)
    c.add_argument("--q", type=int, default=0)
    c.add_argument("--m", type=int, default=0)
    c.add_argument("--n", type=int, default=0)
    c.add_argument("--u", type=int, default=0)
    c.add_argument("--d", type=int, default=0)
    c.add_argument("--s", type=int, default=0)
    c.add_argument("--k", type=int, default=0)
    c.add_argument("--q-order", type=int, default=0)
    c.add_argument("--exponent-kind", default="p")
    c.add_argument("--alternating", action="store_true")
    c.add_argument("--complement", default="")
    c.add_argument("--out", default=".")
    c.add_argument("--name", default="")
    c.set_defaults(func=cmd_construct)

    ck = sub.add_parser("check", help="decide membership for a group file")
    ck.add_argument("group_file")
    ck.add_argument("--method", choices=("brute", "recursive", "both"),
                    default="both")
    ck.add_argument("--emit-witness", action="store_true")
    ck.set_defaults(func=cmd_check)

    cl = sub.add_parser("classify", help="classify a group file")
    cl.add_argument("group_file")
    cl.set_defaults(func=cmd_classify)

    co = sub.add_parser("corpus", help="run a corpus suite")
    co.add_argument("--suite", default="standard")
    co.add_argument("--out", default="")
    co.set_defaults(func=cmd_corpus)

    t = sub.add_parser("tower", help="build and verify a truncation tower")
    t.add_argument("--kind", required=True,
                   choices=("prufer", "prufer2-ext", "prufer-metacyclic"))
    t.add_argument("--p", type=int, default=0)
    t.add_argument("--d", type=int, default=0)
    t.add_argument("--y-order", type=int, default=0)
    t.add_argument("--depth", type=int, required=True)
    t.add_argument("--out", default="")
    t.set_defaults(func=cmd_tower)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
