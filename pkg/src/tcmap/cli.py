"""Command-line interface.

Subcommands: validate, tc-bound, tc-space, secat-bound, sullivan, catalog,
arm-demo.  ``--json`` switches to the machine report format (deterministic,
byte-identical across identical invocations); human output goes to stdout,
logs and errors to stderr.  Exit codes: 0 success, 1 validation/input
failure, 2 usage error.

Inputs are JSON files, or ``catalog:<spec>`` references such as
``catalog:sphere(2)`` and ``catalog:cp_map(2,5,1)``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import arm as arm_mod
from . import catalog, invariants, serialize, sullivan
from .algebra import AlgebraMorphism, GradedAlgebra, WorkMap, validate_algebra, work_map
from .errors import ParseError, ToolError
from .sullivan import validate_cdga


def _read_doc(path: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None


def _input_digest(ref: str) -> str:
    if ref.startswith("catalog:"):
        return serialize.digest_text(ref)
    return serialize.digest_bytes(Path(ref).read_bytes())


def _load_algebra(ref: str) -> GradedAlgebra:
    if ref.startswith("catalog:"):
        return catalog.space(ref.removeprefix("catalog:"))
    return serialize.algebra_from_doc(_read_doc(ref))


def _load_workmap(ref: str) -> WorkMap:
    if ref.startswith("catalog:"):
        return catalog.map(ref.removeprefix("catalog:"))
    return serialize.workmap_from_doc(_read_doc(ref), loader=_load_algebra_ref)


def _load_algebra_ref(ref: str) -> GradedAlgebra:
    if ref.startswith("catalog:"):
        return catalog.space(ref.removeprefix("catalog:"))
    raise ParseError(f"algebra reference {ref!r} must be inline or catalog:<spec>")


def _load_cdga_morphism(ref: str):
    if ref.startswith("catalog:"):
        return catalog.sullivan_morphism(ref.removeprefix("catalog:"))
    return serialize.cdga_morphism_from_doc(_read_doc(ref))


def _emit(doc: dict, as_json: bool, human: str | None = None) -> None:
    if as_json:
        sys.stdout.write(serialize.dumps_canonical(doc))
    else:
        sys.stdout.write((human or serialize.dumps_canonical(doc)) + "\n")


def _known_exact(ref: str):
    if not ref.startswith("catalog:"):
        return None
    return catalog.known_exact_tc(ref.removeprefix("catalog:"))


# ---------------------------------------------------------------------------
# Subcommand handlers


def _cmd_validate(args) -> int:
    doc = _read_doc(args.file)
    kind = serialize.detect_kind(doc)
    errors: list[str] = []
    warnings: list[str] = []
    if kind == "algebra":
        errors = validate_algebra(serialize.algebra_from_doc(doc))
    elif kind == "workmap":
        errors = serialize.workmap_from_doc(doc, loader=_load_algebra_ref).validate()
    elif kind == "cdga":
        report = validate_cdga(serialize.cdga_from_doc(doc))
        errors, warnings = report.errors, report.warnings
    elif kind == "cdga-morphism":
        psi = serialize.cdga_morphism_from_doc(doc)
        report = validate_cdga(psi.source)
        report_t = validate_cdga(psi.target)
        errors = report.errors + report_t.errors
        warnings = report.warnings + report_t.warnings
        errors.extend(psi.chain_map_defects(min(psi.source.truncation,
                                                psi.target.truncation)))
    else:
        raise ParseError(f"cannot validate documents of kind {kind!r}")
    out = serialize.report_document(
        "validate", {"file": _input_digest(args.file)},
        extra={"valid": not errors, "errors": errors, "warnings": warnings})
    human = "\n".join([f"kind: {kind}", "valid" if not errors else "INVALID"]
                      + [f"error: {e}" for e in errors]
                      + [f"warning: {w}" for w in warnings])
    _emit(out, args.json, human)
    return 0 if not errors else 1


def _bound_reports_doc(command: str, ref: str, wm: WorkMap, as_json: bool) -> int:
    reports = invariants.bounds_report(wm, known_exact=_known_exact(ref))
    doc = serialize.report_document(
        command, {"map": ref, "digest": _input_digest(ref)},
        reports=[r.as_dict() for r in reports])
    human = [f"{wm.name}:"]
    for r in reports:
        human.append(f"  {r.kind:<11} {r.invariant} = {r.value}  [{r.citation}]")
    human.append("  chain: " + invariants.render_chain(reports).replace("\n", "; "))
    _emit(doc, as_json, "\n".join(human))
    return 0


def _cmd_tc_bound(args) -> int:
    wm = _load_workmap(args.map)
    return _bound_reports_doc("tc-bound", args.map, wm, args.json)


def _cmd_tc_space(args) -> int:
    algebra = _load_algebra(args.algebra)
    induced = AlgebraMorphism.identity(algebra)
    wm = work_map(induced, formal=args.formal, name=f"id_{algebra.name}")
    ref = args.algebra
    known = None
    if ref.startswith("catalog:"):
        spec = ref.removeprefix("catalog:")
        try:
            table = catalog.expected(spec)
            if "TC(X)" in table:
                known = (table["TC(X)"]["value"], table["TC(X)"]["citation"])
        except ToolError:
            known = None
    reports = invariants.bounds_report(wm, known_exact=known)
    doc = serialize.report_document(
        "tc-space", {"space": ref, "digest": _input_digest(ref)},
        reports=[r.as_dict() for r in reports])
    human = [f"TC of {algebra.name} (via the identity map):"]
    for r in reports:
        human.append(f"  {r.kind:<11} {r.invariant} = {r.value}  [{r.citation}]")
    _emit(doc, args.json, "\n".join(human))
    return 0


def _cmd_secat_bound(args) -> int:
    p_star = serialize.morphism_from_doc(_read_doc(args.p), loader=_load_algebra_ref)
    f_star = serialize.morphism_from_doc(_read_doc(args.f), loader=_load_algebra_ref)
    value = invariants.secat_lower_bound(p_star, f_star)
    report = invariants.BoundReport(
        invariant="secat_f(p)", value=value, kind="lower",
        citation=invariants.CITATIONS["secat-lower"], inputs=(args.p, args.f))
    doc = serialize.report_document(
        "secat-bound",
        {"p": _input_digest(args.p), "f": _input_digest(args.f)},
        reports=[report.as_dict()])
    _emit(doc, args.json, f"secat_f(p) >= {value}  [{report.citation}]")
    return 0


def _cmd_sullivan(args) -> int:
    psi = _load_cdga_morphism(args.psi)
    truncation = args.max_degree
    if truncation is not None:
        psi.source.truncation = max(psi.source.truncation, truncation)
        psi.target.truncation = max(psi.target.truncation, truncation)
    gamma = sullivan.surjectivize(psi)
    if truncation is None:
        truncation = min(gamma.source.truncation, gamma.target.truncation)
    strict = sullivan.strict_certificate(gamma, args.n, truncation)
    results = {"strict": strict.as_dict()}
    lines = [f"strict certificate at n={args.n}, N={truncation}: {strict.verdict}"]
    if strict.witness is not None:
        lines.append(f"  witness: {strict.witness_label}")
    if not args.strict_only:
        homotopy = sullivan.homotopy_factorization(gamma, args.n, truncation)
        results["homotopy"] = homotopy.as_dict()
        lines.append(f"homotopy certificate: {homotopy.verdict}")
        for entry in homotopy.obstruction_log:
            lines.append(f"  obstruction: {entry}")
        if homotopy.note:
            lines.append(f"  note: {homotopy.note}")
    doc = serialize.report_document(
        "sullivan", {"psi": args.psi, "digest": _input_digest(args.psi)},
        extra={"results": results, "n": args.n, "truncation": truncation})
    _emit(doc, args.json, "\n".join(lines))
    return 0


def _cmd_catalog(args) -> int:
    if args.action == "list":
        rows = [{"name": e.name, "kind": e.kind,
                 "expected": [{"invariant": inv, "value": val, "citation": cite}
                              for inv, val, cite in e.expected]}
                for e in catalog.entries()]
        doc = serialize.report_document("catalog-list", {}, extra={"entries": rows})
        human = "\n".join(
            f"{e.name:<34} {e.kind:<6} " +
            ", ".join(f"{inv}={val}" for inv, val, _ in e.expected)
            for e in catalog.entries())
        _emit(doc, args.json, human)
        return 0
    spec = args.spec
    if spec is None:
        raise ParseError("catalog emit needs a spec argument")
    name = catalog.parse_spec(spec)[0]
    space_names = {"sphere", "complex_projective", "torus", "product", "point"}
    if name in space_names:
        doc = serialize.algebra_to_doc(catalog.space(spec))
    else:
        doc = serialize.workmap_to_doc(catalog.map(spec))
    sys.stdout.write(serialize.dumps_canonical(doc))
    return 0


def _cmd_arm_demo(args) -> int:
    arm = arm_mod.Arm(args.l1, args.l2)
    stats = arm_mod.verify_planner(arm, seed=args.seed, samples=args.samples,
                                   steps=args.steps)
    torus_tc = invariants.tc_lower_bound(catalog.map("torus_identity"))
    chain = {
        "work_planner_regions": stats.work_region_count(),
        "identity_lower_bound_regions": torus_tc + 1,
        "naive_identity_regions": stats.naive_region_count(),
    }
    ok = (stats.uncovered_pairs == 0
          and stats.max_endpoint_error < arm_mod.ENDPOINT_TOL
          and stats.max_gap < arm_mod.GAP_BOUND)
    doc = serialize.report_document(
        "arm-demo",
        {"l1": str(args.l1), "l2": str(args.l2), "seed": str(args.seed),
         "samples": str(args.samples), "steps": str(args.steps)},
        extra={"stats": stats.as_dict(), "chain": chain, "certified": ok})
    lines = [
        f"two-link arm (l1={args.l1}, l2={args.l2}), {args.samples} seeded pairs, "
        f"{args.steps} steps:",
        f"  uncovered pairs: {stats.uncovered_pairs}",
        f"  max endpoint error: {stats.max_endpoint_error:.3e} (tolerance 1e-09)",
        f"  max continuity gap: {stats.max_gap:.6f} (bound pi/8 = {arm_mod.GAP_BOUND:.6f})",
        f"  work-planner region hits: {dict(sorted(stats.region_hits.items()))}",
    ]
    if args.naive_identity:
        lines += [
            f"  naive identity region hits: {dict(sorted(stats.naive_region_hits.items()))}",
            f"  naive endpoint error: {stats.max_naive_endpoint_error:.3e}",
        ]
    lines.append(
        f"  region counts: work planner {chain['work_planner_regions']} < "
        f"{chain['identity_lower_bound_regions']} (= identity lower bound) <= "
        f"{chain['naive_identity_regions']} (naive identity planner)")
    lines.append("  verdict: " + ("certified" if ok else "FAILED"))
    _emit(doc, args.json, "\n".join(lines))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tcmap",
                                     description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate an algebra/morphism/cdga document")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("tc-bound", help="TC bounds for a work map")
    p.add_argument("--map", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_tc_bound)

    p = sub.add_parser("tc-space", help="TC of a space via the identity map")
    p.add_argument("algebra")
    p.add_argument("--formal", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_tc_space)

    p = sub.add_parser("secat-bound", help="relative sectional-category lower bound")
    p.add_argument("--p", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_secat_bound)

    p = sub.add_parser("sullivan", help="factorization certificates for a model")
    p.add_argument("--psi", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--strict-only", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sullivan)

    p = sub.add_parser("catalog", help="list builtin entries or emit one")
    p.add_argument("action", choices=["list", "emit"])
    p.add_argument("spec", nargs="?")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("arm-demo", help="two-link arm planner verification")
    p.add_argument("--l1", type=float, default=2.0)
    p.add_argument("--l2", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--naive-identity", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_arm_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        return args.func(args)
    except ToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
