from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from math import factorial
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import LeibnizGsbError
from .freealg import Polynomial
from .gsb import (
    CompositionReport,
    GsbReport,
    ReductionStep,
    RewriteSystem,
    Rule,
    certificate_holds,
    complete,
    is_gsb,
    irr_basis,
    membership_cross_check,
    reduce,
)
from .hnn import build_presentation, check_embedding, forbidden_basis, normal_basis, normal_form_counts, verify_gsb
from .models import PresentationFile, Report
from .operads import (
    check_perm_compositions,
    derive_leibniz_product,
    dimension_table,
    jacobiator_check,
    table_mismatches,
)
from .parser import (
    format_lie,
    format_presentation,
    letters,
    parse_expression,
    parse_presentation,
    table_relations,
    to_maps,
    to_relations,
    to_subalgebra,
    to_table,
)
from .provenance import emit_report, inputs_digest
from .replication import (
    DASHV,
    VDASH,
    DiRelation,
    DoubledAlphabet,
    dilie_basis_rank,
    replicate_system,
    translate_relation,
)
from .tables import multiplication_system
from .validate import validate
from .words import DOT, Alphabet, Tree, Word, tree_degree

log = logging.getLogger(__name__)

OK, FAILED, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(message)
        self.path = path


@dataclass
class Loaded:
    """A rewrite system read from a presentation file."""

    alphabet: Alphabet
    system: RewriteSystem
    doubled: Optional[DoubledAlphabet] = None

    def expression(self, text: str) -> Polynomial:
        if self.doubled is not None and (DASHV in text or VDASH in text):
            return translate_relation(parse_expression(text, self.doubled.base), self.doubled)
        value = parse_expression(text, self.alphabet)
        if isinstance(value, DiRelation):
            raise InputError("expression", "di-products need a di-Lie presentation")
        return value


# -- formatting ------------------------------------------------------------------------------


def word_text(alphabet: Alphabet, w: Word) -> str:
    return ".".join(alphabet.name(r) for r in w)


def trace_json(alphabet: Alphabet, steps: Sequence[ReductionStep]) -> List[Dict[str, Any]]:
    return [{"word": word_text(alphabet, s.word), "rule": s.rule, "start": s.start, "coeff": s.coeff} for s in steps]


def composition_json(system: RewriteSystem, c: CompositionReport, verbose: bool) -> Dict[str, Any]:
    alphabet = system.alphabet
    out: Dict[str, Any] = {
        "kind": c.kind,
        "f": c.f_label,
        "g": c.g_label,
        "w": word_text(alphabet, c.w),
        "residue": str(c.residue),
    }
    if verbose:
        out["value"] = str(c.value)
        out["trace"] = trace_json(alphabet, c.trace)
        out["certificate_ok"] = certificate_holds(c.value, c.residue, system, c.trace)
    return out


def rules_json(system: RewriteSystem) -> List[Dict[str, Any]]:
    return [
        {"label": r.label, "aliases": list(r.aliases), "lead": word_text(system.alphabet, r.lead), "relation": str(r.poly)}
        for r in system.rules
    ]


def gsb_json(report: GsbReport, system: RewriteSystem, verbose: bool) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "ok": report.ok,
        "compositions": len(report.compositions),
        "failures": [composition_json(system, c, verbose) for c in report.failures],
    }
    if verbose:
        out["all"] = [composition_json(system, c, verbose) for c in report.compositions]
    return out


def basis_json(alphabet: Alphabet, trees: Sequence[Tree]) -> Dict[str, Any]:
    by_degree: Dict[int, int] = {}
    for t in trees:
        by_degree[tree_degree(t)] = by_degree.get(tree_degree(t), 0) + 1
    return {"size": len(trees), "by_degree": by_degree, "elements": [alphabet.format_tree(t) for t in trees]}


# -- loading ---------------------------------------------------------------------------------


def _read(path: str) -> Tuple[PresentationFile, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(path, f"cannot read: {e.strerror or e}") from None
    try:
        return parse_presentation(text), text
    except LeibnizGsbError as e:
        raise InputError(path, str(e)) from None


def load_system(f: PresentationFile) -> Loaded:
    """Relations (plus the table) of a file as a rewrite system.

    Di-relations and Leibniz tables are replicated over the doubled alphabet; Lie tables
    become multiplication rules.
    """
    relations = to_relations(f)
    di = [r for r in relations if isinstance(r, DiRelation)]
    lie = [r for r in relations if isinstance(r, Polynomial)]
    if di or (f.kind == "leibniz" and f.table):
        if lie:
            raise InputError("relations", "cannot mix plain Lie relations with di-relations")
        if any(n.endswith(DOT) for n in f.alphabet):
            raise InputError("alphabet", "a di-Lie presentation declares undotted generators only")
        doubled = DoubledAlphabet.of(letters(f))
        di = (table_relations(f) if f.table else []) + di
        polys = [translate_relation(r, doubled) for r in di]
        labels = [f"r{k + 1}" for k in range(len(polys))]
        return Loaded(doubled.full, replicate_system(polys, doubled, labels), doubled)
    alphabet = letters(f)
    rules = [Rule(p.monic(), f"r{k + 1}") for k, p in enumerate(lie) if p]
    if f.kind == "lie" and f.table:
        rules += list(multiplication_system(to_table(f), alphabet).rules)
    return Loaded(alphabet, RewriteSystem(alphabet, rules))


# -- commands --------------------------------------------------------------------------------


def cmd_check(args: argparse.Namespace, f: PresentationFile, out: Report) -> int:
    rep = validate(f)
    out.results = {"ok": rep.ok, "issues": [i.model_dump() for i in rep.issues]}
    for i in rep.issues:
        print(f"VALIDATION: {i.path}: {i.message}")
    return OK if rep.ok else FAILED


def cmd_hnn(args: argparse.Namespace, f: PresentationFile, out: Report) -> int:
    rep = validate(f, stable_letter=True)
    if not rep.ok:
        for i in rep.issues:
            print(f"VALIDATION: {i.path}: {i.message}")
        raise SystemExit(INPUT_ERROR)
    d, dp = to_maps(f)
    p = build_presentation(to_table(f), to_subalgebra(f), d, dp)
    alphabet = p.alphabet
    out.letter_order = alphabet.order_text()
    verification = verify_gsb(p)
    normal = normal_basis(p, args.max_degree)
    by_forbidden = forbidden_basis(p, args.max_degree)
    counts = normal_form_counts(p, args.max_degree)
    embedding = check_embedding(p)
    b = p.basis
    out.results = {
        "adapted_basis": {
            "names": b.names,
            "rows": [list(r) for r in b.rows],
            "identity": b.is_identity(),
            "x0": b.x0,
            "a_letters": b.a_letters,
            "a0": b.a0,
        },
        "rules": rules_json(p.system),
        "families": {r.label: p.family(r) for r in p.system.rules},
        "inter_reduction": [{"label": x.label, "outcome": x.outcome, "into": x.into} for x in p.fates],
        "gsb": gsb_json(verification.report, p.system, args.verbose),
        "cases": verification.cases,
        "normal_basis": {
            **basis_json(alphabet, normal),
            "matches_forbidden_words": normal == by_forbidden,
            "rank_oracle": {d: list(v) for d, v in counts.items()},
        },
        "embedding": {
            "ok": embedding.ok,
            "missing_letters": embedding.missing_letters,
            "failing_pairs": [list(x) for x in embedding.failing_pairs],
        },
    }
    if args.emit_presentation:
        emitted = PresentationFile(
            alphabet=list(reversed(alphabet.names)),
            kind="lie",
            relations=[format_lie(r.poly) for r in p.system.rules],
        )
        Path(args.emit_presentation).write_text(format_presentation(emitted), encoding="utf-8")
    counts_ok = all(a == b for a, b in counts.values())
    ok = verification.ok and embedding.ok and normal == by_forbidden and counts_ok
    return OK if ok else FAILED


def _system_for(args: argparse.Namespace, f: PresentationFile, out: Report) -> Loaded:
    loaded = load_system(f)
    out.letter_order = loaded.alphabet.order_text()
    if getattr(args, "complete", False):
        done = complete(loaded.system, args.max_degree)
        loaded = Loaded(loaded.alphabet, done.system, loaded.doubled)
        out.results["completion"] = {
            "rounds": done.rounds,
            "added": done.added,
            "same_ideal": done.same_ideal,
            "unreduced": done.unreduced,
        }
        if not done.same_ideal:
            out.warnings.append(f"input rules {done.unreduced} do not reduce to 0 modulo the completed system")
        if done.incomplete_above_cap:
            out.warnings.append(
                f"{done.pending_above_cap} compositions above degree {args.max_degree} were not resolved"
            )
    return loaded


def cmd_gsb(args: argparse.Namespace, f: PresentationFile, out: Report) -> int:
    loaded = _system_for(args, f, out)
    report = is_gsb(loaded.system)
    out.results["rules"] = rules_json(loaded.system)
    out.results["gsb"] = gsb_json(report, loaded.system, args.verbose)
    ok = report.ok and out.results.get("completion", {}).get("same_ideal", True)
    if args.cross_check:
        if not report.ok:
            out.warnings.append("membership cross-check skipped: the system is not a Groebner-Shirshov basis")
        else:
            cc = membership_cross_check(loaded.system, args.max_degree, args.cross_check, args.seed)
            out.results["cross_check"] = {"agreed": cc.agreed, "disagreements": cc.disagreements}
            ok = ok and cc.ok
    return OK if ok else FAILED


def cmd_basis(args: argparse.Namespace, f: PresentationFile, out: Report) -> int:
    loaded = _system_for(args, f, out)
    report = is_gsb(loaded.system)
    if not report.ok:
        out.warnings.append("not a Groebner-Shirshov basis: Irr spans the quotient but need not be independent")
    out.results["gsb"] = report.ok
    out.results["basis"] = basis_json(loaded.alphabet, irr_basis(loaded.system, args.max_degree))
    return OK if report.ok else FAILED


def _reduce(args: argparse.Namespace, f: PresentationFile, out: Report) -> Polynomial:
    loaded = _system_for(args, f, out)
    if not is_gsb(loaded.system).ok:
        out.warnings.append("not a Groebner-Shirshov basis: normal forms are not unique")
    try:
        value = loaded.expression(args.expression)
    except LeibnizGsbError as e:
        raise InputError("expression", str(e)) from None
    steps: List[ReductionStep] = []
    nf = reduce(value, loaded.system, steps)
    out.results["input"] = str(value)
    out.results["normal_form"] = str(nf)
    if args.verbose:
        out.results["trace"] = trace_json(loaded.alphabet, steps)
        out.results["certificate_ok"] = certificate_holds(value, nf, loaded.system, steps)
    return nf


def cmd_normalize(args: argparse.Namespace, f: PresentationFile, out: Report) -> int:
    _reduce(args, f, out)
    return OK


def cmd_member(args: argparse.Namespace, f: PresentationFile, out: Report) -> int:
    out.results["member"] = not _reduce(args, f, out)
    return OK


def cmd_operad_check(args: argparse.Namespace, out: Report) -> int:
    mismatches = table_mismatches()
    jacobi = jacobiator_check()
    perm = check_perm_compositions()
    dims = dimension_table()
    expected = {
        "lie": [factorial(n - 1) for n in range(1, len(dims["lie"]) + 1)],
        "perm": [n for n in range(1, len(dims["perm"]) + 1)],
        "dilie": [factorial(n) for n in range(1, len(dims["dilie"]) + 1)],
    }
    derivations = {
        "e1": derive_leibniz_product(1),
        "e2": derive_leibniz_product(2),
        "commutative": derive_leibniz_product(1, commutative=True),
    }
    out.results = {
        "monomial_table": {"ok": not mismatches, "mismatches": mismatches},
        "jacobiator": jacobi,
        "perm_compositions": {"checked": perm.checked, "mismatches": perm.mismatches},
        "dimensions": dims,
        "leibniz_product": {
            k: {"lhs": d.lhs, "steps": d.steps, "rhs": d.rhs, "ok": d.ok} for k, d in derivations.items()
        },
    }
    if perm.printed_formula_disagreements:
        out.warnings.append(
            f"index formula m1+...+m_(n-1)+j_i disagrees with composition in {perm.printed_formula_disagreements} "
            "cases; the implemented index is m1+...+m_(i-1)+j_i"
        )
        out.warnings.append(
            "the swap step of the Leibniz product derivation carries a minus sign: "
            "yx (x) e1^(2) = (xy (x) e2^(2))^(12)"
        )
    ok = not mismatches and jacobi and not perm.mismatches and dims == expected
    ok = ok and all(d.ok for d in derivations.values())
    return OK if ok else FAILED


def cmd_dilie_basis(args: argparse.Namespace, out: Report) -> int:
    names = [n.strip() for n in args.letters.split(",") if n.strip()]
    if not names:
        raise InputError("--letters", "expected a comma separated list of generator names")
    base = Alphabet.from_names(names)
    out.letter_order = base.order_text()
    per_degree = {}
    ok = True
    for k in range(1, args.max_degree + 1):
        count, rank = dilie_basis_rank(base, k)
        prev = sum(v["count"] for v in per_degree.values())
        per_degree[k] = {"count": count - prev, "expected": len(names) ** k}
        ok = ok and count == rank and count - prev == len(names) ** k
        per_degree[k]["independent"] = count == rank
    out.results = {"by_degree": per_degree}
    return OK if ok else FAILED


# -- entry point -----------------------------------------------------------------------------

FILE_COMMANDS = {
    "check": cmd_check,
    "hnn": cmd_hnn,
    "gsb": cmd_gsb,
    "basis": cmd_basis,
    "normalize": cmd_normalize,
    "member": cmd_member,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-degree", type=int, default=4, help="Degree cap for bases and completion")
    common.add_argument("--out", help="Write the JSON report here instead of stdout")
    common.add_argument("--verbose", action="store_true", help="Debug logging and reduction traces")
    common.add_argument("--seed", type=int, default=0, help="Seed for randomized checks")

    ap = argparse.ArgumentParser(
        prog="leibniz-gsb", description="Groebner-Shirshov bases for Lie, di-Lie and Leibniz presentations"
    )
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="Validate a presentation file").add_argument("file")
    p = sub.add_parser("hnn", parents=[common], help="Build and verify the HNN-extension")
    p.add_argument("file")
    p.add_argument("--emit-presentation", metavar="FILE", help="Write the reduced rules as a presentation file")
    for name, text in (("gsb", "Verify (or complete) a rewrite system"), ("basis", "List the Irr basis")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.add_argument("--complete", action="store_true", help="Complete up to --max-degree first")
        if name == "gsb":
            p.add_argument("--cross-check", type=int, default=0, metavar="N",
                           help="Compare reduction with the rank oracle on N random samples")
    for name, text in (("normalize", "Normal form of an expression"), ("member", "Ideal membership")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.add_argument("expression")
        p.add_argument("--complete", action="store_true", help="Complete up to --max-degree first")
    sub.add_parser("operad-check", parents=[common], help="Operad tables, Perm law and dimensions")
    p = sub.add_parser("dilie-basis", parents=[common], help="Free di-Lie basis counts and independence")
    p.add_argument("--letters", default="x,y", help="Generators, greatest first")
    return ap


def run(args: argparse.Namespace) -> Tuple[Report, int]:
    payload: Dict[str, Any] = {k: v for k, v in vars(args).items() if k not in ("out", "verbose")}
    f: Optional[PresentationFile] = None
    if args.command in FILE_COMMANDS:
        f, text = _read(args.file)
        payload["file"] = text
        payload.pop("emit_presentation", None)
    out = Report(command=args.command, inputs_digest=inputs_digest(payload))
    log.info("%s: inputs digest %s", args.command, out.inputs_digest)
    try:
        if f is not None:
            out.letter_order = letters(f).order_text()
            code = FILE_COMMANDS[args.command](args, f, out)
        elif args.command == "operad-check":
            code = cmd_operad_check(args, out)
        else:
            code = cmd_dilie_basis(args, out)
    except (LeibnizGsbError, ValueError) as e:
        raise InputError(getattr(args, "file", args.command), str(e)) from None
    return out, code


def main(argv: Optional[Sequence[str]] = None) -> None:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        report, code = run(args)
        text = emit_report(report, args.out)
    except InputError as e:
        print(f"VALIDATION: {e.path}: {e}")
        raise SystemExit(INPUT_ERROR) from None
    except OSError as e:
        print(f"VALIDATION: {args.out or args.command}: {e}")
        raise SystemExit(INPUT_ERROR) from None
    if args.out:
        print(f"{report.command}: exit={code} report={args.out}")
    else:
        sys.stdout.write(text)
    if code:
        raise SystemExit(code)
