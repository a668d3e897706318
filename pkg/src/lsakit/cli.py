"""Command-line interface.

Exit codes: 0 all checks pass, 1 checks ran and found violations, 2 usage or
parse error, 3 an exhaustive search exceeded the candidate cap.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io
from .algebra import (
    MorphismWitness, Split, check_bimodule, check_identity, check_morphism, commutator_lie, rep_of_commutator,
)
from .complements import (
    brute_force_complements, check_deformation, check_matched_pair, classify_complements,
    complement_guarantees, deform, enumerate_deformations,
)
from .errors import (
    BaseAlgebraInvalid, DatumInvalid, EnumerationTooLarge, FieldMismatch, LsakitError, MatchedPairInvalid,
    NotDeformationMap, NotInvertible, NotSubalgebra, ParseError,
)
from .field import FieldSpec
from .fixtures import FIXTURES
from .flags import check_flag, check_flag_equiv, classify_flags, enumerate_flags, flag_to_datum
from .unified import check_datum_equivalence, check_extending, extract_datum, unified_product

DEFAULT_MAX_CANDIDATES = 10**8
IDENTITY_KINDS = ("left_symmetric", "novikov", "lie_jacobi_of_commutator", "antisymmetry_of_commutator")


class Outcome:
    """What a subcommand produced: a JSON payload, human lines and a pass flag."""

    def __init__(self, payload: dict, passed: bool = True, lines=None):
        self.payload = payload
        self.passed = passed
        self.lines = lines if lines is not None else []


# -- argument helpers -----------------------------------------------------------------


def _kind(text: str) -> str:
    k = text.replace("-", "_").lower()
    if k not in IDENTITY_KINDS:
        raise argparse.ArgumentTypeError(f"unknown kind {text!r}")
    return k


def _field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except (ParseError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _cap(args) -> int:
    if args.max_candidates is not None:
        return args.max_candidates
    env = os.environ.get("LSAKIT_MAX_CANDIDATES")
    if env:
        try:
            return _positive(env)
        except argparse.ArgumentTypeError as exc:
            raise ParseError(str(exc), "LSAKIT_MAX_CANDIDATES") from None
    return DEFAULT_MAX_CANDIDATES


def _structural_kind(args) -> str:
    if args.kind not in ("left_symmetric", "novikov"):
        raise ParseError(f"--kind must be left-symmetric or novikov here, not {args.kind}", "--kind")
    return args.kind


def _load(args, source, kind=None):
    return io.parse_value(source, args.field, kind)


def _indices(text: str, n: int) -> list[int]:
    out = []
    for part in text.split(","):
        try:
            i = int(part)
        except ValueError:
            raise ParseError(f"bad index {part!r}", "--sub") from None
        if not 1 <= i <= n:
            raise ParseError(f"index {i} out of range 1..{n}", "--sub")
        out.append(i - 1)
    return out


def _report_lines(report, labels=None):
    def name(i):
        return labels[i] if labels and i < len(labels) else str(i + 1)

    if report.passed:
        return ["PASS"]
    lines = [f"FAIL ({len(report.violations)} violations; conditions {', '.join(report.failed_conditions())})"]
    for v in report.violations[:20]:
        lines.append(f"  {v.condition_id} at ({', '.join(name(i) for i in v.witness)})")
    if len(report.violations) > 20:
        lines.append(f"  ... {len(report.violations) - 20} more")
    return lines


def _check_outcome(report, F, labels=None, extra=None) -> Outcome:
    payload = report.to_json(F, labels)
    if extra:
        payload.update(extra)
    return Outcome(payload, report.passed, _report_lines(report, labels))


# -- subcommands -------------------------------------------------------------------------


def cmd_check(args):
    _, A = _load(args, args.value, "algebra")
    report = check_identity(A, args.kind)
    return _check_outcome(report, A.field, A.basis_names(), {"kind": args.kind})


def cmd_lie(args):
    _, A = _load(args, args.value, "algebra")
    L = commutator_lie(A)
    jac = check_identity(A, "lie_jacobi_of_commutator")
    payload = {"lie": io.algebra_to_json(L), "jacobi": jac.passed}
    lines = [f"[{L.basis_names()[i]}, {L.basis_names()[j]}] = " + _combo(L, out) for (i, j), out in
             sorted(L.nonzero_products().items()) if i < j] or ["abelian"]
    return Outcome(payload, jac.passed, lines)


def _combo(A, out):
    names = A.basis_names()
    return " + ".join(f"{A.field.format(c)}*{names[k]}" for k, c in sorted(out.items()))


def cmd_bimodule(args):
    _, bm = _load(args, args.value, "bimodule")
    kind = _structural_kind(args)
    report = check_bimodule(bm, kind)
    payload = {**report.to_json(bm.base.field), "kind": kind}
    lines = _report_lines(report)
    passed = report.passed
    if report.passed:
        rep = rep_of_commutator(bm)
        payload["representation"] = rep.passed
        passed = rep.passed
        lines.append(f"S - T is a representation of the commutator algebra: {rep.passed}")
    return Outcome(payload, passed, lines)


def _load_datum(args, source):
    """A datum, or a flag datum / matched pair lifted to one."""
    kind, value = _load(args, source)
    if kind == "datum":
        return value
    if kind == "flag":
        return flag_to_datum(value)
    if kind == "matched_pair":
        return value.datum
    raise ParseError(f"expected a datum, flag or matched pair, got {kind}", source)


def cmd_unify(args):
    d = _load_datum(args, args.value)
    U = unified_product(d)
    payload = {"algebra": io.algebra_to_json(U.alg)}
    if args.check:
        kind = _structural_kind(args)
        report = check_extending(d, kind)
        payload["conditions"] = report.to_json(d.field)
        return Outcome(payload, report.passed, _report_lines(report))
    return Outcome(payload, True, [io.dumps(payload["algebra"]).rstrip()])


def cmd_conditions(args):
    d = _load_datum(args, args.value)
    kind = _structural_kind(args)
    report = check_extending(d, kind, args.case)
    return _check_outcome(report, d.field, None, {"kind": kind, "case": args.case})


def cmd_extract(args):
    _, E = _load(args, args.value, "algebra")
    sub = _indices(args.sub, E.dim)
    ex = extract_datum(E, sub)
    payload = {
        "datum": io.datum_to_json(ex.datum),
        "iso": io.map_to_json(E.field, ex.iso.map),
        "sub": [i + 1 for i in sub],
    }
    return Outcome(payload, True, [io.dumps(payload["datum"]).rstrip()])


def cmd_morphism(args):
    k1, v1 = _load(args, args.src)
    k2, v2 = _load(args, args.dst, k1)
    witness = io.loads(args.witness, "--witness") if args.witness.lstrip().startswith("{") else None
    if witness is None:
        witness = io.loads(open(args.witness, encoding="utf-8").read(), args.witness)
    if k1 == "algebra":
        F = v1.field
        w = io.morphism_witness_from_json(witness, F, v1.dim, v2.dim, "--witness")
        if w.stabilizes or w.costabilizes:
            if args.sub is None:
                raise ParseError("--sub is needed with stabilizes/costabilizes", "--sub")
            split = Split.of(_indices(args.sub, v1.dim), v1.dim)
            w = MorphismWitness(w.map, w.stabilizes, w.costabilizes, split, split)
        report = check_morphism(v1, v2, w)
        return _check_outcome(report, F, None)
    if k1 == "datum":
        F = v1.field
        w = io.datum_witness_from_json(witness, F, v1.A.dim, v1.vdim, "--witness")
        verdict = check_datum_equivalence(v1, v2, w)
        passed = verdict["equivalent"]
        return Outcome(verdict, passed, [f"equivalent: {verdict['equivalent']}",
                                         f"cohomologous: {verdict['cohomologous']}"])
    if k1 == "flag":
        F = v1.field
        w = io.flag_witness_from_json(witness, F, v1.base.dim, "--witness")
        mode = args.mode or "equiv"
        report = check_flag_equiv(v1, v2, w, mode)
        return _check_outcome(report, F, None, {"mode": mode})
    raise ParseError(f"morphism needs algebras, datums or flags, got {k1}", "src")


def cmd_flag(args):
    if args.flag_cmd in ("check", "build"):
        _, fd = _load(args, args.value, "flag")
        kind = _structural_kind(args)
        report = check_flag(fd, kind)
        if args.flag_cmd == "check":
            return _check_outcome(report, fd.field, None, {"kind": kind})
        d = flag_to_datum(fd)
        U = unified_product(d)
        payload = {
            "conditions": report.to_json(fd.field), "datum": io.datum_to_json(d),
            "algebra": io.algebra_to_json(U.alg),
        }
        direct = check_identity(U.alg, kind)
        payload["direct"] = direct.passed
        lines = _report_lines(report) + [io.dumps(payload["algebra"]).rstrip()]
        return Outcome(payload, report.passed and direct.passed, lines)
    _, A = _load(args, args.value, "algebra")
    kind = _structural_kind(args)
    report = enumerate_flags(A, kind, _cap(args))
    if args.flag_cmd == "classify":
        report = classify_flags(report, kind, args.mode, _cap(args))
    payload = io.classification_report_json(report)
    lines = [f"candidates checked: {report.candidates_checked}", f"flag datums: {len(report.valid)}"]
    if report.mode is not None:
        lines.append(f"classes ({report.mode}): {len(report.classes)}")
        lines += [f"  {c.representative + 1}: {[m + 1 for m in sorted(c.members)]}" for c in report.classes]
    return Outcome(payload, True, lines)


def cmd_mp(args):
    _, mp = _load(args, args.value, "matched_pair")
    kind = _structural_kind(args)
    report = check_matched_pair(mp, kind)
    return _check_outcome(report, mp.field, None, {"kind": kind})


def _phi(args, mp):
    if args.map is None:
        raise ParseError("--map is required", "--map")
    _, (F, phi) = io.parse_value(args.map, mp.field, "map")
    if phi.shape != (mp.A.dim, mp.B.dim):
        raise ParseError(f"map must be {mp.A.dim} x {mp.B.dim}", "--map")
    return phi


def cmd_deform(args):
    kind = _structural_kind(args)
    if args.deform_cmd == "oracle":
        _, E = _load(args, args.value, "algebra")
        if args.sub is None:
            raise ParseError("--sub is required", "--sub")
        rep = brute_force_complements(E, _indices(args.sub, E.dim), _cap(args))
        payload = io.brute_force_report_json(rep)
        return Outcome(payload, True, [f"complements: {len(rep.complements)}", f"index: {rep.index}",
                                       f"class sizes: {payload['class_sizes']}"])
    _, mp = _load(args, args.value, "matched_pair")
    F = mp.field
    if args.deform_cmd == "check":
        report = check_deformation(mp, _phi(args, mp), kind)
        return _check_outcome(report, F, None, {"kind": kind})
    if args.deform_cmd == "apply":
        phi = _phi(args, mp)
        dfm = deform(mp, phi, kind)
        payload = {
            "Bphi": io.algebra_to_json(dfm.Bphi),
            "embedding": io.map_to_json(F, dfm.embedding),
            "guarantees": complement_guarantees(mp, phi, kind),
        }
        ok = all(payload["guarantees"].values())
        return Outcome(payload, ok, [io.dumps(payload["Bphi"]).rstrip()])
    cap = _cap(args)
    if args.deform_cmd == "enum":
        rep = enumerate_deformations(mp, kind, cap)
        lines = [f"candidates checked: {rep.candidates_checked}", f"deformation maps: {len(rep.deformation_maps)}"]
    else:
        rep = classify_complements(mp, kind, cap)
        lines = [f"deformation maps: {len(rep.deformation_maps)}", f"index: {rep.index}"]
        lines += [f"  class of {c.representative + 1}: {[m + 1 for m in sorted(c.members)]}" for c in rep.classes]
    return Outcome(io.complement_report_json(rep), True, lines)


def cmd_examples(args):
    if args.examples_cmd == "list":
        payload = {"fixtures": [
            {"name": n + (f"({','.join(s.params)})" if s.params else ""), "type": s.kind, "summary": s.summary}
            for n, s in sorted(FIXTURES.items())
        ]}
        return Outcome(payload, True, [f"{f['name']:<58} {f['summary']}" for f in payload["fixtures"]])
    kind, value = io.parse_value("examples:" + args.name, args.field)
    payload = io.to_json(kind, value)
    return Outcome(payload, True, [io.dumps(payload).rstrip()])


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field, default=None, help="rational or prime:P (values over Q are reduced)")
    common.add_argument("--kind", type=_kind, default="left_symmetric",
                        help="left-symmetric, novikov (check also accepts the commutator kinds)")
    common.add_argument("--output", choices=("human", "json"), default="human")
    common.add_argument("--max-candidates", type=_positive, default=None,
                        help="cap on exhaustive searches (default 10^8, env LSAKIT_MAX_CANDIDATES)")

    p = argparse.ArgumentParser(prog="lsakit", description="Exact left-symmetric / Novikov algebra computations.")
    sub = p.add_subparsers(dest="cmd", required=True)
    value_help = "JSON file, inline JSON, or examples:<fixture>"

    s = sub.add_parser("check", parents=[common], help="check an identity on an algebra")
    s.add_argument("value", help=value_help)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("lie", parents=[common], help="commutator Lie algebra")
    s.add_argument("value", help=value_help)
    s.set_defaults(func=cmd_lie)

    s = sub.add_parser("bimodule", parents=[common], help="check a bimodule")
    s.add_argument("value", help=value_help)
    s.set_defaults(func=cmd_bimodule)

    s = sub.add_parser("unify", parents=[common], help="unified product of an extending datum")
    s.add_argument("value", help=value_help)
    s.add_argument("--check", action="store_true", help="also run the extending-structure conditions")
    s.set_defaults(func=cmd_unify)

    s = sub.add_parser("conditions", parents=[common], help="extending-structure conditions of a datum")
    s.add_argument("value", help=value_help)
    s.add_argument("--case", choices=("general", "twisted", "crossed", "bicrossed"), default="general")
    s.set_defaults(func=cmd_conditions)

    s = sub.add_parser("extract", parents=[common], help="read off the extending datum of a subalgebra")
    s.add_argument("value", help=value_help)
    s.add_argument("--sub", required=True, help="1-based basis indices spanning the subalgebra, e.g. 1,3")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("morphism", parents=[common], help="check an algebra morphism or a datum morphism")
    s.add_argument("src", help=value_help)
    s.add_argument("dst", help=value_help)
    s.add_argument("--witness", required=True,
                   help='{"matrix": ...} for algebras, {"lambda": ..., "mu": ...} for datums')
    s.add_argument("--sub", default=None, help="subalgebra indices for stabilizes/costabilizes")
    s.add_argument("--mode", choices=("equiv", "cohom"), default=None, help="relation checked for flag datums")
    s.set_defaults(func=cmd_morphism)

    s = sub.add_parser("flag", help="flag datums (codimension one)")
    fsub = s.add_subparsers(dest="flag_cmd", required=True)
    for name, helptext in (("check", "check a flag datum"), ("build", "flag datum to unified product"),
                           ("enum", "enumerate flag datums over F_p"), ("classify", "classify flag datums over F_p")):
        t = fsub.add_parser(name, parents=[common], help=helptext)
        t.add_argument("value", help=value_help)
        if name == "classify":
            t.add_argument("--mode", choices=("equiv", "cohom"), default="equiv")
        t.set_defaults(func=cmd_flag)

    s = sub.add_parser("mp", help="matched pairs")
    msub = s.add_subparsers(dest="mp_cmd", required=True)
    t = msub.add_parser("verify", parents=[common], help="check a matched pair")
    t.add_argument("value", help=value_help)
    t.set_defaults(func=cmd_mp)

    s = sub.add_parser("deform", help="deformation maps and complements")
    dsub = s.add_subparsers(dest="deform_cmd", required=True)
    for name, helptext in (("check", "check a deformation map"), ("apply", "deformed complement"),
                           ("enum", "enumerate deformation maps over F_p"),
                           ("classify", "classify complements over F_p"),
                           ("oracle", "brute-force complements of a subalgebra over F_p")):
        t = dsub.add_parser(name, parents=[common], help=helptext)
        t.add_argument("value", help=value_help)
        if name in ("check", "apply"):
            t.add_argument("--map", default=None, help='deformation map {"matrix": ...} or examples:ex55-phi(b)')
        if name == "oracle":
            t.add_argument("--sub", default=None, help="1-based indices of the subalgebra")
        t.set_defaults(func=cmd_deform)

    s = sub.add_parser("examples", help="built-in fixtures")
    esub = s.add_subparsers(dest="examples_cmd", required=True)
    t = esub.add_parser("list", parents=[common])
    t.set_defaults(func=cmd_examples)
    t = esub.add_parser("show", parents=[common])
    t.add_argument("name", help="fixture name, e.g. ex46 or ex46-ext(1,1,2,1)")
    t.set_defaults(func=cmd_examples)
    return p


def _emit(outcome: Outcome, output: str, stream):
    if output == "json":
        stream.write(io.dumps(outcome.payload))
    else:
        for line in outcome.lines:
            stream.write(line + "\n")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        outcome = args.func(args)
    except EnumerationTooLarge as exc:
        stderr.write(f"lsakit: {exc}\n")
        if args.output == "json":
            stdout.write(io.dumps({"error": "EnumerationTooLarge", "size": exc.size, "cap": exc.cap}))
        return 3
    except (ParseError, FieldMismatch, DatumInvalid, OSError) as exc:
        stderr.write(f"lsakit: {type(exc).__name__}: {exc}\n")
        return 2
    except (BaseAlgebraInvalid, MatchedPairInvalid, NotDeformationMap, NotSubalgebra, NotInvertible) as exc:
        stderr.write(f"lsakit: {type(exc).__name__}: {exc}\n")
        if args.output == "json":
            stdout.write(io.dumps({"pass": False, "error": type(exc).__name__, "message": str(exc)}))
        return 1
    except LsakitError as exc:
        stderr.write(f"lsakit: {type(exc).__name__}: {exc}\n")
        return 2
    _emit(outcome, args.output, stdout)
    return 0 if outcome.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
