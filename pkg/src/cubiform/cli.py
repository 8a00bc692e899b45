"""Command line front end.

Exit codes: 0 success (or OBSTRUCTED / certified), 2 input error,
3 inconclusive (no certificate, or a counterexample was found).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, jsonio
from .cubic import (
    CubicForm,
    blowup_curve,
    blowup_point,
    format_linear,
    hessian_at,
    hessian_rank_at,
    hessian_sparse,
)
from .exterior import abelian_cubic
from .field import FieldTagError, common_field, widen
from .obstruct import (
    DEFAULT_MAX_DEPTH,
    BranchStep,
    CertifyStatus,
    RankCertificate,
    ResolutionModel,
    Verdict,
    VerdictStatus,
    certify_rank1_trivial,
    decide_blowdown_obstruction,
    default_workers,
)
from .quotient import ZETA_LABELS, DiagonalAction, quotient_cubic

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3


class InputError(Exception):
    pass


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _parse_inline(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed {what}: {exc}") from None


def _load_form(path: str) -> CubicForm:
    doc = jsonio.load_document(_read_json(path))
    if isinstance(doc, ResolutionModel):
        return doc.F_Z
    if isinstance(doc, DiagonalAction):
        return quotient_cubic(doc)
    return doc


def _load_model(path: str) -> ResolutionModel:
    doc = jsonio.load_document(_read_json(path))
    if not isinstance(doc, ResolutionModel):
        raise InputError(f"{path} is not a resolution model {{form, k, a}}")
    return doc


def _fmt_point(p) -> str:
    return "(" + ",".join(str(x) for x in p) + ")"


def _matrix_json(M) -> list:
    return [[jsonio.encode_elem(x) for x in row] for row in M]


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _threads(args) -> int:
    return args.threads if args.threads else default_workers()


def cmd_abelian(args) -> int:
    _emit(args, jsonio.dumps(jsonio.encode_form(abelian_cubic())))
    return EXIT_OK


def cmd_quotient(args) -> int:
    if args.action:
        act = jsonio.decode_action(_read_json(args.action))
    else:
        act = DiagonalAction.from_label(args.zeta)
    _emit(args, jsonio.dumps(jsonio.encode_form(quotient_cubic(act))))
    return EXIT_OK


def _form_and_point(args):
    F = _load_form(args.form)
    p = jsonio.decode_point(_parse_inline(args.point, "point"))
    if len(p) != F.m:
        raise InputError(f"point has {len(p)} coordinates, form has {F.m} variables")
    field = common_field([*p, *(v for _, v in F.entries)] + [widen(0, F.field)])
    return F.widen(field), [widen(x, field) for x in p]


def cmd_rank(args) -> int:
    F, p = _form_and_point(args)
    H = hessian_at(F, p)
    r = hessian_rank_at(F, p)
    if args.json:
        text = jsonio.dumps({"rank": r, "point": jsonio.encode_point(p), "hessian": _matrix_json(H)})
    else:
        lines = [f"rank: {r}", f"point: {_fmt_point(p)}", "hessian:"]
        lines += ["  [" + ", ".join(str(x) for x in row) + "]" for row in H]
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK


def cmd_hessian(args) -> int:
    F = _load_form(args.form)
    H = hessian_sparse(F)
    rows = [[format_linear(H.get((j, k), {})) for k in range(F.m)] for j in range(F.m)]
    _emit(args, jsonio.dumps({"m": F.m, "field": F.field.value, "hessian": rows}))
    return EXIT_OK


def cmd_blowup_point(args) -> int:
    F = _load_form(args.form)
    a = jsonio.decode_elem(_parse_inline(args.a, "a"), F.field)
    _emit(args, jsonio.dumps(jsonio.encode_form(blowup_point(F, a))))
    return EXIT_OK


def cmd_blowup_curve(args) -> int:
    F = _load_form(args.form)
    a = jsonio.decode_elem(_parse_inline(args.a, "a"), F.field)
    b = [widen(x, F.field) for x in jsonio.decode_point(_parse_inline(args.b, "b"))]
    _emit(args, jsonio.dumps(jsonio.encode_form(blowup_curve(F, a, b))))
    return EXIT_OK


def cmd_resolve(args) -> int:
    F = _load_form(args.form)
    a = list(args.a)
    if args.k is not None:
        if len(a) == 1:
            a = a * args.k
        elif len(a) != args.k:
            raise InputError(f"--k {args.k} but {len(a)} values of --a were given")
    model = ResolutionModel(F, tuple(a))
    _emit(args, jsonio.dumps(jsonio.encode_model(model)))
    return EXIT_OK


def _certificate_lines(cert: RankCertificate, indent: str = "  ") -> list[str]:
    lines = []
    for n, s in enumerate(cert.steps, start=1):
        rows = ",".join(str(r + 1) for r in s.rows)
        cols = ",".join(str(c + 1) for c in s.cols)
        head = f"{indent}{n}. minor rows ({rows}) cols ({cols}) -> {s.reduced_form}"
        if isinstance(s, BranchStep):
            lines.append(head + " (branch)")
            for v, sub in zip(s.variables, s.branches):
                lines.append(f"{indent}   case x_{v + 1}=0:")
                lines += _certificate_lines(sub, indent + "     ")
        else:
            lines.append(f"{head}, so {s.conclusion}")
    return lines


def cmd_certify(args) -> int:
    F = _load_form(args.form)
    result = certify_rank1_trivial(F, max_depth=args.max_depth, workers=_threads(args))
    if args.json:
        doc = {
            "status": result.status.value,
            "certificate": None
            if result.certificate is None
            else jsonio.encode_certificate(result.certificate),
            "counterexample": None
            if result.counterexample is None
            else jsonio.encode_point(result.counterexample),
            "version": __version__,
        }
        text = jsonio.dumps(doc)
    else:
        lines = [f"status: {result.status.value}"]
        if result.certificate is not None:
            lines.append(f"certificate: {len(result.certificate.steps)} steps")
            lines += _certificate_lines(result.certificate)
        if result.counterexample is not None:
            lines.append(f"counterexample: {_fmt_point(result.counterexample)}")
        text = "\n".join(lines) + "\n"
    _emit(args, text)
    return EXIT_OK if result.status is CertifyStatus.CERTIFIED else EXIT_INCONCLUSIVE


def _verdict_text(v: Verdict, model: ResolutionModel) -> str:
    lines = [f"verdict: {v.status.value}", f"model: m = {model.m}, k = {model.k}, a = {list(model.a)}"]
    if v.certificate is not None:
        kind = "with branching" if v.certificate.uses_branching else "squares only"
        lines.append(f"certificate: {len(v.certificate.steps)} steps, {kind}")
        lines += _certificate_lines(v.certificate)
    if v.counterexample is not None:
        lines.append(f"counterexample: {_fmt_point(v.counterexample)}")
    lines += [f"note: {n}" for n in v.notes]
    lines.append("residual assumptions (not machine-checked):")
    lines += [f"  - {a}" for a in v.residual_assumptions]
    return "\n".join(lines) + "\n"


def cmd_obstruct(args) -> int:
    model = _load_model(args.model)
    v = decide_blowdown_obstruction(model, max_depth=args.max_depth, workers=_threads(args))
    _emit(args, jsonio.dumps(jsonio.encode_verdict(v)) if args.json else _verdict_text(v, model))
    return EXIT_OK if v.status is VerdictStatus.OBSTRUCTED else EXIT_INCONCLUSIVE


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubiform", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write output to FILE instead of stdout")
    common.add_argument("--threads", type=int, metavar="N", help="worker processes (default: $CUBIFORM_THREADS or CPU count)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("abelian", parents=[common], help="cubic form of the abelian threefold")
    p.set_defaults(func=cmd_abelian)

    p = sub.add_parser("quotient", parents=[common], help="quotient cubic of a diagonal action")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--zeta", choices=list(ZETA_LABELS))
    g.add_argument("--action", metavar="FILE", help="action document {zeta, order}")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("rank", parents=[common], help="Hessian rank at a point")
    p.add_argument("form")
    p.add_argument("--point", required=True, help='inline JSON, e.g. "[1, 0, \\"1/2\\"]"')
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("hessian", parents=[common], help="Hessian as a matrix of linear forms")
    p.add_argument("form")
    p.set_defaults(func=cmd_hessian)

    p = sub.add_parser("blowup-point", parents=[common], help="blow up a point")
    p.add_argument("form")
    p.add_argument("--a", required=True, help="E^3 of the new exceptional divisor")
    p.set_defaults(func=cmd_blowup_point)

    p = sub.add_parser("blowup-curve", parents=[common], help="blow up a curve")
    p.add_argument("form")
    p.add_argument("--a", required=True, help="E^3")
    p.add_argument("--b", required=True, help="inline JSON list of E^2.f*gamma_i")
    p.set_defaults(func=cmd_blowup_curve)

    p = sub.add_parser("resolve", parents=[common], help="build a resolution model")
    p.add_argument("form")
    p.add_argument("--a", required=True, type=_int_list, help="comma-separated E_i^3 values")
    p.add_argument("--k", type=int, help="number of exceptional divisors (repeats a single --a)")
    p.set_defaults(func=cmd_resolve)

    for name, func, target, helptext in (
        ("certify", cmd_certify, "form", "prove the rank <= 1 locus is the origin"),
        ("obstruct", cmd_obstruct, "model", "blow-down obstruction verdict"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument(target)
        p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
        p.add_argument("--json", action="store_true")
        p.set_defaults(func=func)
    return parser


# options whose values may start with "-" (e.g. "-omega", "-1,3")
_SIGNED_OPTIONS = {"--zeta", "--a", "--b", "--point"}


def _glue_signed(argv: list[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _SIGNED_OPTIONS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_signed(argv))
    try:
        return args.func(args)
    except (InputError, FieldTagError, ValueError) as exc:
        print(f"cubiform: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
