"""Command-line interface: ``lexval eval|infer|check|stability|consult``."""

from __future__ import annotations

import argparse
import enum
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import algebra, dsl
from .engine import Fact, Mode, RuleBase, infer
from .errors import BudgetError, LexvalError
from .laws import Ops
from .oracle import DEFAULT_COST_CEILING, check_laws
from .scale import make_scale
from .stability import Embedding, TNorm, audit
from .valuation import Valuation, parse_valuation


class ExitStatus(enum.IntEnum):
    OK = 0
    DOMAIN_ERROR = 1
    CHECK_FAILED = 2
    INTERNAL_ERROR = 3


VERBAL_GRADES = ("MINIMAL", "VERY-SMALL", "SMALL", "AVERAGE", "LARGE", "VERY-LARGE", "MAXIMAL")


def default_scale():
    return make_scale("verbal", VERBAL_GRADES)


class _Fail(Exception):
    """Carries an already-formatted message and an exit status up to ``main``."""

    def __init__(self, message: str, status: ExitStatus = ExitStatus.DOMAIN_ERROR):
        super().__init__(message)
        self.status = status


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _Fail(f"error: cannot read {path}: {exc.strerror or exc}") from None


def _load_document(path: str) -> tuple[RuleBase, str]:
    text = _read(path)
    try:
        return dsl.parse_document(text), text
    except dsl.ParseError as exc:
        raise _Fail(dsl.format_error(exc, text, path)) from None


def _scale_from_args(args):
    decl = getattr(args, "scale", None)
    if decl:
        try:
            return dsl.parse_scale(decl)
        except dsl.ParseError as exc:
            raise _Fail(dsl.format_error(exc, decl, "--scale")) from None
    doc = getattr(args, "doc", None)
    if doc:
        return _load_document(doc)[0].scale
    return default_scale()


def _emit_json(obj, out: TextIO) -> None:
    out.write(json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False))
    out.write("\n")


def _color(text: str, code: str, out: TextIO) -> str:
    if os.environ.get("NO_COLOR") is not None or not getattr(out, "isatty", lambda: False)():
        return text
    return f"\033[{code}m{text}\033[0m"


# -- commands ----------------------------------------------------------------


def cmd_eval(args, out: TextIO) -> ExitStatus:
    if args.file:
        text = _read(args.file).strip()
        source = args.file
    elif args.expression:
        text = args.expression
        source = "<expression>"
    else:
        raise _Fail("error: eval needs an expression or --file")
    scale = _scale_from_args(args)
    try:
        value = dsl.evaluate_expression(text, scale)
    except dsl.ParseError as exc:
        raise _Fail(dsl.format_error(exc, text, source)) from None
    if args.json:
        _emit_json(value.to_json(), out)
    else:
        out.write(f"{value}\n")
    return ExitStatus.OK


def cmd_infer(args, out: TextIO) -> ExitStatus:
    rb, _ = _load_document(args.doc)
    result = infer(rb, Mode.parse(args.mode))
    if args.json:
        _emit_json(result.to_json(), out)
    else:
        out.write(result.render(show_trace=args.trace) + "\n")
    return ExitStatus.OK


FAULTS = {
    # conjunction that sorts but never reduces
    "conj-no-reduce": lambda: Ops(
        conj=lambda f, g: Valuation._trusted(f.scale, tuple(sorted(f.ranks + g.ranks)))
    ),
    # disjunction replaced by the order minimum
    "disj-min": lambda: Ops(disj=algebra.meet),
}


def cmd_check(args, out: TextIO) -> ExitStatus:
    if getattr(args, "scale", None):
        scale = _scale_from_args(args)
    else:
        if args.scale_size < 2:
            raise _Fail("error: --scale-size must be at least 2")
        scale = make_scale(f"L{args.scale_size}", [f"a{k}" for k in range(args.scale_size)])
    ops = FAULTS[args.inject_fault]() if args.inject_fault else None
    try:
        report = check_laws(scale, args.max_len, cost_ceiling=args.cost_ceiling, ops=ops)
    except BudgetError as exc:
        raise _Fail(f"error: {exc}") from None
    if args.json:
        _emit_json(report.to_json(), out)
    else:
        for line in report.render().splitlines():
            if line.startswith("PASS"):
                line = _color("PASS", "32", out) + line[4:]
            elif line.startswith("FAIL"):
                line = _color("FAIL", "31", out) + line[4:]
            out.write(line + "\n")
    return ExitStatus.OK if report.passed else ExitStatus.CHECK_FAILED


def _parse_embedding(spec: str, scale) -> Embedding:
    mapping = {}
    for part in spec.split(","):
        if not part.strip():
            continue
        label, sep, value = part.partition("=")
        if not sep:
            raise _Fail(f"error: bad --embedding entry {part!r}; expected GRADE=VALUE")
        try:
            mapping[label.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise _Fail(f"error: bad number {value.strip()!r} in --embedding") from None
    return Embedding.from_mapping(scale, mapping)


def cmd_stability(args, out: TextIO) -> ExitStatus:
    rb, _ = _load_document(args.doc)
    fixed = [_parse_embedding(s, rb.scale) for s in args.embedding or ()]
    samples = args.samples
    if samples is None:
        samples = 0 if fixed else 500
    if samples < 0:
        raise _Fail("error: --samples must be >= 0")
    report = audit(rb, TNorm.parse(args.tnorm), samples, args.seed, fixed)
    if args.csv:
        from .figures import write_csv

        write_csv(report, args.csv)
    if args.figure:
        from .figures import plot_stability

        plot_stability(report, args.figure)
    if args.json:
        _emit_json(report.to_json(), out)
    else:
        out.write(report.render() + "\n")
    return ExitStatus.OK


class _Answers:
    def __init__(self, path: Optional[str], out: TextIO, inp: TextIO):
        self.scripted = path is not None
        self.lines = []
        if path is not None:
            for raw in _read(path).splitlines():
                line = raw.split("#", 1)[0].strip()
                if line:
                    self.lines.append(line)
        self.out = out
        self.inp = inp

    def ask(self, prompt: str) -> str:
        if self.scripted:
            if not self.lines:
                raise _Fail("error: answers file ran out before all questions were answered")
            answer = self.lines.pop(0)
            self.out.write(f"{prompt}{answer}\n")
            return answer
        self.out.write(prompt)
        self.out.flush()
        line = self.inp.readline()
        if not line:
            raise _Fail("error: input closed before all questions were answered")
        return line.strip()


def cmd_consult(args, out: TextIO, inp: Optional[TextIO] = None) -> ExitStatus:
    rb, _ = _load_document(args.doc)
    inp = inp or sys.stdin
    answers = _Answers(args.answers, out if not args.json else sys.stderr, inp)
    # the answers replace whatever facts the document declares
    facts = []
    given = {}
    grades = " ".join(rb.scale.labels)
    if not answers.scripted:
        answers.out.write(f"grades: {grades}; answer a grade, a valuation such as (A, B), or 'unknown'\n")
    for atom in rb.input_atoms():
        while True:
            text = answers.ask(f"{atom}? ")
            if text.lower() == "unknown":
                pv = Valuation(rb.scale, (0,))
                break
            try:
                pv = parse_valuation(text, rb.scale)
                break
            except LexvalError as exc:
                if answers.scripted:
                    raise _Fail(f"error: answer for {atom}: {exc}") from None
                answers.out.write(f"  {exc}; try again\n")
        given[atom] = pv
        facts.append(Fact(atom, pv))
    result = infer(rb.with_facts(facts), Mode.parse(args.mode))
    if args.json:
        doc = result.to_json()
        doc["answers"] = [
            {"attribute": a.attribute, "value": a.value, "pv": v.to_json()} for a, v in given.items()
        ]
        _emit_json(doc, out)
    else:
        out.write("\n" + result.render() + "\n")
    return ExitStatus.OK


# -- argument parsing ----------------------------------------------------------


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="machine-readable JSON output")
    parser.add_argument("--scale", metavar="DECL", default=default,
                        help='inline scale declaration, e.g. "scale S { LOW MID HIGH }"')


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lexval",
        description="Lexicographic valuations of plausibility on ordinal scales.",
    )
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    e = sub.add_parser("eval", help="evaluate an expression over valuations")
    _global_flags(e, suppress=True)
    e.add_argument("expression", nargs="?", help="expression, e.g. '(LARGE, VERY-LARGE) AND (LARGE)'")
    e.add_argument("-f", "--file", help="read the expression from a file")
    e.add_argument("--doc", help="take the scale from this rule-base document")
    e.set_defaults(func=cmd_eval)

    i = sub.add_parser("infer", help="forward-chain a rule base and rank hypotheses")
    _global_flags(i, suppress=True)
    i.add_argument("doc", help="rule-base document")
    i.add_argument("--mode", default="mpgf-r", choices=[m.value for m in Mode])
    i.add_argument("--trace", action="store_true", help="print the derivation trace")
    i.set_defaults(func=cmd_infer)

    c = sub.add_parser("check", help="verify the algebraic laws exhaustively")
    _global_flags(c, suppress=True)
    c.add_argument("--scale-size", type=int, default=3, metavar="K")
    c.add_argument("--max-len", type=int, default=3, metavar="N")
    c.add_argument("--cost-ceiling", type=int, default=DEFAULT_COST_CEILING)
    c.add_argument("--inject-fault", choices=sorted(FAULTS), help=argparse.SUPPRESS)
    c.set_defaults(func=cmd_check)

    s = sub.add_parser("stability", help="audit numeric T-norm inference for ranking flips")
    _global_flags(s, suppress=True)
    s.add_argument("doc", help="rule-base document (single-grade plausibilities)")
    s.add_argument("--tnorm", default="product", choices=[t.value for t in TNorm])
    s.add_argument("--samples", type=int, default=None,
                   help="random embeddings to draw (default 500, or 0 when --embedding is given)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--embedding", action="append", metavar="G=X,...",
                   help="fixed embedding evaluated before the random ones (repeatable)")
    s.add_argument("--figure", metavar="PATH", help="write a matplotlib figure (png, pdf, svg)")
    s.add_argument("--csv", metavar="PATH", help="write per-embedding values as CSV")
    s.set_defaults(func=cmd_stability)

    q = sub.add_parser("consult", help="ask for premise plausibilities, then infer")
    _global_flags(q, suppress=True)
    q.add_argument("doc", help="rule-base document")
    q.add_argument("--answers", metavar="FILE", help="scripted answers, one per line")
    q.add_argument("--mode", default="mpgf-r", choices=[m.value for m in Mode])
    q.set_defaults(func=cmd_consult)
    return p


def main(argv: Optional[Sequence[str]] = None, out: TextIO = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        status = args.func(args, out)
    except _Fail as exc:
        print(str(exc), file=sys.stderr)
        return int(exc.status)
    except dsl.ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitStatus.DOMAIN_ERROR)
    except LexvalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitStatus.DOMAIN_ERROR)
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return int(ExitStatus.INTERNAL_ERROR)
    return int(status)


if __name__ == "__main__":
    sys.exit(main())
