"""Text format for scales, rule bases and calculator expressions.

Document grammar::

    document   := scaledecl negdecl? item*
    scaledecl  := "scale" IDENT "{" IDENT+ "}"
    negdecl    := "negation" "{" (IDENT "->" IDENT)+ "}"
    item       := ruledecl | factdecl
    ruledecl   := "rule" IDENT ":" "if" atom ("and" atom)* "then" concl ("and" concl)*
    concl      := atom "[" pv "]"
    factdecl   := "fact" atom "[" pv "]"
    atom       := IDENT "=" IDENT
    pv         := IDENT | "(" IDENT ("," IDENT)* ")"

``#`` starts a comment.  Identifiers are ``[A-Za-z][A-Za-z0-9_-]*`` and
case-sensitive; the lowercase keywords above are reserved.

Expressions combine valuation literals with ``NOT`` (binds tightest),
``AND``, ``OR`` and the binary, non-associative implication operators
``SIMP``, ``RIMP``, ``MPR`` and ``MPS``, written either infix or as calls:
``RIMP((AVERAGE), (AVERAGE, VERY-LARGE))``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from . import algebra
from .engine import Atom, Conclusion, Fact, Rule, RuleBase
from .errors import LexvalError
from .scale import Scale, install_negation, make_scale
from .valuation import Valuation, from_grades

__all__ = [
    "SourceSpan",
    "ParseError",
    "SemanticError",
    "Token",
    "tokenize",
    "parse_document",
    "parse_scale",
    "parse_expression",
    "evaluate",
    "evaluate_expression",
    "serialize",
    "format_valuation",
    "format_error",
    "OPERATORS",
]

KEYWORDS = frozenset({"scale", "negation", "rule", "fact", "if", "and", "then"})
IMPLICATIONS = ("SIMP", "RIMP", "MPR", "MPS")
OPERATORS = frozenset({"NOT", "AND", "OR", *IMPLICATIONS})
SYMBOLS = ("->", "{", "}", ":", "=", "[", "]", "(", ")", ",")

_IDENT = re.compile(r"[A-Za-z](?:[A-Za-z0-9_]|-(?!>))*")
_IDENT_FULL = re.compile(r"[A-Za-z][A-Za-z0-9_-]*\Z")


@dataclass(frozen=True)
class SourceSpan:
    """Start of a token: 1-based line and column, 0-based UTF-8 byte offset."""

    line: int
    column: int
    offset: int

    def __str__(self):
        return f"{self.line}:{self.column}"


class ParseError(LexvalError):
    def __init__(self, span: SourceSpan, message: str, expected: Sequence[str] = (), found: str = ""):
        super().__init__(f"{span}: {message}")
        self.span = span
        self.message = message
        self.expected = tuple(expected)
        self.found = found


class SemanticError(ParseError):
    """Well-formed text with invalid meaning (unknown grade, duplicate id, ...)."""


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "keyword", "sym", "eof"
    text: str
    span: SourceSpan

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        return repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i, n = 0, len(text)
    byte = 0
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i, byte = line + 1, 1, i + 1, byte + 1
            continue
        if ch.isspace():
            i, col, byte = i + 1, col + 1, byte + len(ch.encode("utf-8"))
            continue
        if ch == "#":
            j = text.find("\n", i)
            j = n if j < 0 else j
            byte += len(text[i:j].encode("utf-8"))
            col += j - i
            i = j
            continue
        span = SourceSpan(line, col, byte)
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            tokens.append(Token("keyword" if word in KEYWORDS else "ident", word, span))
            length = len(word)
        else:
            for sym in SYMBOLS:
                if text.startswith(sym, i):
                    tokens.append(Token("sym", sym, span))
                    length = len(sym)
                    break
            else:
                raise ParseError(span, f"unexpected character {ch!r}", found=ch)
        i += length
        col += length
        byte += length  # identifiers and symbols are ASCII
    tokens.append(Token("eof", "", SourceSpan(line, col, byte)))
    return tokens


class _Cursor:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def fail(self, *expected: str) -> ParseError:
        t = self.tok
        want = " or ".join(expected)
        return ParseError(t.span, f"expected {want}, found {t.describe()}", expected, t.text)

    def is_sym(self, s: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == s

    def is_kw(self, kw: str) -> bool:
        return self.tok.kind == "keyword" and self.tok.text == kw

    def sym(self, s: str) -> Token:
        if not self.is_sym(s):
            raise self.fail(f"'{s}'")
        return self.advance()

    def kw(self, kw: str) -> Token:
        if not self.is_kw(kw):
            raise self.fail(f"'{kw}'")
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        if self.tok.kind != "ident":
            raise self.fail(what)
        return self.advance()


# -- documents ---------------------------------------------------------------


def _scale_decl(cur: _Cursor) -> Scale:
    cur.kw("scale")
    name = cur.ident("scale name")
    cur.sym("{")
    labels: list[Token] = [cur.ident("grade label")]
    while cur.tok.kind == "ident":
        labels.append(cur.advance())
    cur.sym("}")
    seen = {}
    for t in labels:
        if t.text in seen:
            raise SemanticError(t.span, f"duplicate grade label {t.text!r}", found=t.text)
        seen[t.text] = t
    if len(labels) < 2:
        raise SemanticError(labels[0].span, "a scale needs at least 2 grades", found=labels[0].text)
    return make_scale(name.text, [t.text for t in labels])


def _grade(cur: _Cursor, scale: Scale) -> tuple[Token, int]:
    t = cur.ident("grade label")
    if t.text not in scale:
        raise SemanticError(t.span, f"unknown grade {t.text!r} (scale {scale.name!r})", found=t.text)
    return t, scale.rank(t.text)


def _negation_decl(cur: _Cursor, scale: Scale) -> Scale:
    head = cur.kw("negation")
    cur.sym("{")
    table: dict[str, str] = {}
    first = True
    while first or cur.tok.kind == "ident":
        first = False
        src, _ = _grade(cur, scale)
        cur.sym("->")
        _, dst = _grade(cur, scale)
        if src.text in table:
            raise SemanticError(src.span, f"negation of {src.text!r} given twice", found=src.text)
        table[src.text] = scale.labels[dst]
    cur.sym("}")
    try:
        return install_negation(scale, table)
    except LexvalError as exc:
        raise SemanticError(head.span, str(exc), found=head.text) from None


def _pv(cur: _Cursor, scale: Scale) -> tuple[SourceSpan, Valuation]:
    span = cur.tok.span
    if cur.is_sym("("):
        cur.advance()
        ranks = [_grade(cur, scale)[1]]
        while cur.is_sym(","):
            cur.advance()
            ranks.append(_grade(cur, scale)[1])
        cur.sym(")")
    elif cur.tok.kind == "ident":
        ranks = [_grade(cur, scale)[1]]
    else:
        raise cur.fail("grade label", "'('")
    return span, from_grades(scale, ranks)


def _atom(cur: _Cursor) -> tuple[SourceSpan, Atom]:
    attr = cur.ident("attribute name")
    cur.sym("=")
    value = cur.ident("attribute value")
    return attr.span, Atom(attr.text, value.text)


def _rule_decl(cur: _Cursor, scale: Scale) -> tuple[Token, Rule]:
    cur.kw("rule")
    rid = cur.ident("rule id")
    cur.sym(":")
    cur.kw("if")
    premises = [_atom(cur)[1]]
    while cur.is_kw("and"):
        cur.advance()
        premises.append(_atom(cur)[1])
    cur.kw("then")
    conclusions = []
    while True:
        _, atom = _atom(cur)
        cur.sym("[")
        span, pv = _pv(cur, scale)
        cur.sym("]")
        if pv.is_bottom():
            raise SemanticError(span, f"conclusion {atom} must have plausibility above {pv}",
                                found=str(pv))
        conclusions.append(Conclusion(atom, pv))
        if not cur.is_kw("and"):
            break
        cur.advance()
    return rid, Rule(rid.text, tuple(premises), tuple(conclusions))


def _fact_decl(cur: _Cursor, scale: Scale) -> tuple[SourceSpan, Fact]:
    cur.kw("fact")
    span, atom = _atom(cur)
    cur.sym("[")
    _, pv = _pv(cur, scale)
    cur.sym("]")
    return span, Fact(atom, pv)


def _document(cur: _Cursor) -> RuleBase:
    scale = _scale_decl(cur)
    if cur.is_kw("negation"):
        scale = _negation_decl(cur, scale)
    rules, facts = [], []
    rule_ids, fact_atoms = set(), set()
    while cur.tok.kind != "eof":
        if cur.is_kw("rule"):
            rid, rule = _rule_decl(cur, scale)
            if rule.id in rule_ids:
                raise SemanticError(rid.span, f"duplicate rule id {rule.id!r}", found=rule.id)
            rule_ids.add(rule.id)
            rules.append(rule)
        elif cur.is_kw("fact"):
            span, fact = _fact_decl(cur, scale)
            if fact.atom in fact_atoms:
                raise SemanticError(span, f"duplicate fact for {fact.atom}", found=str(fact.atom))
            fact_atoms.add(fact.atom)
            facts.append(fact)
        else:
            raise cur.fail("'rule'", "'fact'", "end of input")
    return RuleBase(scale, tuple(rules), tuple(facts))


def parse_document(text: str) -> RuleBase:
    """Parse a rule-base document.  Errors carry the span of the first bad token."""
    return _document(_Cursor(text))


def parse_scale(text: str) -> Scale:
    """Parse a stand-alone ``scale ... { ... }`` declaration with optional negation."""
    cur = _Cursor(text)
    scale = _scale_decl(cur)
    if cur.is_kw("negation"):
        scale = _negation_decl(cur, scale)
    if cur.tok.kind != "eof":
        raise cur.fail("'negation'", "end of input")
    return scale


# -- expressions -------------------------------------------------------------


@dataclass(frozen=True)
class Literal:
    value: Valuation
    span: SourceSpan


@dataclass(frozen=True)
class Not:
    operand: "Expr"
    span: SourceSpan


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: SourceSpan


Expr = Union[Literal, Not, BinOp]


def _is_op(tok: Token, *names: str) -> bool:
    return tok.kind == "ident" and tok.text in (names or OPERATORS)


class _ExprParser:
    def __init__(self, text: str, scale: Scale):
        self.cur = _Cursor(text)
        self.scale = scale

    def parse(self) -> Expr:
        node = self.implication()
        if self.cur.tok.kind != "eof":
            raise self.cur.fail("operator", "end of expression")
        return node

    def implication(self) -> Expr:
        left = self.disjunction()
        if _is_op(self.cur.tok, *IMPLICATIONS):
            op = self.cur.advance()
            right = self.disjunction()
            if _is_op(self.cur.tok, *IMPLICATIONS):
                t = self.cur.tok
                raise ParseError(
                    t.span,
                    f"{op.text} and {t.text} are non-associative; add parentheses",
                    ("end of expression", "')'"),
                    t.text,
                )
            left = BinOp(op.text, left, right, op.span)
        return left

    def disjunction(self) -> Expr:
        left = self.conjunction()
        while _is_op(self.cur.tok, "OR"):
            op = self.cur.advance()
            left = BinOp("OR", left, self.conjunction(), op.span)
        return left

    def conjunction(self) -> Expr:
        left = self.unary()
        while _is_op(self.cur.tok, "AND"):
            op = self.cur.advance()
            left = BinOp("AND", left, self.unary(), op.span)
        return left

    def unary(self) -> Expr:
        if _is_op(self.cur.tok, "NOT"):
            op = self.cur.advance()
            return Not(self.unary(), op.span)
        return self.primary()

    def primary(self) -> Expr:
        cur = self.cur
        tok = cur.tok
        if _is_op(tok, *IMPLICATIONS) and cur.peek().kind == "sym" and cur.peek().text == "(":
            cur.advance()
            cur.sym("(")
            left = self.implication()
            cur.sym(",")
            right = self.implication()
            cur.sym(")")
            return BinOp(tok.text, left, right, tok.span)
        if cur.is_sym("("):
            nxt, after = cur.peek(), cur.peek(2)
            literal = (
                nxt.kind == "ident"
                and not _is_op(nxt)
                and after.kind == "sym"
                and after.text in (",", ")")
            )
            if literal:
                cur.advance()
                ranks = [self.grade()]
                while cur.is_sym(","):
                    cur.advance()
                    ranks.append(self.grade())
                cur.sym(")")
                return Literal(from_grades(self.scale, ranks), tok.span)
            cur.advance()
            node = self.implication()
            cur.sym(")")
            return node
        if tok.kind == "ident" and not _is_op(tok):
            return Literal(from_grades(self.scale, [self.grade()]), tok.span)
        raise cur.fail("valuation literal", "'('", "'NOT'")

    def grade(self) -> int:
        return _grade(self.cur, self.scale)[1]


def parse_expression(text: str, scale: Scale) -> Expr:
    return _ExprParser(text, scale).parse()


_BINARY = {
    "AND": algebra.conj,
    "OR": algebra.disj,
    "SIMP": algebra.s_implication,
    "RIMP": algebra.r_implication,
    "MPR": algebra.mpgf_r,
    "MPS": algebra.mpgf_s,
}


def evaluate(node: Expr) -> Valuation:
    if isinstance(node, Literal):
        return node.value
    if isinstance(node, Not):
        return algebra.neg(evaluate(node.operand))
    return _BINARY[node.op](evaluate(node.left), evaluate(node.right))


def evaluate_expression(text: str, scale: Scale) -> Valuation:
    return evaluate(parse_expression(text, scale))


# -- serialization -------------------------------------------------------------


def format_valuation(v: Valuation) -> str:
    return str(v)


def _pv_text(v: Valuation) -> str:
    return v.labels[0] if len(v) == 1 else str(v)


def _check_ident(name: str, what: str) -> str:
    if not _IDENT_FULL.match(name) or name in KEYWORDS:
        raise LexvalError(f"{what} {name!r} cannot be written as a DSL identifier")
    return name


def serialize(rb: RuleBase) -> str:
    """Canonical text for ``rb``; ``parse_document(serialize(rb)) == rb``.

    The negation table is always written out, so even a rule base with no
    rules and no facts produces a scale section and a negation section.
    """
    s = rb.scale
    labels = [_check_ident(lab, "grade label") for lab in s.labels]
    out = [f"scale {_check_ident(s.name, 'scale name')} {{", "  " + " ".join(labels), "}", ""]
    out.append("negation {")
    for k, lab in enumerate(labels):
        out.append(f"  {lab} -> {labels[s.negation[k]]}")
    out.append("}")
    for r in rb.rules:
        out.append("")
        out.append(f"rule {_check_ident(r.id, 'rule id')}:")
        for i, a in enumerate(r.premises):
            kw = "if" if i == 0 else "and"
            out.append(f"  {kw} {_atom_text(a)}")
        for i, c in enumerate(r.conclusions):
            kw = "then" if i == 0 else "and"
            out.append(f"  {kw} {_atom_text(c.atom)} [{_pv_text(c.pv)}]")
    if rb.facts:
        out.append("")
        for f in rb.facts:
            out.append(f"fact {_atom_text(f.atom)} [{_pv_text(f.pv)}]")
    return "\n".join(out) + "\n"


def _atom_text(a: Atom) -> str:
    return f"{_check_ident(a.attribute, 'attribute')} = {_check_ident(a.value, 'value')}"


def format_error(err: ParseError, text: str, filename: Optional[str] = None) -> str:
    """``file:line:col: message`` followed by the source line and a caret."""
    where = f"{filename}:{err.span}" if filename else str(err.span)
    lines = text.splitlines()
    out = [f"{where}: error: {err.message}"]
    if 1 <= err.span.line <= len(lines):
        src = lines[err.span.line - 1]
        out.append("  " + src)
        out.append("  " + " " * (err.span.column - 1) + "^")
    return "\n".join(out)
