"""First-order-logic expression parsing and rendering.

Recursive-descent parser for the FOL dialect produced by the generation
pipeline and present in annotated datasets. Precedence, tightest first:
not > and > or > xor > implies > iff, with implies right-associative and
the other binary connectives left-associative. Quantifiers take the widest
scope to their right. Both Unicode connectives and ASCII fallbacks are
accepted; rendering always emits the Unicode forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import OrderAugError
from .model import Instance, Violation

__all__ = [
    "Term",
    "Predicate",
    "Not",
    "Connective",
    "Quantified",
    "Formula",
    "ParseError",
    "UnboundParen",
    "EmptyInput",
    "parse_fol",
    "render_fol",
    "validate_fol_fields",
    "unbound_variable_warnings",
]


class ParseError(OrderAugError):
    code = "ParseError"

    def __init__(self, position: int, expected: str, found: str = ""):
        self.position = position
        self.expected = expected
        self.found = found
        got = f", found {found!r}" if found else ""
        super().__init__(f"at position {position}: expected {expected}{got}")


class UnboundParen(ParseError):
    code = "UnboundParen"


class EmptyInput(ParseError):
    code = "EmptyInput"

    def __init__(self):
        super().__init__(0, "a formula", "")


@dataclass(frozen=True)
class Term:
    """Predicate argument: a quantifier-bound variable or a constant."""

    name: str
    is_variable: bool

    kind = "term"


@dataclass(frozen=True)
class Predicate:
    name: str
    args: tuple[Term, ...]

    kind = "predicate"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    kind = "not"


@dataclass(frozen=True)
class Connective:
    kind: str  # and | or | xor | implies | iff
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Quantified:
    kind: str  # forall | exists
    var: str
    body: "Formula"


Formula = Union[Predicate, Not, Connective, Quantified]


_TOKEN_SPEC = [
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("DOT", r"[.:]"),
    ("FORALL", r"∀|\bforall\b"),
    ("EXISTS", r"∃|\bexists\b"),
    ("NOT", r"¬|~"),
    ("AND", r"∧|&"),
    ("OR", r"∨|\|"),
    ("XOR", r"⊕|\bxor\b"),
    ("IFF", r"↔|⟺|<->"),
    ("IMPLIES", r"→|->"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("WS", r"\s+"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in _TOKEN_SPEC))

_CONNECTIVE_SYMBOL = {"and": "∧", "or": "∨", "xor": "⊕", "implies": "→", "iff": "↔"}
_QUANTIFIER_SYMBOL = {"forall": "∀", "exists": "∃"}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> Iterator[_Token]:
    pos = 0
    while pos < len(src):
        match = _TOKEN_RE.match(src, pos)
        if match is None:
            raise ParseError(pos, "a token", src[pos])
        kind = match.lastgroup or ""
        if kind != "WS":
            yield _Token(kind, match.group(), pos)
        pos = match.end()


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = list(_tokenize(src))
        self.i = 0
        self.scope: list[str] = []

    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Token | None:
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    def expect(self, kind: str, expected: str) -> _Token:
        tok = self.next()
        if tok is None:
            if kind == "RPAREN":
                raise UnboundParen(len(self.src), expected)
            raise ParseError(len(self.src), expected, "end of input")
        if tok.kind != kind:
            raise ParseError(tok.pos, expected, tok.text)
        return tok

    def parse(self) -> Formula:
        formula = self.iff()
        leftover = self.peek()
        if leftover is not None:
            raise ParseError(leftover.pos, "end of input or a connective", leftover.text)
        return formula

    def iff(self) -> Formula:
        node = self.implies()
        while (tok := self.peek()) is not None and tok.kind == "IFF":
            self.next()
            node = Connective("iff", node, self.implies())
        return node

    def implies(self) -> Formula:
        node = self.xor()
        if (tok := self.peek()) is not None and tok.kind == "IMPLIES":
            self.next()
            return Connective("implies", node, self.implies())  # right-assoc
        return node

    def xor(self) -> Formula:
        node = self.disjunction()
        while (tok := self.peek()) is not None and tok.kind == "XOR":
            self.next()
            node = Connective("xor", node, self.disjunction())
        return node

    def disjunction(self) -> Formula:
        node = self.conjunction()
        while (tok := self.peek()) is not None and tok.kind == "OR":
            self.next()
            node = Connective("or", node, self.conjunction())
        return node

    def conjunction(self) -> Formula:
        node = self.unary()
        while (tok := self.peek()) is not None and tok.kind == "AND":
            self.next()
            node = Connective("and", node, self.unary())
        return node

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError(len(self.src), "a formula", "end of input")
        if tok.kind == "NOT":
            self.next()
            return Not(self.unary())
        if tok.kind in ("FORALL", "EXISTS"):
            return self.quantified(tok)
        return self.atom()

    def quantified(self, tok: _Token) -> Formula:
        kind = "forall" if tok.kind == "FORALL" else "exists"
        self.next()
        first = self.expect("IDENT", "a bound variable name")
        variables = [first.text]
        # Extra single-letter lowercase idents bind to the same quantifier
        # ("∃t x (...)"); anything longer starts the body.
        while (nxt := self.peek()) is not None and nxt.kind == "IDENT" and re.fullmatch(
            r"[a-z]", nxt.text
        ):
            variables.append(nxt.text)
            self.next()
        if (nxt := self.peek()) is not None and nxt.kind == "DOT":
            self.next()
        self.scope.extend(variables)
        body = self.iff()  # widest scope
        del self.scope[-len(variables):]
        for var in reversed(variables):
            body = Quantified(kind, var, body)
        return body

    def atom(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError(len(self.src), "a formula", "end of input")
        if tok.kind == "LPAREN":
            self.next()
            inner = self.iff()
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind == "IDENT":
            return self.predicate()
        raise ParseError(tok.pos, "a predicate, '(' or a quantifier", tok.text)

    def predicate(self) -> Formula:
        name = self.expect("IDENT", "a predicate name")
        self.expect("LPAREN", "'(' opening the argument list")
        args = [self.term()]
        while (tok := self.peek()) is not None and tok.kind == "COMMA":
            self.next()
            args.append(self.term())
        self.expect("RPAREN", "')' closing the argument list")
        return Predicate(name.text, tuple(args))

    def term(self) -> Term:
        tok = self.expect("IDENT", "an argument name")
        return Term(tok.text, is_variable=tok.text in self.scope)


def parse_fol(src: str) -> Formula:
    """Parse one FOL expression; raises a positioned ParseError on bad input."""
    if not src.strip():
        raise EmptyInput()
    return _Parser(src).parse()


def render_fol(ast: Formula) -> str:
    """Canonical fully-parenthesized Unicode rendering; parse(render(x)) == x.

    No rewriting happens here: double negations and redundant structure are
    preserved verbatim.
    """
    if isinstance(ast, Predicate):
        return f"{ast.name}({', '.join(t.name for t in ast.args)})"
    if isinstance(ast, Not):
        inner = render_fol(ast.body)
        if isinstance(ast.body, (Predicate, Connective)):
            return f"¬{inner}"
        return f"¬({inner})"
    if isinstance(ast, Connective):
        op = _CONNECTIVE_SYMBOL[ast.kind]
        left = render_fol(ast.left)
        if isinstance(ast.left, Quantified):
            # quantifiers take widest scope, so a bare left-hand quantifier
            # would swallow the operator and right side on re-parse
            left = f"({left})"
        return f"({left} {op} {render_fol(ast.right)})"
    if isinstance(ast, Quantified):
        body = render_fol(ast.body)
        symbol = _QUANTIFIER_SYMBOL[ast.kind]
        if isinstance(ast.body, Connective):  # already wrapped in parens
            return f"{symbol}{ast.var} {body}"
        return f"{symbol}{ast.var} ({body})"
    raise TypeError(f"not a formula node: {ast!r}")


def unbound_variable_warnings(ast: Formula, where: str = "") -> list[Violation]:
    """Warn about single-letter lowercase constants, which usually mean a
    variable escaped its quantifier. Warnings only; parsing still succeeds."""
    out: list[Violation] = []

    def walk(node: Formula):
        if isinstance(node, Predicate):
            for term in node.args:
                if not term.is_variable and re.fullmatch(r"[a-z]", term.name):
                    out.append(
                        Violation(
                            "UnboundVariable",
                            f"{term.name!r} in {node.name}(...) is not bound by any quantifier",
                            where or None,
                            severity="warning",
                        )
                    )
        elif isinstance(node, Not):
            walk(node.body)
        elif isinstance(node, Connective):
            walk(node.left)
            walk(node.right)
        elif isinstance(node, Quantified):
            walk(node.body)

    walk(ast)
    return out


def validate_fol_fields(inst: Instance) -> list[Violation]:
    """Parse every FOL field of an instance and report per-field diagnostics.

    Absent (None) fields are fine. Unparseable strings are errors; unbound
    variables are warnings. Never mutates and never raises.
    """
    out: list[Violation] = []

    def check(src: str | None, where: str):
        if src is None:
            return
        try:
            ast = parse_fol(src)
        except ParseError as err:
            out.append(Violation("FolUnparseable", str(err), where))
            return
        out.extend(unbound_variable_warnings(ast, where))

    for premise in inst.premises:
        check(premise.fol, f"premises_fol[{premise.index}]")
    check(inst.conclusion_fol, "conclusion_fol")
    return out
