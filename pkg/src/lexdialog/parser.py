"""Concrete syntax for laws: lexer and recursive descent parser.

Precedence, tightest to loosest: unary (!, X, N, F, G), then U/R
(right-associative), &, |, -> (right-associative), <->. Quantifier scope
runs as far right as possible after the dot; parentheses override
everything. ``#`` starts a comment that runs to end of line.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import FormulaError, ParseError, SourceSpan
from .formula import (And, Atom, Cmp, Eventually, Exists, FalseF, Forall,
                      Formula, FuncApp, Globally, Iff, Implies, IntLit, Next,
                      Not, Or, Pred, Release, SameExcept, Term, TrueF, Until,
                      Var, WeakNext, validate)
from .signature import RELATIONAL, RESERVED_RELATIONAL, Signature

_SYMBOLS = ("<->", "->", "!=", "<=", ">=", "(", ")", ".", ",", "&", "|", "!",
            "=", "<", ">")
_CMP_TOKENS = {"=", "!=", "<", "<=", ">", ">="}
_TEMPORAL_UNARY = {"X": Next, "N": WeakNext, "F": Eventually, "G": Globally}
_TEMPORAL_BINARY = {"U": Until, "R": Release}


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "ident", "int", "sym", "eof"
    text: str
    span: SourceSpan


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(source)

    def make_span(begin: int, end: int, bline: int, bcol: int) -> SourceSpan:
        return SourceSpan(begin, end, bline, bcol)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        begin, bline, bcol = i, line, col
        if ch.isalpha():
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("ident", source[i:j],
                                make_span(begin, j, bline, bcol)))
            col += j - i
            i = j
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and source[i + 1].isdigit()):
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("int", source[i:j],
                                make_span(begin, j, bline, bcol)))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if source.startswith(sym, i):
                j = i + len(sym)
                tokens.append(Token("sym", sym, make_span(begin, j, bline, bcol)))
                col += len(sym)
                i = j
                break
        else:
            raise ParseError(f"malformed token {ch!r}",
                             make_span(begin, begin + 1, bline, bcol))
    tokens.append(Token("eof", "", make_span(n, n, line, col)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], sig: Signature, source: str,
                 require_sentence: bool):
        self.tokens = tokens
        self.pos = 0
        self.sig = sig
        self.source = source
        self.require_sentence = require_sentence
        self.scope: list[str] = []

    # --- token plumbing ---

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_sym(self, text: str) -> Token:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == text:
            return self.advance()
        raise ParseError(f"expected {text!r}, found {self._describe(tok)}", tok.span)

    def at_sym(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind == "sym" and tok.text == text

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    @staticmethod
    def _join(a: Optional[SourceSpan], b: Optional[SourceSpan]) -> SourceSpan:
        assert a is not None and b is not None
        return SourceSpan(a.begin, b.end, a.line, a.column)

    # --- grammar ---

    def formula(self) -> Formula:
        return self.iff()

    def iff(self) -> Formula:
        left = self.implies()
        while self.at_sym("<->"):
            self.advance()
            right = self.implies()
            left = Iff(left, right, span=self._join(left.span, right.span))
        return left

    def implies(self) -> Formula:
        left = self.disjunction()
        if self.at_sym("->"):
            self.advance()
            right = self.implies()
            return Implies(left, right, span=self._join(left.span, right.span))
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at_sym("|"):
            self.advance()
            right = self.conjunction()
            left = Or(left, right, span=self._join(left.span, right.span))
        return left

    def conjunction(self) -> Formula:
        left = self.until_level()
        while self.at_sym("&"):
            self.advance()
            right = self.until_level()
            left = And(left, right, span=self._join(left.span, right.span))
        return left

    def until_level(self) -> Formula:
        left = self.unary()
        tok = self.peek()
        if (self.sig.kind != RELATIONAL and tok.kind == "ident"
                and tok.text in _TEMPORAL_BINARY):
            self.advance()
            right = self.until_level()
            node = _TEMPORAL_BINARY[tok.text]
            return node(left, right, span=self._join(left.span, right.span))
        return left

    def unary(self) -> Formula:
        tok = self.peek()
        if tok.kind == "sym" and tok.text == "!":
            self.advance()
            child = self.unary()
            return Not(child, span=self._join(tok.span, child.span))
        if (self.sig.kind != RELATIONAL and tok.kind == "ident"
                and tok.text in _TEMPORAL_UNARY):
            self.advance()
            child = self.unary()
            node = _TEMPORAL_UNARY[tok.text]
            return node(child, span=self._join(tok.span, child.span))
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok.kind == "ident" and tok.text == "true":
            self.advance()
            return TrueF(span=tok.span)
        if tok.kind == "ident" and tok.text == "false":
            self.advance()
            return FalseF(span=tok.span)
        if self.at_sym("("):
            self.advance()
            inner = self.formula()
            self.expect_sym(")")
            return inner
        if self.sig.kind == RELATIONAL:
            return self.relational_atom(tok)
        return self.temporal_atom(tok)

    def temporal_atom(self, tok: Token) -> Formula:
        if tok.kind != "ident":
            raise ParseError(f"expected an atom, found {self._describe(tok)}",
                             tok.span)
        if not self.sig.is_atom(tok.text):
            raise ParseError(f"unknown atom {tok.text!r}", tok.span)
        self.advance()
        return Atom(tok.text, span=tok.span)

    def relational_atom(self, tok: Token) -> Formula:
        if tok.kind == "ident" and tok.text in ("forall", "exists"):
            return self.quantifier(tok)
        if tok.kind == "ident" and tok.text == "same":
            return self.same_except(tok)
        if (tok.kind == "ident" and self.sig.is_predicate(tok.text)):
            return self.predicate(tok)
        return self.comparison()

    def quantifier(self, tok: Token) -> Formula:
        self.advance()
        var = self.variable_name()
        self.expect_sym(".")
        self.scope.append(var.text)
        body = self.formula()
        self.scope.pop()
        node = Forall if tok.text == "forall" else Exists
        return node(var.text, body, span=self._join(tok.span, body.span))

    def variable_name(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise ParseError(
                f"expected a variable name, found {self._describe(tok)}", tok.span)
        if tok.text in RESERVED_RELATIONAL:
            raise ParseError(f"{tok.text!r} is reserved", tok.span)
        return self.advance()

    def bound_variable(self) -> Token:
        tok = self.variable_name()
        if self.require_sentence and tok.text not in self.scope:
            raise ParseError(f"unbound variable {tok.text!r}", tok.span)
        return tok

    def predicate(self, tok: Token) -> Formula:
        self.advance()
        self.expect_sym("(")
        var = self.bound_variable()
        if self.at_sym(","):
            raise ParseError(
                f"predicate {tok.text!r} is unary and takes one variable",
                self.peek().span)
        close = self.expect_sym(")")
        return Pred(tok.text, var.text, span=self._join(tok.span, close.span))

    def same_except(self, tok: Token) -> Formula:
        self.advance()
        self.expect_sym("(")
        left = self.bound_variable()
        self.expect_sym(",")
        right = self.bound_variable()
        close = self.expect_sym(")")
        excluded: list[str] = []
        end_span = close.span
        nxt = self.peek()
        if nxt.kind == "ident" and nxt.text == "except":
            self.advance()
            while True:
                name = self.peek()
                if name.kind != "ident":
                    raise ParseError(
                        f"expected a function name, found {self._describe(name)}",
                        name.span)
                if not self.sig.is_function(name.text):
                    raise ParseError(f"unknown function {name.text!r}", name.span)
                excluded.append(name.text)
                end_span = name.span
                self.advance()
                if self.at_sym(","):
                    self.advance()
                    continue
                break
        return SameExcept(left.text, right.text, tuple(excluded),
                          span=self._join(tok.span, end_span))

    def comparison(self) -> Formula:
        left = self.term()
        op = self.peek()
        if op.kind != "sym" or op.text not in _CMP_TOKENS:
            raise ParseError(
                f"expected a comparison operator, found {self._describe(op)}",
                op.span)
        self.advance()
        right = self.term()
        return Cmp(left, op.text, right, span=self._join(left.span, right.span))

    def term(self) -> Term:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text), span=tok.span)
        if tok.kind != "ident":
            raise ParseError(f"expected a term, found {self._describe(tok)}",
                             tok.span)
        if self.sig.is_predicate(tok.text):
            raise ParseError(
                f"{tok.text!r} is a predicate, not usable inside a comparison",
                tok.span)
        if self.sig.is_function(tok.text):
            self.advance()
            self.expect_sym("(")
            var = self.bound_variable()
            close = self.expect_sym(")")
            return FuncApp(tok.text, var.text, span=self._join(tok.span, close.span))
        var = self.bound_variable()
        return Var(var.text, span=var.span)


def parse(source: str, sig: Signature, *, require_sentence: bool = True) -> Formula:
    """Parse one formula; raises ParseError on any lexical, syntactic or
    well-formedness problem, with a span into ``source``."""
    tokens = tokenize(source)
    parser = _Parser(tokens, sig, source, require_sentence)
    result = parser.formula()
    trailing = parser.peek()
    if trailing.kind != "eof":
        raise ParseError(f"unexpected trailing input {trailing.text!r}",
                         trailing.span)
    try:
        validate(result, sig, require_sentence=require_sentence)
    except ParseError:
        raise
    except FormulaError as exc:
        raise ParseError(exc.message, exc.span) from exc
    return result


def parse_law(source: str, sig: Signature) -> Formula:
    """Parse a .law file: comments plus exactly one sentence."""
    return parse(source, sig, require_sentence=True)


def load_law(path: str, sig: Signature) -> Formula:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_law(fh.read(), sig)
