"""Surface syntax: lexer and recursive-descent parser for formulas and terms.

Grammar (ASCII; Unicode connectives are accepted as input aliases):

    formula := iff
    iff     := imp ("<->" iff)?
    imp     := or ("->" imp)?
    or      := and ("\\/" and)*
    and     := neg ("/\\" neg)*
    neg     := "~" neg | atom
    atom    := term "=" term | ident "(" termlist ")" | ident | "false"
             | "(" formula ")" | "(" ("forall"|"exists") ident ")" atom
    term    := ident "(" termlist ")" | ident | "?" digits

A quantifier's scope is the immediately following atom, which includes
parenthesized formulas and further quantifiers. Identifiers resolve in
term position as: enclosing binder > declared constant > parameter (with
a trailing digit split off as the parameter ordinal). Error positions are
1-based character offsets into the original text.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ArityMismatch, ParseError, UnknownSymbol
from .syntax import (
    And,
    Bottom,
    BoundVar,
    Constant,
    Equality,
    Exists,
    Forall,
    Formula,
    FunctionApp,
    Iff,
    Implies,
    Not,
    Or,
    PredApp,
    Signature,
    Term,
    Unknown,
    make_parameter,
)

_UNICODE_ALIASES = {
    "∀": "forall",
    "∃": "exists",
    "∧": "/\\",
    "∨": "\\/",
    "¬": "~",
    "→": "->",
    "↔": "<->",
    "⊥": "false",
}

_KEYWORDS = {"forall", "exists", "false"}


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT UNKNOWN LPAREN RPAREN COMMA NOT AND OR IMP IFF EQ FALSE FORALL EXISTS EOF
    text: str
    pos: int  # 1-based offset in the source


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        pos = i + 1
        if c.isspace():
            i += 1
            continue
        if c in _UNICODE_ALIASES:
            alias = _UNICODE_ALIASES[c]
            kind = {
                "forall": "FORALL",
                "exists": "EXISTS",
                "false": "FALSE",
                "/\\": "AND",
                "\\/": "OR",
                "~": "NOT",
                "->": "IMP",
                "<->": "IFF",
            }[alias]
            tokens.append(Token(kind, c, pos))
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(Token("IFF", "<->", pos))
            i += 3
            continue
        if text.startswith("->", i):
            tokens.append(Token("IMP", "->", pos))
            i += 2
            continue
        if text.startswith("/\\", i):
            tokens.append(Token("AND", "/\\", pos))
            i += 2
            continue
        if text.startswith("\\/", i):
            tokens.append(Token("OR", "\\/", pos))
            i += 2
            continue
        if c == "~":
            tokens.append(Token("NOT", "~", pos))
            i += 1
            continue
        if c == "(":
            tokens.append(Token("LPAREN", "(", pos))
            i += 1
            continue
        if c == ")":
            tokens.append(Token("RPAREN", ")", pos))
            i += 1
            continue
        if c == ",":
            tokens.append(Token("COMMA", ",", pos))
            i += 1
            continue
        if c == "=":
            tokens.append(Token("EQ", "=", pos))
            i += 1
            continue
        if c == "?":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ParseError(pos, "digits after '?'", text[i : i + 2])
            tokens.append(Token("UNKNOWN", text[i:j], pos))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            if word in _KEYWORDS:
                tokens.append(Token(word.upper(), word, pos))
            else:
                tokens.append(Token("IDENT", word, pos))
            i = j
            continue
        raise ParseError(pos, "a formula token", c)
    tokens.append(Token("EOF", "", n + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], sig: Signature):
        self.tokens = tokens
        self.sig = sig
        self.i = 0

    # -- token helpers

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        if self.cur.kind != kind:
            raise ParseError(self.cur.pos, what, self.cur.text or "end of input")
        return self.advance()

    # -- formula grammar

    def formula(self, bound: tuple[str, ...]) -> Formula:
        return self.iff(bound)

    def iff(self, bound) -> Formula:
        left = self.imp(bound)
        if self.cur.kind == "IFF":
            self.advance()
            return Iff(left, self.iff(bound))
        return left

    def imp(self, bound) -> Formula:
        left = self.or_(bound)
        if self.cur.kind == "IMP":
            self.advance()
            return Implies(left, self.imp(bound))
        return left

    def or_(self, bound) -> Formula:
        out = self.and_(bound)
        while self.cur.kind == "OR":
            self.advance()
            out = Or(out, self.and_(bound))
        return out

    def and_(self, bound) -> Formula:
        out = self.neg(bound)
        while self.cur.kind == "AND":
            self.advance()
            out = And(out, self.neg(bound))
        return out

    def neg(self, bound) -> Formula:
        if self.cur.kind == "NOT":
            self.advance()
            return Not(self.neg(bound))
        return self.atom(bound)

    def atom(self, bound) -> Formula:
        tok = self.cur
        if tok.kind == "FALSE":
            self.advance()
            return Bottom()
        if tok.kind == "LPAREN":
            nxt = self.tokens[self.i + 1]
            if nxt.kind in ("FORALL", "EXISTS"):
                self.advance()
                quant = self.advance()
                var = self.expect("IDENT", "a bound variable name")
                self.expect("RPAREN", "')'")
                body = self.atom(bound + (var.text,))
                return (Forall if quant.kind == "FORALL" else Exists)(var.text, body)
            self.advance()
            inner = self.formula(bound)
            self.expect("RPAREN", "')'")
            return inner
        if tok.kind in ("IDENT", "UNKNOWN"):
            return self.atom_from_ident(bound)
        raise ParseError(tok.pos, "an atom", tok.text or "end of input")

    def atom_from_ident(self, bound) -> Formula:
        """An atom opening with an identifier: predicate application,
        propositional symbol, or the left-hand side of an equality."""
        tok = self.cur
        if tok.kind == "UNKNOWN":
            lhs = self.term(bound)
            self.expect("EQ", "'=' after a term")
            return Equality(lhs, self.term(bound))
        name = self.advance().text
        args: Optional[tuple[Term, ...]] = None
        if self.cur.kind == "LPAREN":
            self.advance()
            args = self.termlist(bound)
            self.expect("RPAREN", "')'")
        if self.cur.kind == "EQ":
            lhs = self.resolve_term(name, args, bound, tok.pos)
            self.advance()
            return Equality(lhs, self.term(bound))
        # formula position: must be a declared predicate
        if name not in self.sig.predicates:
            if name in self.sig.functions or name in self.sig.constants:
                raise ParseError(tok.pos, "a predicate symbol", name)
            raise UnknownSymbol(name)
        arity = self.sig.predicates[name]
        got = args if args is not None else ()
        if arity != len(got):
            raise ArityMismatch(name, arity, len(got))
        return PredApp(name, got)

    # -- terms

    def termlist(self, bound) -> tuple[Term, ...]:
        out = [self.term(bound)]
        while self.cur.kind == "COMMA":
            self.advance()
            out.append(self.term(bound))
        return tuple(out)

    def term(self, bound) -> Term:
        tok = self.cur
        if tok.kind == "UNKNOWN":
            self.advance()
            return Unknown(int(tok.text[1:]))
        if tok.kind != "IDENT":
            raise ParseError(tok.pos, "a term", tok.text or "end of input")
        name = self.advance().text
        if self.cur.kind == "LPAREN":
            self.advance()
            args = self.termlist(bound)
            self.expect("RPAREN", "')'")
            return self.resolve_term(name, args, bound, tok.pos)
        return self.resolve_term(name, None, bound, tok.pos)

    def resolve_term(self, name: str, args, bound, pos: int) -> Term:
        if args is not None:
            if name not in self.sig.functions:
                raise UnknownSymbol(name)
            if self.sig.functions[name] != len(args):
                raise ArityMismatch(name, self.sig.functions[name], len(args))
            return FunctionApp(name, args)
        if name in bound:
            return BoundVar(name)
        if name in self.sig.constants:
            return Constant(name)
        if name in self.sig.functions or name in self.sig.predicates:
            raise ParseError(pos, "a term", name)
        return make_parameter(name)


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse text into a well-scoped formula over sig."""
    parser = _Parser(tokenize(text), sig)
    out = parser.formula(())
    parser.expect("EOF", "end of input")
    return out


def parse_term(text: str, sig: Signature) -> Term:
    parser = _Parser(tokenize(text), sig)
    out = parser.term(())
    parser.expect("EOF", "end of input")
    return out
