"""Recursive-descent parser for the limit-query expression grammar.

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | factor
    factor   := base ("^" exponent)?
    exponent := integer | "(" ["-"] integer "/" integer ")"
    base     := number | identifier | "(" expr ")" | funcname "(" expr ")"

Implicit multiplication is rejected.  Numbers may carry a decimal point;
they are converted to exact rationals.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import FUNCTIONS, Const, Expr, Var, add, func, mul, power

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    """Syntax error; ``offset`` is the byte offset of the offending token."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if m is None or m.end() == pos:
                start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise ParseError(f"unexpected character {text[start]!r}", start)
            kind = m.lastgroup
            start = m.start(kind)
            self.tokens.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("eof", "", len(self.text))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, text, offset = self.peek()
        if text != value or kind != "op":
            found = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", offset)
        self.i += 1

    def parse(self) -> Expr:
        e = self.expr()
        kind, text, offset = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected {text!r}", offset)
        return e

    def expr(self) -> Expr:
        terms = [self.term()]
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            t = self.term()
            terms.append(t if op == "+" else mul(-1, t))
        return terms[0] if len(terms) == 1 else add(*terms)

    def term(self) -> Expr:
        acc = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            acc = mul(acc, rhs) if op == "*" else mul(acc, power(rhs, -1))
        kind, text, offset = self.peek()
        if kind in ("num", "name") or (kind == "op" and text == "("):
            raise ParseError("implicit multiplication is not supported", offset)
        return acc

    def unary(self) -> Expr:
        if self.peek()[1] == "-" and self.peek()[0] == "op":
            self.take()
            return mul(-1, self.unary())
        return self.factor()

    def factor(self) -> Expr:
        base = self.base()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            return power(base, self.exponent())
        return base

    def integer(self) -> int:
        kind, text, offset = self.take()
        if kind != "num" or not text.isdigit():
            found = "end of input" if kind == "eof" else repr(text)
            raise ParseError(f"expected integer, found {found}", offset)
        return int(text)

    def exponent(self) -> Fraction:
        kind, text, offset = self.peek()
        if kind == "num":
            return Fraction(self.integer())
        if kind == "op" and text == "(":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            p = self.integer()
            self.expect("/")
            den_offset = self.peek()[2]
            q = self.integer()
            if q == 0:
                raise ParseError("zero denominator in exponent", den_offset)
            self.expect(")")
            return Fraction(sign * p, q)
        found = "end of input" if kind == "eof" else repr(text)
        raise ParseError(f"expected exponent, found {found}", offset)

    def base(self) -> Expr:
        kind, text, offset = self.take()
        if kind == "num":
            return Const(Fraction(text))
        if kind == "name":
            if self.peek()[1] == "(" and self.peek()[0] == "op":
                if text not in FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", offset)
                self.take()
                arg = self.expr()
                self.expect(")")
                return func(text, arg)
            if text in FUNCTIONS:
                raise ParseError(f"function {text!r} requires an argument", offset)
            return Var(text)
        if kind == "op" and text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "eof" else repr(text)
        raise ParseError(f"unexpected {found}", offset)


def parse(text: str) -> Expr:
    """Parse ``text`` into a canonical expression tree."""
    return _Parser(text).parse()
