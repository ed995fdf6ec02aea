"""Polynomial string grammar.

::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := ("-" | "+") factor | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | VAR | "(" expr ")"

Variables are ``x1..xm`` and ``t1..td``.  There is no implicit
multiplication: ``2x1`` and ``x1 t1`` are rejected.
"""
from __future__ import annotations

import re
from typing import List, Tuple

from .rings import Polynomial, Ring

_TOKEN = re.compile(r"\s*(?:(\d+)|([xt]\d+)|(\S))")


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, column: int):
        self.column = column
        self.text = text
        super().__init__(f"{message} at column {column} in {text!r}")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        num, var, sym = match.groups()
        start = match.start(1) if num else match.start(2) if var else match.start(3)
        if num:
            tokens.append(("num", num, start + 1))
        elif var:
            tokens.append(("var", var, start + 1))
        else:
            if sym not in "+-*^/()":
                raise PolynomialSyntaxError(f"unexpected character {sym!r}", text, start + 1)
            tokens.append(("sym", sym, start + 1))
        pos = match.end()
    tokens.append(("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, ring: Ring, text: str):
        self.ring = ring
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.names = set(ring.names)

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok=None):
        tok = tok or self.peek()
        raise PolynomialSyntaxError(message, self.text, tok[2])

    def parse(self) -> Polynomial:
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        p = self.expr()
        if self.peek()[0] != "end":
            tok = self.peek()
            if tok[0] in ("num", "var") or tok[1] == "(":
                self.fail("implicit multiplication is not allowed; use '*'")
            self.fail(f"unexpected {tok[1]!r}")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while self.peek()[:2] in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Polynomial:
        p = self.factor()
        while self.peek()[:2] == ("sym", "*"):
            self.take()
            p = p * self.factor()
        return p

    def factor(self) -> Polynomial:
        tok = self.peek()
        if tok[:2] == ("sym", "-"):
            self.take()
            return -self.factor()
        if tok[:2] == ("sym", "+"):
            self.take()
            return self.factor()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[:2] == ("sym", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                self.fail("expected a non-negative integer exponent after '^'")
            self.take()
            return base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        tok = self.peek()
        kind, value, _ = tok
        if kind == "num":
            self.take()
            num = int(value)
            if self.peek()[:2] == ("sym", "/"):
                self.take()
                den_tok = self.peek()
                if den_tok[0] != "num":
                    self.fail("expected an integer denominator after '/'")
                self.take()
                den = int(den_tok[1])
                if den == 0:
                    self.fail("zero denominator", den_tok)
                return Polynomial.constant(self.ring, f"{num}/{den}")
            return Polynomial.constant(self.ring, num)
        if kind == "var":
            if value not in self.names:
                self.fail(f"unknown variable {value!r} for ring with m={self.ring.m}, d={self.ring.d}")
            self.take()
            return Polynomial.var(self.ring, value)
        if tok[:2] == ("sym", "("):
            self.take()
            p = self.expr()
            if self.peek()[:2] != ("sym", ")"):
                self.fail("expected ')'")
            self.take()
            return p
        if kind == "end":
            self.fail("unexpected end of input")
        self.fail(f"unexpected {value!r}")


def parse_polynomial(ring: Ring, text: str) -> Polynomial:
    """Parse ``text`` into a polynomial over ``ring``."""
    return _Parser(ring, text).parse()
