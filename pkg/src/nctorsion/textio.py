"""Tokenizer and precedence parser for the algebraic text formats.

A single grammar covers rational functions, group-ring elements and
truncated series:

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' exponent)?
    atom  := INT | NAME | '(' expr ')' | 'O' '(' NAME ('^' INT)? ')'

An exponent is a signed integer, or an underscore-joined integer vector
(``x^1_-2``) that only variable names accept.  The meaning of names is
supplied by a context object, so each value type reuses the parser.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at column {pos + 1}: {text!r}")


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<vec>-?\d+(?:_-?\d+)+)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


@dataclass
class Token:
    kind: str
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class Parser:
    """Evaluates an expression against a context.

    The context provides ``number(int)``, ``name(str, exp)`` where ``exp`` is
    None, an int or a tuple of ints, ``big_o(name, k)``, plus the usual
    arithmetic operators on the values it returns and ``divide(a, b)`` /
    ``power(a, n)``.
    """

    def __init__(self, text: str, context):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.ctx = context

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> Token:
        tok = self.take()
        if tok.value != value:
            raise ParseError(f"expected {value!r}, found {tok.value or 'end of input'!r}", self.text, tok.pos)
        return tok

    def error(self, msg: str, tok: Token):
        raise ParseError(msg, self.text, tok.pos)

    def parse(self):
        if self.peek().kind == "end":
            self.error("empty expression", self.peek())
        value = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            self.error(f"unexpected token {tok.value!r}", tok)
        return value

    def expr(self):
        value = self.term()
        while self.peek().value in ("+", "-"):
            op = self.take().value
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek().value in ("*", "/"):
            tok = self.take()
            rhs = self.unary()
            if tok.value == "*":
                value = value * rhs
            else:
                try:
                    value = self.ctx.divide(value, rhs)
                except ZeroDivisionError:
                    self.error("division by zero", tok)
        return value

    def unary(self):
        if self.peek().value == "-":
            self.take()
            return -self.unary()
        if self.peek().value == "+":
            self.take()
            return self.unary()
        return self.power()

    def exponent(self):
        tok = self.take()
        sign = 1
        if tok.value == "-":
            sign = -1
            tok = self.take()
        if tok.kind == "vec":
            parts = tuple(int(p) for p in tok.value.split("_"))
            if sign < 0:
                parts = (-parts[0],) + parts[1:]
            return parts
        if tok.kind == "int":
            return sign * int(tok.value)
        if tok.value == "(":
            inner = self.exponent()
            self.expect(")")
            return inner * sign if isinstance(inner, int) else inner
        self.error("expected an integer exponent", tok)

    def power(self):
        tok = self.peek()
        if tok.kind == "name" and tok.value == "O" and self.tokens[self.i + 1].value == "(":
            self.take()
            self.take()
            name_tok = self.take()
            if name_tok.kind != "name":
                self.error("expected a variable inside O(...)", name_tok)
            k = 1
            if self.peek().value == "^":
                self.take()
                k = self.exponent()
                if not isinstance(k, int):
                    self.error("O-term needs an integer exponent", name_tok)
            self.expect(")")
            return self.ctx.big_o(name_tok.value, k)
        if tok.kind == "name":
            self.take()
            exp = None
            if self.peek().value == "^":
                self.take()
                exp = self.exponent()
            try:
                return self.ctx.name(tok.value, exp)
            except KeyError:
                self.error(f"unknown name {tok.value!r}", tok)
            except ValueError as exc:
                self.error(str(exc), tok)
        value = self.atom()
        if self.peek().value == "^":
            op = self.take()
            exp = self.exponent()
            if not isinstance(exp, int):
                self.error("vector exponent on a non-variable", op)
            try:
                value = self.ctx.power(value, exp)
            except ZeroDivisionError:
                self.error("negative power of zero", op)
        return value

    def atom(self):
        tok = self.take()
        if tok.kind == "int":
            return self.ctx.number(int(tok.value))
        if tok.value == "(":
            value = self.expr()
            self.expect(")")
            return value
        self.error(f"unexpected token {tok.value or 'end of input'!r}", tok)


def parse_with(text: str, context):
    return Parser(text, context).parse()
