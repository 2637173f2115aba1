"""Polynomial expressions and JSON system files.

Grammar (``^`` binds tightest, then unary minus, then ``*`` ``/``, then
``+`` ``-``)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | IDENT | "(" expr ")"

Division is only allowed by a nonzero constant, so ``1/2*X1`` is a rational
coefficient.  Juxtaposition (``2X1``) is a syntax error.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

from .poly import MultiPoly
from .ratfunc import RatFuncField, to_parampoly

IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_INT = re.compile(r"\d+")
_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class ParseError(ValueError):
    def __init__(self, message, line=1, column=1):
        self.message, self.line, self.column = message, line, column
        super().__init__(f"{message} (line {line}, column {column})")


@dataclass
class Token:
    kind: str  # "int", "ident", "op", "end"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list:
    out = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        ch = text[pos]
        col = pos - line_start + 1
        if ch == "\n":
            line, line_start = line + 1, pos + 1
            pos += 1
        elif ch.isspace():
            pos += 1
        elif ch in "0123456789":
            m = _INT.match(text, pos)
            out.append(Token("int", m.group(), line, col))
            pos = m.end()
        elif ch.isascii() and ch.isalpha():
            m = _NAME.match(text, pos)
            out.append(Token("ident", m.group(), line, col))
            pos = m.end()
        elif ch in "+-*/^()":
            out.append(Token("op", ch, line, col))
            pos += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    out.append(Token("end", "", line, len(text) - line_start + 1))
    return out


class _Parser:
    def __init__(self, text, ring):
        self.toks = tokenize(text)
        self.i = 0
        self.ring = tuple(ring)

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.take()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.line, t.column)
        return t

    def parse(self):
        p = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"unexpected {t.text!r}", t.line, t.column)
        return p

    def expr(self):
        p = self.term()
        while self.peek().text in ("+", "-") and self.peek().kind == "op":
            op = self.take().text
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek().kind == "op" and self.peek().text in ("*", "/"):
            tok = self.take()
            q = self.unary()
            if tok.text == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ParseError("division is only allowed by a nonzero constant", tok.line, tok.column)
                p = p * (1 / q.constant_value())
        return p

    def unary(self):
        if self.peek().kind == "op" and self.peek().text == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            t = self.peek()
            if t.kind == "op" and t.text == "-":
                raise ParseError("negative exponent", t.line, t.column)
            t = self.take()
            if t.kind != "int":
                raise ParseError("exponent must be a non-negative integer", t.line, t.column)
            return base ** int(t.text)
        return base

    def atom(self):
        t = self.take()
        if t.kind == "int":
            return MultiPoly.constant(int(t.text), self.ring)
        if t.kind == "ident":
            if t.text not in self.ring:
                raise ParseError(f"undeclared identifier {t.text!r}", t.line, t.column)
            return MultiPoly.var(t.text, self.ring)
        if t.kind == "op" and t.text == "(":
            p = self.expr()
            self.expect(")")
            return p
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.line, t.column)


def parse_poly(text: str, params: Sequence[str] = (), vars: Sequence[str] = ()) -> MultiPoly:
    """Parse into Q[params, vars] (in that variable order)."""
    return _Parser(text, tuple(params) + tuple(vars)).parse()


def parse_parampoly(text: str, params: Sequence[str], vars: Sequence[str]) -> MultiPoly:
    """Parse into Q(params)[vars]."""
    return to_parampoly(parse_poly(text, params, vars), RatFuncField(params), vars)


# ------------------------------------------------------------- system files

@dataclass
class SystemFile:
    params: list
    vars: list
    polys: list

    def parametric(self) -> list:
        field = RatFuncField(self.params)
        return [to_parampoly(parse_poly(p, self.params, self.vars), field, self.vars) for p in self.polys]


def check_names(params, vars):
    names = list(params) + list(vars)
    for n in names:
        if not isinstance(n, str) or not IDENT.match(n):
            raise ParseError(f"invalid identifier {n!r}")
    if len(set(names)) != len(names):
        raise ParseError("parameter and variable names must be distinct")
    if "U0" in names:
        raise ParseError("U0 is reserved for the output polynomials")


def load_system(source) -> SystemFile:
    """Read a system from a JSON string, dict, or file path."""
    if isinstance(source, dict):
        data = source
    else:
        text = source
        if not str(source).lstrip().startswith("{"):
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    for key in ("params", "vars", "polys"):
        if key not in data or not isinstance(data[key], list):
            raise ParseError(f"system file needs a list field {key!r}")
    if not data["vars"]:
        raise ParseError("at least one unknown is required")
    if not data["polys"]:
        raise ParseError("at least one polynomial is required")
    check_names(data["params"], data["vars"])
    sf = SystemFile(list(data["params"]), list(data["vars"]), [str(p) for p in data["polys"]])
    for k, p in enumerate(sf.polys):
        try:
            parse_poly(p, sf.params, sf.vars)
        except ParseError as e:
            raise ParseError(f"polynomial {k + 1}: {e.message}", e.line, e.column) from None
    return sf
