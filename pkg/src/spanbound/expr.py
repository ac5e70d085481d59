"""Tiny recursive-descent parser for element text.

The grammar is ordinary arithmetic over integers, single-word variables and
bracketed group atoms ``e[...]``::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' ['-'] INT | '^' '(' ['-'] INT ')')?
    atom  := INT | NAME | 'e[' ... ']' | '(' expr ')'

Evaluation is delegated to an ``ops`` object, so every backend reuses the same
front end.  Errors carry the character offset of the offending token.
"""
from __future__ import annotations

import re

from .errors import ElementSyntaxError

_TOKEN = re.compile(r"(?:(?P<int>\d+)|(?P<atom>e\[[^\]]*\])|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))")


def tokenize(text: str):
    pos = 0
    out = []
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ElementSyntaxError("unexpected character", text, pos)
        kind = m.lastgroup
        out.append((kind, m.group(kind), pos))
        pos = m.end()
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text, ops):
        self.text = text
        self.ops = ops
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ElementSyntaxError(msg, self.text, tok[2])

    def expect(self, value):
        t = self.take()
        if t[1] != value or t[0] != "op":
            raise self.error(f"expected {value!r}", t)
        return t

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            raise self.error("unexpected token")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            w = self.term()
            v = self.ops.add(v, w) if op == "+" else self.ops.sub(v, w)
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            tok = self.take()
            w = self.unary()
            if tok[1] == "*":
                v = self.ops.mul(v, w)
            else:
                try:
                    v = self.ops.div(v, w)
                except ZeroDivisionError as exc:
                    raise type(exc)(f"{exc} at position {tok[2]}") from None
        return v

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.unary()
            return self.ops.neg(v) if t[1] == "-" else v
        return self.power()

    def _exponent(self):
        t = self.peek()
        paren = t[0] == "op" and t[1] == "("
        if paren:
            self.take()
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] == "-":
            self.take()
            sign = -1
        t = self.take()
        if t[0] != "int":
            raise self.error("expected integer exponent", t)
        if paren:
            self.expect(")")
        return sign * int(t[1]), t

    def power(self):
        v = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            n, tok = self._exponent()
            try:
                v = self.ops.pow(v, n)
            except ZeroDivisionError as exc:
                raise type(exc)(f"{exc} at position {tok[2]}") from None
        return v

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "int":
            return self.ops.const(int(val))
        if kind == "name":
            v = self.ops.var(val)
            if v is None:
                raise self.error(f"unknown symbol {val!r}", t)
            return v
        if kind == "atom":
            return self.ops.atom(val[2:-1], pos)
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise self.error("unexpected token", t)


def evaluate(text: str, ops):
    return _Parser(text, ops).parse()
