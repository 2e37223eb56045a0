"""Element-expression mini-language.

Grammar::

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('+' | '-') unary | power
    power    := atom ['^' exponent]
    exponent := INT | '-' exponent | '(' expr ')'      # integer-valued
    atom     := INT | NAME | '(' expr ')'

Names are ``pi_<level>``, the residue generator ``z`` and, inside level
definitions only, the polynomial variable ``t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, UnknownSymbol

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Node:
    kind: str
    pos: int
    args: tuple = ()
    value: object = None


def tokenize(text: str):
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1) is not None:
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(start, f"unexpected character {ch!r}")
            toks.append(("op", ch, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, op):
        tok = self.take()
        if tok[0] != "op" or tok[1] != op:
            raise ParseError(tok[2], f"expected {op!r}")
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError(0, "empty expression")
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(tok[2], f"unexpected token {tok[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                node = Node("add" if tok[1] == "+" else "sub", tok[2], (node, rhs))
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "*/":
                self.take()
                rhs = self.unary()
                node = Node("mul" if tok[1] == "*" else "div", tok[2], (node, rhs))
            else:
                return node

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            inner = self.unary()
            return inner if tok[1] == "+" else Node("neg", tok[2], (inner,))
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.exponent()
            node = Node("pow", tok[2], (base,), exp)
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] == "^":
                raise ParseError(nxt[2], "chained '^' needs parentheses")
            return node
        return base

    def exponent(self):
        tok = self.take()
        if tok[0] == "num":
            return tok[1]
        if tok[0] == "op" and tok[1] == "-":
            return -self.exponent()
        if tok[0] == "op" and tok[1] == "(":
            inner = self.expr()
            self.expect(")")
            return evaluate(inner, IntAlgebra())
        raise ParseError(tok[2], "expected an integer exponent")

    def atom(self):
        tok = self.take()
        if tok[0] == "num":
            return Node("num", tok[2], value=tok[1])
        if tok[0] == "name":
            return Node("sym", tok[2], value=tok[1])
        if tok[0] == "op" and tok[1] == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok[0] == "end":
            raise ParseError(tok[2], "unexpected end of expression")
        raise ParseError(tok[2], f"unexpected token {tok[1]!r}")


def parse(text: str) -> Node:
    return _Parser(text).parse()


def evaluate(node: Node, alg):
    k = node.kind
    if k == "num":
        return alg.number(node.value)
    if k == "sym":
        return alg.symbol(node.value, node.pos)
    if k == "neg":
        return alg.neg(evaluate(node.args[0], alg))
    if k == "pow":
        return alg.pow(evaluate(node.args[0], alg), node.value, node.pos)
    a = evaluate(node.args[0], alg)
    b = evaluate(node.args[1], alg)
    if k == "add":
        return alg.add(a, b)
    if k == "sub":
        return alg.sub(a, b)
    if k == "mul":
        return alg.mul(a, b)
    if k == "div":
        return alg.div(a, b, node.pos)
    raise AssertionError(k)


class IntAlgebra:
    def number(self, n):
        return n

    def symbol(self, name, pos):
        raise UnknownSymbol(pos, name)

    def neg(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        if b == 0 or a % b:
            raise ParseError(pos, "exponent division is not exact")
        return a // b

    def pow(self, a, k, pos):
        if k < 0:
            raise ParseError(pos, "negative power inside an exponent")
        return a**k


class ElementAlgebra:
    """Evaluate into RingElem values at a fixed tower level."""

    def __init__(self, level):
        self.level = level

    def number(self, n):
        return self.level.from_int(n)

    def symbol(self, name, pos):
        tower = self.level.tower
        if name == "z":
            return self.level.z()
        if name.startswith("pi_"):
            lvl = tower.levels_by_name.get(name[3:])
            if lvl is None or lvl.index > self.level.index:
                raise UnknownSymbol(pos, name)
            return self.level.coerce(lvl.pi)
        raise UnknownSymbol(pos, name)

    def neg(self, a):
        return -a

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b, pos):
        return a / b

    def pow(self, a, k, pos):
        return a**k


class PolyAlgebra:
    """Evaluate into polynomials (coefficient lists, low to high) in ``t``."""

    def __init__(self, base_alg, var="t"):
        self.base = base_alg
        self.var = var

    def _trim(self, a):
        while len(a) > 1 and self._is_zero(a[-1]):
            a = a[:-1]
        return a

    def _is_zero(self, c):
        return self.base.is_zero(c)

    def number(self, n):
        return [self.base.number(n)]

    def symbol(self, name, pos):
        if name == self.var:
            return [self.base.number(0), self.base.number(1)]
        return [self.base.symbol(name, pos)]

    def neg(self, a):
        return [self.base.neg(c) for c in a]

    def add(self, a, b):
        n = max(len(a), len(b))
        zero = self.base.number(0)
        a = a + [zero] * (n - len(a))
        b = b + [zero] * (n - len(b))
        return self._trim([self.base.add(x, y) for x, y in zip(a, b)])

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        out = [self.base.number(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = self.base.add(out[i + j], self.base.mul(x, y))
        return self._trim(out)

    def div(self, a, b, pos):
        b = self._trim(b)
        if len(b) != 1:
            raise ParseError(pos, "division by a non-constant polynomial")
        return [self.base.div(x, b[0], pos) for x in a]

    def pow(self, a, k, pos):
        if k < 0:
            raise ParseError(pos, "negative power of a polynomial")
        out = [self.base.number(1)]
        for _ in range(k):
            out = self.mul(out, a)
        return out


class ElementCoeffs(ElementAlgebra):
    def is_zero(self, c):
        return c.is_zero


class ResidueAlgebra:
    """Reduction modulo the maximal ideal: pi symbols map to 0, z to the generator."""

    def __init__(self, field, level_names):
        self.field = field
        self.names = set(level_names)

    def is_zero(self, c):
        return c == 0

    def number(self, n):
        return self.field.from_int(n)

    def symbol(self, name, pos):
        if name == "z":
            return self.field.gen
        if name.startswith("pi_") and name[3:] in self.names:
            return 0
        raise UnknownSymbol(pos, name)

    def neg(self, a):
        return self.field.neg(a)

    def add(self, a, b):
        return self.field.add(a, b)

    def sub(self, a, b):
        return self.field.sub(a, b)

    def mul(self, a, b):
        return self.field.mul(a, b)

    def div(self, a, b, pos):
        if b == 0:
            raise ParseError(pos, "division by a non-unit in a level polynomial")
        return self.field.mul(a, self.field.inv(b))

    def pow(self, a, k, pos):
        if a == 0 and k < 0:
            raise ParseError(pos, "negative power of a non-unit in a level polynomial")
        return self.field.pow(a, k)


def parse_element(text: str, level):
    """Parse ``text`` and evaluate it at ``level``."""
    return evaluate(parse(text), ElementAlgebra(level))


def parse_polynomial(text: str, level, var: str = "t"):
    """Parse a polynomial in ``var`` with coefficients at ``level`` (low to high)."""
    return evaluate(parse(text), PolyAlgebra(ElementCoeffs(level), var))


def reduced_polynomial(node: Node, field, level_names, var: str = "t"):
    return evaluate(node, PolyAlgebra(ResidueAlgebra(field, level_names), var))
