"""Tokenizer and recursive-descent parsers for polynomials, module elements,
matrix-algebra pairs and Lie terms.

Every ``__str__`` in the package produces text these parsers accept.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .errors import MetalieError, ParseError
from .fmodule import FreeModElem, LocalModElem
from .ring import SCALARS, LocalFrac, Poly, PolyRing

_TOKEN = re.compile(r"\s*(?:(\d+)|([xua])(\d+)|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "x", "u", "a", a punctuation char, or "end"
    value: object
    pos: int


def tokenize(text: str) -> List[Token]:
    out = []
    pos = 0
    n = len(text)
    while pos < n:
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        start = m.end() - len(m.group(0).lstrip())
        if m.group(1) is not None:
            out.append(Token("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(Token(m.group(2), int(m.group(3)), start))
        else:
            ch = m.group(4)
            if ch not in "+-*/^()[],|":
                raise ParseError(f"unexpected character {ch!r}", start, text)
            out.append(Token(ch, ch, start))
        pos = m.end()
    out.append(Token("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail(f"expected {kind!r}")
        return self.advance()

    def fail(self, msg: str, tok: Token = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(self.text[tok.pos:tok.pos + 8])
        raise ParseError(f"{msg}, found {found}", tok.pos, self.text)

    def done(self):
        if self.tok.kind != "end":
            self.fail("trailing input")


# ---------------------------------------------------------------------------
# polynomial / module expressions

_ALGEBRAIC = (*SCALARS, Poly, LocalFrac, FreeModElem, LocalModElem)


class _ExprParser(_Parser):
    def __init__(self, text: str, ring: PolyRing, rank: Optional[int]):
        super().__init__(text)
        self.ring = ring
        self.rank = rank

    def _arith(self, op, a, b, tok):
        try:
            if op == "+":
                r = a + b
            elif op == "-":
                r = a - b
            elif op == "*":
                r = a * b
            else:
                r = self._divide(a, b)
        except ParseError:
            raise
        except (MetalieError, ZeroDivisionError, TypeError) as e:
            raise ParseError(str(e), tok.pos, self.text) from e
        if r is NotImplemented or not isinstance(r, _ALGEBRAIC):
            self.fail(f"cannot apply {op!r} to these operands", tok)
        return r

    def _divide(self, a, b):
        field = self.ring.field
        if isinstance(b, SCALARS):
            if isinstance(a, SCALARS):
                return field.div(field.convert(a), field.convert(b)) if field.p else Fraction(a) / Fraction(b)
            return a * field.div(1, field.convert(b))
        if isinstance(b, Poly):
            b = LocalFrac(b, self.ring.one, reduce=False)
        if isinstance(b, LocalFrac):
            if isinstance(a, SCALARS):
                a = self.ring.const(a)
            return a * b.inverse()
        raise MetalieError("division by a module element")

    def expr(self):
        val = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance()
            val = self._arith(op.kind, val, self.term(), op)
        return val

    def term(self):
        val = self.unary()
        while self.tok.kind in ("*", "/"):
            op = self.advance()
            val = self._arith(op.kind, val, self.unary(), op)
        return val

    def unary(self):
        if self.tok.kind == "-":
            self.advance()
            return -self.unary()
        if self.tok.kind == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.tok.kind == "^":
            op = self.advance()
            exp = self.expect("int").value
            if isinstance(base, (FreeModElem, LocalModElem)):
                self.fail("cannot raise a module element to a power", op)
            if isinstance(base, LocalFrac):
                acc = LocalFrac.of(self.ring.one)
                for _ in range(exp):
                    acc = acc * base
                return acc
            return base ** exp
        return base

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.advance()
            return t.value
        if t.kind == "x":
            self.advance()
            if not 1 <= t.value <= self.ring.nvars:
                self.fail(f"x{t.value} outside a ring with {self.ring.nvars} variables", t)
            return self.ring.gen(t.value)
        if t.kind == "u":
            self.advance()
            if self.rank is None:
                self.fail("module element where a polynomial was expected", t)
            if not 1 <= t.value <= self.rank:
                self.fail(f"u{t.value} outside a module of rank {self.rank}", t)
            return FreeModElem.basis(self.ring, self.rank, t.value)
        if t.kind == "(":
            self.advance()
            v = self.expr()
            self.expect(")")
            return v
        self.fail("expected a number, variable or '('")


def _as_poly(v, ring: PolyRing, p: _Parser, tok: Token) -> Poly:
    if isinstance(v, SCALARS):
        return ring.const(v)
    if isinstance(v, Poly):
        return v
    if isinstance(v, LocalFrac) and v.is_polynomial():
        return v.to_poly()
    p.fail("expected a polynomial", tok)


def _as_module(v, ring: PolyRing, rank: int, p: _Parser, tok: Token, local: bool):
    if isinstance(v, (*SCALARS, Poly, LocalFrac)) and not v:
        v = FreeModElem.zero(ring, rank)
    if isinstance(v, FreeModElem):
        return v.localize() if local else v
    if isinstance(v, LocalModElem):
        if local:
            return v
        if v.is_polynomial():
            return v.to_free()
    p.fail("expected a module element", tok)


def parse_poly(text: str, ring: PolyRing) -> Poly:
    p = _ExprParser(text, ring, None)
    start = p.tok
    v = p.expr()
    p.done()
    return _as_poly(v, ring, p, start)


def parse_frac(text: str, ring: PolyRing) -> LocalFrac:
    p = _ExprParser(text, ring, None)
    start = p.tok
    v = p.expr()
    p.done()
    if isinstance(v, LocalFrac):
        return v
    return LocalFrac.of(_as_poly(v, ring, p, start))


def parse_module(text: str, ring: PolyRing, rank: int) -> FreeModElem:
    p = _ExprParser(text, ring, rank)
    start = p.tok
    v = p.expr()
    p.done()
    return _as_module(v, ring, rank, p, start, local=False)


def parse_local_module(text: str, ring: PolyRing, rank: int) -> LocalModElem:
    p = _ExprParser(text, ring, rank)
    start = p.tok
    v = p.expr()
    p.done()
    return _as_module(v, ring, rank, p, start, local=True)


def _parse_pair(text: str, ctx, local: bool):
    p = _ExprParser(text, ctx.ring, ctx.rank)
    p.expect("(")
    ftok = p.tok
    f = _as_poly(p.expr(), ctx.ring, p, ftok)
    p.expect("|")
    utok = p.tok
    u = _as_module(p.expr(), ctx.ring, ctx.rank, p, utok, local)
    p.expect(")")
    p.done()
    return f, u, ftok


def parse_mat(text: str, ctx):
    """``(f | u)`` in the given matrix context."""
    from .matlie import MatElem

    f, u, ftok = _parse_pair(text, ctx, local=False)
    try:
        return MatElem(ctx, f, u)
    except MetalieError as e:
        raise ParseError(str(e), ftok.pos, text) from e


def parse_local_mat(text: str, ctx):
    from .matlie import LocalMatElem

    f, u, _ = _parse_pair(text, ctx, local=True)
    return LocalMatElem(ctx, f, u)


# ---------------------------------------------------------------------------
# Lie terms


class _LieParser(_Parser):
    def __init__(self, text: str, rank: Optional[int]):
        super().__init__(text)
        self.rank = rank

    def _gen(self, idx: int, tok: Token):
        from .freelie import Gen

        if idx < 1 or (self.rank is not None and idx > self.rank):
            self.fail(f"generator a{idx} outside rank {self.rank}", tok)
        return Gen(idx)

    def expr(self):
        from .freelie import Scale, Sum

        first = self.term()
        items = [first]
        while self.tok.kind in ("+", "-"):
            op = self.advance()
            t = self.term()
            items.append(Scale(Fraction(-1), t) if op.kind == "-" else t)
        return items[0] if len(items) == 1 else Sum(tuple(items))

    def term(self):
        from .freelie import Bracket, Scale

        val = self.unary()
        while self.tok.kind == "*":
            self.advance()
            rhs = self.unary()
            if isinstance(val, Fraction) and isinstance(rhs, Fraction):
                val = val * rhs
            elif isinstance(val, Fraction):
                val = Scale(val, rhs)
            elif isinstance(rhs, Fraction):
                val = Scale(rhs, val)
            else:
                val = Bracket(val, rhs)
        if isinstance(val, Fraction):
            self.fail("a bare scalar is not a Lie term")
        return val

    def unary(self):
        from .freelie import Scale

        if self.tok.kind == "-":
            self.advance()
            v = self.unary()
            return -v if isinstance(v, Fraction) else Scale(Fraction(-1), v)
        return self.atom()

    def number(self) -> Fraction:
        n = Fraction(self.expect("int").value)
        if self.tok.kind == "/":
            self.advance()
            d = self.expect("int")
            if d.value == 0:
                self.fail("division by zero", d)
            n = n / d.value
        return n

    def atom(self):
        from .freelie import Bracket

        t = self.tok
        if t.kind == "int":
            return self.number()
        if t.kind == "a":
            self.advance()
            return self._gen(t.value, t)
        if t.kind == "(":
            self.advance()
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "[":
            self.advance()
            items = [self.item()]
            while self.tok.kind == ",":
                self.advance()
                items.append(self.item())
            self.expect("]")
            acc = items[0]
            for it in items[1:]:
                acc = Bracket(acc, it)
            return acc
        self.fail("expected a generator, number, '(' or '['")

    def item(self):
        t = self.tok
        if t.kind == "int" and self.peek().kind in (",", "]"):
            self.advance()
            return self._gen(t.value, t)
        return self.expr()


def parse_lie(text: str, rank: int = None):
    """Parse a Lie term.  ``*`` is the bracket unless one side is a number."""
    p = _LieParser(text, rank)
    if p.tok.kind == "int" and p.tok.value == 0 and p.peek().kind == "end":
        from .freelie import Sum

        p.advance()
        return Sum(())
    v = p.expr()
    p.done()
    return v
