"""Matrix metabelian Lie algebras M_{I,Lambda} and M^0.

An element is a pair (f, u) standing for the matrix [[f, u], [0, 0]] with
f a polynomial and u an element of a free module T.  The bracket is
``(f, u) o (g, v) = (0, u*g - v*f)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

from .errors import ContextMismatchError, EmptyInputError, MetalieError
from .fmodule import FreeModElem, LocalModElem
from .ring import QQ, SCALARS, Field, LocalFrac, Poly, PolyRing


@dataclass(frozen=True)
class MatContext:
    """Ring k[x1..x_nvars] and free module T of the given rank."""

    nvars: int
    rank: int
    field: Field = QQ
    m0: bool = True

    def __post_init__(self):
        if self.nvars < 0 or self.rank < 0:
            raise MetalieError("context sizes must be non-negative")

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.field, self.nvars)

    def elem(self, f=0, u=None) -> "MatElem":
        ring = self.ring
        f = ring(f)
        if u is None:
            u = FreeModElem.zero(ring, self.rank)
        elif isinstance(u, str):
            from .parsing import parse_module

            u = parse_module(u, ring, self.rank)
        return MatElem(self, f, u)

    def zero(self) -> "MatElem":
        return self.elem()

    def generator(self, i: int) -> "MatElem":
        """z_i = (x_i, u_i)."""
        ring = self.ring
        return MatElem(self, ring.gen(i), FreeModElem.basis(ring, self.rank, i))

    def parse(self, text: str) -> "MatElem":
        from .parsing import parse_mat

        return parse_mat(text, self)


class MatElem:
    __slots__ = ("ctx", "f", "u")

    def __init__(self, ctx: MatContext, f: Poly, u: FreeModElem):
        ring = ctx.ring
        ring.check(f)
        if u.ring != ring or u.rank != ctx.rank:
            raise ContextMismatchError(f"module element {u} does not live in T of rank {ctx.rank}")
        if ctx.m0 and not f.is_linear_form():
            raise MetalieError(f"{f} is not a linear form; not an element of M^0")
        self.ctx = ctx
        self.f = f
        self.u = u

    def _check(self, other: "MatElem"):
        if not isinstance(other, MatElem) or other.ctx != self.ctx:
            raise ContextMismatchError("elements from different matrix algebras")

    def __add__(self, other):
        if not isinstance(other, MatElem):
            return NotImplemented
        self._check(other)
        return MatElem(self.ctx, self.f + other.f, self.u + other.u)

    def __sub__(self, other):
        if not isinstance(other, MatElem):
            return NotImplemented
        self._check(other)
        return MatElem(self.ctx, self.f - other.f, self.u - other.u)

    def __neg__(self):
        return MatElem(self.ctx, -self.f, -self.u)

    def __mul__(self, c):
        if not isinstance(c, SCALARS):
            return NotImplemented
        return MatElem(self.ctx, self.f.scale(c), self.u * c)

    __rmul__ = __mul__

    def bracket(self, other: "MatElem") -> "MatElem":
        self._check(other)
        return MatElem(self.ctx, self.ctx.ring.zero, self.u * other.f - other.u * self.f)

    def __eq__(self, other):
        if not isinstance(other, MatElem):
            return NotImplemented
        return self.ctx == other.ctx and self.f == other.f and self.u == other.u

    def __hash__(self):
        return hash((self.ctx, self.f, self.u))

    def __bool__(self):
        return bool(self.f) or bool(self.u)

    def is_zero(self) -> bool:
        return not self

    def localize(self) -> "LocalMatElem":
        return LocalMatElem(self.ctx, self.f, self.u.localize())

    def __str__(self):
        return f"({self.f} | {self.u})"

    def __repr__(self):
        return f"MatElem{self}"


class LocalMatElem:
    """Pair (f, u) with u in T_Delta; models elements of Delta-local algebras."""

    __slots__ = ("ctx", "f", "u")

    def __init__(self, ctx: MatContext, f: Poly, u: LocalModElem):
        ring = ctx.ring
        ring.check(f)
        if isinstance(u, FreeModElem):
            u = u.localize()
        if u.ring != ring or u.rank != ctx.rank:
            raise ContextMismatchError("module element outside the context")
        self.ctx = ctx
        self.f = f
        self.u = u

    @classmethod
    def of(cls, x) -> "LocalMatElem":
        return x if isinstance(x, LocalMatElem) else x.localize()

    def _other(self, other):
        if isinstance(other, MatElem):
            other = other.localize()
        if not isinstance(other, LocalMatElem) or other.ctx != self.ctx:
            raise ContextMismatchError("elements from different matrix algebras")
        return other

    def __add__(self, other):
        other = self._other(other)
        return LocalMatElem(self.ctx, self.f + other.f, self.u + other.u)

    def __sub__(self, other):
        other = self._other(other)
        return LocalMatElem(self.ctx, self.f - other.f, self.u - other.u)

    def __neg__(self):
        return LocalMatElem(self.ctx, -self.f, -self.u)

    def __mul__(self, c):
        if not isinstance(c, SCALARS):
            return NotImplemented
        return LocalMatElem(self.ctx, self.f.scale(c), self.u * c)

    __rmul__ = __mul__

    def act(self, q) -> "LocalMatElem":
        """Scale the module part by q in R_Delta (f must vanish)."""
        if self.f:
            raise MetalieError("only zero-diagonal elements carry the R_Delta action")
        return LocalMatElem(self.ctx, self.f, self.u * LocalFrac.of(q, self.ctx.ring))

    def bracket(self, other) -> "LocalMatElem":
        other = self._other(other)
        return LocalMatElem(self.ctx, self.ctx.ring.zero, self.u * other.f - other.u * self.f)

    def __eq__(self, other):
        if isinstance(other, MatElem):
            other = other.localize()
        if not isinstance(other, LocalMatElem):
            return NotImplemented
        return self.ctx == other.ctx and self.f == other.f and self.u == other.u

    def __hash__(self):
        return hash((self.ctx, self.f))

    def __bool__(self):
        return bool(self.f) or bool(self.u)

    def is_zero(self) -> bool:
        return not self

    def is_polynomial(self) -> bool:
        return self.u.is_polynomial()

    def to_mat(self) -> MatElem:
        return MatElem(self.ctx, self.f, self.u.to_free())

    def __str__(self):
        return f"({self.f} | {self.u})"

    def __repr__(self):
        return f"LocalMatElem{self}"


def bracket(a, b):
    return a.bracket(b)


def left_normed(elems: Sequence[MatElem]):
    """(((e1 o e2) o e3) o ...)"""
    if not elems:
        raise EmptyInputError("left-normed product of nothing")
    acc = elems[0]
    for e in elems[1:]:
        acc = acc.bracket(e)
    return acc


def in_fitting(a: MatElem, algebra_is_abelian: bool) -> bool:
    """Fitting-radical membership inside a subalgebra of M.

    For a non-Abelian ambient subalgebra the radical is exactly the set of
    zero-diagonal elements; an Abelian one is its own radical.
    """
    if algebra_is_abelian:
        return True
    return not a.f


def is_abelian_set(gens: Sequence[MatElem]) -> bool:
    """Whether the subalgebra generated by ``gens`` is Abelian."""
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if a.bracket(b):
                return False
    return True


@dataclass
class ImplicationReport:
    xyx_zero: bool
    xyy_zero: bool
    xy_zero: bool
    xz_zero: bool
    yz_zero: bool
    x_nonzero: bool
    violations: List[str] = field(default_factory=list)

    @property
    def first_premises(self) -> bool:
        return self.xyx_zero and self.xyy_zero

    @property
    def second_premises(self) -> bool:
        return self.xy_zero and self.xz_zero and self.x_nonzero

    @property
    def ok(self) -> bool:
        return not self.violations


def check_vanishing_implications(x: MatElem, y: MatElem, z: MatElem) -> ImplicationReport:
    """Evaluate both implications on one triple.

    (i)  xyx = 0 and xyy = 0  =>  xy = 0
    (ii) xy = 0, xz = 0, x != 0  =>  yz = 0
    """
    xy = x.bracket(y)
    rep = ImplicationReport(
        xyx_zero=xy.bracket(x).is_zero(),
        xyy_zero=xy.bracket(y).is_zero(),
        xy_zero=xy.is_zero(),
        xz_zero=x.bracket(z).is_zero(),
        yz_zero=y.bracket(z).is_zero(),
        x_nonzero=not x.is_zero(),
    )
    if rep.first_premises and not rep.xy_zero:
        rep.violations.append("xyx = 0 and xyy = 0 but xy != 0")
    if rep.second_premises and not rep.yz_zero:
        rep.violations.append("xy = 0, xz = 0, x != 0 but yz != 0")
    return rep


def coordinate_vector(a, monomials=None) -> dict:
    """Flat {('f'|i, exponent): coeff} view of an element, for rank computations."""
    out = {}
    for e, c in a.f.terms.items():
        out[(0, e)] = c
    for i, g in a.u.coords.items():
        for e, c in g.terms.items():
            out[(i, e)] = c
    return out
