"""The free metabelian Lie algebra F of finite rank.

Terms are small immutable trees.  ``normalize`` computes coordinates in the
basis of generators plus normalized monomials ``[i1, i2, ..., im]`` with
``i1 > i2 <= i3 <= ... <= im``, and ``gamma`` maps terms into M^0 via
``a_i -> (x_i, u_i)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple, Union

from .errors import MetalieError, NotInFittingError
from .fmodule import FreeModElem, Submodule, combine, syzygies
from .matlie import MatContext, MatElem
from .ring import QQ, SCALARS, Field, Poly, PolyRing, Scalar, format_signed_terms


# ---------------------------------------------------------------------------
# terms


class LieTerm:
    """Base class; supports ``+``, ``-``, scalar ``*`` and ``*`` as the bracket."""

    def __add__(self, other: "LieTerm") -> "LieTerm":
        if not isinstance(other, LieTerm):
            return NotImplemented
        return Sum((self, other))

    def __sub__(self, other: "LieTerm") -> "LieTerm":
        if not isinstance(other, LieTerm):
            return NotImplemented
        return Sum((self, Scale(Fraction(-1), other)))

    def __neg__(self) -> "LieTerm":
        return Scale(Fraction(-1), self)

    def __mul__(self, other):
        if isinstance(other, LieTerm):
            return Bracket(self, other)
        if isinstance(other, SCALARS):
            return Scale(Fraction(other), self)
        return NotImplemented

    def __rmul__(self, c):
        if isinstance(c, SCALARS):
            return Scale(Fraction(c), self)
        return NotImplemented

    def _fmt(self, prec: int) -> str:
        raise NotImplementedError

    def __str__(self):
        return self._fmt(0)

    def max_index(self) -> int:
        raise NotImplementedError

    def depth(self) -> int:
        raise NotImplementedError


# precedence levels used by the printer: 0 sum, 1 product, 2 atom


@dataclass(frozen=True, eq=True)
class Gen(LieTerm):
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise MetalieError(f"generator index {self.index} must be positive")

    def _fmt(self, prec):
        return f"a{self.index}"

    def max_index(self):
        return self.index

    def depth(self):
        return 0


@dataclass(frozen=True, eq=True)
class Scale(LieTerm):
    coeff: Fraction
    term: LieTerm

    def _fmt(self, prec):
        c = self.coeff
        if c == -1:
            s = f"-{self.term._fmt(2)}"
        else:
            s = f"{c}*{self.term._fmt(2)}"
        return f"({s})" if prec > 0 else s

    def max_index(self):
        return self.term.max_index()

    def depth(self):
        return self.term.depth()


@dataclass(frozen=True, eq=True)
class Sum(LieTerm):
    items: Tuple[LieTerm, ...]

    def _fmt(self, prec):
        if not self.items:
            return "0"
        s = self.items[0]._fmt(0)
        for t in self.items[1:]:
            piece = t._fmt(0)
            s += f" - {piece[1:]}" if piece.startswith("-") and isinstance(t, Scale) else f" + {piece}"
        return f"({s})" if prec > 0 and len(self.items) > 1 else s

    def max_index(self):
        return max((t.max_index() for t in self.items), default=0)

    def depth(self):
        return max((t.depth() for t in self.items), default=0)


@dataclass(frozen=True, eq=True)
class Bracket(LieTerm):
    left: LieTerm
    right: LieTerm

    def _fmt(self, prec):
        s = f"{self.left._fmt(1)}*{self.right._fmt(2)}"
        return f"({s})" if prec > 1 else s

    def max_index(self):
        return max(self.left.max_index(), self.right.max_index())

    def depth(self):
        return 1 + max(self.left.depth(), self.right.depth())


ZERO = Sum(())


def gens(rank: int) -> List[Gen]:
    return [Gen(i) for i in range(1, rank + 1)]


def word(indices) -> LieTerm:
    """Left-normed product a_{i1} a_{i2} ... a_{im}."""
    indices = list(indices)
    if not indices:
        raise MetalieError("empty word")
    acc: LieTerm = Gen(indices[0])
    for i in indices[1:]:
        acc = Bracket(acc, Gen(i))
    return acc


# ---------------------------------------------------------------------------
# normal forms


class NormalizedMonomial(tuple):
    """Index tuple (i1, ..., im), m >= 2, with i1 > i2 <= i3 <= ... <= im."""

    def __new__(cls, indices):
        t = tuple.__new__(cls, indices)
        if len(t) < 2 or not t[0] > t[1] or any(t[1] > c for c in t[2:]) or list(t[2:]) != sorted(t[2:]):
            raise MetalieError(f"{list(t)} is not a normalized monomial")
        return t

    @property
    def head(self) -> Tuple[int, int]:
        return self[0], self[1]

    @property
    def tail(self) -> Tuple[int, ...]:
        return tuple(self[2:])

    def __str__(self):
        return "[" + ",".join(map(str, self)) + "]"

    def __repr__(self):
        return f"NormalizedMonomial({list(self)})"


def _mono(p: int, q: int, tail) -> NormalizedMonomial:
    return tuple.__new__(NormalizedMonomial, (p, q, *sorted(tail)))


def normalized_monomials(rank: int, length: int) -> Iterator[NormalizedMonomial]:
    for p in range(2, rank + 1):
        for q in range(1, p):
            for tail in itertools.combinations_with_replacement(range(q, rank + 1), length - 2):
                yield _mono(p, q, tail)


def basis_size(rank: int, length: int) -> int:
    if length == 1:
        return rank
    return sum(1 for _ in normalized_monomials(rank, length))


class NormalForm:
    """Coordinates of an element of F: linear part plus normalized monomials."""

    __slots__ = ("field", "linear", "quad")

    def __init__(self, linear: Dict[int, Scalar] = None, quad: Dict[NormalizedMonomial, Scalar] = None, field: Field = QQ):
        self.field = field
        conv = field.convert
        self.linear = {i: conv(c) for i, c in (linear or {}).items() if conv(c)}
        self.quad = {m: conv(c) for m, c in (quad or {}).items() if conv(c)}

    @classmethod
    def _raw(cls, linear, quad, field) -> "NormalForm":
        nf = cls.__new__(cls)
        nf.field, nf.linear, nf.quad = field, linear, quad
        return nf

    @classmethod
    def generator(cls, i: int, field: Field = QQ) -> "NormalForm":
        return cls._raw({i: field.convert(1)}, {}, field)

    @classmethod
    def monomial(cls, indices, coeff=1, field: Field = QQ) -> "NormalForm":
        return cls._raw({}, {NormalizedMonomial(indices): field.convert(coeff)}, field)

    def _combine(self, other: "NormalForm", sign: int) -> "NormalForm":
        p = self.field.p
        lin, quad = dict(self.linear), dict(self.quad)
        for src, dst in ((other.linear, lin), (other.quad, quad)):
            for k, c in src.items():
                v = dst.get(k, 0) + sign * c
                if p:
                    v %= p
                if v:
                    dst[k] = v
                else:
                    dst.pop(k, None)
        return NormalForm._raw(lin, quad, self.field)

    def __add__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "NormalForm":
        c = self.field.convert(c)
        if not c:
            return NormalForm._raw({}, {}, self.field)
        p = self.field.p
        f = (lambda v: v * c % p) if p else (lambda v: v * c)
        return NormalForm._raw({k: f(v) for k, v in self.linear.items()}, {k: f(v) for k, v in self.quad.items()}, self.field)

    def __mul__(self, other):
        if isinstance(other, SCALARS):
            return self.scale(other)
        if isinstance(other, NormalForm):
            return self.bracket(other)
        return NotImplemented

    def __rmul__(self, c):
        if isinstance(c, SCALARS):
            return self.scale(c)
        return NotImplemented

    def bracket(self, other: "NormalForm") -> "NormalForm":
        """Bracket computed directly on coordinates.

        Products of two monomials vanish (metabelian identity); a monomial
        times a generator gains a far cofactor and is re-normalized.
        """
        acc: Dict[NormalizedMonomial, Scalar] = {}
        p = self.field.p

        def put(m, c):
            v = acc.get(m, 0) + c
            if p:
                v %= p
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)

        for i, c in self.linear.items():
            for j, d in other.linear.items():
                if i > j:
                    put(_mono(i, j, ()), c * d)
                elif i < j:
                    put(_mono(j, i, ()), -c * d)
        for m, c in self.quad.items():
            for j, d in other.linear.items():
                for mm, s in _times_gen(m, j):
                    put(mm, s * c * d)
        for i, c in self.linear.items():
            for m, d in other.quad.items():
                for mm, s in _times_gen(m, i):
                    put(mm, -s * c * d)
        return NormalForm._raw({}, acc, self.field)

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.linear == other.linear and self.quad == other.quad

    def __hash__(self):
        return hash((frozenset(self.linear.items()), frozenset(self.quad.items())))

    def __bool__(self):
        return bool(self.linear) or bool(self.quad)

    def is_zero(self) -> bool:
        return not self

    def to_term(self) -> LieTerm:
        def frac(c) -> Fraction:
            return Fraction(int(c.numerator), int(c.denominator)) if self.field.p == 0 else Fraction(int(c))

        items: List[LieTerm] = []
        for i in sorted(self.linear):
            items.append(Scale(frac(self.linear[i]), Gen(i)))
        for m in sorted(self.quad, key=lambda m: (len(m), tuple(m))):
            items.append(Scale(frac(self.quad[m]), word(m)))
        return Sum(tuple(items))

    def max_length(self) -> int:
        return max((len(m) for m in self.quad), default=1 if self.linear else 0)

    def __str__(self):
        pieces = [(self.linear[i], f"a{i}") for i in sorted(self.linear)]
        pieces += [(self.quad[m], str(m)) for m in sorted(self.quad, key=lambda m: (len(m), tuple(m)))]
        return format_signed_terms(pieces, self.field)

    def __repr__(self):
        return f"NormalForm({self})"


def _times_gen(m: NormalizedMonomial, j: int) -> List[Tuple[NormalizedMonomial, int]]:
    """[p,q,C] o a_j as signed normalized monomials."""
    p, q, tail = m[0], m[1], m[2:]
    if j >= q:
        return [(_mono(p, q, (*tail, j)), 1)]
    # j < q <= every tail entry: Jacobi moves j into the head
    return [(_mono(p, j, (*tail, q)), 1), (_mono(q, j, (*tail, p)), -1)]


def normalize(t: LieTerm, field: Field = QQ) -> NormalForm:
    if isinstance(t, Gen):
        return NormalForm.generator(t.index, field)
    if isinstance(t, Scale):
        return normalize(t.term, field).scale(t.coeff)
    if isinstance(t, Sum):
        acc = NormalForm(field=field)
        for s in t.items:
            acc = acc + normalize(s, field)
        return acc
    if isinstance(t, Bracket):
        return normalize(t.left, field).bracket(normalize(t.right, field))
    raise MetalieError(f"not a Lie term: {t!r}")


# ---------------------------------------------------------------------------
# the embedding into M^0


def context(rank: int, field: Field = QQ) -> MatContext:
    return MatContext(nvars=rank, rank=rank, field=field, m0=True)


def gamma(t: Union[LieTerm, NormalForm], rank: int, field: Field = QQ) -> MatElem:
    """Image under a_i -> (x_i, u_i) in M^0 with ``rank`` variables and module rank."""
    ctx = context(rank, field)
    if isinstance(t, NormalForm):
        return gamma_nf(t, ctx)
    if t.max_index() > rank:
        raise MetalieError(f"term uses a{t.max_index()} but rank is {rank}")
    return _gamma(t, ctx)


def _gamma(t: LieTerm, ctx: MatContext) -> MatElem:
    if isinstance(t, Gen):
        return ctx.generator(t.index)
    if isinstance(t, Scale):
        return _gamma(t.term, ctx) * ctx.field.convert(t.coeff)
    if isinstance(t, Sum):
        acc = ctx.zero()
        for s in t.items:
            acc = acc + _gamma(s, ctx)
        return acc
    return _gamma(t.left, ctx).bracket(_gamma(t.right, ctx))


def commutator_image(p: int, q: int, ring: PolyRing, rank: int) -> FreeModElem:
    """u-component of gamma(a_p a_q): u_p x_q - u_q x_p."""
    return FreeModElem(ring, rank, {p: ring.gen(q), q: -ring.gen(p)})


def gamma_nf(nf: NormalForm, ctx: MatContext) -> MatElem:
    ring = ctx.ring
    f = ring.zero
    u = FreeModElem.zero(ring, ctx.rank)
    for i, c in nf.linear.items():
        f = f + ring.gen(i).scale(c)
        u = u + FreeModElem.basis(ring, ctx.rank, i) * c
    for m, c in nf.quad.items():
        exp = [0] * ring.nvars
        for k in m[2:]:
            exp[k - 1] += 1
        u = u + commutator_image(m[0], m[1], ring, ctx.rank) * ring.monomial(tuple(exp), c)
    return MatElem(ctx, f, u)


# ---------------------------------------------------------------------------
# the Fitting radical and its module presentation


def in_fitting_F(t: LieTerm, rank: int, field: Field = QQ) -> bool:
    """Fit(F) = F^2 for rank >= 2; a rank-1 algebra is Abelian."""
    if rank < 2:
        return True
    return not normalize(t, field).linear


CFGen = Tuple[int, int]


def cf_generators(rank: int) -> List[CFGen]:
    """Module generators a_i a_j of Fit(F), i > j."""
    return [(i, j) for i in range(2, rank + 1) for j in range(1, i)]


@dataclass
class FitPresentation:
    rank: int
    field: Field
    generators: List[CFGen]
    relations: List[List[Poly]]

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.field, self.rank)

    def images(self) -> List[FreeModElem]:
        return [commutator_image(p, q, self.ring, self.rank) for p, q in self.generators]

    def relations_hold(self) -> bool:
        imgs = self.images()
        return all(combine(imgs, rel, self.ring, self.rank).is_zero() for rel in self.relations)

    def matches_image(self) -> bool:
        """The relations generate every syzygy of the images in T."""
        imgs = self.images()
        syz = syzygies(imgs)
        n = len(imgs)
        if not self.relations:
            return not syz
        rel_mod = Submodule([FreeModElem.from_list(r, self.ring) for r in self.relations])
        if not syz:
            return rel_mod.is_zero()
        syz_mod = Submodule([FreeModElem.from_list(s, self.ring) for s in syz])
        return n > 0 and rel_mod.equals(syz_mod)


def fit_presentation(rank: int, field: Field = QQ) -> FitPresentation:
    """Generators a_i a_j (i > j) of Fit(F) with one Jacobi relation per index triple.

    For p > q > s the relation reads
    ``(a_p a_q) x_s + (a_q a_s) x_p - (a_p a_s) x_q = 0``.
    """
    if rank < 2:
        raise MetalieError("the Fitting presentation needs rank >= 2")
    ring = PolyRing(field, rank)
    gens_ = cf_generators(rank)
    pos = {g: k for k, g in enumerate(gens_)}
    rels = []
    for p, q, s in itertools.combinations(range(rank, 0, -1), 3):
        vec = [ring.zero] * len(gens_)
        vec[pos[(p, q)]] = ring.gen(s)
        vec[pos[(q, s)]] = ring.gen(p)
        vec[pos[(p, s)]] = -ring.gen(q)
        rels.append(vec)
    return FitPresentation(rank, field, gens_, rels)


def express_in_CF(t: Union[LieTerm, NormalForm], rank: int, field: Field = QQ) -> Dict[CFGen, Poly]:
    """Coordinates f_ij with t = sum (a_i a_j) f_ij, i > j."""
    nf = t if isinstance(t, NormalForm) else normalize(t, field)
    if nf.linear:
        raise NotInFittingError(f"{nf} has a nonzero linear part")
    ring = PolyRing(field, rank)
    out: Dict[CFGen, Poly] = {}
    for m, c in nf.quad.items():
        exp = [0] * rank
        for k in m[2:]:
            exp[k - 1] += 1
        term = ring.monomial(tuple(exp), c)
        out[m.head] = out[m.head] + term if m.head in out else term
    out = {k: v for k, v in out.items() if v}
    ctx = context(rank, field)
    back = FreeModElem.zero(ring, rank)
    for (p, q), f in out.items():
        back = back + commutator_image(p, q, ring, rank) * f
    if back != gamma_nf(nf, ctx).u:
        raise MetalieError("module coordinates failed back-substitution")
    return out
