"""Finitely generated U-algebras as subalgebras of M^0.

A ``ConcreteAlgebra`` is given by generators in M^0.  Its Fitting radical is a
module over R = k[y_1..y_r], where y_a acts as multiplication by the linear
form l_a (the diagonal entry of the a-th element of ``a_part``).  To compute
over R we change coordinates on k[x] so that l_1..l_r become the first r
variables; k[x] is then free over R with basis the monomials in the
remaining variables, which flattens T into a free R-module of finite rank
for any finite set of elements.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    MetalieError,
    ContextMismatchError,
    EmptyInputError,
    NotInDeltaError,
    NotInFittingError,
    PresentationError,
    RelationViolationError,
    VerificationFailure,
)
from .fmodule import FreeModElem, Submodule, combine, syzygies
from .jsonio import envelope, open_envelope
from .linalg import Echelon, independent_subset, invert
from .matlie import MatContext, MatElem, coordinate_vector, in_fitting
from .ring import Exponent, Field, Poly, PolyRing, in_delta

Key = Tuple[int, Exponent]  # (module position, monomial in the complementary variables); position 0 is f


@dataclass
class CanonicalGenerators:
    a_part: List[MatElem]
    b_part: List[MatElem]
    a_indices: List[int]  # positions of a_part inside the generator list


class ConcreteAlgebra:
    def __init__(self, ctx: MatContext, gens: Sequence[MatElem]):
        if not ctx.m0:
            raise ContextMismatchError("concrete algebras live in M^0")
        if not gens:
            raise EmptyInputError("an algebra needs at least one generator")
        for g in gens:
            if g.ctx != ctx:
                raise ContextMismatchError("generator outside the algebra's context")
        self.ctx = ctx
        self.gens: Tuple[MatElem, ...] = tuple(gens)

    @classmethod
    def parse(cls, ctx: MatContext, texts: Sequence[str]) -> "ConcreteAlgebra":
        return cls(ctx, [ctx.parse(t) for t in texts])

    @property
    def field(self) -> Field:
        return self.ctx.field

    @cached_property
    def is_abelian(self) -> bool:
        g = self.gens
        return all(not g[i].bracket(g[j]) for i in range(len(g)) for j in range(i + 1, len(g)))

    # -- canonical generators ---------------------------------------------

    @cached_property
    def canonical(self) -> CanonicalGenerators:
        fld = self.field
        if self.is_abelian:
            idx = independent_subset([coordinate_vector(g) for g in self.gens], fld)
            return CanonicalGenerators([], [self.gens[i] for i in idx], [])
        fvecs = [dict(enumerate(g.f.linear_coeffs())) for g in self.gens]
        fvecs = [{k: c for k, c in v.items() if c} for v in fvecs]
        a_idx = independent_subset(fvecs, fld)
        a_part = [self.gens[i] for i in a_idx]
        ech = Echelon(fld)
        for i in a_idx:
            ech.add(fvecs[i])
        b_part: List[MatElem] = []

        def push(b: MatElem):
            if b and b not in b_part:
                b_part.append(b)

        for k, g in enumerate(self.gens):
            if k in a_idx:
                continue
            w = ech.coordinates(fvecs[k])
            comp = g
            for pos, c in w.items():
                comp = comp - a_part[pos] * c
            push(comp)
        for i in range(len(self.gens)):
            for j in range(i + 1, len(self.gens)):
                push(self.gens[i].bracket(self.gens[j]))
        return CanonicalGenerators(a_part, b_part, a_idx)

    @property
    def r(self) -> int:
        return len(self.canonical.a_part)

    @cached_property
    def module_ring(self) -> PolyRing:
        """R = k[y_1..y_r]; y_a acts on the Fitting radical through a_part[a]."""
        return PolyRing(self.field, self.r)

    @cached_property
    def l_forms(self) -> List[Poly]:
        return [a.f for a in self.canonical.a_part]

    # -- change of variables and flattening -------------------------------

    @cached_property
    def _coords(self):
        n, fld = self.ctx.nvars, self.field
        rows = [list(f.linear_coeffs()) for f in self.l_forms]
        unit = [[fld.convert(int(i == j)) for j in range(n)] for i in range(n)]
        cand = rows + unit
        chosen = independent_subset([{j: c for j, c in enumerate(v) if c} for v in cand], fld)
        P = [cand[i] for i in chosen]
        Pinv = invert(P, fld)
        X = self.ctx.ring
        Y = PolyRing(fld, n)
        x_in_y = [sum((Y.gen(j + 1).scale(Pinv[i][j]) for j in range(n) if Pinv[i][j]), Y.zero) for i in range(n)]
        y_in_x = [sum((X.gen(i + 1).scale(P[j][i]) for i in range(n) if P[j][i]), X.zero) for j in range(n)]
        identity = all(P[i][j] == int(i == j) for i in range(n) for j in range(n))
        return Y, x_in_y, y_in_x, identity

    def _substitute(self, g: Poly, images: Sequence[Poly], target: PolyRing, cache: Dict[Exponent, Poly]) -> Poly:
        """g(images) with a per-algebra cache of monomial images."""
        acc: Dict[Exponent, object] = {}
        p = self.field.p
        for e, c in g.terms.items():
            img = cache.get(e)
            if img is None:
                img = target.one
                for i, k in enumerate(e):
                    if k:
                        img = img * images[i] ** k
                cache[e] = img
            for e2, c2 in img.terms.items():
                acc[e2] = acc.get(e2, 0) + c * c2
        if p:
            return Poly(target, {e: c % p for e, c in acc.items() if c % p})
        return Poly(target, {e: c for e, c in acc.items() if c})

    @cached_property
    def _caches(self) -> Tuple[Dict, Dict, Dict]:
        return {}, {}, {}

    def split(self, elem: MatElem) -> Dict[Key, Poly]:
        """Coordinates of (f, u) in the free R-module with basis (position, monomial)."""
        Y, x_in_y, _, identity = self._coords
        r, R = self.r, self.module_ring
        acc: Dict[Key, Dict[Exponent, object]] = {}
        parts = [(0, elem.f)] + sorted(elem.u.coords.items())
        for pos, g in parts:
            if not g:
                continue
            gy = g if identity else self._substitute(g, x_in_y, Y, self._caches[0])
            for e, c in gy.terms.items():
                acc.setdefault((pos, e[r:]), {})[e[:r]] = c
        return {k: Poly(R, t) for k, t in acc.items()}

    def join(self, d: Dict[Key, Poly]) -> MatElem:
        Y, _, y_in_x, identity = self._coords
        X = self.ctx.ring
        f = X.zero
        coords: Dict[int, Poly] = {}
        for (pos, mu), h in d.items():
            hy = Poly(Y, {e + mu: c for e, c in h.terms.items()})
            hx = Poly(X, hy.terms) if identity else self._substitute(hy, y_in_x, X, self._caches[1])
            if pos == 0:
                f = f + hx
            else:
                coords[pos] = coords[pos] + hx if pos in coords else hx
        return MatElem(self.ctx, f, FreeModElem(X, self.ctx.rank, coords))

    def flatten(self, elems: Sequence[MatElem], keys: Sequence[Key] = None) -> Tuple[List[Key], List[FreeModElem]]:
        """Vectors over R on a common key list (extended by any new keys)."""
        splits = [self.split(e) for e in elems]
        keys = list(keys or [])
        seen = set(keys)
        for s in splits:
            for k in sorted(s):
                if k not in seen:
                    seen.add(k)
                    keys.append(k)
        pos = {k: i + 1 for i, k in enumerate(keys)}
        R = self.module_ring
        vecs = [FreeModElem(R, len(keys), {pos[k]: h for k, h in s.items()}) for s in splits]
        return keys, vecs

    def unflatten(self, keys: Sequence[Key], v: FreeModElem) -> MatElem:
        return self.join({keys[i - 1]: h for i, h in v.coords.items()})

    @cached_property
    def fit_module(self) -> Tuple[List[Key], Optional[Submodule]]:
        """Key list and submodule generated by the flattened b_part."""
        b = self.canonical.b_part
        if not b:
            return [], None
        keys, vecs = self.flatten(b)
        return keys, Submodule(vecs)

    # -- module action and membership -------------------------------------

    def act(self, elem: MatElem, g: Poly) -> MatElem:
        """elem . g for elem in Fit(A) and g in R."""
        self.module_ring.check(g)
        if self.r == 0:
            c = g.constant_term()
            return elem * c
        if elem.f:
            raise NotInFittingError(f"{elem} has a nonzero diagonal; R acts only on Fit(A)")
        return MatElem(self.ctx, elem.f, elem.u * self.from_module_ring(g))

    def fit_coordinates(self, elem: MatElem) -> Optional[List[Poly]]:
        """h with elem = sum b_p . h_p, or None if elem is not in Fit(A)."""
        keys, S = self.fit_module
        if not elem:
            return [self.module_ring.zero] * len(self.canonical.b_part)
        if S is None:
            return None
        s = self.split(elem)
        if any(k not in keys for k in s):
            return None
        pos = {k: i + 1 for i, k in enumerate(keys)}
        v = FreeModElem(self.module_ring, len(keys), {pos[k]: h for k, h in s.items()})
        return S.member(v)

    @cached_property
    def _l_echelon(self) -> Echelon:
        ech = Echelon(self.field)
        for f in self.l_forms:
            ech.add({k: v for k, v in enumerate(f.linear_coeffs()) if v})
        return ech

    def linear_coordinates(self, f: Poly) -> Optional[List]:
        """c with f = sum c_a l_a, or None when f is outside the span."""
        c = [self.field.convert(0)] * self.r
        if not f:
            return c
        w = self._l_echelon.coordinates({k: v for k, v in enumerate(f.linear_coeffs()) if v})
        if w is None or (f.total_degree() != 1):
            return None
        for pos, coeff in w.items():
            c[pos] = coeff
        return c

    def lam(self, elem: MatElem) -> Poly:
        """The linear form sum c_a y_a in R recording elem's diagonal in the l basis."""
        c = self.linear_coordinates(elem.f)
        if c is None:
            raise MetalieError(f"diagonal of {elem} is not in the span of the a_part forms")
        R = self.module_ring
        return sum((R.gen(a + 1).scale(coeff) for a, coeff in enumerate(c) if coeff), R.zero)

    def to_module_ring(self, g: Poly) -> Optional[Poly]:
        """g(x) rewritten as a polynomial in l_1..l_r (an element of R), if possible."""
        Y, x_in_y, _, identity = self._coords
        gy = g if identity else self._substitute(g, x_in_y, Y, self._caches[0])
        r = self.r
        if any(any(e[r:]) for e in gy.terms):
            return None
        return Poly(self.module_ring, {e[:r]: c for e, c in gy.terms.items()})

    def from_module_ring(self, g: Poly) -> Poly:
        """g(l_1..l_r) as a polynomial in x."""
        self.module_ring.check(g)
        X = self.ctx.ring
        if self.r == 0:
            return X.const(g.constant_term())
        if self._coords[3] and self.r == X.nvars:
            return Poly(X, dict(g.terms))
        return self._substitute(g, self.l_forms, X, self._caches[2])

    def decompose(self, elem: MatElem) -> Optional[Tuple[List, List[Poly]]]:
        """(c, h) with elem = sum c_a a_a + sum b_p . h_p, or None if elem is not in A."""
        if elem.ctx != self.ctx:
            raise ContextMismatchError("element outside the algebra's context")
        a_part = self.canonical.a_part
        c = self.linear_coordinates(elem.f) if a_part else [] if not elem.f or self.is_abelian else None
        if c is None:
            return None
        rest = elem
        for a, coeff in zip(a_part, c):
            if coeff:
                rest = rest - a * coeff
        h = self.fit_coordinates(rest)
        if h is None:
            return None
        return c, h

    def compose_canonical(self, c: Sequence, h: Sequence[Poly]) -> MatElem:
        out = self.ctx.zero()
        for a, coeff in zip(self.canonical.a_part, c):
            out = out + a * coeff
        for b, g in zip(self.canonical.b_part, h):
            if g:
                out = out + self.act(b, g)
        return out

    def contains(self, elem: MatElem) -> bool:
        return self.decompose(elem) is not None

    __contains__ = contains

    def in_fit(self, elem: MatElem) -> bool:
        """Membership in Fit(A) = A intersected with the zero-diagonal elements."""
        if self.is_abelian:
            return self.contains(elem)
        return not elem.f and self.contains(elem)

    # -- random elements --------------------------------------------------

    def random_element(self, rng: random.Random, degree: int = 2, coeff: int = 3, fit_only: bool = False) -> MatElem:
        from .sampling import random_poly

        c = [] if fit_only else [rng.randint(-coeff, coeff) for _ in self.canonical.a_part]
        if self.r == 0:
            h = [self.module_ring.const(rng.randint(-coeff, coeff)) for _ in self.canonical.b_part]
        else:
            h = [random_poly(rng, self.module_ring, degree, coeff) for _ in self.canonical.b_part]
        return self.compose_canonical(c, h)

    def presentation(self) -> "Presentation":
        return presentation(self)

    def __repr__(self):
        return f"ConcreteAlgebra([{', '.join(map(str, self.gens))}])"


def canonical_generators(A: ConcreteAlgebra) -> CanonicalGenerators:
    return A.canonical


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    """Canonical generators with relations of three types.

    type1: R-syzygies among b_part.
    type2: b_i o b_j = 0 and b_i o a_s o b_j = 0 (a schema, never listed).
    type3: a_i o a_j = sum_p b_p . g_ij^p for i < j (1-based keys).
    """

    algebra: ConcreteAlgebra
    a_part: List[MatElem]
    b_part: List[MatElem]
    type1: List[List[Poly]]
    type3: Dict[Tuple[int, int], List[Poly]]

    @property
    def r(self) -> int:
        return len(self.a_part)

    @property
    def l(self) -> int:
        return len(self.b_part)

    @property
    def ring(self) -> PolyRing:
        return self.algebra.module_ring

    def verify(self) -> None:
        """Evaluate every relation in the concrete algebra; raise on the first failure."""
        A = self.algebra
        zero = A.ctx.zero()
        for vec in self.type1:
            val = zero
            for b, g in zip(self.b_part, vec):
                if g:
                    val = val + A.act(b, g)
            if val:
                raise RelationViolationError("type1 relation does not vanish", vec)
        for (i, j), vec in self.type3.items():
            lhs = self.a_part[i - 1].bracket(self.a_part[j - 1])
            if lhs != A.compose_canonical([], vec):
                raise RelationViolationError(f"type3 relation for a{i} o a{j} fails", ((i, j), vec))
        for b in self.b_part:
            for c in self.b_part:
                if b.bracket(c):
                    raise RelationViolationError("type2: b o b' is nonzero", (str(b), str(c)))
                for a in self.a_part:
                    if b.bracket(a).bracket(c):
                        raise RelationViolationError("type2: b o a o b' is nonzero", (str(b), str(a), str(c)))

    def type1_module(self) -> Optional[Submodule]:
        if not self.type1:
            return None
        return Submodule([FreeModElem.from_list(v, self.ring) for v in self.type1])

    def to_abstract(self) -> "AbstractPresentedAlgebra":
        keys, phi = self.algebra.flatten(self.b_part)
        return AbstractPresentedAlgebra(self.r, self.l, self.algebra.field, self.type1, dict(self.type3), phi)

    def to_json(self) -> dict:
        return envelope(
            "presentation",
            {
                "field": self.algebra.field.tag,
                "r": self.r,
                "l": self.l,
                "a_part": [str(a) for a in self.a_part],
                "b_part": [str(b) for b in self.b_part],
                "type1": [[str(g) for g in v] for v in self.type1],
                "type3": [{"i": i, "j": j, "coords": [str(g) for g in v]} for (i, j), v in sorted(self.type3.items())],
            },
        )


def presentation(A: ConcreteAlgebra) -> Presentation:
    cg = A.canonical
    _, S = A.fit_module
    type1 = syzygies(list(S.gens)) if S is not None else []
    type3: Dict[Tuple[int, int], List[Poly]] = {}
    a = cg.a_part
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            h = A.fit_coordinates(a[i].bracket(a[j]))
            if h is None:
                raise PresentationError("b_part does not generate the commutant")
            type3[(i + 1, j + 1)] = h
    P = Presentation(A, list(a), list(cg.b_part), type1, type3)
    P.verify()
    return P


# ---------------------------------------------------------------------------
# (1+f)-endomorphisms


@dataclass
class OnePlusF:
    """x -> x + sum_t (x o a_{j_t}) . f_t where f = sum_t y_{j_t} f_t."""

    algebra: ConcreteAlgebra
    f: Poly
    designated: Dict[int, Poly]  # letter j (1-based) -> cofactor f_j

    def apply(self, x: MatElem) -> MatElem:
        A = self.algebra
        out = x
        for j, fj in self.designated.items():
            out = out + A.act(x.bracket(A.canonical.a_part[j - 1]), fj)
        return out

    __call__ = apply


def designate(f: Poly) -> Dict[int, Poly]:
    """Split f (no constant term) as sum_j y_j f_j, each term going to its smallest variable."""
    ring = f.ring
    out: Dict[int, Dict[Exponent, object]] = {}
    for e, c in f.terms.items():
        j = next(i for i, k in enumerate(e) if k)
        rest = list(e)
        rest[j] -= 1
        out.setdefault(j + 1, {})[tuple(rest)] = c
    return {j: Poly(ring, t) for j, t in sorted(out.items())}


def phi_one_plus_f(A: ConcreteAlgebra, f) -> OnePlusF:
    R = A.module_ring
    f = R(f)
    if not in_delta(f):
        raise NotInDeltaError(f"{f} has a nonzero constant term")
    return OnePlusF(A, f, designate(f))


# ---------------------------------------------------------------------------
# abstract presentations and their embedding into M^0


@dataclass
class AbstractPresentedAlgebra:
    """r a-generators, l b-generators, relations over R = k[x_1..x_r], and phi: b_p -> T."""

    r: int
    l: int
    field: Field
    type1: List[List[Poly]]
    type3: Dict[Tuple[int, int], List[Poly]]
    phi: List[FreeModElem]

    def __post_init__(self):
        R = self.ring
        if len(self.phi) != self.l:
            raise PresentationError(f"phi needs {self.l} images, got {len(self.phi)}")
        for v in self.phi:
            if v.ring != R:
                raise ContextMismatchError("phi images must live over k[x_1..x_r]")
        if len({v.rank for v in self.phi}) > 1:
            raise ContextMismatchError("phi images of different ranks")
        for vec in self.type1:
            if len(vec) != self.l:
                raise PresentationError("type1 vector of the wrong length")
            if not combine(self.phi, vec, R, self.s).is_zero():
                raise RelationViolationError("phi does not respect a type1 relation", vec)
        for (i, j), vec in self.type3.items():
            if not (1 <= i < j <= self.r) or len(vec) != self.l:
                raise PresentationError(f"malformed type3 entry for ({i}, {j})")

    @property
    def ring(self) -> PolyRing:
        return PolyRing(self.field, self.r)

    @property
    def s(self) -> int:
        return self.phi[0].rank if self.phi else 0

    def phi_commutator(self, j: int, k: int) -> FreeModElem:
        """phi(a_j o a_k) read off the type3 data."""
        R = self.ring
        if j == k:
            return FreeModElem.zero(R, self.s)
        lo, hi = min(j, k), max(j, k)
        vec = self.type3.get((lo, hi))
        v = combine(self.phi, vec, R, self.s) if vec is not None else FreeModElem.zero(R, self.s)
        return v if j < k else -v

    def type1_module(self) -> Optional[Submodule]:
        if not self.type1:
            return None
        return Submodule([FreeModElem.from_list(v, self.ring) for v in self.type1])

    def to_json(self) -> dict:
        return envelope(
            "abstract-presentation",
            {
                "field": self.field.tag,
                "r": self.r,
                "l": self.l,
                "s": self.s,
                "type1": [[str(g) for g in v] for v in self.type1],
                "type3": [{"i": i, "j": j, "coords": [str(g) for g in v]} for (i, j), v in sorted(self.type3.items())],
                "phi": [str(v) for v in self.phi],
            },
        )

    @classmethod
    def from_json(cls, doc: dict) -> "AbstractPresentedAlgebra":
        from .parsing import parse_module, parse_poly

        doc = open_envelope(doc, "abstract-presentation")
        fld = Field.from_tag(doc.get("field", "q"))
        r, l, s = doc["r"], doc["l"], doc["s"]
        R = PolyRing(fld, r)
        type1 = [[parse_poly(g, R) for g in v] for v in doc.get("type1", [])]
        type3 = {(e["i"], e["j"]): [parse_poly(g, R) for g in e["coords"]] for e in doc.get("type3", [])}
        phi = [parse_module(t, R, s) for t in doc["phi"]]
        return cls(r, l, fld, type1, type3, phi)


@dataclass
class EmbeddingReport:
    algebra: ConcreteAlgebra
    a_images: List[MatElem]
    b_images: List[MatElem]
    battery: int
    notes: List[str] = field(default_factory=list)


def embed_abstract(P: AbstractPresentedAlgebra, battery: int = 20, seed: int = 0) -> EmbeddingReport:
    """Realize P inside M^0 with r variables and module rank s.

    b_p -> (0, phi(b_p) * sigma) and a_j -> (x_j, sum_k phi(a_j o a_k)), where
    sigma = x_1 + ... + x_r (sigma = 1 when r = 0).
    """
    ctx = MatContext(nvars=P.r, rank=P.s, field=P.field, m0=True)
    X = ctx.ring
    sigma = sum(X.gens, X.zero) if P.r else X.one
    b_img = [MatElem(ctx, X.zero, v * sigma) for v in P.phi]
    a_img = []
    for j in range(1, P.r + 1):
        u = FreeModElem.zero(X, P.s)
        for k in range(1, P.r + 1):
            u = u + P.phi_commutator(j, k)
        a_img.append(MatElem(ctx, X.gen(j), u))

    def act(b: MatElem, g: Poly) -> MatElem:
        return MatElem(ctx, b.f, b.u * g)

    zero = ctx.zero()
    for vec in P.type1:
        val = zero
        for b, g in zip(b_img, vec):
            val = val + act(b, g)
        if val:
            raise RelationViolationError("type1 relation not preserved", vec)
    for j in range(P.r):
        for k in range(j + 1, P.r):
            vec = P.type3.get((j + 1, k + 1), [X.zero] * P.l)
            rhs = zero
            for b, g in zip(b_img, vec):
                rhs = rhs + act(b, g)
            if a_img[j].bracket(a_img[k]) != rhs:
                raise RelationViolationError(f"type3 relation for a{j + 1} o a{k + 1} not preserved", ((j + 1, k + 1), vec))
    for b in b_img:
        for c in b_img:
            if b.bracket(c) or any(b.bracket(a).bracket(c) for a in a_img):
                raise RelationViolationError("type2 relation not preserved", (str(b), str(c)))

    # injectivity on canonical forms that are nonzero in the abstract algebra
    from .sampling import random_poly

    rng = random.Random(seed)
    syz = P.type1_module()
    for _ in range(battery):
        c = [rng.randint(-2, 2) for _ in range(P.r)]
        h = [random_poly(rng, X, 2, 2) if P.r else X.const(rng.randint(-2, 2)) for _ in range(P.l)]
        hv = FreeModElem.from_list(h, X) if h else None
        nonzero = any(c) or (hv is not None and hv and (syz is None or not syz.contains(hv)))
        if not nonzero:
            continue
        img = zero
        for a, coeff in zip(a_img, c):
            img = img + a * coeff
        for b, g in zip(b_img, h):
            img = img + act(b, g)
        if not img:
            raise VerificationFailure("embedding kills a nonzero element", {"c": c, "h": [str(g) for g in h]})
    B = ConcreteAlgebra(ctx, a_img + b_img)
    return EmbeddingReport(B, a_img, b_img, battery)


def same_relations(P: AbstractPresentedAlgebra, report: EmbeddingReport) -> bool:
    """Syzygies of the embedded b-images equal the type1 module (mutual reduction)."""
    B = report.algebra
    if not report.b_images:
        return not P.type1
    _, vecs = B.flatten(report.b_images)
    syz = syzygies(vecs)
    R = P.ring
    if B.module_ring != R:
        return False
    if not syz or not P.type1:
        mine = [v for v in syz if any(v)]
        theirs = [v for v in P.type1 if any(v)]
        return not mine and not theirs
    S1 = Submodule([FreeModElem.from_list(v, R) for v in syz])
    S2 = Submodule([FreeModElem.from_list(v, R) for v in P.type1])
    return S1.equals(S2)


# ---------------------------------------------------------------------------
# Fitting tests


def fit_test(A: ConcreteAlgebra, elem: MatElem) -> bool:
    return in_fitting(elem, A.is_abelian)


def commutes_with_commutant(A: ConcreteAlgebra, elem: MatElem) -> bool:
    g = A.gens
    for i in range(len(g)):
        for j in range(i + 1, len(g)):
            if elem.bracket(g[i].bracket(g[j])):
                return False
    return True
