"""Delta-localisation, direct extensions A + M by torsion-free modules, and the
homomorphisms that embed and discriminate them.

R = k[y_1..y_r] is the module ring of the base algebra (y_a acts through
a_part[a]); R_Delta is its localisation at polynomials with nonzero constant
term.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .errors import (
    ContextMismatchError,
    EmptyInputError,
    MetalieError,
    NotInAlgebraError,
    NotInFittingError,
    ParseError,
    RankMismatchError,
    RelationViolationError,
    SingularSystemError,
    VerificationFailure,
    ZeroElementError,
)
from .fmodule import FreeModElem, LocalModElem, Submodule, combine, syzygies
from .freelie import LieTerm, NormalForm, cf_generators, express_in_CF, gamma, normalize
from .jsonio import envelope, open_envelope
from .matlie import LocalMatElem, MatContext, MatElem
from .parsing import parse_module, parse_poly
from .ring import QQ, Field, LocalFrac, Poly, PolyRing, exact_quotient
from .ualg import ConcreteAlgebra, OnePlusF, phi_one_plus_f

FracLike = Union[LocalFrac, Poly, int]


# ---------------------------------------------------------------------------
# A_Delta


class LocalElem:
    """sum c_a a_a + sum b_p . h_p with h in R_Delta^l."""

    __slots__ = ("alg", "c", "h")

    def __init__(self, alg: "LocalAlgebra", c: Tuple, h: LocalModElem):
        self.alg, self.c, self.h = alg, c, h

    def __add__(self, other: "LocalElem") -> "LocalElem":
        return LocalElem(self.alg, tuple(a + b for a, b in zip(self.c, other.c)), self.h + other.h)

    def __neg__(self) -> "LocalElem":
        return LocalElem(self.alg, tuple(-a for a in self.c), -self.h)

    def __sub__(self, other: "LocalElem") -> "LocalElem":
        return self + (-other)

    def __mul__(self, k) -> "LocalElem":
        k = self.alg.base.field.convert(k)
        return LocalElem(self.alg, tuple(a * k for a in self.c), self.h * k)

    __rmul__ = __mul__

    def bracket(self, other: "LocalElem") -> "LocalElem":
        return self.alg.bracket(self, other)

    def act(self, q: FracLike) -> "LocalElem":
        return self.alg.act(self, q)

    def to_mat(self) -> LocalMatElem:
        return self.alg.to_mat(self)

    def is_fitting(self) -> bool:
        return not any(self.c)

    def __eq__(self, other):
        if not isinstance(other, LocalElem):
            return NotImplemented
        return self.to_mat() == other.to_mat()

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return bool(self.to_mat())

    def __str__(self):
        return str(self.to_mat())

    def __repr__(self):
        return f"LocalElem(c={list(map(str, self.c))}, h={self.h})"


class LocalAlgebra:
    """A_Delta: the a_part of A together with Fit(A) localised at Delta."""

    def __init__(self, base: ConcreteAlgebra):
        if base.is_abelian:
            raise MetalieError("localisation needs a non-Abelian algebra")
        self.base = base

    @property
    def ring(self) -> PolyRing:
        return self.base.module_ring

    @property
    def r(self) -> int:
        return self.base.r

    @property
    def l(self) -> int:
        return len(self.base.canonical.b_part)

    def elem(self, c: Sequence = None, h=None) -> LocalElem:
        conv = self.base.field.convert
        c = tuple(conv(x) for x in c) if c is not None else tuple(conv(0) for _ in range(self.r))
        if len(c) != self.r:
            raise RankMismatchError(f"{len(c)} linear coordinates for {self.r} a_part elements")
        R = self.ring
        if h is None:
            h = LocalModElem.zero(R, self.l)
        elif isinstance(h, FreeModElem):
            h = h.localize()
        elif not isinstance(h, LocalModElem):
            h = LocalModElem(R, self.l, {i + 1: LocalFrac.of(q, R) for i, q in enumerate(h)})
        if h.ring != R or h.rank != self.l:
            raise ContextMismatchError("Fitting coordinates outside R_Delta^l")
        return LocalElem(self, c, h)

    def fit(self, h) -> LocalElem:
        return self.elem(None, h)

    def include(self, x: MatElem) -> LocalElem:
        dec = self.base.decompose(x)
        if dec is None:
            raise NotInAlgebraError(f"{x} is not in the algebra")
        c, h = dec
        return self.elem(c, h)

    def include_local(self, X: LocalMatElem) -> LocalElem:
        """Canonical coordinates of a matrix with denominators in k[l_1..l_r].

        The Fitting part is multiplied by the product g of its denominators and
        the result is looked up in Fit(A); membership of X is only detected
        when g itself clears it into Fit(A).
        """
        A = self.base
        if isinstance(X, MatElem):
            X = X.localize()
        c = A.linear_coordinates(X.f)
        if c is None:
            raise NotInAlgebraError(f"diagonal of {X} is outside the span of the a_part forms")
        rest = X
        for a, k in zip(A.canonical.a_part, c):
            if k:
                rest = rest - a * k
        R = self.ring
        g = R.one
        for d in rest.u.denominators():
            dr = A.to_module_ring(d)
            if dr is None:
                raise NotInAlgebraError(f"denominator {d} is not a polynomial in the a_part forms")
            g = g * dr
        cleared = rest.u * A.from_module_ring(g)
        h = A.fit_coordinates(MatElem(A.ctx, A.ctx.ring.zero, cleared.to_free()))
        if h is None:
            raise NotInAlgebraError(f"{X} is not in the localised algebra")
        ginv = LocalFrac(R.one, g)
        return self.elem(c, [LocalFrac.of(q) * ginv for q in h])

    def a(self, i: int) -> LocalElem:
        return self.include(self.base.canonical.a_part[i - 1])

    def b(self, p: int) -> LocalElem:
        return self.include(self.base.canonical.b_part[p - 1])

    @cached_property
    def _products(self) -> Dict[Tuple[int, int], LocalModElem]:
        """Fitting coordinates of a_i o a_j (0-based, i != j)."""
        a = self.base.canonical.a_part
        out = {}
        for i in range(self.r):
            for j in range(i + 1, self.r):
                h = self.base.fit_coordinates(a[i].bracket(a[j]))
                if h is None:
                    raise NotInFittingError("a_part bracket outside the span of b_part")
                v = FreeModElem.from_list(h, self.ring).localize()
                out[(i, j)], out[(j, i)] = v, -v
        return out

    def _lam(self, c: Sequence) -> Poly:
        R = self.ring
        return sum((R.gen(a + 1).scale(k) for a, k in enumerate(c) if k), R.zero)

    def bracket(self, x: LocalElem, y: LocalElem) -> LocalElem:
        h = x.h * self._lam(y.c) - y.h * self._lam(x.c)
        for i, ci in enumerate(x.c):
            for j, cj in enumerate(y.c):
                if i != j and ci and cj:
                    h = h + self._products[(i, j)] * (ci * cj)
        return LocalElem(self, tuple(self.base.field.convert(0) for _ in x.c), h)

    def act(self, x: LocalElem, q: FracLike) -> LocalElem:
        if not x.is_fitting():
            raise NotInFittingError("R_Delta acts only on the Fitting part")
        return LocalElem(self, x.c, x.h * LocalFrac.of(q, self.ring))

    def frac_in_x(self, q: LocalFrac) -> LocalFrac:
        """q(l_1..l_r) as a fraction over k[x]."""
        A = self.base
        return LocalFrac(A.from_module_ring(q.num), A.from_module_ring(q.den))

    def to_mat(self, x: LocalElem) -> LocalMatElem:
        A = self.base
        cg = A.canonical
        out = A.ctx.zero().localize()
        for a, k in zip(cg.a_part, x.c):
            if k:
                out = out + a * k
        for p, q in x.h.coords.items():
            out = out + LocalMatElem(A.ctx, A.ctx.ring.zero, cg.b_part[p - 1].u.localize() * self.frac_in_x(q))
        return out

    def random_element(self, rng: random.Random, degree: int = 1, coeff: int = 3, fit_only: bool = False) -> LocalElem:
        from .sampling import random_poly, random_unit

        R = self.ring
        c = None if fit_only else [rng.randint(-coeff, coeff) for _ in range(self.r)]
        h = [LocalFrac(random_poly(rng, R, degree, coeff), random_unit(rng, R)) for _ in range(self.l)]
        return self.elem(c, h)

    def __repr__(self):
        return f"LocalAlgebra({self.base!r})"


def localize(A: ConcreteAlgebra) -> LocalAlgebra:
    return LocalAlgebra(A)


def _local_one_plus_f(AD: LocalAlgebra, endo: OnePlusF, x: LocalElem) -> LocalMatElem:
    """x + sum_j (x o a_j) . f_j evaluated in the matrix model of A_Delta."""
    A = AD.base
    X = AD.to_mat(x)
    out = X
    for j, fj in endo.designated.items():
        out = out + X.bracket(A.canonical.a_part[j - 1]).act(A.from_module_ring(fj))
    return out


@dataclass
class ClearedEmbedding:
    algebra: LocalAlgebra
    one_plus_f: Poly  # in R, constant term 1
    endo: OnePlusF
    images: List[MatElem]

    @property
    def f(self) -> Poly:
        return self.endo.f

    def apply_local(self, x: LocalElem) -> LocalMatElem:
        """The (1+f)-endomorphism of A_Delta at x, in the matrix model."""
        return _local_one_plus_f(self.algebra, self.endo, x)


def clear_denominators(AD: LocalAlgebra, elems: Sequence[LocalElem]) -> ClearedEmbedding:
    """Multiply out the denominators of ``elems`` with a (1+f)-endomorphism.

    1 + f is the product of the distinct denominators (each with constant
    term 1); the endomorphism sends every element into A.
    """
    if not elems:
        raise EmptyInputError("nothing to clear")
    A, R = AD.base, AD.ring
    dens: List[Poly] = []
    for x in elems:
        if x.alg is not AD:
            raise ContextMismatchError("element of a different localisation")
        for q in x.h.coords.values():
            if not q.den.is_constant() and q.den not in dens:
                dens.append(q.den)
    g = R.one
    for d in dens:
        g = g * d
    g = g.scale(A.field.div(1, g.constant_term()))
    endo = phi_one_plus_f(A, g - R.one)
    cg = A.canonical
    images = []
    for x in elems:
        img = A.ctx.zero()
        for a, k in zip(cg.a_part, x.c):
            if k:
                img = img + endo(a) * k
        for p, q in x.h.coords.items():
            hp = exact_quotient(q.num * g, q.den)
            if hp is None:
                raise VerificationFailure(f"{q.den} does not divide {g}", counterexample=str(x))
            img = img + A.act(cg.b_part[p - 1], hp)
        if _local_one_plus_f(AD, endo, x) != img.localize():
            raise VerificationFailure("(1+f) image disagrees with the matrix model", counterexample=str(x))
        images.append(img)
    mats = [x.to_mat() for x in elems]
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            if mats[i] != mats[j] and images[i] == images[j]:
                raise VerificationFailure("distinct inputs collapsed", counterexample=(str(elems[i]), str(elems[j])))
    return ClearedEmbedding(AD, g, endo, images)


# ---------------------------------------------------------------------------
# C_Delta = F_Delta for c_i = a_i + d_i


def _determinant_tools(m: List[List[Poly]], ring: PolyRing):
    memo: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Poly] = {}

    def det(rows: Tuple[int, ...], cols: Tuple[int, ...]) -> Poly:
        if not rows:
            return ring.one
        key = (rows, cols)
        if key in memo:
            return memo[key]
        r0, rest = rows[0], rows[1:]
        acc = ring.zero
        for k, col in enumerate(cols):
            e = m[r0][col]
            if e:
                term = e * det(rest, cols[:k] + cols[k + 1:])
                acc = acc + term if k % 2 == 0 else acc - term
        memo[key] = acc
        return acc

    return det


def determinant(m: List[List[Poly]], ring: PolyRing) -> Poly:
    n = len(m)
    return _determinant_tools(m, ring)(tuple(range(n)), tuple(range(n)))


def adjugate(m: List[List[Poly]], ring: PolyRing) -> List[List[Poly]]:
    n = len(m)
    det = _determinant_tools(m, ring)
    idx = tuple(range(n))
    adj = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = det(idx[:i] + idx[i + 1:], idx[:j] + idx[j + 1:])
            adj[j][i] = minor if (i + j) % 2 == 0 else -minor
    return adj


@dataclass
class CDeltaReport:
    rank: int
    pairs: List[Tuple[int, int]]
    matrix: List[List[Poly]]  # row (i,j): c_i c_j in the coordinates a_p a_q
    det: Poly
    adjugate: List[List[Poly]]
    solutions: Dict[Tuple[int, int], Dict[Tuple[int, int], LocalFrac]]  # a_p a_q = sum sol * c_i c_j
    system_ok: bool
    gamma_ok: bool

    @property
    def constant_term(self):
        return self.det.constant_term()

    @property
    def ok(self) -> bool:
        return bool(self.constant_term) and self.system_ok and self.gamma_ok


def check_cdelta(rank: int, perturbations: Sequence[Union[NormalForm, LieTerm, None]], field: Field = QQ) -> CDeltaReport:
    """Solve for a_p a_q in terms of c_i c_j where c_i = a_i + d_i, d_i in F^2."""
    if rank < 2:
        raise MetalieError("the commutant is zero below rank 2")
    if len(perturbations) != rank:
        raise RankMismatchError(f"{len(perturbations)} perturbations for rank {rank}")
    nfs = []
    for d in perturbations:
        if d is None:
            nfs.append(NormalForm(field=field))
        else:
            nfs.append(d if isinstance(d, NormalForm) else normalize(d, field))
    ring = PolyRing(field, rank)
    e = [express_in_CF(nf, rank, field) for nf in nfs]
    pairs = cf_generators(rank)
    x = ring.gens
    matrix = []
    for (i, j) in pairs:
        row = []
        for pq in pairs:
            entry = ring.one if pq == (i, j) else ring.zero
            if pq in e[i - 1]:
                entry = entry + x[j - 1] * e[i - 1][pq]
            if pq in e[j - 1]:
                entry = entry - x[i - 1] * e[j - 1][pq]
            row.append(entry)
        matrix.append(row)
    h = determinant(matrix, ring)
    if not h:
        raise SingularSystemError("the system for a_p a_q is singular", counterexample=[str(nf) for nf in nfs])
    if not h.constant_term():
        raise VerificationFailure(f"determinant {h} lies in Delta", counterexample=[str(nf) for nf in nfs])
    adj = adjugate(matrix, ring)
    n = len(pairs)
    hinv = LocalFrac(ring.one, h)
    solutions = {pairs[a]: {pairs[b]: LocalFrac.of(adj[a][b]) * hinv for b in range(n) if adj[a][b]} for a in range(n)}

    # M . (adj / h) = I over R_Delta
    system_ok = True
    for a in range(n):
        for b in range(n):
            acc = LocalFrac.of(ring.zero)
            for k in range(n):
                q = solutions[pairs[k]].get(pairs[b])
                if q is not None and matrix[a][k]:
                    acc = acc + q * matrix[a][k]
            if acc != (1 if a == b else 0):
                system_ok = False

    # the same identity on the gamma-images
    ctx_elems = [gamma(NormalForm.generator(i, field) + nfs[i - 1], rank, field) for i in range(1, rank + 1)]
    cc = {(i, j): ctx_elems[i - 1].bracket(ctx_elems[j - 1]).u.localize() for (i, j) in pairs}
    gamma_ok = True
    for pq in pairs:
        target = gamma(NormalForm.generator(pq[0], field).bracket(NormalForm.generator(pq[1], field)), rank, field).u
        acc = LocalModElem.zero(ring, rank)
        for ij, q in solutions[pq].items():
            acc = acc + cc[ij] * q
        if acc != target:
            gamma_ok = False
    return CDeltaReport(rank, pairs, matrix, h, adj, solutions, system_ok, gamma_ok)


# ---------------------------------------------------------------------------
# direct extensions A + M


class ExtElem:
    """a + m with a in A and m in M."""

    __slots__ = ("ext", "a", "m")

    def __init__(self, ext: "DirectExtension", a: MatElem, m: FreeModElem):
        self.ext, self.a, self.m = ext, a, m

    def __add__(self, other: "ExtElem") -> "ExtElem":
        return ExtElem(self.ext, self.a + other.a, self.m + other.m)

    def __neg__(self) -> "ExtElem":
        return ExtElem(self.ext, -self.a, -self.m)

    def __sub__(self, other: "ExtElem") -> "ExtElem":
        return self + (-other)

    def __mul__(self, k) -> "ExtElem":
        return ExtElem(self.ext, self.a * k, self.m * k)

    __rmul__ = __mul__

    def bracket(self, other: "ExtElem") -> "ExtElem":
        return self.ext.bracket(self, other)

    def __eq__(self, other):
        if not isinstance(other, ExtElem):
            return NotImplemented
        return self.a == other.a and self.m == other.m

    def __hash__(self):
        return hash((self.a, self.m))

    def __bool__(self):
        return bool(self.a) or bool(self.m)

    def __str__(self):
        return f"{self.a} & {self.m}"

    def __repr__(self):
        return f"ExtElem({self})"


class DirectExtension:
    """A + M: m o a = m . lambda(a), m o Fit(A) = m o M = 0."""

    def __init__(self, base: ConcreteAlgebra, gens: Sequence[FreeModElem], rank: int = None):
        R = base.module_ring
        gens = list(gens)
        if rank is None:
            if not gens:
                raise EmptyInputError("the rank of an empty generator list is unknown")
            rank = gens[0].rank
        for g in gens:
            if g.ring != R:
                raise ContextMismatchError(f"module over {g.ring}, algebra ring is {R}")
            if g.rank != rank:
                raise RankMismatchError(f"generator of rank {g.rank} in T_{rank}")
        self.base = base
        self.gens = gens
        self.s = rank

    @property
    def ring(self) -> PolyRing:
        return self.base.module_ring

    @cached_property
    def module(self) -> Optional[Submodule]:
        return Submodule(self.gens) if any(self.gens) else None

    def contains_m(self, m: FreeModElem) -> bool:
        return not m or (self.module is not None and self.module.contains(m))

    def elem(self, a: MatElem = None, m: FreeModElem = None, check: bool = True) -> ExtElem:
        a = a if a is not None else self.base.ctx.zero()
        m = m if m is not None else FreeModElem.zero(self.ring, self.s)
        if m.ring != self.ring or m.rank != self.s:
            raise ContextMismatchError("module part outside T_s over R")
        if check:
            if not self.base.contains(a):
                raise NotInAlgebraError(f"{a} is not in the algebra")
            if not self.contains_m(m):
                raise NotInAlgebraError(f"{m} is not in M")
        return ExtElem(self, a, m)

    def include(self, a: MatElem) -> ExtElem:
        return self.elem(a, None, check=False)

    def bracket(self, x: ExtElem, y: ExtElem) -> ExtElem:
        A = self.base
        m = x.m * A.lam(y.a) - y.m * A.lam(x.a) if A.r else FreeModElem.zero(self.ring, self.s)
        return ExtElem(self, x.a.bracket(y.a), m)

    def in_fit(self, x: ExtElem) -> bool:
        return self.base.in_fit(x.a)

    def random_module_elem(self, rng: random.Random, degree: int = 1, coeff: int = 3) -> FreeModElem:
        from .sampling import random_poly

        if not self.gens:
            return FreeModElem.zero(self.ring, self.s)
        return combine(self.gens, [random_poly(rng, self.ring, degree, coeff) for _ in self.gens], self.ring, self.s)

    def random_element(self, rng: random.Random, degree: int = 1, coeff: int = 3, fit_only: bool = False) -> ExtElem:
        a = self.base.random_element(rng, degree, coeff, fit_only)
        return ExtElem(self, a, self.random_module_elem(rng, degree, coeff))

    def parse_elem(self, text: str) -> ExtElem:
        """``(f | u) & m``; the module part may be omitted."""
        left, amp, right = text.partition("&")
        a = self.base.ctx.parse(left)
        if not amp:
            return self.elem(a, None)
        try:
            m = parse_module(right, self.ring, self.s)
        except ParseError as e:
            off = len(left) + 1
            raise ParseError(str(e).rsplit(" at position", 1)[0], e.pos + off, text) from e
        return self.elem(a, m)

    def to_json(self) -> dict:
        ctx = self.base.ctx
        return {
            "field": ctx.field.tag,
            "nvars": ctx.nvars,
            "rank": ctx.rank,
            "algebra": [str(g) for g in self.base.gens],
            "module_rank": self.s,
            "module": [str(g) for g in self.gens],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "DirectExtension":
        ctx = MatContext(doc["nvars"], doc["rank"], Field.from_tag(doc["field"]))
        A = ConcreteAlgebra.parse(ctx, doc["algebra"])
        return cls(A, [parse_module(t, A.module_ring, doc["module_rank"]) for t in doc["module"]], doc["module_rank"])

    def __repr__(self):
        return f"DirectExtension({self.base!r}, M=<{', '.join(map(str, self.gens))}>)"


def extend(A: ConcreteAlgebra, M: Union[Submodule, Sequence[FreeModElem]], rank: int = None) -> DirectExtension:
    if isinstance(M, Submodule):
        return DirectExtension(A, list(M.gens), M.rank)
    return DirectExtension(A, M, rank)


# ---------------------------------------------------------------------------
# avoidance and discrimination


@dataclass
class Avoidance:
    u: FreeModElem
    u0: FreeModElem
    rung: int
    scalar_ladder: bool  # True when R has no variables and the ladder is u0, 2 u0, 3 u0, ...


def ladder_rung(u0: FreeModElem, m: int) -> FreeModElem:
    """u0 . y_1^m, or u0 . (m+1) over a ring with no variables."""
    R = u0.ring
    if R.nvars:
        return u0 * R.gen(1) ** m
    return u0 * (m + 1)


def avoidance_element(M: Union[Submodule, Sequence[FreeModElem]],
                      constraints: Sequence[Tuple[FreeModElem, Poly]]) -> Avoidance:
    """First rung u of u0, u0 y_1, u0 y_1^2, ... with u . f_i != u_i for all i."""
    gens = M.gens if isinstance(M, Submodule) else list(M)
    u0 = next((g for g in gens if g), None)
    if u0 is None:
        raise EmptyInputError("M is the zero module")
    for ui, fi in constraints:
        if not fi:
            raise ZeroElementError("constraint with a zero polynomial")
    for m in range(len(constraints) + 1):
        u = ladder_rung(u0, m)
        if all(u * fi != ui for ui, fi in constraints):
            return Avoidance(u, u0, m, not u0.ring.nvars)
    raise VerificationFailure("every rung of the ladder violates a constraint",
                              counterexample=[(str(ui), str(fi)) for ui, fi in constraints])


def projection_weights(R: PolyRing, s: int, step: int) -> List[Poly]:
    """Images of t_1..t_s under T_s -> T_1: y_1^(j step), or step^j without variables."""
    if R.nvars:
        return [R.gen(1) ** (j * step) for j in range(s)]
    return [R.const(step ** j) for j in range(s)]


def _project(m: FreeModElem, weights: Sequence[Poly]) -> Poly:
    acc = m.ring.zero
    for i, g in m.coords.items():
        acc = acc + g * weights[i - 1]
    return acc


@dataclass
class Discrimination:
    """A-homomorphism A + M -> A: t_j -> t . w_j, then t -> u in Fit(A)."""

    ext: DirectExtension
    elems: List[ExtElem]
    step: int
    weights: List[Poly]
    u: MatElem
    avoidance: Optional[Avoidance] = None
    images: List[MatElem] = field(default_factory=list)

    def project(self, m: FreeModElem) -> Poly:
        return _project(m, self.weights)

    def __call__(self, x: ExtElem) -> MatElem:
        return x.a + self.ext.base.act(self.u, self.project(x.m))

    def verify(self) -> None:
        """Raise VerificationFailure unless the map is an A-fixing homomorphism keeping elems nonzero."""
        E, A = self.ext, self.ext.base
        if not A.in_fit(self.u):
            raise VerificationFailure(f"{self.u} is not in Fit(A)")
        images = [self(x) for x in self.elems]
        for x, img in zip(self.elems, images):
            if not img:
                raise VerificationFailure("element mapped to zero", counterexample=str(x))
            if not x.m and img != x.a:
                raise VerificationFailure("an element of A moved", counterexample=str(x))
        for g in A.gens:
            if self(E.include(g)) != g:
                raise VerificationFailure("a generator of A moved", counterexample=str(g))
        pool = list(self.elems) + [E.include(g) for g in A.gens] + [E.elem(None, g, check=False) for g in E.gens]
        for i, x in enumerate(pool):
            for y in pool[i + 1:]:
                if self(x.bracket(y)) != self(x).bracket(self(y)):
                    raise VerificationFailure("bracket not preserved", counterexample=(str(x), str(y)))
        self.images = images

    def certificate(self) -> dict:
        av = self.avoidance
        R = self.ext.ring
        return envelope("discrimination", {
            **self.ext.to_json(),
            "step": self.step,
            "weights": [str(w) for w in self.weights],
            "rung": av.rung if av else None,
            "ladder_variable": "x1" if R.nvars else None,
            "u": str(self.u),
            "elements": [str(x) for x in self.elems],
            "images": [str(img) for img in self.images],
        })


def _choose_step(R: PolyRing, s: int, ms: Sequence[FreeModElem]) -> int:
    if R.nvars:
        limit = 2 + max((g.degree(1) for m in ms for g in m.coords.values()), default=0)
    else:
        limit = 2 + len(ms) * max(s - 1, 1)
    for step in range(1, limit + 1):
        w = projection_weights(R, s, step)
        if all(_project(m, w) for m in ms):
            return step
    raise VerificationFailure("no projection T_s -> T_1 keeps the module parts nonzero",
                              counterexample=[str(m) for m in ms])


def discriminate(E: DirectExtension, elems: Sequence[ExtElem]) -> Discrimination:
    """An A-fixing homomorphism A + M -> A sending every element of ``elems`` to a nonzero element."""
    if not elems:
        raise EmptyInputError("nothing to discriminate")
    for x in elems:
        if not x:
            raise ZeroElementError("cannot keep the zero element nonzero")
    A, R = E.base, E.ring
    step = _choose_step(R, E.s, [x.m for x in elems if x.m])
    weights = projection_weights(R, E.s, step)
    keys, S = A.fit_module
    if S is None:
        raise EmptyInputError("the algebra has no Fitting generators")
    pos = {k: i + 1 for i, k in enumerate(keys)}
    constraints = []
    for x in elems:
        p = _project(x.m, weights)
        if not p or (x.a.f and not A.is_abelian):
            continue
        target = A.split(-x.a)
        if any(k not in pos for k in target):
            continue  # -a has coordinates outside the Fitting module; u.p never reaches it
        constraints.append((FreeModElem(R, len(keys), {pos[k]: h for k, h in target.items()}), p))
    av = avoidance_element(S, constraints)
    disc = Discrimination(E, list(elems), step, weights, A.unflatten(keys, av.u), av)
    disc.verify()
    return disc


def approximate(E: DirectExtension, m: FreeModElem) -> Discrimination:
    """Send a nonzero m in M to a nonzero element of Fit(A)."""
    return discriminate(E, [E.elem(None, m)])


def validate_certificate(doc: dict) -> bool:
    """Rebuild a discrimination from its certificate and recheck every claim."""
    p = open_envelope(doc, "discrimination")
    E = DirectExtension.from_json(p)
    A, R = E.base, E.ring
    weights = [parse_poly(t, R) for t in p["weights"]]
    if len(weights) != E.s:
        raise VerificationFailure("wrong number of projection weights")
    if R.nvars:
        exps = []
        for w in weights:
            if len(w.terms) != 1 or w.leading_coeff() != 1 or any(w.leading_monomial()[1:]):
                raise VerificationFailure(f"weight {w} is not a power of x1")
            exps.append(w.leading_monomial()[0])
        if any(a >= b for a, b in zip(exps, exps[1:])):
            raise VerificationFailure("weight exponents must increase strictly")
    u = A.ctx.parse(p["u"])
    elems = [E.parse_elem(t) for t in p["elements"]]
    disc = Discrimination(E, elems, p["step"], weights, u)
    disc.verify()
    recorded = [A.ctx.parse(t) for t in p["images"]]
    if recorded != disc.images:
        raise VerificationFailure("recorded images differ from recomputed ones")
    return True


# ---------------------------------------------------------------------------
# hom_R(M, Fit(A)) and hom_A(A + M, A)


class ModuleMap:
    """R-linear map M -> Fit(A) given by the images of M's generators."""

    def __init__(self, ext: DirectExtension, images: Sequence[MatElem]):
        A = ext.base
        images = list(images)
        if len(images) != len(ext.gens):
            raise RankMismatchError(f"{len(images)} images for {len(ext.gens)} generators")
        for img in images:
            if not A.in_fit(img):
                raise NotInFittingError(f"{img} is not in Fit(A)")
        self.ext = ext
        self.images = images
        if ext.module is not None:
            for rel in ext.module.syzygies:
                total = A.ctx.zero()
                for img, g in zip(images, rel):
                    if g:
                        total = total + A.act(img, g)
                if total:
                    raise RelationViolationError("images violate a relation of M", relation=[str(g) for g in rel])

    def __call__(self, m: FreeModElem) -> MatElem:
        A = self.ext.base
        if not m:
            return A.ctx.zero()
        coords = self.ext.module.member(m) if self.ext.module is not None else None
        if coords is None:
            raise NotInAlgebraError(f"{m} is not in M")
        out = A.ctx.zero()
        for img, g in zip(self.images, coords):
            if g:
                out = out + A.act(img, g)
        return out

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.ext is other.ext and self.images == other.images

    def __repr__(self):
        return f"ModuleMap([{', '.join(map(str, self.images))}])"


class ExtensionHom:
    """The A-homomorphism A + M -> A fixing A and restricting to phi on M."""

    def __init__(self, ext: DirectExtension, phi: ModuleMap):
        self.ext, self.phi = ext, phi

    def __call__(self, x: ExtElem) -> MatElem:
        return x.a + self.phi(x.m)


def hom_correspondence(ext: DirectExtension, phi: ModuleMap) -> ExtensionHom:
    if phi.ext is not ext:
        raise ContextMismatchError("module map defined on a different extension")
    return ExtensionHom(ext, phi)


def module_map_of(ext: DirectExtension, hom: Callable[[ExtElem], MatElem]) -> ModuleMap:
    """Restrict an A-fixing homomorphism A + M -> A to M."""
    for g in ext.base.gens:
        if hom(ext.include(g)) != g:
            raise VerificationFailure("the homomorphism does not fix A", counterexample=str(g))
    return ModuleMap(ext, [hom(ext.elem(None, g, check=False)) for g in ext.gens])


class ExtensionMap:
    """A + M1 -> A + M2, identity on A, induced by an R-linear psi: M1 -> M2."""

    def __init__(self, src: DirectExtension, dst: DirectExtension, images: Sequence[FreeModElem]):
        if src.base is not dst.base:
            raise ContextMismatchError("extensions of different algebras")
        images = list(images)
        if len(images) != len(src.gens):
            raise RankMismatchError(f"{len(images)} images for {len(src.gens)} generators")
        for img in images:
            if not dst.contains_m(img):
                raise NotInAlgebraError(f"{img} is not in the target module")
        self.src, self.dst, self.images = src, dst, images
        if src.module is not None:
            for rel in src.module.syzygies:
                if combine(images, rel, dst.ring, dst.s):
                    raise RelationViolationError("images violate a relation of M1", relation=[str(g) for g in rel])

    def module_apply(self, m: FreeModElem) -> FreeModElem:
        if not m:
            return FreeModElem.zero(self.dst.ring, self.dst.s)
        coords = self.src.module.member(m) if self.src.module is not None else None
        if coords is None:
            raise NotInAlgebraError(f"{m} is not in M1")
        return combine(self.images, coords, self.dst.ring, self.dst.s)

    def __call__(self, x: ExtElem) -> ExtElem:
        return ExtElem(self.dst, x.a, self.module_apply(x.m))

    @cached_property
    def _image_module(self) -> Optional[Submodule]:
        return Submodule(self.images) if any(self.images) else None

    def kernel_witnesses(self) -> List[FreeModElem]:
        """Nonzero elements of M1 killed by psi, one per relation of the images that M1 lacks."""
        if not self.images:
            return []
        out = []
        for rel in syzygies(self.images):
            v = combine(self.src.gens, rel, self.src.ring, self.src.s)
            if v:
                out.append(v)
        return out

    def is_injective(self) -> bool:
        return not self.kernel_witnesses()

    def preimage(self, m2: FreeModElem) -> Optional[FreeModElem]:
        if not m2:
            return FreeModElem.zero(self.src.ring, self.src.s)
        S = self._image_module
        coords = S.member(m2) if S is not None else None
        if coords is None:
            return None
        return combine(self.src.gens, coords, self.src.ring, self.src.s)

    def is_surjective(self) -> bool:
        return all(self.preimage(g) is not None for g in self.dst.gens)


# ---------------------------------------------------------------------------
# (A + M)_Delta against A_Delta + M_Delta


@dataclass
class CommutationReport:
    elements: int = 0
    brackets: int = 0
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


class _JointLocal:
    """(A + M)_Delta with the Fitting radical flattened jointly as R_Delta^(keys + s)."""

    def __init__(self, E: DirectExtension):
        A = E.base
        self.E, self.A = E, A
        keys, S = A.fit_module
        self.keys, self.nk = keys, len(keys)
        self.pos = {k: i + 1 for i, k in enumerate(keys)}
        R = A.module_ring
        n = self.nk + E.s
        self.n = n
        self.b_gens = [FreeModElem(R, n, dict(v.coords)) for v in S.gens]
        self.m_gens = [FreeModElem(R, n, {self.nk + i: g for i, g in m.coords.items()}) for m in E.gens]
        a = A.canonical.a_part
        self.products = {}
        for i in range(A.r):
            for j in range(A.r):
                if i != j:
                    split = A.split(a[i].bracket(a[j]))
                    self.products[(i, j)] = FreeModElem(R, n, {self.pos[k]: h for k, h in split.items()}).localize()

    def element(self, c: Sequence, hb: Sequence[LocalFrac], hm: Sequence[LocalFrac]) -> Tuple[Tuple, LocalModElem]:
        R = self.A.module_ring
        J = LocalModElem.zero(R, self.n)
        for g, q in zip(self.b_gens + self.m_gens, list(hb) + list(hm)):
            J = J + g.localize() * LocalFrac.of(q, R)
        return tuple(c), J

    def bracket(self, x, y):
        (c, J), (d, K) = x, y
        R = self.A.module_ring
        lam = lambda v: sum((R.gen(a + 1).scale(k) for a, k in enumerate(v) if k), R.zero)  # noqa: E731
        out = J * lam(d) - K * lam(c)
        for i, ci in enumerate(c):
            for j, dj in enumerate(d):
                if i != j and ci and dj:
                    out = out + self.products[(i, j)] * (ci * dj)
        return tuple(0 for _ in c), out

    def split(self, x) -> Tuple[LocalMatElem, LocalModElem]:
        """Read a joint element as (matrix-model element of A_Delta, element of M_Delta)."""
        c, J = x
        A = self.A
        ctx = A.ctx
        mat = ctx.zero().localize()
        for a, k in zip(A.canonical.a_part, c):
            if k:
                mat = mat + a * k
        for i, q in J.coords.items():
            if i <= self.nk:
                piece = A.join({self.keys[i - 1]: q.num})
                den = A.from_module_ring(q.den)
                mat = mat + LocalMatElem(ctx, ctx.ring.zero, piece.u.localize() * LocalFrac(ctx.ring.one, den))
        R = A.module_ring
        m = LocalModElem(R, self.E.s, {i - self.nk: q for i, q in J.coords.items() if i > self.nk})
        return mat, m


def localization_commutes(A: ConcreteAlgebra, M: Union[Submodule, Sequence[FreeModElem]], rank: int = None,
                          battery: int = 20, brackets: int = 20, seed: int = 0) -> CommutationReport:
    """Compare (A + M)_Delta with A_Delta + M_Delta on random elements and brackets."""
    from .sampling import random_poly, random_unit

    E = extend(A, M, rank)
    AD = localize(A)
    joint = _JointLocal(E)
    R = A.module_ring
    rng = random.Random(seed)
    report = CommutationReport()

    def sample():
        c = [A.field.convert(rng.randint(-3, 3)) for _ in range(A.r)]
        hb = [LocalFrac(random_poly(rng, R, 1, 3), random_unit(rng, R)) for _ in range(AD.l)]
        hm = [LocalFrac(random_poly(rng, R, 1, 3), random_unit(rng, R)) for _ in E.gens]
        return c, hb, hm

    def right(c, hb, hm):
        m = LocalModElem.zero(R, E.s)
        for g, q in zip(E.gens, hm):
            m = m + g.localize() * q
        return AD.elem(c, hb), m

    def compare(label, left, rgt):
        lmat, lm = joint.split(left)
        x, rm = rgt
        if lmat != x.to_mat() or lm != rm:
            report.mismatches.append(f"{label}: {lmat} & {lm}  vs  {x} & {rm}")

    samples = [sample() for _ in range(max(battery, 2))]
    for c, hb, hm in samples[:battery]:
        compare("element", joint.element(c, hb, hm), right(c, hb, hm))
        report.elements += 1
    for _ in range(brackets):
        s1, s2 = rng.sample(samples, 2)
        left = joint.bracket(joint.element(*s1), joint.element(*s2))
        (x1, m1), (x2, m2) = right(*s1), right(*s2)
        lam1, lam2 = AD._lam(x1.c), AD._lam(x2.c)
        rb = AD.bracket(x1, x2)
        if rb.to_mat() != x1.to_mat().bracket(x2.to_mat()):
            report.mismatches.append(f"A_Delta bracket disagrees with the matrix model on {x1}, {x2}")
        compare("bracket", left, (rb, m1 * lam2 - m2 * lam1))
        report.brackets += 1
    return report


# ---------------------------------------------------------------------------
# finite submodels


@dataclass
class EmbedCheck:
    checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def submodel_embed_check(elements: Sequence, phi: Callable, scalars: Sequence[int] = (2, -1)) -> EmbedCheck:
    """Check that phi respects +, scalars and the bracket and is injective on ``elements``."""
    rep = EmbedCheck()
    imgs = [phi(x) for x in elements]
    for x, fx in zip(elements, imgs):
        rep.checked += 1
        if x and not fx:
            rep.failures.append(f"{x} maps to zero")
        for k in scalars:
            if phi(x * k) != fx * k:
                rep.failures.append(f"scalar {k} not respected at {x}")
    for i, x in enumerate(elements):
        for j in range(i, len(elements)):
            y = elements[j]
            rep.checked += 1
            if phi(x + y) != imgs[i] + imgs[j]:
                rep.failures.append(f"sum not respected at {x}, {y}")
            if phi(x.bracket(y)) != imgs[i].bracket(imgs[j]):
                rep.failures.append(f"bracket not respected at {x}, {y}")
            if i != j and x != y and imgs[i] == imgs[j]:
                rep.failures.append(f"{x} and {y} collide")
    return rep
