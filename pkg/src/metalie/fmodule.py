"""Free modules over a polynomial ring, Groebner bases and syzygies.

Module terms are ordered position-over-term: ``u1 > u2 > ...`` first, then
graded lex on the monomial.  The Buchberger kernel works on flat mutable
dicts ``{(position, exponent): coeff}`` and converts at the boundary.
"""
from __future__ import annotations

import random
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import EmptyInputError, FieldMismatchError, MetalieError, RankMismatchError
from .jsonio import envelope, open_envelope
from .ring import (
    SCALARS,
    Field,
    Exponent,
    LocalFrac,
    Poly,
    PolyRing,
    Scalar,
    format_monomial,
    format_signed_terms,
    mono_divides,
    mono_lcm,
)

Term = Tuple[int, Exponent]


class FreeModElem:
    """Element of the free module R^rank with basis u1..u_rank."""

    __slots__ = ("ring", "rank", "coords", "_hash")

    def __init__(self, ring: PolyRing, rank: int, coords: Dict[int, Poly] = None):
        self.ring = ring
        self.rank = rank
        out = {}
        for i, f in (coords or {}).items():
            if not 1 <= i <= rank:
                raise RankMismatchError(f"u{i} outside rank {rank}")
            ring.check(f)
            if f:
                out[i] = f
        self.coords = out
        self._hash = None

    @classmethod
    def basis(cls, ring: PolyRing, rank: int, i: int) -> "FreeModElem":
        return cls(ring, rank, {i: ring.one})

    @classmethod
    def zero(cls, ring: PolyRing, rank: int) -> "FreeModElem":
        return cls(ring, rank, {})

    @classmethod
    def from_list(cls, polys: Sequence[Poly], ring: PolyRing = None) -> "FreeModElem":
        ring = ring or polys[0].ring
        return cls(ring, len(polys), {i + 1: f for i, f in enumerate(polys)})

    def _check(self, other: "FreeModElem"):
        if other.ring != self.ring:
            raise FieldMismatchError(f"module over {other.ring} vs {self.ring}")
        if other.rank != self.rank:
            raise RankMismatchError(f"rank {other.rank} vs {self.rank}")

    def coord(self, i: int) -> Poly:
        return self.coords.get(i, self.ring.zero)

    def to_list(self) -> List[Poly]:
        return [self.coord(i) for i in range(1, self.rank + 1)]

    def __add__(self, other):
        if not isinstance(other, FreeModElem):
            return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for i, f in other.coords.items():
            out[i] = out[i] + f if i in out else f
        return FreeModElem(self.ring, self.rank, out)

    def __neg__(self):
        return FreeModElem(self.ring, self.rank, {i: -f for i, f in self.coords.items()})

    def __sub__(self, other):
        if not isinstance(other, FreeModElem):
            return NotImplemented
        return self + (-other)

    def __mul__(self, f):
        """Right module action ``v * f``."""
        if isinstance(f, SCALARS):
            f = self.ring.const(f)
        if isinstance(f, LocalFrac):
            return self.localize() * f
        if not isinstance(f, Poly):
            return NotImplemented
        self.ring.check(f)
        return FreeModElem(self.ring, self.rank, {i: g * f for i, g in self.coords.items()})

    __rmul__ = __mul__

    def act(self, f) -> "FreeModElem":
        return self * f

    def __eq__(self, other):
        if not isinstance(other, FreeModElem):
            return NotImplemented
        return self.ring == other.ring and self.rank == other.rank and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rank, frozenset(self.coords.items())))
        return self._hash

    def __bool__(self):
        return bool(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def localize(self) -> "LocalModElem":
        """Canonical inclusion T -> T_Delta."""
        return LocalModElem(
            self.ring, self.rank, {i: LocalFrac(f, self.ring.one, reduce=False) for i, f in self.coords.items()}
        )

    def compose(self, images: Sequence[Poly], ring: PolyRing) -> "FreeModElem":
        return FreeModElem(ring, self.rank, {i: f.compose(images, ring) for i, f in self.coords.items()})

    def leading_term(self) -> Tuple[Term, Scalar]:
        i = min(self.coords)
        e = self.coords[i].leading_monomial()
        return (i, e), self.coords[i].terms[e]

    def max_degree(self) -> int:
        return max((f.total_degree() for f in self.coords.values()), default=-1)

    def __str__(self):
        return format_module(self)

    def __repr__(self):
        return f"FreeModElem({self})"


def format_module(v: FreeModElem) -> str:
    pieces = []
    for i in sorted(v.coords):
        for e, c in v.coords[i].items():
            mono = format_monomial(e)
            pieces.append((c, f"{mono}*u{i}" if mono else f"u{i}"))
    return format_signed_terms(pieces, v.ring.field)


class LocalModElem:
    """Element of T_Delta: coordinates in R_Delta."""

    __slots__ = ("ring", "rank", "coords")

    def __init__(self, ring: PolyRing, rank: int, coords: Dict[int, LocalFrac] = None):
        self.ring = ring
        self.rank = rank
        out = {}
        for i, q in (coords or {}).items():
            if not 1 <= i <= rank:
                raise RankMismatchError(f"u{i} outside rank {rank}")
            q = LocalFrac.of(q, ring)
            ring.check(q.num)
            if q:
                out[i] = q
        self.coords = out

    @classmethod
    def zero(cls, ring: PolyRing, rank: int) -> "LocalModElem":
        return cls(ring, rank, {})

    @classmethod
    def of(cls, v) -> "LocalModElem":
        return v if isinstance(v, LocalModElem) else v.localize()

    def _check(self, other):
        if other.ring != self.ring:
            raise FieldMismatchError(f"module over {other.ring} vs {self.ring}")
        if other.rank != self.rank:
            raise RankMismatchError(f"rank {other.rank} vs {self.rank}")

    def coord(self, i: int) -> LocalFrac:
        return self.coords.get(i) or LocalFrac.of(self.ring.zero)

    def __add__(self, other):
        if isinstance(other, FreeModElem):
            other = other.localize()
        if not isinstance(other, LocalModElem):
            return NotImplemented
        self._check(other)
        out = dict(self.coords)
        for i, q in other.coords.items():
            out[i] = out[i] + q if i in out else q
        return LocalModElem(self.ring, self.rank, out)

    __radd__ = __add__

    def __neg__(self):
        return LocalModElem(self.ring, self.rank, {i: -q for i, q in self.coords.items()})

    def __sub__(self, other):
        if isinstance(other, FreeModElem):
            other = other.localize()
        if not isinstance(other, LocalModElem):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if isinstance(other, FreeModElem):
            return other.localize() - self
        return NotImplemented

    def __mul__(self, f):
        if isinstance(f, (*SCALARS, Poly)):
            f = LocalFrac.of(f, self.ring)
        if not isinstance(f, LocalFrac):
            return NotImplemented
        return LocalModElem(self.ring, self.rank, {i: q * f for i, q in self.coords.items()})

    __rmul__ = __mul__

    def __truediv__(self, f):
        f = LocalFrac.of(f, self.ring)
        return self * f.inverse()

    def __eq__(self, other):
        if isinstance(other, FreeModElem):
            other = other.localize()
        if not isinstance(other, LocalModElem):
            return NotImplemented
        if self.ring != other.ring or self.rank != other.rank:
            return False
        if set(self.coords) != set(other.coords):
            return False
        return all(self.coords[i] == other.coords[i] for i in self.coords)

    def __hash__(self):
        return hash((self.ring, self.rank, frozenset(self.coords)))

    def __bool__(self):
        return bool(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def denominators(self) -> List[Poly]:
        return [q.den for q in self.coords.values()]

    def is_polynomial(self) -> bool:
        return all(q.is_polynomial() for q in self.coords.values())

    def to_free(self) -> FreeModElem:
        return FreeModElem(self.ring, self.rank, {i: q.to_poly() for i, q in self.coords.items()})

    def __str__(self):
        if self.is_polynomial():
            return str(self.to_free())
        out = []
        for i in sorted(self.coords):
            q = self.coords[i]
            if q.den == 1:
                piece = str(FreeModElem(self.ring, self.rank, {i: q.num}))
            elif out and self.ring.field.is_rational and q.num.leading_coeff() < 0:
                piece = f"-({-q.num})/({q.den})*u{i}"
            else:
                piece = f"({q.num})/({q.den})*u{i}"
            if not out:
                out.append(piece)
            elif piece.startswith("-"):
                out.append(f" - {piece[1:]}")
            else:
                out.append(f" + {piece}")
        return "".join(out)

    def __repr__(self):
        return f"LocalModElem({self})"


# ---------------------------------------------------------------------------
# flat kernel


def _key(t: Term):
    return (-t[0], sum(t[1]), t[1])


def _flat(v: FreeModElem) -> Dict[Term, Scalar]:
    return {(i, e): c for i, f in v.coords.items() for e, c in f.terms.items()}


def _unflat(d: Dict[Term, Scalar], ring: PolyRing, rank: int) -> FreeModElem:
    coords: Dict[int, Dict[Exponent, Scalar]] = {}
    for (i, e), c in d.items():
        coords.setdefault(i, {})[e] = c
    return FreeModElem(ring, rank, {i: Poly(ring, t) for i, t in coords.items()})


def _lt(d: Dict[Term, Scalar]) -> Term:
    return max(d, key=_key)


def _axpy(dst: dict, src: dict, coeff, mono: Exponent, p: int, vec: bool) -> None:
    """dst += coeff * x^mono * src, in place."""
    for t, c in src.items():
        if vec:
            k = (t[0], tuple(a + b for a, b in zip(t[1], mono)))
        else:
            k = tuple(a + b for a, b in zip(t, mono))
        v = dst.get(k, 0) + coeff * c
        if p:
            v %= p
        if v:
            dst[k] = v
        else:
            dst.pop(k, None)


def _padd(dst: dict, src: dict, coeff, mono: Exponent, p: int) -> None:
    _axpy(dst, src, coeff, mono, p, vec=False)


class _Kernel:
    """Buchberger state with lifts back to the original generators."""

    def __init__(self, ring: PolyRing, gens: Sequence[FreeModElem], want_syzygies: bool):
        self.ring = ring
        self.field = ring.field
        self.p = ring.field.p
        self.nv = ring.nvars
        self.one = (0,) * self.nv
        self.ngens = len(gens)
        self.G: List[dict] = []
        self.LT: List[Term] = []
        # lift[k]: {orig_index: poly-dict} with G[k] = sum lift[k][i] * gens[i]
        self.lift: List[Dict[int, dict]] = []
        self.syz_G: List[Dict[int, dict]] = []
        self.want_syzygies = want_syzygies
        self.orig_pos: Dict[int, int] = {}
        for i, v in enumerate(gens):
            d = _flat(v)
            if not d:
                continue
            lt = _lt(d)
            inv = self.field.div(1, d[lt])
            self._scale(d, inv)
            self.orig_pos[i] = len(self.G)
            self.G.append(d)
            self.LT.append(lt)
            self.lift.append({i: {self.one: inv}})

    def _scale(self, d: dict, c) -> None:
        p = self.p
        for k in d:
            d[k] = d[k] * c % p if p else d[k] * c

    def reduce(self, v: dict, basis: Sequence[int] = None, rng: random.Random = None, track=True):
        """Full reduction; returns (remainder, quotients keyed by G index)."""
        G, LT, p, div = self.G, self.LT, self.p, self.field.div
        idx = list(range(len(G))) if basis is None else list(basis)
        v = dict(v)
        rem: Dict[Term, Scalar] = {}
        quot: Dict[int, dict] = {}
        while v:
            if rng is None:
                t = _lt(v)
                choices = None
                for k in idx:
                    lt = LT[k]
                    if lt[0] == t[0] and mono_divides(lt[1], t[1]):
                        choices = k
                        break
                if choices is None:
                    rem[t] = v.pop(t)
                    continue
                k = choices
            else:
                reducible = []
                for t in sorted(v, key=_key):
                    ks = [k for k in idx if LT[k][0] == t[0] and mono_divides(LT[k][1], t[1])]
                    if ks:
                        reducible.append((t, ks))
                    else:
                        # later steps may push more weight onto an already irreducible term
                        val = rem.get(t, 0) + v.pop(t)
                        if p:
                            val %= p
                        if val:
                            rem[t] = val
                        else:
                            rem.pop(t, None)
                if not reducible:
                    break
                t, ks = rng.choice(reducible)
                k = rng.choice(ks)
            c = v[t]
            q = div(c, G[k][LT[k]])
            mono = tuple(a - b for a, b in zip(t[1], LT[k][1]))
            _axpy(v, G[k], -q if not p else (-q) % p, mono, p, vec=True)
            if track:
                qk = quot.setdefault(k, {})
                val = qk.get(mono, 0) + q
                if p:
                    val %= p
                if val:
                    qk[mono] = val
                else:
                    qk.pop(mono, None)
        return rem, quot

    def lift_of(self, quot: Dict[int, dict]) -> Dict[int, dict]:
        out: Dict[int, dict] = {}
        for k, qk in quot.items():
            for i, poly in self.lift[k].items():
                acc = out.setdefault(i, {})
                for mono, c in qk.items():
                    _padd(acc, poly, c, mono, self.p)
        return {i: d for i, d in out.items() if d}

    def _spair(self, i: int, j: int):
        lti, ltj = self.LT[i], self.LT[j]
        lcm = mono_lcm(lti[1], ltj[1])
        mi = tuple(a - b for a, b in zip(lcm, lti[1]))
        mj = tuple(a - b for a, b in zip(lcm, ltj[1]))
        s: Dict[Term, Scalar] = {}
        _axpy(s, self.G[i], 1, mi, self.p, vec=True)
        _axpy(s, self.G[j], -1 if not self.p else self.p - 1, mj, self.p, vec=True)
        return s, mi, mj

    def run(self) -> None:
        n0 = len(self.G)
        pending = {(i, j) for j in range(n0) for i in range(j) if self.LT[i][0] == self.LT[j][0]}
        done = set()

        def lcm_of(pair):
            i, j = pair
            return (self.LT[i][0], mono_lcm(self.LT[i][1], self.LT[j][1]))

        while pending:
            pair = min(pending, key=lambda pr: (sum(lcm_of(pr)[1]), pr))
            pending.discard(pair)
            i, j = pair
            pos, lcm = lcm_of(pair)
            chain = False
            for k in range(len(self.G)):
                if k in (i, j) or self.LT[k][0] != pos or not mono_divides(self.LT[k][1], lcm):
                    continue
                if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
                    chain = True
                    break
            if chain:
                done.add(pair)
                continue
            s, mi, mj = self._spair(i, j)
            h, quot = self.reduce(s)
            if self.want_syzygies or h:
                sigma: Dict[int, dict] = {}
                sigma[i] = {mi: self.field.convert(1)}
                sigma[j] = {mj: self.field.convert(-1)}
                for k, qk in quot.items():
                    acc = sigma.setdefault(k, {})
                    _padd(acc, qk, -1, self.one, self.p)
            if h:
                lt = _lt(h)
                lc = h[lt]
                inv = self.field.div(1, lc)
                self._scale(h, inv)
                # h_monic = inv * (S - sum q_k G_k)
                lifted = self.lift_of({k: d for k, d in sigma.items() if d})
                new_lift = {}
                for o, d in lifted.items():
                    acc = {}
                    _padd(acc, d, inv, self.one, self.p)
                    if acc:
                        new_lift[o] = acc
                new = len(self.G)
                self.G.append(h)
                self.LT.append(lt)
                self.lift.append(new_lift)
                if self.want_syzygies:
                    sigma[new] = {self.one: self.field.neg(lc)}
                for k in range(new):
                    if self.LT[k][0] == lt[0]:
                        pending.add((k, new))
            if self.want_syzygies:
                self.syz_G.append({k: d for k, d in sigma.items() if d})
            done.add(pair)

    def interreduced(self) -> List[int]:
        """Indices of a minimal basis; elements are rewritten into reduced form."""
        # smallest leading terms first, so divisibility only ever looks back
        order = sorted(range(len(self.G)), key=lambda k: (_key(self.LT[k]), k))
        keep: List[int] = []
        for k in order:
            lt = self.LT[k]
            if any(self.LT[m][0] == lt[0] and mono_divides(self.LT[m][1], lt[1]) for m in keep):
                continue
            keep.append(k)
        reduced = []
        for k in keep:
            others = [m for m in keep if m != k]
            rem, quot = self.reduce(self.G[k], basis=others)
            # rem = G[k] - sum quot * G
            lift = {i: dict(d) for i, d in self.lift[k].items()}
            for o, d in self.lift_of(quot).items():
                acc = lift.setdefault(o, {})
                _padd(acc, d, -1, self.one, self.p)
            reduced.append((k, rem, {i: d for i, d in lift.items() if d}))
        for k, rem, lift in reduced:
            self.G[k] = rem
            self.lift[k] = lift
        return sorted(keep, key=lambda k: _key(self.LT[k]), reverse=True)


def _check_gens(gens: Sequence[FreeModElem]) -> Tuple[PolyRing, int]:
    if not gens:
        raise EmptyInputError("a submodule needs at least one generator")
    ring, rank = gens[0].ring, gens[0].rank
    for g in gens[1:]:
        if g.ring != ring:
            raise FieldMismatchError("generators over different rings")
        if g.rank != rank:
            raise RankMismatchError("generators of different rank")
    return ring, rank


def _poly(d: dict, ring: PolyRing) -> Poly:
    return Poly(ring, dict(d))


class Submodule:
    """Submodule of a free module given by generators, with a cached reduced Groebner basis."""

    def __init__(self, gens: Sequence[FreeModElem]):
        self.ring, self.rank = _check_gens(gens)
        self.gens: Tuple[FreeModElem, ...] = tuple(gens)

    @cached_property
    def _kernel(self) -> Tuple[_Kernel, List[int]]:
        k = _Kernel(self.ring, self.gens, want_syzygies=False)
        k.run()
        return k, k.interreduced()

    @property
    def basis(self) -> List[FreeModElem]:
        k, idx = self._kernel
        return [_unflat(k.G[i], self.ring, self.rank) for i in idx]

    def reduce(self, v: FreeModElem, rng: random.Random = None) -> FreeModElem:
        """Normal form of v modulo the submodule; ``rng`` picks reducers at random."""
        self._check(v)
        k, idx = self._kernel
        rem, _ = k.reduce(_flat(v), basis=idx, rng=rng, track=False)
        return _unflat(rem, self.ring, self.rank)

    def contains(self, v: FreeModElem) -> bool:
        return self.reduce(v).is_zero()

    __contains__ = contains

    def member(self, v: FreeModElem) -> Optional[List[Poly]]:
        """Coordinates f with sum gens_i * f_i == v, or None."""
        self._check(v)
        k, idx = self._kernel
        rem, quot = k.reduce(_flat(v), basis=idx)
        if rem:
            return None
        lifted = k.lift_of(quot)
        coords = [_poly(lifted.get(i, {}), self.ring) for i in range(len(self.gens))]
        back = combine(self.gens, coords, self.ring, self.rank)
        if back != v:
            raise MetalieError("membership certificate failed back-substitution")
        return coords

    def includes(self, other: "Submodule") -> bool:
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "Submodule") -> bool:
        """Equality as submodules, by mutual reduction."""
        return self.includes(other) and other.includes(self)

    @cached_property
    def syzygies(self) -> List[List[Poly]]:
        return syzygies(self.gens)

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.gens)

    def to_json(self) -> dict:
        return envelope("submodule", {
            "field": self.ring.field.tag,
            "nvars": self.ring.nvars,
            "rank": self.rank,
            "generators": [str(g) for g in self.gens],
            "basis": [str(b) for b in self.basis],
            "syzygies": [[str(f) for f in rel] for rel in self.syzygies],
        })

    @classmethod
    def from_json(cls, doc: dict) -> "Submodule":
        from .parsing import parse_module

        doc = open_envelope(doc, "submodule")
        ring = PolyRing(Field.from_tag(doc["field"]), doc["nvars"])
        return cls([parse_module(t, ring, doc["rank"]) for t in doc["generators"]])

    def _check(self, v: FreeModElem):
        if v.ring != self.ring:
            raise FieldMismatchError("element and submodule over different rings")
        if v.rank != self.rank:
            raise RankMismatchError(f"rank {v.rank} vs {self.rank}")

    def __repr__(self):
        return f"Submodule([{', '.join(str(g) for g in self.gens)}])"


def combine(gens: Sequence[FreeModElem], coords: Sequence[Poly], ring: PolyRing = None, rank: int = None) -> FreeModElem:
    """sum gens_i * coords_i"""
    if ring is None:
        ring, rank = gens[0].ring, gens[0].rank
    out = FreeModElem.zero(ring, rank)
    for g, f in zip(gens, coords):
        if f and g:
            out = out + g * f
    return out


def groebner(gens: Sequence[FreeModElem]) -> Submodule:
    s = Submodule(gens)
    s.basis
    return s


def member(v: FreeModElem, S: Submodule) -> Optional[List[Poly]]:
    return S.member(v)


def syzygies(gens: Sequence[FreeModElem]) -> List[List[Poly]]:
    """A generating set of the relation module of ``gens``.

    Each vector ``f`` satisfies ``sum gens_i * f_i == 0``.
    """
    ring, rank = _check_gens(gens)
    k = _Kernel(ring, gens, want_syzygies=True)
    k.run()
    n = len(gens)
    out: List[List[Poly]] = []
    seen = set()
    for i, g in enumerate(gens):
        if g.is_zero():
            vec = [ring.one if j == i else ring.zero for j in range(n)]
            out.append(vec)
            seen.add(tuple(vec))
    raw = []
    for sigma in k.syz_G:
        lifted = k.lift_of(sigma)
        vec = [_poly(lifted.get(i, {}), ring) for i in range(n)]
        if any(vec):
            raw.append(FreeModElem.from_list(vec, ring))
    # the reduced Groebner basis of the relation module is canonical and small
    if raw:
        for v in Submodule(raw).basis:
            vec = v.to_list()
            key = tuple(vec)
            if key not in seen:
                seen.add(key)
                out.append(vec)
    for vec in out:
        if not combine(gens, vec, ring, rank).is_zero():
            raise MetalieError("computed syzygy does not vanish")
    return out


def syzygy_module(gens: Sequence[FreeModElem]) -> Optional[Submodule]:
    """The relation module as a submodule of R^len(gens) (None if trivial)."""
    ring, _ = _check_gens(gens)
    vecs = syzygies(gens)
    if not vecs:
        return None
    return Submodule([FreeModElem.from_list(v, ring) for v in vecs])


def localize_elem(v: FreeModElem) -> LocalModElem:
    return v.localize()
