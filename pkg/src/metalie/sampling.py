"""Seeded random generators for polynomials, module elements, matrix-algebra
elements and Lie terms.  All take an explicit ``random.Random``."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import List

from .fmodule import FreeModElem
from .freelie import Bracket, Gen, LieTerm, Scale, Sum
from .matlie import MatContext, MatElem
from .ring import Poly, PolyRing


def _monomials(nvars: int, max_degree: int):
    for d in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            yield tuple(e)


def random_poly(rng: random.Random, ring: PolyRing, max_degree: int = 2, coeff: int = 5,
                terms: int = 3, constant: bool = True) -> Poly:
    monos = [e for e in _monomials(ring.nvars, max_degree) if constant or any(e)]
    if not monos:
        return ring.zero
    k = rng.randint(0, min(terms, len(monos)))
    picked = rng.sample(monos, k)
    return ring.from_dict({e: rng.randint(-coeff, coeff) for e in picked})


def random_nonzero_poly(rng: random.Random, ring: PolyRing, max_degree: int = 2, coeff: int = 5) -> Poly:
    while True:
        f = random_poly(rng, ring, max_degree, coeff)
        if f:
            return f


def random_delta_poly(rng: random.Random, ring: PolyRing, max_degree: int = 2, coeff: int = 3) -> Poly:
    """A random polynomial with zero constant term."""
    return random_poly(rng, ring, max_degree, coeff, constant=False)


def random_unit(rng: random.Random, ring: PolyRing, max_degree: int = 1, coeff: int = 3) -> Poly:
    """A random polynomial with constant term 1."""
    return ring.one + random_delta_poly(rng, ring, max_degree, coeff)


def random_linear_form(rng: random.Random, ring: PolyRing, coeff: int = 5) -> Poly:
    return ring.from_dict({tuple(int(i == j) for j in range(ring.nvars)): rng.randint(-coeff, coeff)
                           for i in range(ring.nvars)})


def random_module_elem(rng: random.Random, ring: PolyRing, rank: int, max_degree: int = 2, coeff: int = 5) -> FreeModElem:
    return FreeModElem(ring, rank, {i: random_poly(rng, ring, max_degree, coeff) for i in range(1, rank + 1)})


def random_mat(rng: random.Random, ctx: MatContext, max_degree: int = 2, coeff: int = 5) -> MatElem:
    ring = ctx.ring
    f = random_linear_form(rng, ring, coeff) if ctx.m0 else random_poly(rng, ring, max_degree, coeff)
    return MatElem(ctx, f, random_module_elem(rng, ring, ctx.rank, max_degree, coeff))


def random_context(rng: random.Random, max_vars: int = 3, max_rank: int = 3) -> MatContext:
    return MatContext(nvars=rng.randint(1, max_vars), rank=rng.randint(1, max_rank))


def random_lie_term(rng: random.Random, rank: int, depth: int) -> LieTerm:
    """A random term whose tree depth is at most ``depth``."""
    if depth <= 0:
        return Gen(rng.randint(1, rank))
    roll = rng.random()
    if roll < 0.2:
        return Gen(rng.randint(1, rank))
    if roll < 0.35:
        return Scale(Fraction(rng.choice([-3, -2, -1, 2, 3])), random_lie_term(rng, rank, depth - 1))
    if roll < 0.5:
        return Sum(tuple(random_lie_term(rng, rank, depth - 1) for _ in range(rng.randint(2, 3))))
    return Bracket(random_lie_term(rng, rank, depth - 1), random_lie_term(rng, rank, depth - 1))


def random_word(rng: random.Random, rank: int, length: int) -> List[int]:
    return [rng.randint(1, rank) for _ in range(length)]
