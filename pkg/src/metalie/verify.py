"""Randomized, seeded checks of the structural claims the library relies on.

Each criterion draws from its own ``random.Random`` derived from the seed and
its index, so results do not depend on execution order or parallelism.
"""
from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from .errors import MetalieError, VerificationFailure
from .ext import (
    ExtensionMap,
    ModuleMap,
    check_cdelta,
    clear_denominators,
    discriminate,
    extend,
    hom_correspondence,
    localization_commutes,
    localize,
    module_map_of,
    submodel_embed_check,
    validate_certificate,
)
from .fmodule import FreeModElem, Submodule
from .freelie import (
    NormalForm,
    context,
    fit_presentation,
    gamma,
    normalize,
    normalized_monomials,
    word,
)
from .freelie import Bracket, Sum
from .linalg import rank as matrix_rank
from .matlie import MatContext, check_vanishing_implications, coordinate_vector
from .ring import QQ, LocalFrac
from .sampling import random_lie_term, random_mat, random_poly, random_unit
from .ualg import ConcreteAlgebra, embed_abstract, phi_one_plus_f, presentation, same_relations


class CriterionFailure(VerificationFailure):
    pass


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    counterexample: Optional[str] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.index:2d}  {self.name}: {self.detail}"


def _require(cond: bool, msg: str, counterexample=None) -> None:
    if not cond:
        raise CriterionFailure(msg, counterexample)


def _free(rank: int) -> ConcreteAlgebra:
    ctx = context(rank)
    return ConcreteAlgebra(ctx, [ctx.generator(i) for i in range(1, rank + 1)])


def _random_algebra(rng: random.Random, nvars: int = 3, rank: int = 3, ngens: int = 3, non_abelian: bool = True) -> ConcreteAlgebra:
    ctx = MatContext(nvars, rank)
    while True:
        A = ConcreteAlgebra(ctx, [random_mat(rng, ctx, 1, 3) for _ in range(ngens)])
        if not non_abelian or not A.is_abelian:
            return A


def _random_module(rng: random.Random, R, s: int, max_gens: int = 3) -> List[FreeModElem]:
    while True:
        gens = [FreeModElem(R, s, {i: random_poly(rng, R, 1, 3) for i in range(1, s + 1)})
                for _ in range(rng.randint(1, max_gens))]
        if any(gens):
            return gens


# ---------------------------------------------------------------------------
# the criteria


def lie_axioms(rng: random.Random) -> str:
    n = 1000
    for k in range(n):
        ctx = MatContext(rng.randint(1, 3), rng.randint(1, 3))
        a, b, c, d = (random_mat(rng, ctx, 3, 5) for _ in range(4))
        _require(not a.bracket(a), "a o a != 0", str(a))
        _require(a.bracket(b) == -b.bracket(a), "anti-commutativity", (str(a), str(b)))
        jac = a.bracket(b).bracket(c) + b.bracket(c).bracket(a) + c.bracket(a).bracket(b)
        _require(not jac, "Jacobi identity", (str(a), str(b), str(c)))
        _require(not a.bracket(b).bracket(c.bracket(d)), "metabelian identity", (str(a), str(b), str(c), str(d)))
    return f"{n} random quadruples: anti-commutativity, Jacobi, metabelian"


def _zero_term(rng: random.Random, rank: int):
    """A random term that vanishes in every metabelian Lie algebra."""
    t = [random_lie_term(rng, rank, 2) for _ in range(4)]
    kind = rng.randrange(3)
    if kind == 0:
        return Bracket(t[0], t[0])
    if kind == 1:
        return Sum((Bracket(Bracket(t[0], t[1]), t[2]), Bracket(Bracket(t[1], t[2]), t[0]), Bracket(Bracket(t[2], t[0]), t[1])))
    return Bracket(Bracket(t[0], t[1]), Bracket(t[2], t[3]))


def normal_form_soundness(rng: random.Random) -> str:
    n = 500
    zeros = 0
    for k in range(n):
        rank = rng.randint(1, 4)
        t = _zero_term(rng, rank) if k % 5 == 4 else random_lie_term(rng, rank, 5)
        nf = normalize(t)
        g = gamma(t, rank)
        _require(g == gamma(nf.to_term(), rank), "gamma(t) differs from gamma(normalize(t))", str(t))
        _require((not nf) == (not g), "normal form and gamma disagree on vanishing", str(t))
        zeros += not nf
    return f"{n} random terms (depth <= 5, {zeros} vanishing): gamma(t) = gamma(normalize(t))"


def basis_independence(rng: random.Random) -> str:
    rank = 3
    monos = [NormalForm.generator(i) for i in range(1, rank + 1)]
    for length in range(2, 5):
        monos += [NormalForm.monomial(m) for m in normalized_monomials(rank, length)]
    rows = [coordinate_vector(gamma(m, rank)) for m in monos]
    rk = matrix_rank(rows, QQ)
    _require(rk == len(monos), f"rank {rk} of {len(monos)} images")
    return f"{len(monos)} normalized monomials (rank 3, length <= 4), images of full rank {rk}"


def far_cofactor_invariance(rng: random.Random) -> str:
    n = 200
    for _ in range(n):
        rank = rng.randint(2, 4)
        w = [rng.randint(1, rank) for _ in range(rng.randint(4, 6))]
        tail = w[2:]
        rng.shuffle(tail)
        _require(normalize(word(w)) == normalize(word(w[:2] + tail)), "tail permutation changed the normal form", (w, tail))
    return f"{n} monomials of length 4-6 with permuted tails"


def vanishing_implications(rng: random.Random) -> str:
    n_random, n_built = 1000, 100
    for _ in range(n_random):
        ctx = MatContext(rng.randint(1, 3), rng.randint(1, 3))
        x, y, z = (random_mat(rng, ctx, 2, 3) for _ in range(3))
        rep = check_vanishing_implications(x, y, z)
        _require(rep.ok, "; ".join(rep.violations), (str(x), str(y), str(z)))
    premises = 0
    for k in range(n_built):
        ctx = MatContext(rng.randint(1, 3), rng.randint(1, 3))
        x = random_mat(rng, ctx, 2, 3)
        if k % 2:
            y, z = x * rng.randint(-3, 3), x * rng.randint(-3, 3)
        else:  # zero-diagonal triples
            x, y, z = (ctx.elem(0, random_mat(rng, ctx, 2, 3).u) for _ in range(3))
        rep = check_vanishing_implications(x, y, z)
        _require(rep.ok, "; ".join(rep.violations), (str(x), str(y), str(z)))
        premises += rep.first_premises or rep.second_premises
    return f"{n_random} random and {n_built} constructed triples ({premises} with premises satisfied)"


def presentation_round_trip(rng: random.Random) -> str:
    for rank in (2, 3):
        A = _free(rank)
        P = presentation(A)
        P.verify()
        Q = P.to_abstract()
        _require(same_relations(Q, embed_abstract(Q)), f"rank {rank} relations changed under re-embedding")
        if rank == 3:
            S = P.type1_module()
            jac = Submodule([FreeModElem.from_list(v, P.ring) for v in fit_presentation(3).relations])
            _require(S is not None and S.equals(jac), "rank-3 type1 relations are not the Jacobi syzygies",
                     [[str(g) for g in v] for v in P.type1])
    n = 20
    for _ in range(n):
        A = _random_algebra(rng, non_abelian=False)
        P = presentation(A)
        P.verify()
        Q = P.to_abstract()
        _require(same_relations(Q, embed_abstract(Q, seed=rng.randrange(1 << 30))), "relations changed under re-embedding",
                 [str(g) for g in A.gens])
    return f"free algebras of rank 2 and 3 plus {n} random 3-generator algebras"


def one_plus_f(rng: random.Random) -> str:
    n = 200
    for _ in range(n):
        A = _random_algebra(rng, nvars=rng.randint(2, 3), rank=rng.randint(1, 3), ngens=rng.randint(2, 3))
        R = A.module_ring
        f = random_poly(rng, R, 2, 3, constant=False)
        phi = phi_one_plus_f(A, f)
        xs = [A.random_element(rng, 1, 3) for _ in range(4)]
        rep = submodel_embed_check(xs, phi)
        _require(rep.ok, "; ".join(rep.failures[:2]), (str(f), [str(x) for x in xs]))
    return f"{n} random (algebra, f) pairs: brackets preserved, nonzero elements stay nonzero"


def denominator_clearing(rng: random.Random) -> str:
    n = 100
    A = _free(2)
    AD = localize(A)
    R = AD.ring
    for _ in range(n):
        elems = []
        for _ in range(rng.randint(1, 5)):
            h = [LocalFrac(random_poly(rng, R, 1, 3), random_unit(rng, R, 1, 2)) for _ in range(AD.l)]
            elems.append(AD.elem([rng.randint(-2, 2) for _ in range(AD.r)], h))
        res = clear_denominators(AD, elems)
        for img in res.images:
            _require(A.contains(img), "image outside F", str(img))
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                if i < j:
                    lhs = res.apply_local(x.bracket(y))
                    _require(lhs == res.images[i].bracket(res.images[j]).localize(), "bracket relation broken", (str(x), str(y)))
                    if x != y:
                        _require(res.images[i] != res.images[j], "distinct inputs collided", (str(x), str(y)))
    return f"{n} random subsets of F_Delta (rank 2, <= 5 elements) cleared into F"


def _random_commutant(rng: random.Random, rank: int) -> NormalForm:
    monos = [m for length in (2, 3, 4) for m in normalized_monomials(rank, length)]
    return NormalForm(quad={m: rng.randint(-3, 3) for m in rng.sample(monos, rng.randint(0, 4))})


def cdelta(rng: random.Random) -> str:
    n = 50
    for rank in (2, 3):
        for _ in range(n):
            ds = [_random_commutant(rng, rank) for _ in range(rank)]
            rep = check_cdelta(rank, ds)
            _require(rep.ok, "C_Delta system failed", [str(d) for d in ds])
    return f"{n} perturbations each for r = 2 and r = 3: h(0) != 0, solutions exact"


def discrimination(rng: random.Random) -> str:
    n = 100
    A = _free(2)
    R = A.module_ring
    b0 = A.canonical.b_part[0]
    total = 0
    for _ in range(n):
        E = extend(A, _random_module(rng, R, 2), 2)
        elems = [x for x in (E.random_element(rng) for _ in range(rng.randint(1, 8))) if x]
        g = next(g for g in E.gens if g)
        weight = g.coord(1) + g.coord(2)
        if weight:  # lands on the first rung unless the ladder moves
            elems.append(E.elem(-A.act(b0, weight), g, check=False))
        elems.append(E.elem(None, g, check=False))
        elems = elems[:10]
        d = discriminate(E, elems)
        for x, img in zip(elems, d.images):
            _require(bool(img), "element mapped to zero", str(x))
            if not x.m:
                _require(img == x.a, "A not fixed", str(x))
        _require(validate_certificate(d.certificate()), "certificate rejected")
        total += len(elems)
    return f"{n} random extensions and element sets ({total} elements), all certificates valid"


def hom_correspondence_check(rng: random.Random) -> str:
    n = 50
    A = _free(2)
    R = A.module_ring
    non_injective = non_surjective = 0
    for _ in range(n):
        E = extend(A, _random_module(rng, R, 2), 2)
        c = A.random_element(rng, 1, 3, fit_only=True)
        w = [random_poly(rng, R, 1, 3) for _ in range(E.s)]
        images = [A.act(c, sum((g.coord(j + 1) * w[j] for j in range(E.s)), R.zero)) for g in E.gens]
        phi = ModuleMap(E, images)
        hom = hom_correspondence(E, phi)
        _require(module_map_of(E, hom) == phi, "module map -> A-hom -> module map is not the identity")
        battery = [E.random_element(rng) for _ in range(4)]
        for x, y in itertools.combinations(battery, 2):
            _require(hom(x.bracket(y)) == hom(x).bracket(hom(y)), "A-hom does not preserve a bracket", (str(x), str(y)))
            _require(hom(x + y) == hom(x) + hom(y), "A-hom is not additive", (str(x), str(y)))
        back = hom_correspondence(E, module_map_of(E, hom))
        _require(all(back(x) == hom(x) for x in battery), "A-hom -> module map -> A-hom is not the identity")

        # maps between two extensions: A + M1 -> A + M2 induced by a matrix over R
        s2 = rng.randint(1, 2)
        Q = [[random_poly(rng, R, 1, 2) for _ in range(E.s)] for _ in range(s2)]
        psi = [FreeModElem(R, s2, {i + 1: sum((Q[i][j] * g.coord(j + 1) for j in range(E.s)), R.zero) for i in range(s2)})
               for g in E.gens]
        extra = _random_module(rng, R, s2, 1) if rng.random() < 0.5 else []
        E2 = extend(A, psi + extra if any(psi + extra) else [FreeModElem.basis(R, s2, 1)], s2)
        F = ExtensionMap(E, E2, psi)
        kernel = F.kernel_witnesses()
        ms = [E.random_module_elem(rng) for _ in range(4)] + kernel
        module_inj = all(F.module_apply(m) for m in ms if m)
        alg_inj = all(F(E.elem(None, m, check=False)) for m in ms if m)
        _require(module_inj == alg_inj == F.is_injective(), "injectivity flags disagree")
        targets = [E2.random_module_elem(rng) for _ in range(3)] + list(E2.gens)
        module_surj = all(F.preimage(m) is not None for m in targets)
        alg_surj = True
        for m in targets:
            y = E2.elem(A.random_element(rng, 1, 2), m, check=False)
            pre = F.preimage(m)
            alg_surj = alg_surj and pre is not None and F(E.elem(y.a, pre, check=False)) == y
        _require(module_surj == alg_surj == F.is_surjective(), "surjectivity flags disagree")
        non_injective += not module_inj
        non_surjective += not module_surj
    return (f"{n} module maps into Fit(A) round-trip; injectivity and surjectivity flags agree on {n} extension maps "
            f"({non_injective} non-injective, {non_surjective} non-surjective)")


def commutation(rng: random.Random) -> str:
    configs = [(_free(2), 2), (_random_algebra(rng, 2, 2, 3), 1)]
    elements = brackets = 0
    for A, s in configs:
        gens = _random_module(rng, A.module_ring, s)
        rep = localization_commutes(A, gens, s, battery=50, brackets=50, seed=rng.randrange(1 << 30))
        _require(rep.ok, "; ".join(rep.mismatches[:2]))
        elements += rep.elements
        brackets += rep.brackets
    return f"{elements} elements and {brackets} brackets agree in (A + M)_Delta and A_Delta + M_Delta"


def cli_determinism(rng: random.Random) -> str:
    from .cli import run

    golden = {("normalize", "(a1*a2)*a1*a3", "--rank", "3"): "-[2,1,1,3]",
              ("embed", "a1*a2", "--rank", "2"): "(0 | x2*u1 - x1*u2)"}
    for argv, want in golden.items():
        code, out, _ = run(list(argv))
        _require(code == 0 and out.strip() == want, f"{' '.join(argv)} printed {out.strip()!r}")
    argv = ["discriminate", "(0 | 0) & u1", "(x1 | u1) & x1*u1", "--module", "u1", "--json"]
    first, second = run(argv), run(argv)
    _require(first == second and first[0] == 0, "discriminate output is not reproducible")
    return "golden normalize/embed outputs match; repeated commands are byte-identical"


CRITERIA: Dict[int, tuple] = {
    1: ("Lie axioms in M0", lie_axioms),
    2: ("normal form soundness and injectivity of gamma", normal_form_soundness),
    3: ("normalized monomials are a basis", basis_independence),
    4: ("far co-factor invariance", far_cofactor_invariance),
    5: ("xyx = xyy = 0 and xy = xz = 0 implications", vanishing_implications),
    6: ("canonical presentation round trip", presentation_round_trip),
    7: ("(1+f)-endomorphisms", one_plus_f),
    8: ("denominator clearing", denominator_clearing),
    9: ("C_Delta = F_Delta", cdelta),
    10: ("A + M is A-discriminated by A", discrimination),
    11: ("hom correspondence", hom_correspondence_check),
    12: ("localisation commutes with extension", commutation),
    13: ("CLI determinism", cli_determinism),
}


def run_criterion(index: int, seed: int = 0) -> CriterionResult:
    name, fn = CRITERIA[index]
    rng = random.Random(f"{seed}:{index}")
    try:
        detail = fn(rng)
        return CriterionResult(index, name, True, detail)
    except VerificationFailure as e:
        ce = e.counterexample
        return CriterionResult(index, name, False, str(e), None if ce is None else repr(ce))
    except MetalieError as e:
        return CriterionResult(index, name, False, f"{type(e).__name__}: {e}")


def _run_one(args) -> CriterionResult:
    return run_criterion(*args)


def run_all(seed: int = 0, only: Sequence[int] = None, jobs: int = 1) -> List[CriterionResult]:
    indices = sorted(only) if only else sorted(CRITERIA)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_one, [(i, seed) for i in indices]))
    return [run_criterion(i, seed) for i in indices]


def format_table(results: Sequence[CriterionResult], seed: int) -> str:
    lines = [f"verification suite, seed {seed}"]
    lines += [r.line() for r in results]
    for r in results:
        if not r.passed and r.counterexample:
            lines.append(f"  criterion {r.index} counterexample: {r.counterexample}")
    failed = [r.index for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {failed}" if failed else ""))
    return "\n".join(lines)
