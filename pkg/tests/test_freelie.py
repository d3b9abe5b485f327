import itertools
import random

import pytest
from hypothesis import given, strategies as st

from metalie.errors import MetalieError, NotInFittingError, ParseError
from metalie.fmodule import FreeModElem, combine
from metalie.freelie import (
    Bracket, NormalForm, NormalizedMonomial, Scale, Sum, basis_size, express_in_CF, fit_presentation,
    gamma, in_fitting_F, normalize, normalized_monomials, word,
)
from metalie.linalg import rank
from metalie.matlie import coordinate_vector
from metalie.parsing import parse_lie
from metalie.ring import GF, QQ
from metalie.sampling import random_lie_term, random_word


def nf(text, rank=None):
    return normalize(parse_lie(text, rank))


def test_head_flip_example():
    assert str(nf("a1*a2*a1*a3")) == "-[2,1,1,3]"


def test_self_bracket_normalises_to_zero():
    assert nf("a2*a2").is_zero()


def test_jacobi_rewriting_example():
    t = parse_lie("a3*a2*a1")
    assert str(normalize(t)) == "-[2,1,3] + [3,1,2]"
    assert gamma(t, 3).u == gamma(parse_lie("-[2,1,3] + [3,1,2]"), 3).u
    ctx = gamma(t, 3).ctx
    assert gamma(t, 3) == ctx.parse("(0 | x1*x2*u3 - x1*x3*u2)")


def test_gamma_generator_images():
    assert str(gamma(parse_lie("a1"), 2)) == "(x1 | u1)"
    assert str(gamma(parse_lie("a1*a2"), 2)) == "(0 | x2*u1 - x1*u2)"


def test_gamma_of_normalized_monomial():
    assert str(gamma(parse_lie("[3,1,2,2]"), 3)) == "(0 | -x2^2*x3*u1 + x1*x2^2*u3)"


def test_normalized_monomial_validation():
    assert NormalizedMonomial((3, 1, 2, 2)).tail == (2, 2)
    for bad in [(1, 2), (2, 1, 3, 2), (3, 2, 1), (2,)]:
        with pytest.raises(MetalieError):
            NormalizedMonomial(bad)


@pytest.mark.parametrize("text,expected", [("a1*a2", True), ("a1 + a1*a2", False), ("0", True)])
def test_fitting_membership(text, expected):
    assert in_fitting_F(parse_lie(text), 2) is expected


def test_rank_one_is_abelian():
    assert in_fitting_F(parse_lie("a1"), 1)


def test_fit_presentation_rank_two():
    P = fit_presentation(2)
    assert P.generators == [(2, 1)] and P.relations == []
    assert P.matches_image()


def test_fit_presentation_rank_three():
    P = fit_presentation(3)
    assert P.generators == [(2, 1), (3, 1), (3, 2)]
    assert len(P.relations) == 1
    x1, x2, x3 = P.ring.gens
    rel = P.relations[0]
    assert rel in ([x3, -x2, x1], [-x3, x2, -x1])
    assert P.relations_hold() and P.matches_image()


def test_commutator_image_satisfies_relation():
    P = fit_presentation(3)
    assert str(P.images()[0]) == "-x2*u1 + x1*u2"
    assert combine(P.images(), P.relations[0]).is_zero()


def test_fit_presentation_rank_four():
    P = fit_presentation(4)
    assert len(P.generators) == 6 and len(P.relations) == 4
    assert P.relations_hold() and P.matches_image()


def test_fit_presentation_needs_rank_two():
    with pytest.raises(MetalieError):
        fit_presentation(1)


@pytest.mark.parametrize("text,expected", [
    ("a2*a1", {(2, 1): "1"}),
    ("a3*a2*a1", {(2, 1): "-x3", (3, 1): "x2"}),
    ("a1*a2*a3*a3", {(2, 1): "-x3^2"}),
])
def test_express_in_cf(text, expected):
    coords = express_in_CF(parse_lie(text), 3)
    assert {k: str(v) for k, v in coords.items()} == expected


def test_express_in_cf_rejects_linear_part():
    with pytest.raises(NotInFittingError):
        express_in_CF(parse_lie("a1 + a2*a1"), 2)


def test_basis_count_rank3():
    sizes = [basis_size(3, n) for n in (1, 2, 3, 4)]
    assert sizes == [3, 3, 8, 15]


def test_basis_independence_rank3_length4():
    monos = [m for n in (2, 3, 4) for m in normalized_monomials(3, n)]
    vectors = [coordinate_vector(gamma(NormalForm.monomial(m), 3)) for m in monos]
    assert rank(vectors, QQ) == len(monos) == 26


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_lie("a1 * * a2")
    with pytest.raises(ParseError):
        parse_lie("a4", 3)
    with pytest.raises(ParseError):
        parse_lie("3")


def test_bracket_syntax_variants():
    a = nf("[a1, a2, a3]")
    assert a == nf("[1,2,3]") == nf("(a1*a2)*a3")
    assert nf("1/2*a1*a2 + 2*a3").scale(2) == nf("a1*a2 + 4*a3")


def test_normal_form_over_fp():
    t = parse_lie("3*a2*a1 + 4*a2*a1")
    assert normalize(t, GF(7)).is_zero()
    assert not normalize(t).is_zero()


def _expand_cf(coords):
    terms = []
    for (p, q), f in coords.items():
        for exp, c in f.items():
            tail = [k + 1 for k, e in enumerate(exp) for _ in range(e)]
            terms.append(Scale(c, word([p, q, *tail])))
    return Sum(tuple(terms))


seeds = st.integers(0, 10 ** 9)


@given(seeds, st.integers(1, 4), st.integers(1, 5))
def test_gamma_agrees_with_normal_form(seed, rank, depth):
    t = random_lie_term(random.Random(seed), rank, depth)
    n = normalize(t)
    g = gamma(t, rank)
    assert gamma(n.to_term(), rank) == g
    assert n.is_zero() == g.is_zero()
    assert normalize(n.to_term()) == n


@given(seeds, seeds, st.integers(2, 4))
def test_normalize_is_compatible_with_brackets(s1, s2, rank):
    t1 = random_lie_term(random.Random(s1), rank, 3)
    t2 = random_lie_term(random.Random(s2), rank, 3)
    assert normalize(Bracket(t1, t2)) == normalize(t1).bracket(normalize(t2))
    assert normalize(Bracket(t1, t2)) == normalize(Bracket(normalize(t1).to_term(), normalize(t2).to_term()))


@given(seeds, st.integers(4, 6), st.randoms())
def test_far_cofactor_permutations(seed, length, rnd):
    w = random_word(random.Random(seed), 4, length)
    tail = w[2:]
    rnd.shuffle(tail)
    assert normalize(word(w)) == normalize(word(w[:2] + tail))


@given(seeds, st.integers(2, 4))
def test_express_in_cf_back_substitution(seed, rank):
    rng = random.Random(seed)
    t = Bracket(random_lie_term(rng, rank, 3), random_lie_term(rng, rank, 2))
    coords = express_in_CF(t, rank)
    assert all(i > j for i, j in coords)
    assert normalize(_expand_cf(coords)) == normalize(t)


def test_normalized_monomials_are_sorted_tails():
    for m in normalized_monomials(4, 5):
        assert m[0] > m[1] and list(m[2:]) == sorted(m[2:]) and all(m[1] <= c for c in m[2:])


def test_gamma_is_injective_on_small_span():
    monos = list(normalized_monomials(2, 3))
    for signs in itertools.product((-1, 0, 1), repeat=len(monos)):
        n = sum((NormalForm.monomial(m, s) for m, s in zip(monos, signs) if s), NormalForm())
        assert gamma(n, 2).is_zero() == n.is_zero()


def test_zero_module_image():
    assert gamma(parse_lie("0"), 2).u == FreeModElem.zero(gamma(parse_lie("a1"), 2).u.ring, 2)
