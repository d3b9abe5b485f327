import itertools

import pytest
from hypothesis import given, strategies as st

from metalie.errors import ContextMismatchError, EmptyInputError, MetalieError, ParseError
from metalie.fmodule import Submodule
from metalie.matlie import MatContext, MatElem, bracket, check_vanishing_implications, in_fitting, is_abelian_set, left_normed

from strategies import CTX33, m0_elems

C = CTX33


def m(text):
    return C.parse(text)


def test_bracket_of_generators():
    assert bracket(C.generator(1), C.generator(2)) == m("(0 | x2*u1 - x1*u2)")


def test_self_bracket_vanishes():
    a = m("(x1 - x3 | x2*u1 + u3)")
    assert bracket(a, a).is_zero()


def test_triple_product_formula():
    a, b, c = m("(x1 | u2)"), m("(x2 + x3 | x1*u1)"), m("(2*x3 | u3)")
    lhs = bracket(bracket(a, b), c)
    expected = (a.u * b.f * c.f) - (b.u * a.f * c.f)
    assert lhs.f.is_zero() and lhs.u == expected


def test_left_normed_examples():
    a = m("(x1 | u1 + u2)")
    assert left_normed([a]) == a
    g = [C.generator(i) for i in (1, 2, 3)]
    assert left_normed(g) == m("(0 | (x2*u1 - x1*u2)*x3)")
    assert left_normed([a, a, g[1], g[2]]).is_zero()
    with pytest.raises(EmptyInputError):
        left_normed([])


def test_context_mismatch():
    with pytest.raises(ContextMismatchError):
        bracket(C.generator(1), MatContext(3, 2).generator(1))


def test_m0_requires_linear_forms():
    with pytest.raises((MetalieError, ParseError)):
        m("(x1^2 | u1)")
    general = MatContext(2, 1, m0=False)
    assert general.parse("(x1^2 + 1 | u1)").f.total_degree() == 2


@pytest.mark.parametrize("text,abelian,expected", [
    ("(0 | x2*u1)", False, True),
    ("(x1 | u1)", False, False),
    ("(x1 | u1)", True, True),
])
def test_fitting_membership(text, abelian, expected):
    assert in_fitting(m(text), abelian) is expected


def test_abelian_flag_from_generators():
    assert is_abelian_set([m("(0 | u1)"), m("(0 | x1*u2)")])
    assert not is_abelian_set([C.generator(1), C.generator(2)])


def test_vanishing_implications_proportional_pair():
    rep = check_vanishing_implications(m("(x1 | u1)"), m("(2*x1 | 2*u1)"), m("(x3 | u2)"))
    assert rep.first_premises and rep.xy_zero and rep.ok


def test_vanishing_implications_premises_fail():
    x, y = m("(x1 | u1)"), m("(x2 | u2)")
    rep = check_vanishing_implications(x, y, C.zero())
    assert not rep.xyx_zero and not rep.first_premises and rep.ok


def test_vanishing_implications_second_implication():
    x = m("(x1 + x2 | u1 - u3)")
    rep = check_vanishing_implications(x, x * 3, x * -2)
    assert rep.second_premises and rep.yz_zero and rep.ok


@given(m0_elems(C), m0_elems(C))
def test_anticommutativity(a, b):
    assert bracket(a, a).is_zero()
    assert bracket(a, b) == -bracket(b, a)


@given(m0_elems(C), m0_elems(C), m0_elems(C))
def test_jacobi(a, b, c):
    total = bracket(bracket(a, b), c) + bracket(bracket(b, c), a) + bracket(bracket(c, a), b)
    assert total.is_zero()


@given(m0_elems(C), m0_elems(C), m0_elems(C), m0_elems(C))
def test_metabelian(a, b, c, d):
    assert bracket(bracket(a, b), bracket(c, d)).is_zero()


@given(m0_elems(C, 1), m0_elems(C, 1), st.lists(m0_elems(C, 1), min_size=1, max_size=3), st.randoms())
def test_far_cofactor_invariance(a, b, tail, rnd):
    perm = list(tail)
    rnd.shuffle(perm)
    assert left_normed([a, b, *tail]) == left_normed([a, b, *perm])


@given(st.lists(m0_elems(C, 1), min_size=2, max_size=3), m0_elems(C, 1))
def test_fitting_equals_commutant_span(gens, probe):
    """In a non-Abelian subalgebra, zero diagonal means membership of the commutant module."""
    if is_abelian_set(gens):
        return
    brackets = [bracket(g, h) for g, h in itertools.combinations(gens, 2)]
    comm = bracket(gens[0], gens[1])
    for b in brackets + [comm * 2 - brackets[-1]]:
        assert in_fitting(b, False)
    assert in_fitting(probe, False) == probe.f.is_zero()
    S = Submodule([b.u for b in brackets])
    for g in gens:
        for b in brackets:
            assert S.contains(bracket(b, g).u)


@given(m0_elems(C))
def test_print_parse_round_trip(a):
    assert C.parse(str(a)) == a


def test_parse_example():
    a = m("(x1 + 2*x2 | u1*x3 - u2)")
    assert isinstance(a, MatElem) and str(a) == "(x1 + 2*x2 | x3*u1 - u2)"
