import json
import random

import pytest
from hypothesis import given, strategies as st

from metalie.errors import (
    ContextMismatchError, EmptyInputError, MetalieError, NotInFittingError, RelationViolationError,
    VerificationFailure, ZeroElementError,
)
from metalie.ext import (
    ExtensionMap, ModuleMap, approximate, avoidance_element, check_cdelta, clear_denominators, discriminate,
    extend, hom_correspondence, localization_commutes, localize, module_map_of, submodel_embed_check,
    validate_certificate,
)
from metalie.fmodule import FreeModElem
from metalie.freelie import context
from metalie.matlie import MatContext
from metalie.parsing import parse_lie, parse_module
from metalie.ring import QQ, LocalFrac, PolyRing
from metalie.sampling import random_module_elem, random_poly, random_unit
from metalie.ualg import ConcreteAlgebra

CTX = context(2)
A = ConcreteAlgebra(CTX, [CTX.generator(1), CTX.generator(2)])
AD = localize(A)
R = AD.ring
x1, x2 = R.gens
B = A.canonical.b_part[0]  # (0 | x2*u1 - x1*u2)


def mod(text, rank=1):
    return parse_module(text, R, rank)


def frac(num, den):
    return LocalFrac(R(num), R(den))


# -- localisation ------------------------------------------------------------


def test_localisation_needs_non_abelian_algebra():
    ctx = MatContext(1, 1)
    with pytest.raises(MetalieError):
        localize(ConcreteAlgebra.parse(ctx, ["(x1 | u1)"]))


def test_fraction_multiple_of_fitting_element():
    b = AD.fit([frac("1", "1 + x1")])
    assert b.act(R("1 + x1")) == AD.b(1)
    assert b.is_fitting()


def test_bracket_with_generator_multiplies_by_variable():
    b = AD.fit([frac("1", "1 + x1")])
    assert b.bracket(AD.a(1)) == AD.fit([frac("x1", "1 + x1")])


def test_inclusion_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        x = A.random_element(rng)
        assert AD.include(x).to_mat().to_mat() == x


def test_local_matrix_elements_pull_back():
    b = AD.fit([frac("x2", "1 + x1")])
    assert AD.include_local(b.to_mat()) == b


# -- clearing denominators ---------------------------------------------------


def test_single_denominator():
    ce = clear_denominators(AD, [AD.fit([frac("1", "1 + x1")])])
    assert ce.one_plus_f == 1 + x1
    assert ce.images == [B]


def test_two_denominators():
    b = AD.fit([frac("1", "1 + x1")])
    c = AD.fit([frac("1", "1 + x2")])
    ce = clear_denominators(AD, [b, c])
    assert ce.one_plus_f == (1 + x1) * (1 + x2)
    assert ce.one_plus_f.constant_term() == 1
    assert ce.images == [A.act(B, 1 + x2), A.act(B, 1 + x1)]


def test_polynomial_inputs_need_no_clearing():
    ce = clear_denominators(AD, [AD.a(1), AD.b(1)])
    assert ce.one_plus_f == R.one
    assert ce.images == [A.gens[0], B]


def test_non_unit_constant_is_normalised():
    ce = clear_denominators(AD, [AD.fit([frac("1", "2 + x1")])])
    assert ce.one_plus_f.constant_term() == 1


def test_clearing_needs_input():
    with pytest.raises(EmptyInputError):
        clear_denominators(AD, [])


# -- C_Delta -------------------------------------------------------------------


def test_unperturbed_system():
    rep = check_cdelta(2, [None, None])
    assert rep.det == 1 and rep.ok


def test_rank_two_perturbation():
    rep = check_cdelta(2, [parse_lie("a2*a1"), None])
    assert rep.det.constant_term() == 1
    assert rep.det == 1 - R.gen(2)
    assert rep.system_ok and rep.gamma_ok and rep.ok


def test_rank_three_perturbation():
    rep = check_cdelta(3, [parse_lie("a2*a1*a3"), parse_lie("a3*a1"), parse_lie("2*a3*a2*a2")])
    assert rep.det.constant_term() != 0 and rep.ok
    assert len(rep.pairs) == 3


def test_perturbation_outside_commutant_rejected():
    with pytest.raises(MetalieError):
        check_cdelta(2, [parse_lie("a1"), None])


# -- direct extensions --------------------------------------------------------

T1 = extend(A, [mod("u1")])
t = T1.elem(None, mod("u1"))
z1 = T1.include(A.gens[0])


def test_empty_module_extension_is_the_algebra():
    E = extend(A, [], rank=1)
    assert E.module is None
    x, y = E.include(A.gens[0]), E.include(A.gens[1])
    assert x.bracket(y).a == A.gens[0].bracket(A.gens[1])


def test_module_times_generator_is_module_action():
    assert t.bracket(z1).m == mod("x1*u1")


def test_module_commutes_with_fitting():
    assert not t.bracket(T1.include(B))
    assert not t.bracket(T1.elem(None, mod("x2*u1")))


def test_extension_ring_mismatch():
    other = PolyRing(QQ, 3)
    with pytest.raises(ContextMismatchError):
        extend(A, [parse_module("u1", other, 1)])


def test_fitting_of_extension():
    assert T1.in_fit(t) and T1.in_fit(T1.include(B)) and not T1.in_fit(z1)


def test_extension_element_syntax():
    x = T1.parse_elem("(x1 | u1) & x2*u1")
    assert x.a == A.gens[0] and x.m == mod("x2*u1")
    assert T1.parse_elem(str(x)) == x


def test_extension_json_round_trip():
    E = extend(A, [mod("u1 + x1*u2", 2), mod("x2*u2", 2)])
    F = type(E).from_json(json.loads(json.dumps(E.to_json())))
    assert [str(g) for g in F.gens] == [str(g) for g in E.gens]


# -- avoidance -----------------------------------------------------------------


def test_avoidance_without_constraints():
    av = avoidance_element([mod("x1*u1")], [])
    assert av.rung == 0 and av.u == mod("x1*u1")


def test_avoidance_climbs_one_rung():
    u0 = mod("u1")
    av = avoidance_element([u0], [(u0 * x1, x1)])
    assert av.rung == 1 and av.u == u0 * x1
    assert av.u * x1 != u0 * x1


def test_avoidance_rung_bounded_by_constraint_count():
    u0 = mod("u1")
    constraints = [(u0 * x1 ** k, x1) for k in range(1, 5)]
    av = avoidance_element([u0], constraints)
    assert av.rung <= len(constraints)
    assert all(av.u * f != u for u, f in constraints)


def test_avoidance_needs_nonzero_module():
    with pytest.raises(EmptyInputError):
        avoidance_element([FreeModElem.zero(R, 1)], [])


def test_avoidance_rejects_zero_polynomial():
    with pytest.raises(ZeroElementError):
        avoidance_element([mod("u1")], [(mod("u1"), R.zero)])


# -- discrimination ------------------------------------------------------------


def test_elements_of_the_algebra_are_fixed():
    d = discriminate(T1, [z1, T1.include(B)])
    assert d.images == [A.gens[0], B]


def test_module_generator_goes_to_fitting():
    d = discriminate(T1, [t])
    (img,) = d.images
    assert img and A.in_fit(img)


def test_two_constraint_discrimination():
    x = T1.elem(A.gens[0], mod("x1*u1"))
    d = discriminate(T1, [x, t])
    assert all(d.images)
    assert validate_certificate(json.loads(json.dumps(d.certificate())))


def test_zero_element_rejected():
    with pytest.raises(ZeroElementError):
        discriminate(T1, [T1.elem()])


def test_tampered_certificate_fails():
    d = discriminate(T1, [t])
    doc = d.certificate()
    doc["images"] = ["(0 | 0)"]
    with pytest.raises(VerificationFailure):
        validate_certificate(doc)
    doc = d.certificate()
    doc["u"] = "(0 | 0)"
    with pytest.raises(VerificationFailure):
        validate_certificate(doc)


def test_approximation_of_module_element():
    E = extend(A, [mod("u1 + x1*u2", 2), mod("x2*u2", 2)])
    m = mod("x2*u1 + x1*x2*u2 - x1*x2*u2", 2)
    assert approximate(E, mod("u1 + x1*u2", 2) * x2 - mod("x2*u2", 2) * x1).images[0]
    assert approximate(E, m).images[0]


# -- hom correspondence --------------------------------------------------------


def test_zero_module_map_projects():
    h = hom_correspondence(T1, ModuleMap(T1, [CTX.zero()]))
    x = T1.elem(A.gens[1], mod("x1*u1"))
    assert h(x) == A.gens[1]


def test_module_map_rule():
    phi = ModuleMap(T1, [B])
    h = hom_correspondence(T1, phi)
    f = R("x1^2 - 3*x2")
    assert h(T1.elem(None, mod("u1") * f)) == A.act(B, f)
    assert module_map_of(T1, h) == phi


def test_module_map_needs_fitting_images():
    with pytest.raises(NotInFittingError):
        ModuleMap(T1, [A.gens[0]])


def test_module_map_respects_relations():
    E = extend(A, [mod("x1*u1"), mod("x2*u1")])
    ModuleMap(E, [A.act(B, x1), A.act(B, x2)])
    with pytest.raises(RelationViolationError):
        ModuleMap(E, [B, B])


def test_injectivity_and_surjectivity_flags():
    T2 = extend(A, [mod("u1", 2), mod("u2", 2)])
    collapse = ExtensionMap(T2, T1, [mod("u1"), mod("u1")])
    assert not collapse.is_injective() and collapse.is_surjective()
    w = collapse.kernel_witnesses()[0]
    assert w and not collapse(T2.elem(None, w)).m
    scale = ExtensionMap(T1, T1, [mod("x1*u1")])
    assert scale.is_injective() and not scale.is_surjective()
    assert scale.preimage(mod("u1")) is None
    ident = ExtensionMap(T1, T1, [mod("u1")])
    assert ident.is_injective() and ident.is_surjective()


# -- commutation ---------------------------------------------------------------


def test_commutation_with_zero_module():
    rep = localization_commutes(A, [], rank=1, battery=10, brackets=10)
    assert rep.ok and rep.elements == 10


def test_commutation_with_free_module():
    rep = localization_commutes(A, [mod("u1", 2), mod("x1*u2", 2)], battery=10, brackets=10, seed=7)
    assert rep.ok, rep.mismatches


def test_submodel_check_detects_non_homomorphism():
    elems = [A.gens[0], A.gens[1], B]
    assert submodel_embed_check(elems, lambda x: x).ok
    assert not submodel_embed_check(elems, lambda x: x * 2).ok


# -- properties ----------------------------------------------------------------

seeds = st.integers(0, 10 ** 9)


@given(seeds)
def test_clearing_random_local_elements(seed):
    rng = random.Random(seed)
    elems = [AD.elem([rng.randint(-2, 2) for _ in range(2)],
                     [LocalFrac(random_poly(rng, R, 1, 3), random_unit(rng, R))])
             for _ in range(rng.randint(1, 4))]
    ce = clear_denominators(AD, elems)
    assert all(A.contains(img) for img in ce.images)
    for x, img in zip(elems, ce.images):
        assert ce.apply_local(x) == img.localize()


@given(seeds)
def test_random_discriminations_validate(seed):
    rng = random.Random(seed)
    E = extend(A, [random_module_elem(rng, R, 2, 1, 2) for _ in range(rng.randint(1, 3))], rank=2)
    elems = [e for e in (E.random_element(rng) for _ in range(rng.randint(1, 6))) if e]
    if not elems:
        return
    d = discriminate(E, elems)
    assert all(d.images) and validate_certificate(d.certificate())


@given(seeds)
def test_hom_round_trip(seed):
    rng = random.Random(seed)
    E = extend(A, [mod("u1", 2), mod("x1*u2", 2)])
    imgs = [A.act(B, random_poly(rng, R, 1, 3)) for _ in E.gens]
    phi = ModuleMap(E, imgs)
    assert module_map_of(E, hom_correspondence(E, phi)) == phi


@given(seeds)
def test_random_cdelta_rank_two(seed):
    from metalie.sampling import random_lie_term
    from metalie.freelie import Bracket

    rng = random.Random(seed)
    ds = [Bracket(random_lie_term(rng, 2, 2), random_lie_term(rng, 2, 1)) for _ in range(2)]
    assert check_cdelta(2, ds).ok
