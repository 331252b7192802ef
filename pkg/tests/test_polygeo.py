import itertools
import random
from fractions import Fraction

import pytest

from derived_brackets.polygeo import (
    PolyForm,
    PolyMultivector,
    coiso_projection,
    coiso_vdata,
    contract_form,
    coordinate_vector,
    de_rham,
    element_to_json,
    fiber_translate,
    form,
    form_from_json,
    mv,
    mv_from_json,
    multi_sharp,
    schouten,
    sharp,
    wedge_form,
    wedge_mv,
)
from derived_brackets.sampling import (
    random_base_poly,
    random_coiso_poisson,
    random_form,
    random_multivector,
    random_vertical_section,
)

D2 = (2, 0)
D3 = (3, 0)
DC = (1, 2)  # the bundle R^1 x R^2


def rand_mv(rng, dims=D3, arity=None, degree=2):
    if arity is None:
        arity = rng.randint(0, dims[0] + dims[1])
    return random_multivector(rng, dims, arity, degree)


# -- Schouten bracket ------------------------------------------------------------------


def test_schouten_constant_fields_commute():
    assert schouten(coordinate_vector(D2, 0), coordinate_vector(D2, 1)).is_zero()


def test_schouten_lie_bracket_example():
    x1d2 = mv(D2, 1, (1, 0), (1,))
    assert schouten(x1d2, coordinate_vector(D2, 0)) == mv(D2, -1, (0, 0), (1,))


def test_schouten_on_functions_is_directional_derivative():
    f = mv(D2, 1, (2, 0), ())  # x1^2
    x = coordinate_vector(D2, 0)
    assert schouten(x, f) == mv(D2, 2, (1, 0), ())
    assert schouten(f, x) == mv(D2, -2, (1, 0), ())


def test_small_bivector_is_poisson():
    pi = mv(D2, 1, (1, 0), (0, 1))  # x1 d1^d2 on the plane
    assert schouten(pi, pi).is_zero()


def test_schouten_graded_antisymmetry():
    rng = random.Random(1)
    for _ in range(25):
        a1, a2 = rng.randint(0, 3), rng.randint(0, 3)
        u = rand_mv(rng, arity=a1)
        v = rand_mv(rng, arity=a2)
        sign = (-1) ** (((a1 - 1) * (a2 - 1)) % 2)
        assert schouten(u, v) == schouten(v, u).scale(-sign)


def test_schouten_graded_jacobi():
    rng = random.Random(2)
    for _ in range(15):
        arities = [rng.randint(0, 2) for _ in range(3)]
        u, v, w = (rand_mv(rng, arity=a, degree=1) for a in arities)
        du, dv = arities[0] - 1, arities[1] - 1
        lhs = schouten(u, schouten(v, w))
        rhs = schouten(schouten(u, v), w) + schouten(v, schouten(u, w)).scale(
            (-1) ** ((du * dv) % 2)
        )
        assert lhs == rhs


def test_schouten_leibniz_over_wedge():
    rng = random.Random(3)
    for _ in range(15):
        a_u, a_v, a_w = rng.randint(1, 2), rng.randint(0, 2), rng.randint(0, 2)
        u = rand_mv(rng, arity=a_u, degree=1)
        v = rand_mv(rng, arity=a_v, degree=1)
        w = rand_mv(rng, arity=a_w, degree=1)
        lhs = schouten(u, wedge_mv(v, w))
        rhs = wedge_mv(schouten(u, v), w) + wedge_mv(v, schouten(u, w)).scale(
            (-1) ** (((a_u - 1) * a_v) % 2)
        )
        assert lhs == rhs


def test_schouten_preserves_polynomial_degree():
    rng = random.Random(4)
    for _ in range(20):
        u = random_multivector(rng, DC, rng.randint(1, 2), 2)
        v = random_multivector(rng, DC, rng.randint(1, 2), 2)
        w = schouten(u, v)
        if w.is_zero() or u.is_zero() or v.is_zero():
            continue
        assert w.pol_degree() <= u.pol_degree() + v.pol_degree()


# -- de Rham ----------------------------------------------------------------------------


def test_de_rham_examples():
    w = form(D2, 1, (1, 0), (1,))  # x1 dx2
    assert de_rham(w) == form(D2, 1, (0, 0), (0, 1))
    assert de_rham(form(D3, 1, None, (0, 1, 2))).is_zero()


def test_de_rham_squares_to_zero():
    rng = random.Random(5)
    for _ in range(20):
        w = random_form(rng, D3, rng.randint(0, 2), 3)
        assert de_rham(de_rham(w)).is_zero()


def test_de_rham_is_a_degree_one_derivation():
    rng = random.Random(6)
    for _ in range(15):
        qa = rng.randint(0, 2)
        a = random_form(rng, D3, qa, 2)
        b = random_form(rng, D3, rng.randint(0, 2), 2)
        lhs = de_rham(wedge_form(a, b))
        rhs = wedge_form(de_rham(a), b) + wedge_form(a, de_rham(b)).scale((-1) ** (qa % 2))
        assert lhs == rhs


# -- contractions -------------------------------------------------------------------------


def test_sharp_examples():
    p12 = mv(D3, 1, None, (0, 1))
    assert sharp(p12, form(D3, 1, None, (0,))) == mv(D3, 1, None, (1,))
    assert sharp(p12, form(D3, 1, None, (2,))).is_zero()
    f = mv(D3, 7, (1, 1, 0), ())
    assert sharp(f, form(D3, 1, None, (0,))).is_zero()


def test_sharp_rejects_higher_forms():
    with pytest.raises(ValueError):
        sharp(mv(D3, 1, None, (0, 1)), form(D3, 1, None, (0, 1)))


def test_multi_sharp_singleton_is_sharp():
    rng = random.Random(7)
    for _ in range(10):
        pi = rand_mv(rng, arity=rng.randint(1, 3))
        xi = random_form(rng, D3, 1, 2)
        assert multi_sharp([pi], xi) == sharp(pi, xi)


def test_multi_sharp_rank_two_kills_three_forms():
    pi = mv(D3, 1, None, (0, 1))
    h = form(D3, 5, (1, 1, 1), (0, 1, 2))
    assert multi_sharp([pi, pi, pi], h).is_zero()


def test_multi_sharp_constant_example():
    pi = mv(D2, 1, None, (0, 1))
    assert multi_sharp([pi, pi], form(D2, 1, None, (0, 1))) == mv(D2, 2, None, (0, 1))


def test_multi_sharp_linear_in_every_slot():
    rng = random.Random(8)
    for _ in range(8):
        p1 = rand_mv(rng, arity=1, degree=1)
        p1b = rand_mv(rng, arity=1, degree=1)
        p2 = rand_mv(rng, arity=2, degree=1)
        w = random_form(rng, D3, 2, 1)
        lhs = multi_sharp([p1 + p1b, p2], w)
        rhs = multi_sharp([p1, p2], w) + multi_sharp([p1b, p2], w)
        assert lhs == rhs
        lhs = multi_sharp([p1, p2], w.scale(3))
        assert lhs == multi_sharp([p1, p2], w).scale(3)


def test_multi_sharp_koszul_swap_rule():
    # swapping adjacent slots of arities a, b costs (-1)^{(a-1)(b-1)+1}
    rng = random.Random(9)
    for _ in range(8):
        a1, a2 = rng.randint(1, 2), rng.randint(1, 2)
        p1 = rand_mv(rng, arity=a1, degree=1)
        p2 = rand_mv(rng, arity=a2, degree=1)
        w = random_form(rng, D3, 2, 1)
        sign = (-1) ** (((a1 - 1) * (a2 - 1) + 1) % 2)
        assert multi_sharp([p2, p1], w) == multi_sharp([p1, p2], w).scale(sign)


def test_contract_form_first_slot():
    h = form(D3, 1, None, (0, 1, 2))
    x = coordinate_vector(D3, 0)
    assert contract_form(x, h) == form(D3, 1, None, (1, 2))
    y = coordinate_vector(D3, 1)
    assert contract_form(y, h) == form(D3, -1, None, (0, 2))


# -- coisotropic model ---------------------------------------------------------------------


def test_coiso_projection_examples():
    assert coiso_projection(mv(DC, 1, None, (0, 1))).is_zero()
    vertical = mv(DC, 1, None, (1, 2))
    assert coiso_projection(vertical) == vertical
    assert coiso_projection(mv(DC, 1, (0, 1, 0), (1, 2))).is_zero()
    # base-coefficient vertical terms survive with their x dependence
    survivor = mv(DC, 3, (2, 0, 0), (1,))
    assert coiso_projection(survivor) == survivor


def test_coiso_vdata_flags():
    flat = mv(DC, 1, None, (0, 1))
    assert not coiso_vdata(flat).curved
    vertical = mv(DC, 1, None, (1, 2))
    assert coiso_vdata(vertical).curved


def test_coiso_vdata_rejects_non_poisson():
    bad = mv(DC, 1, (0, 1, 0), (0, 1)) + mv(DC, 1, None, (1, 2))
    if schouten(bad, bad).is_zero():
        pytest.skip("sampled bivector accidentally Poisson")
    with pytest.raises(ValueError, match="Poisson"):
        coiso_vdata(bad)


def test_fiber_translate_constant_example():
    u = mv(DC, 1, (0, 1, 0), (0,))  # p1 dx
    phi = mv(DC, 3, None, (1,))  # constant section 3 dp1
    assert fiber_translate(u, phi) == u + mv(DC, -3, None, (0,))


def test_fiber_translate_zero_is_identity():
    rng = random.Random(10)
    for _ in range(5):
        u = random_multivector(rng, DC, rng.randint(0, 2), 2)
        assert fiber_translate(u, PolyMultivector.zero(DC)) == u


def test_fiber_translate_needs_vertical_sections():
    u = mv(DC, 1, None, (0,))
    with pytest.raises(ValueError):
        fiber_translate(u, mv(DC, 1, None, (0,)))  # base direction
    with pytest.raises(ValueError):
        fiber_translate(u, mv(DC, 1, (0, 1, 0), (1,)))  # fiber coefficient


def test_fiber_translate_matches_adjoint_exponential():
    from derived_brackets.vdata import exp_ad

    rng = random.Random(11)
    for _ in range(12):
        pi = random_coiso_poisson(rng, DC, 3)
        phi = random_vertical_section(rng, DC, 3)
        assert fiber_translate(pi, phi) == exp_ad(coiso_vdata(pi), phi, pi)


def test_filtration_laws_on_samples():
    # (a) bracket superadditive, (b) vertical sections land in level >= 1,
    # (c) the projection does not decrease the level
    rng = random.Random(12)
    pi = random_coiso_poisson(rng, DC, 2)
    v = coiso_vdata(pi)
    fdeg = v.filtration.degree
    for x in v.sample_basis:
        for y in v.sample_basis:
            b = v.bracket(x, y)
            if not b.is_zero():
                assert fdeg(b) >= fdeg(x) + fdeg(y)
        px = v.project(x)
        if not px.is_zero():
            assert fdeg(px) >= fdeg(x)
    for a in v.a_basis:
        if not a.is_zero() and a.arities() == {1}:
            assert fdeg(a) >= 1


def test_pol_degree_examples():
    assert mv(DC, 1, (0, 2, 0), (0,)).pol_degree() == 2  # F(p) grad x-leg
    assert mv(DC, 1, (0, 2, 0), (1,)).pol_degree() == 1  # F(p) with a fiber leg
    assert mv(DC, 1, (1, 0, 0), (1,)).pol_degree() == -1  # f(x) dp
    assert mv(DC, 1, None, (1, 2)).pol_degree() == -2
    assert PolyMultivector.zero(DC).pol_degree() is None


# -- JSON literals ----------------------------------------------------------------------


def test_element_json_round_trip():
    rng = random.Random(13)
    for _ in range(10):
        u = random_multivector(rng, DC, rng.randint(0, 3), 2)
        assert mv_from_json(element_to_json(u)) == u
        w = random_form(rng, D3, rng.randint(0, 3), 2)
        assert form_from_json(element_to_json(w)) == w


def test_json_literal_shape():
    data = {
        "dims": {"base": 1, "fiber": 2},
        "terms": [{"coef": "1/2", "monomial": {"x1": 1, "p2": 3}, "wedge": [1, 3]}],
    }
    u = mv_from_json(data)
    assert u == mv(DC, Fraction(1, 2), (1, 0, 3), (0, 2))


def test_term_cap_guard(monkeypatch):
    monkeypatch.setenv("DB_MAX_TERMS", "4")
    from derived_brackets.polygeo import TermExplosionError, poly_mul

    big_poly = {(i, 0, 0): Fraction(1) for i in range(4)}
    with pytest.raises(TermExplosionError):
        poly_mul(big_poly, {(0, i, 0): Fraction(1) for i in range(4)})
