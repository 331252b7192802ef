import random
from fractions import Fraction

import pytest

from derived_brackets.graded import GradedSpace, HomElt
from derived_brackets.linfty import MCError, NonTerminatingSeriesError, mc_residual
from derived_brackets.sampling import (
    fixture_gla,
    fixture_mc_big,
    fixture_mc_small,
    fixture_vdata,
    random_fixture_a_element,
    random_fixture_element,
    random_fixture_pair,
)
from derived_brackets.vdata import (
    BigElt,
    VData,
    big_algebra,
    deform_vdata,
    exp_ad,
    machine_check,
    p_phi,
    restrict,
    small_algebra,
    twist_vdata,
    validate_vdata,
)


def test_fixture_validates():
    report = validate_vdata(fixture_vdata())
    assert report.ok, report.failures


def test_validation_catches_nonabelian_subalgebra():
    v = fixture_vdata()
    bad = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=v.delta,
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis + (v.zero.space.gen("u"),),  # u brackets nontrivially
        curved=False,
    )
    report = validate_vdata(bad)
    assert not report.ok
    assert any("abelian" in kind for kind, _ in report.failures)


def test_validation_catches_non_square_zero_delta():
    v = fixture_vdata()
    bad = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=v.zero.space.element({"u": 1, "v": 1}),  # [u+v, u+v] = 3w
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis,
        curved=False,
    )
    report = validate_vdata(bad)
    assert not report.ok
    assert any("square" in kind for kind, _ in report.failures)


def test_validation_catches_false_curved_flag():
    v = fixture_vdata()
    bad = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=v.zero.space.gen("b"),  # inside the subalgebra, so P(delta) != 0
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis,
        curved=False,
    )
    report = validate_vdata(bad)
    assert any("non-curved" in kind for kind, _ in report.failures)


# -- deformed projections ----------------------------------------------------------


def test_p_phi_at_zero_is_projection():
    v = fixture_vdata()
    proj = p_phi(v, v.zero)
    for x in v.sample_basis:
        assert proj(x) == v.project(x)


def test_p_phi_is_identity_on_subalgebra():
    rng = random.Random(1)
    v = fixture_vdata()
    for _ in range(10):
        phi = random_fixture_a_element(rng, 0)
        proj = p_phi(v, phi)
        for a in v.a_basis:
            assert proj(a) == a


def test_mc_iff_deformed_projection_kills_delta():
    rng = random.Random(2)
    v = fixture_vdata()
    small = small_algebra(v)
    for _ in range(25):
        phi = (
            fixture_mc_small(rng)
            if rng.randrange(2)
            else random_fixture_a_element(rng, 0)
        )
        proj = p_phi(v, phi)
        is_mc = mc_residual(small, phi).residual.is_zero()
        assert is_mc == proj(v.delta).is_zero()


def test_p_phi_requires_subalgebra_direction():
    v = fixture_vdata()
    with pytest.raises(ValueError):
        p_phi(v, v.zero.space.gen("u"))


def test_exp_ad_reports_non_terminating_series():
    space = GradedSpace.of([("g", 0)])
    from derived_brackets.gla import StructureGLA

    torus = StructureGLA(space, {})

    # a fake bracket that never decays
    def stubborn(x, y):
        return space.gen("g")

    v = VData(
        bracket=stubborn,
        degree=lambda x: x.degree(),
        components=lambda x: x.components(),
        project=lambda x: x,
        delta=space.zero(),
        zero=space.zero(),
        in_a=lambda x: True,
    )
    with pytest.raises(NonTerminatingSeriesError, match="g"):
        exp_ad(v, space.gen("g"), space.gen("g"), cap=8)


# -- small and big construction -----------------------------------------------------


def test_small_brackets_vanish_for_zero_delta():
    v = fixture_vdata()
    trivial = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=v.zero,
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis,
        curved=False,
        filtration=v.filtration,
        series_bound=v.series_bound,
        max_arity=v.max_arity,
    )
    small = small_algebra(trivial)
    space = v.zero.space
    for n in (1, 2, 3):
        assert small.m(n, (space.gen("a"),) * n).is_zero()


def test_big_unary_with_zero_delta_projects():
    v = fixture_vdata()
    trivial = deform_vdata(v, v.zero)  # same projection, same delta
    space = v.zero.space
    no_delta = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=v.zero,
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis,
        curved=False,
        filtration=v.filtration,
        series_bound=v.series_bound,
        max_arity=v.max_arity,
    )
    big = big_algebra(no_delta)
    x = space.element({"u": 2, "b": 3})
    d = big.m(1, (BigElt(x, space.zero()),))
    assert d.x.is_zero()
    assert d.a == v.project(x)
    del trivial


def test_big_binary_reproduces_bracket_with_shift_sign():
    v = fixture_vdata()
    big = big_algebra(v)
    space = v.zero.space
    x, y = space.gen("u"), space.gen("a")
    value = big.m(2, (BigElt(x, space.zero()), BigElt(y, space.zero())))
    # {x[1], y[1]} = (-1)^{|x|} [x, y][1]
    assert value.x == v.bracket(x, y).scale(-1)  # |u| = 1
    assert value.a.is_zero()


def test_small_is_the_subalgebra_family_of_big():
    rng = random.Random(3)
    v = fixture_vdata()
    small = small_algebra(v)
    big = big_algebra(v)
    for n in range(1, 5):
        for _ in range(10):
            args = tuple(random_fixture_a_element(rng, rng.choice([0, 1])) for _ in range(n))
            pair_args = tuple(BigElt(v.zero, a) for a in args)
            expected = small.m(n, args)
            value = big.m(n, pair_args)
            assert value.x.is_zero()
            assert value.a == expected


def test_big_rejects_curved_quadruple():
    v = fixture_vdata()
    curved = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=v.zero.space.element({"u": 1, "b": 1}),
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis,
        curved=True,
    )
    with pytest.raises(ValueError):
        big_algebra(curved)


def test_curved_small_algebra_has_curvature():
    v = fixture_vdata()
    space = v.zero.space
    curved = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=space.element({"u": 1, "b": 2}),
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis,
        curved=True,
        filtration=v.filtration,
        series_bound=v.series_bound,
        max_arity=v.max_arity,
    )
    small = small_algebra(curved)
    assert small.m(0, ()) == space.gen("b", 2)
    report = mc_residual(small, space.zero())
    assert report.residual == space.gen("b", 2)


# -- restriction ----------------------------------------------------------------------


def test_restrict_to_kernel_always_valid():
    v = fixture_vdata()
    big = big_algebra(v)
    space = v.zero.space
    kernel_names = ("u", "v", "w")
    member = lambda x: all(n in kernel_names for n in x.terms)  # noqa: E731
    basis = [space.gen(n) for n in kernel_names]
    restricted = restrict(v, big, member, basis)
    value = restricted.m(
        2, (BigElt(space.gen("u"), space.zero()), BigElt(space.gen("v"), space.zero()))
    )
    assert value.x == v.bracket(space.gen("u"), space.gen("v")).scale(-1)


def test_restrict_full_space_is_identity():
    rng = random.Random(4)
    v = fixture_vdata()
    big = big_algebra(v)
    restricted = restrict(v, big, lambda x: True, list(v.sample_basis))
    for n in (1, 2, 3):
        args = tuple(random_fixture_pair(rng, 0) for _ in range(n))
        assert restricted.m(n, args) == big.m(n, args)


def test_restrict_rejects_unstable_subspace():
    v = fixture_vdata()
    big = big_algebra(v)
    space = v.zero.space
    # span(a) is not stable: D(a) = [u, a] = v + b leaves it
    with pytest.raises(ValueError, match="stable"):
        restrict(v, big, lambda x: set(x.terms) <= {"a"}, [space.gen("a")])


# -- twisting and the double check ----------------------------------------------------


def test_twist_vdata_by_zero_keeps_everything():
    v = fixture_vdata()
    twisted = twist_vdata(v, BigElt(v.zero, v.zero))
    assert twisted.delta == v.delta
    for x in v.sample_basis:
        assert twisted.project(x) == v.project(x)


def test_twist_of_zero_delta_recovers_delta():
    v = fixture_vdata()
    no_delta = VData(
        bracket=v.bracket,
        degree=v.degree,
        components=v.components,
        project=v.project,
        delta=v.zero,
        zero=v.zero,
        in_a=v.in_a,
        sample_basis=v.sample_basis,
        a_basis=v.a_basis,
        curved=False,
        filtration=v.filtration,
        series_bound=v.series_bound,
        max_arity=v.max_arity,
    )
    twisted = twist_vdata(no_delta, BigElt(v.delta, v.zero))
    assert twisted.delta == v.delta
    for x in v.sample_basis:
        assert twisted.project(x) == v.project(x)
    # and the twisted quadruple's brackets agree with the original fixture's
    lhs, rhs = big_algebra(twisted), big_algebra(v)
    rng = random.Random(5)
    for n in range(1, 4):
        args = tuple(random_fixture_pair(rng, rng.choice([-1, 0, 1])) for _ in range(n))
        assert lhs.m(n, args) == rhs.m(n, args)


def test_twist_vdata_requires_mc():
    v = fixture_vdata()
    with pytest.raises(MCError):
        twist_vdata(v, BigElt(v.zero, v.zero.space.gen("a")))


def test_machine_trivial_case():
    v = fixture_vdata()
    rng = random.Random(6)
    phi = fixture_mc_small(rng)
    report = machine_check(v, phi, v.zero, v.zero)
    assert report.left_vanishes and report.right_vanishes and report.agree


def test_machine_requires_mc_base():
    v = fixture_vdata()
    with pytest.raises(MCError):
        machine_check(v, v.zero.space.gen("a"), v.zero, v.zero)


def test_machine_agreement_on_random_samples():
    rng = random.Random(7)
    v = fixture_vdata()
    negatives = 0
    for _ in range(60):
        phi = fixture_mc_small(rng)
        dtilde = random_fixture_element(rng, 1)
        ptilde = random_fixture_a_element(rng, 0)
        report = machine_check(v, phi, dtilde, ptilde)
        assert report.agree
        negatives += not report.left_vanishes
    assert negatives > 0
    # engineered deformations make both sides vanish
    positives = 0
    for _ in range(15):
        alpha = fixture_mc_big(rng)
        report = machine_check(v, v.zero, alpha.x, alpha.a)
        assert report.agree
        assert report.left_vanishes and report.right_vanishes
        positives += 1
    assert positives == 15


def test_curved_coisotropic_relations_and_curvature():
    # exercised separately: the curved relation sums include the i = 0 term
    import itertools as it

    from derived_brackets.linfty import relations_residual
    from derived_brackets.polygeo import PolyMultivector, coiso_vdata, mv
    from derived_brackets.sampling import random_base_poly

    rng = random.Random(21)
    dims = (1, 2)
    pi = mv(dims, 1, (1, 0, 0), (1, 2)) + mv(dims, 2, None, (1, 2))
    cv = coiso_vdata(pi)
    assert cv.curved
    small = small_algebra(cv)
    assert small.curved
    assert small.m(0, ()) == cv.project(pi)

    def rand_a(degw):
        s = degw + 1
        out = PolyMultivector.zero(dims)
        opts = list(it.combinations(range(1, 3), s))
        for _ in range(2):
            w = rng.choice(opts)
            for mono, c in random_base_poly(rng, dims, 2).items():
                out = out + mv(dims, c, mono, w)
        return out

    for n in range(1, 5):
        for _ in range(10):
            args = tuple(rand_a(rng.choice([0, 1])) for _ in range(n))
            assert relations_residual(small, n, args).is_zero()

    report = mc_residual(small, PolyMultivector.zero(dims))
    assert report.residual == cv.project(pi)
