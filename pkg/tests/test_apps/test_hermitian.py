"""Tests for real polynomials in (z, z-bar), complexification and cones."""

import pytest

from apps.leviflat.errors import ConeError, ContextMismatchError, PointLengthError
from apps.leviflat.groebner import Ideal
from apps.leviflat.hermitian import (
    ConeCertificate,
    HermitianPoly,
    LeviFlatModel,
    bihomogeneous_components,
    certify_cone,
    complexify,
    complexify_variety,
    diagonal_restrict,
    diagonal_point,
    holomorphic_equations,
    icomp_with_mirror,
    intrinsic_complexification,
    is_real_polynomial,
    mirror,
    projective_cone,
    split_real,
)
from apps.leviflat.parser import parse_poly, parse_polys
from apps.leviflat.polycore import I_UNIT, GaussianRational, VarContext


class TestReality:
    """Real and imaginary parts."""

    @pytest.mark.parametrize(
        "source, real",
        [
            ("z1*~z1", True),
            ("i*z1 - i*~z1", True),
            ("z1 + ~z1 + z2*~z2 - 1", True),
            ("z1", False),
            ("i*z1*~z1", False),
        ],
    )
    def test_is_real(self, ctx2_full, source, real):
        """Reality means the coefficient matrix is Hermitian."""
        assert is_real_polynomial(parse_poly(source, ctx2_full)) is real

    def test_split_real(self, ctx2_full):
        """A holomorphic coordinate splits into its real and imaginary parts."""
        parts = split_real(parse_poly("z1", ctx2_full))
        assert [p.body for p in parts] == [
            parse_poly("1/2*z1 + 1/2*~z1", ctx2_full),
            parse_poly("-1/2*i*z1 + 1/2*i*~z1", ctx2_full),
        ]
        assert all(p.is_real for p in parts)

    def test_split_real_drops_zero_parts(self, ctx2_full):
        """Purely real input has a single part."""
        parts = split_real(parse_poly("z1*~z1 - 1", ctx2_full))
        assert len(parts) == 1
        assert parts[0].body == parse_poly("z1*~z1 - 1", ctx2_full)

    def test_split_real_values(self, ctx2_full):
        """The parts evaluate to Re and Im on the diagonal."""
        f = parse_poly("z1^2 + i*z2", ctx2_full)
        re, im = split_real(f)
        point = [GaussianRational(1, 2), GaussianRational("1/3", -1)]
        value = f.evaluate(diagonal_point(ctx2_full, point))
        assert re.evaluate(point) == GaussianRational(value.re)
        assert im.evaluate(point) == GaussianRational(value.im)

    def test_complexify_keeps_body(self, ctx2_full):
        """Complexification reads the w-block as independent variables."""
        p = HermitianPoly.of(parse_poly("z1*~z2 + z2*~z1", ctx2_full))
        assert complexify(p) == parse_poly("z1*w2 + z2*w1", ctx2_full)

    def test_holomorphic_input_lifted(self, ctx3):
        """A z-only polynomial is moved to the two-block context."""
        p = HermitianPoly.of(parse_poly("z1", ctx3))
        assert p.context == ctx3.full()
        assert not p.is_real


class TestMirror:
    """The mirror involution."""

    def test_holomorphic_mirror(self, ctx3):
        """f(z) becomes conj(f)(w)."""
        f = parse_poly("z1 + i*z2^2", ctx3)
        assert mirror(f) == parse_poly("w1 - i*w2^2", ctx3.full())

    def test_two_block_mirror(self, ctx2_full):
        """Mirroring twice is the identity."""
        P = parse_poly("(1 + i)*z1*w2 - 3*w1", ctx2_full)
        assert mirror(P) == parse_poly("(1 - i)*w1*z2 - 3*z1", ctx2_full)
        assert mirror(mirror(P)) == P

    def test_hermitian_mirror(self, ctx2_full):
        """Mirroring a Hermitian polynomial flags it as mirrored."""
        p = HermitianPoly.of(parse_poly("z1*~z2 + z2*~z1", ctx2_full))
        mirrored = mirror(p)
        assert mirrored.mirrored
        assert mirror(mirrored) == p
        assert str(mirrored) == "w2*~w1+w1*~w2"

    def test_complexify_mirrored(self, ctx2_full):
        """A mirrored polynomial complexifies in the mirror coordinates."""
        p = HermitianPoly.of(parse_poly("z1*~z2 + i*z2", ctx2_full))
        assert complexify(mirror(p)) == parse_poly("w1*z2 - i*w2", ctx2_full)
        assert complexify(p) == parse_poly("z1*w2 + i*z2", ctx2_full)

    def test_random_involution(self, ctx2_full, random_poly):
        """Mirroring twice is the identity and commutes with complexification."""
        for _ in range(200):
            P = random_poly(ctx2_full, terms=4, degree=3)
            assert mirror(mirror(P)) == P
            h = diagonal_restrict(P)
            assert mirror(mirror(h)) == h
            assert complexify(mirror(h)) == mirror(complexify(h))


class TestDiagonal:
    """Points (p, conj p)."""

    def test_diagonal_point(self, ctx2_full):
        """The w-block carries the conjugates."""
        assert diagonal_point(ctx2_full, [I_UNIT, 1]) == [I_UNIT, 1, -I_UNIT, 1]

    def test_wrong_length(self, ctx2_full):
        """Points need one coordinate per z-variable."""
        with pytest.raises(PointLengthError):
            diagonal_point(ctx2_full, [1])

    def test_diagonal_restrict(self, ctx2_full):
        """w goes back to the conjugate coordinates."""
        P = parse_poly("w1*z2", ctx2_full)
        h = diagonal_restrict(P)
        assert complexify(h) == P
        assert h.evaluate([I_UNIT, 1]) == -I_UNIT
        with pytest.raises(ContextMismatchError):
            diagonal_restrict(parse_poly("z1", VarContext.create(2)))

    def test_random_roundtrip(self, ctx2_full, random_poly, rng):
        """Restricting to the diagonal and complexifying again is the identity."""
        for _ in range(200):
            P = random_poly(ctx2_full, terms=4, degree=3)
            h = diagonal_restrict(P)
            assert complexify(h) == P
            point = [GaussianRational(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(2)]
            assert h.evaluate(point) == P.evaluate(diagonal_point(ctx2_full, point))

    def test_real_parts_are_real_on_the_diagonal(self, ctx2_full, random_poly, rng):
        """Real generators take real values at diagonal points."""
        for _ in range(10):
            for part in split_real(random_poly(ctx2_full, terms=4, degree=2)):
                for _ in range(5):
                    point = [
                        GaussianRational(rng.randint(-4, 4), rng.randint(-4, 4)) for _ in range(2)
                    ]
                    assert part.evaluate(point).is_real()


class TestComplexifiedVariety:
    """The ideal of H^C."""

    def test_complexify_variety(self, ctx2_full):
        """Real parts of z1*~z2 span the same ideal as z1*w2 and w1*z2."""
        ideal = complexify_variety(split_real(parse_poly("z1*~z2", ctx2_full)))
        assert ideal.context == ctx2_full
        assert ideal.equals(Ideal(ctx2_full, parse_polys("z1*w2, w1*z2", ctx2_full)))

    def test_complex_ideals_give_products(self, random_poly):
        """A complex variety X complexifies to X x X*."""
        zctx = VarContext.create(2)
        full = zctx.full()
        for _ in range(20):
            gens = [random_poly(zctx, terms=3, degree=2) for _ in range(2)]
            gens = [g for g in gens if not g.is_zero()]
            if not gens:
                continue
            parts = [part for g in gens for part in split_real(g)]
            lifted = [g.transfer(full) for g in gens] + [mirror(g) for g in gens]
            product_ideal = Ideal(full, lifted)
            assert complexify_variety(parts, full).equals(product_ideal)

    def test_empty_generators(self, ctx2_full):
        """An empty list needs a context."""
        assert complexify_variety([], ctx2_full).is_zero()
        with pytest.raises(ValueError):
            complexify_variety([])

    def test_holomorphic_equations(self, ctx2_full):
        """Each complex equation gives two real ones."""
        gens = holomorphic_equations(parse_polys("z1, z2", ctx2_full))
        assert len(gens) == 4
        assert all(g.is_real for g in gens)
        assert all(g.evaluate([0, 0]).is_zero() for g in gens)
        assert not all(g.evaluate([I_UNIT, 0]).is_zero() for g in gens)


class TestCones:
    """Cone certificates."""

    def test_certify_cone(self, ctx4_full):
        """Balanced and holomorphic generators are recognized."""
        certificate = certify_cone(parse_polys("~z3*z2 - ~z2*z3, z4, ~z1^2", ctx4_full))
        assert certificate.kinds == ("balanced", "holomorphic", "antiholomorphic")
        assert certificate.degrees == (1, 1, 2)
        assert certificate.holomorphic == tuple(parse_polys("z4, z1^2", ctx4_full))

    @pytest.mark.parametrize("source", ["z1 + z1*~z1", "z1^2*~z1", "3"])
    def test_not_a_cone(self, ctx2_full, source):
        """Mixed, unbalanced and constant generators are rejected."""
        with pytest.raises(ConeError):
            certify_cone([parse_poly(source, ctx2_full)])

    def test_bihomogeneous_components(self, ctx2_full):
        """Components come sorted by bidegree."""
        components = bihomogeneous_components(parse_poly("z1*~z1 + z1 + ~z2", ctx2_full))
        assert [bd for bd, _ in components] == [(0, 1), (1, 0), (1, 1)]

    def test_projective_cone(self, ctx4_full):
        """Cones build a model carrying their certificate."""
        gens = parse_polys("~z3*z2 - ~z2*z3, z4", ctx4_full)
        assert isinstance(projective_cone(gens, check_only=True), ConeCertificate)
        model = projective_cone(gens, levi_dimension=2)
        assert isinstance(model, LeviFlatModel)
        assert model.cone is not None
        with pytest.raises(ConeError):
            projective_cone([])


class TestLeviFlatModel:
    """Models and their intrinsic complexification."""

    def test_generators_split(self, ex1):
        """Complex inputs split into real generators."""
        assert len(ex1.inputs) == 2
        assert len(ex1.generators) == 3
        assert all(g.is_real for g in ex1.generators)

    def test_contains_point(self, ex1):
        """Membership on the diagonal."""
        assert ex1.contains_point([1, 1, 1, 0])
        assert ex1.contains_point([1, 2, 6, 0])
        assert not ex1.contains_point([0, 1, I_UNIT, 0])
        assert not ex1.contains_point([1, 1, 1, 1])

    def test_icomp_cone_and_elimination_agree(self, ex1):
        """The cone shortcut matches full elimination."""
        shortcut = intrinsic_complexification(ex1, use_cone=True)
        eliminated = intrinsic_complexification(ex1, use_cone=False)
        expected = Ideal(ex1.z_context, parse_polys("z4", ex1.z_context))
        assert shortcut.equals(expected)
        assert eliminated.equals(expected)

    def test_icomp_without_cone(self, ctx4_full):
        """Models that are not cones use elimination."""
        model = LeviFlatModel(ctx4_full, parse_polys("z2 - ~z2, z3, z4", ctx4_full), 1)
        zctx = model.z_context
        assert model.cone is None
        assert model.icomp.equals(Ideal(zctx, parse_polys("z3, z4", zctx)))
        assert model.icomp is model.icomp

    def test_icomp_with_mirror(self, ex1):
        """Both blocks carry the intrinsic equations."""
        ideal = icomp_with_mirror(ex1)
        assert ideal.context == ex1.context
        assert ideal.contains(parse_poly("z4", ex1.context))
        assert ideal.contains(parse_poly("w4", ex1.context))

    @pytest.mark.parametrize("name", ["ex1", "ex2"])
    def test_icomp_with_mirror_is_strictly_larger(self, name, request):
        """H^C sits in H^i x H^i* with codimension one."""
        model = request.getfixturevalue(name)
        product_ideal = icomp_with_mirror(model)
        assert model.complexified.contains_ideal(product_ideal)
        assert not product_ideal.contains_ideal(model.complexified)
        assert product_ideal.dimension() == model.complexified.dimension() + 1

    def test_context_checks(self, ctx3, ctx4_full):
        """Models live in a plain two-block context."""
        with pytest.raises(ContextMismatchError):
            LeviFlatModel(ctx3, [])
        with pytest.raises(ContextMismatchError):
            LeviFlatModel(ctx4_full.with_aux(["c"]), [])
