"""Tests for vector fields, forms, integrability, tangency and webs."""

from fractions import Fraction
from itertools import combinations

import pytest

from apps.leviflat.errors import (
    ContextMismatchError,
    DegenerateFamilyError,
    HyperplaneError,
    ParseError,
)
from apps.leviflat.foliation import (
    DifferentialForm,
    FoliationPresentation,
    VectorField,
    fields_tangent_to,
    first_integral_report,
    generic_rank,
    icomp_singular_locus,
    is_integrable,
    is_invariant,
    kernel_fields,
    level_set_report,
    lie_bracket,
    mirror_foliation,
    parse_field,
    parse_one_form,
    restrict_to_hyperplane,
    singular_locus,
    sylvester_resultant,
    tangency_witnesses,
    tangent_to_leviflat,
    verify_first_integral,
    verify_level_set_containment,
    web_from_family,
)
from apps.leviflat.groebner import Ideal
from apps.leviflat.modelfile import LEVEL_CURVE_CONTEXT
from apps.leviflat.parser import parse_poly, parse_polys
from apps.leviflat.polycore import Polynomial, VarContext


@pytest.fixture
def ctx4():
    return VarContext.create(4)


def _field(ctx, source):
    return parse_field(source, ctx)


def _random_form(ctx, degree, random_poly, rng):
    keys = list(combinations(range(ctx.size), degree))
    chosen = rng.sample(keys, min(len(keys), 3))
    return DifferentialForm(ctx, degree, {key: random_poly(ctx) for key in chosen})


class TestVectorField:
    """Derivations and brackets."""

    def test_apply(self, ctx3):
        """A field acts on polynomials as a derivation."""
        v = _field(ctx3, "z2, -z1, 0")
        assert v.apply(parse_poly("z1^2 + z2^2", ctx3)).is_zero()
        assert v.apply(parse_poly("z1", ctx3)) == parse_poly("z2", ctx3)

    def test_lie_bracket(self, ctx3):
        """[z1 d/dz2, d/dz1] = -d/dz2."""
        u = _field(ctx3, "0, z1, 0")
        v = VectorField.coordinate(ctx3, 0)
        assert lie_bracket(u, v) == -VectorField.coordinate(ctx3, 1)
        assert lie_bracket(u, u).is_zero()

    def test_bracket_is_commutator(self, ctx3):
        """[u, v](f) = u(v(f)) - v(u(f))."""
        u = _field(ctx3, "z2*z3, 1, z1")
        v = _field(ctx3, "z1^2, z3, i")
        f = parse_poly("z1*z2^2 + z3^3", ctx3)
        assert lie_bracket(u, v).apply(f) == u.apply(v.apply(f)) - v.apply(u.apply(f))

    def test_mirror(self, ctx3):
        """The mirror acts on the w-block with conjugated coefficients."""
        v = _field(ctx3, "i*z1, 0, 0")
        mirrored = v.mirror()
        full = ctx3.full()
        assert mirrored.context == full
        assert mirrored.variables == (3,)
        assert mirrored.component(3) == parse_poly("-i*w1", full)

    def test_parse_field_errors(self, ctx3):
        """One component per coordinate."""
        with pytest.raises(ParseError):
            parse_field("1, 0", ctx3)

    def test_context_checks(self, ctx3, ctx2_full):
        """Components share the field's context."""
        with pytest.raises(ContextMismatchError):
            VectorField(ctx3, [Polynomial.variable(ctx2_full, 0)])
        with pytest.raises(ContextMismatchError):
            VectorField(ctx3, [Polynomial.zero(ctx3)] * 2, [0, 0])

    def test_jacobi_on_random_triples(self, ctx3, random_poly):
        """The bracket is antisymmetric and satisfies the Jacobi identity."""
        for _ in range(10):
            u, v, w = (VectorField(ctx3, [random_poly(ctx3) for _ in range(3)]) for _ in range(3))
            assert lie_bracket(u, v) == -lie_bracket(v, u)
            total = (
                lie_bracket(u, lie_bracket(v, w))
                + lie_bracket(v, lie_bracket(w, u))
                + lie_bracket(w, lie_bracket(u, v))
            )
            assert total.is_zero()


class TestDifferentialForm:
    """Exterior algebra."""

    def test_parse_one_form(self, ctx4):
        """Differentials are written dz1 ... dzN."""
        w = parse_one_form("z2*dz3 - z3*dz2", ctx4)
        assert w == DifferentialForm.one_form(
            ctx4, [parse_poly("-z3", ctx4), parse_poly("z2", ctx4)], [1, 2]
        )
        with pytest.raises(ParseError):
            parse_one_form("dz1*dz2", ctx4)
        with pytest.raises(ParseError):
            parse_one_form("z1", ctx4)

    def test_d_squared_is_zero(self, ctx3):
        """d(df) = 0."""
        f = parse_poly("z1^2*z2 + i*z2*z3^3", ctx3)
        assert DifferentialForm.exact(f).d().is_zero()
        w = parse_one_form("z2*z3*dz1 + z1^2*dz3", ctx3)
        assert w.d().d().is_zero()

    def test_wedge_antisymmetry(self, ctx3):
        """1-forms anticommute."""
        a = parse_one_form("z1*dz2 + dz3", ctx3)
        b = parse_one_form("dz1 - z3*dz2", ctx3)
        assert a.wedge(b) == -(b.wedge(a))
        assert a.wedge(a).is_zero()
        assert a.wedge(b).coefficient((2, 0)) == -a.wedge(b).coefficient((0, 2))

    def test_interior(self, ctx3):
        """i_v df = v(f)."""
        f = parse_poly("z1*z2 - z3^2", ctx3)
        v = _field(ctx3, "1, z1, z2")
        contracted = DifferentialForm.exact(f).interior(v)
        assert contracted.coefficient(()) == v.apply(f)

    def test_mirror(self, ctx3):
        """Mirrored forms use the w differentials."""
        w = parse_one_form("i*z2*dz1", ctx3)
        full = ctx3.full()
        assert w.mirror() == DifferentialForm.one_form(full, [parse_poly("-i*w2", full)], [3])

    def test_degree_mismatch(self, ctx3):
        """Forms of different degree do not add."""
        w = parse_one_form("dz1", ctx3)
        with pytest.raises(ValueError):
            w + w.wedge(w)

    def test_random_d_squared(self, ctx4, random_poly, rng):
        """d(d(a)) = 0 for random forms of degree up to three."""
        for degree in range(4):
            for _ in range(5):
                a = _random_form(ctx4, degree, random_poly, rng)
                assert a.d().d().is_zero()

    def test_random_leibniz(self, ctx4, random_poly, rng):
        """d(a ^ b) = da ^ b + (-1)^p a ^ db for a p-form a."""
        for _ in range(10):
            p = rng.randint(0, 2)
            a = _random_form(ctx4, p, random_poly, rng)
            b = _random_form(ctx4, rng.randint(0, 3 - p), random_poly, rng)
            rhs = a.d().wedge(b)
            second = a.wedge(b.d())
            rhs = rhs + second if p % 2 == 0 else rhs - second
            assert a.wedge(b).d() == rhs

    def test_integrability_under_rescaling(self, ctx4, random_poly, rng):
        """(f w) ^ d(f w) = f^2 w ^ dw."""
        for _ in range(10):
            w = _random_form(ctx4, 1, random_poly, rng)
            f = random_poly(ctx4)
            fw = w.scale(f)
            assert fw.wedge(fw.d()) == w.wedge(w.d()).scale(f * f)


class TestPresentations:
    """Kernels, ranks and integrability."""

    def test_kernel_fields(self, ctx4):
        """Every Cramer field is annihilated by the form."""
        w = parse_one_form("z2*dz3 - z3*dz2", ctx4)
        fields = kernel_fields([w])
        assert _field(ctx4, "0, z2, z3, 0") in fields
        for v in fields:
            assert w.interior(v).is_zero()

    def test_kernel_of_two_forms(self, ctx3):
        """Two forms in C^3 leave one direction."""
        forms = [parse_one_form("dz1", ctx3), parse_one_form("dz2 - z1*dz3", ctx3)]
        fields = kernel_fields(forms)
        assert fields == [_field(ctx3, "0, z1, 1")]

    def test_generic_rank(self, ctx3):
        """Rank over the function field."""
        rows = [parse_polys("z1, z2", ctx3), parse_polys("z1^2, z1*z2", ctx3)]
        assert generic_rank(rows, ctx3) == 1
        rows = [parse_polys("z1, z2", ctx3), parse_polys("z2, z1", ctx3)]
        assert generic_rank(rows, ctx3) == 2
        assert generic_rank([], ctx3) == 0

    def test_integrable_forms(self, ctx3, ctx4):
        """w ^ dw decides integrability of a single form."""
        assert is_integrable(FoliationPresentation(ctx4, forms=[parse_one_form("z2*dz3 - z3*dz2", ctx4)]))
        assert not is_integrable(FoliationPresentation(ctx3, forms=[parse_one_form("dz1 + z2*dz3", ctx3)]))

    def test_integrable_fields(self, ctx3):
        """Involutive spans are integrable."""
        assert is_integrable(
            FoliationPresentation(ctx3, fields=[_field(ctx3, "1, 0, 0"), _field(ctx3, "0, 1, 0")])
        )
        assert not is_integrable(
            FoliationPresentation(ctx3, fields=[_field(ctx3, "1, 0, z2"), _field(ctx3, "0, 1, 0")])
        )

    def test_presentation_needs_one_kind(self, ctx3):
        """Fields and forms are exclusive."""
        with pytest.raises(ValueError):
            FoliationPresentation(ctx3)
        with pytest.raises(ValueError):
            FoliationPresentation(
                ctx3, fields=[_field(ctx3, "1, 0, 0")], forms=[parse_one_form("dz1", ctx3)]
            )

    def test_mirror_foliation(self, ctx3):
        """Mirroring moves the presentation to the w-block."""
        v = _field(ctx3, "i*z1, 0, 0")
        mirrored = mirror_foliation(FoliationPresentation(ctx3, fields=[v]))
        assert mirrored.context == ctx3.full()
        assert mirrored.kind == "fields"
        assert mirrored.fields == (v.mirror(),)

    def test_singular_locus(self, ex1_file):
        """The pencil z3/z2 is singular along z2 = z3 = 0."""
        F = ex1_file.foliation
        zctx = ex1_file.model.z_context
        report = singular_locus(F)
        assert report.ideal.equals(Ideal(zctx, parse_polys("z2, z3", zctx)))
        assert report.codim == 2
        assert report.codim_at_least_two

    def test_is_invariant(self, ex1_file):
        """The singular locus is invariant, z4 = 0 is not."""
        F = ex1_file.foliation
        zctx = ex1_file.model.z_context
        assert is_invariant(Ideal(zctx, parse_polys("z2, z3", zctx)), F)
        assert not is_invariant(Ideal(zctx, parse_polys("z4", zctx)), F)


class TestTangency:
    """Foliations tangent to real varieties."""

    def test_first_example_tangent(self, ex1_file):
        """The pencil is tangent to the first example."""
        assert tangent_to_leviflat(ex1_file.foliation, ex1_file.model)

    def test_transverse_field(self, ex1):
        """d/dz2 moves the real equation."""
        zctx = ex1.z_context
        F = FoliationPresentation(zctx, fields=[VectorField.coordinate(zctx, 1)])
        witnesses = tangency_witnesses(F, ex1)
        assert witnesses
        assert not witnesses[0].remainder.is_zero()

    def test_field_leaving_icomp(self, ex1):
        """d/dz4 points off z4 = 0, so the real equation for z4 moves."""
        zctx = ex1.z_context
        F = FoliationPresentation(zctx, fields=[VectorField.coordinate(zctx, 3)])
        witnesses = tangency_witnesses(F, ex1)
        assert witnesses
        assert not tangent_to_leviflat(F, ex1)

    def test_forms_with_small_tangent_part(self, ex1):
        """dz1 and dz2 leave only d/dz3 along z4 = 0, one direction short."""
        zctx = ex1.z_context
        F = FoliationPresentation(
            zctx, forms=[parse_one_form("dz1", zctx), parse_one_form("dz2", zctx)]
        )
        assert not tangent_to_leviflat(F, ex1)

    def test_transverse_hyperplanes(self, ex1):
        """The hyperplanes z4 = const are too large to be leaves."""
        zctx = ex1.z_context
        F = FoliationPresentation(zctx, forms=[parse_one_form("dz4", zctx)])
        assert tangency_witnesses(F, ex1)

    def test_tangency_matches_leaf_invariance(self, ex1_file):
        """A field family is tangent exactly when every sampled leaf is invariant."""
        H = ex1_file.model
        zctx = H.z_context
        leaves = [ex1_file.family.at(c) for c, _ in ex1_file.samples]
        tangent_part = fields_tangent_to(ex1_file.foliation.as_fields(), H.icomp)
        candidates = [
            FoliationPresentation(zctx, fields=tangent_part),
            FoliationPresentation(zctx, fields=[VectorField.coordinate(zctx, 0)]),
            FoliationPresentation(zctx, fields=[VectorField.coordinate(zctx, 1)]),
            FoliationPresentation(zctx, fields=[VectorField.coordinate(zctx, 2)]),
        ]
        verdicts = []
        for F in candidates:
            invariant = all(is_invariant(leaf, F) for leaf in leaves)
            assert tangent_to_leviflat(F, H) == invariant
            verdicts.append(invariant)
        assert verdicts == [True, True, False, False]

    def test_tangent_foliation_preserves_icomp(self, ex1_file):
        """The tangent part of the pencil leaves H^i invariant."""
        H = ex1_file.model
        F = FoliationPresentation(
            H.z_context, fields=fields_tangent_to(ex1_file.foliation.as_fields(), H.icomp)
        )
        assert tangent_to_leviflat(F, H)
        assert is_invariant(H.icomp, F)

    def test_level_ideals_invariant(self, ex1_file, rng):
        """Level sets num = lambda*den of a first integral are invariant inside H^i."""
        H = ex1_file.model
        num, den = ex1_file.first_integral
        F = FoliationPresentation(
            H.z_context, fields=fields_tangent_to(ex1_file.foliation.as_fields(), H.icomp)
        )
        assert verify_first_integral(num, den, F, H.icomp)
        for _ in range(5):
            value = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            level = H.icomp.with_generators([num - den.scale(value)])
            assert is_invariant(level, F)

    def test_wrong_context(self, ex1, ctx3):
        """The foliation must live on the model's coordinates."""
        with pytest.raises(ContextMismatchError):
            tangency_witnesses(FoliationPresentation(ctx3, fields=[VectorField.coordinate(ctx3, 0)]), ex1)

    def test_first_integral(self, ex1_file):
        """z3/z2 is a non-constant first integral."""
        num, den = ex1_file.first_integral
        report = first_integral_report(num, den, ex1_file.foliation, ex1_file.model.icomp)
        assert report.first_integral
        assert not report.constant
        assert verify_first_integral(num, den, ex1_file.foliation, ex1_file.model.icomp)

    def test_not_a_first_integral(self, ex1_file):
        """z1 is not constant along the leaves."""
        zctx = ex1_file.model.z_context
        num = parse_poly("z1", zctx)
        report = first_integral_report(
            num, Polynomial.constant(zctx, 1), ex1_file.foliation, ex1_file.model.icomp
        )
        assert not report.first_integral
        assert report.witnesses

    def test_level_set(self, ex1_file):
        """The first example lies in the preimage of the real line."""
        num, den = ex1_file.first_integral
        report = level_set_report(ex1_file.model, num, den, ex1_file.level_curve)
        assert report.contained
        assert all(r.is_zero() for r in report.remainders)

    def test_level_set_unit_circle(self, ex1_file):
        """The unit circle is not the right level set."""
        num, den = ex1_file.first_integral
        circle = parse_poly("u*~u - 1", LEVEL_CURVE_CONTEXT)
        assert not level_set_report(ex1_file.model, num, den, circle).contained
        assert not verify_level_set_containment(ex1_file.model, num, den, circle)

    def test_level_set_degenerate_denominator(self, ex1_file):
        """Denominators vanishing on H^i are rejected."""
        zctx = ex1_file.model.z_context
        with pytest.raises(DegenerateFamilyError):
            level_set_report(
                ex1_file.model,
                parse_poly("z3", zctx),
                parse_poly("z4", zctx),
                ex1_file.level_curve,
            )


class TestWebs:
    """Resultants and webs."""

    def test_sylvester_resultant(self):
        """Res_c(c^2 - z1, c - z2) = z2^2 - z1."""
        ctx = VarContext.create(2, aux=["c"])
        f = parse_poly("c^2 - z1", ctx)
        g = parse_poly("c - z2", ctx)
        assert sylvester_resultant(f, g, ctx.aux_index("c")) == parse_poly("z2^2 - z1", ctx)

    def test_linear_family(self, ctx4):
        """A pencil gives a web of order one."""
        ctx = ctx4.with_aux(["c"])
        report = web_from_family(parse_poly("z3 - c*z2", ctx), "c")
        out = VarContext(4, 0, ("dz1", "dz2", "dz3", "dz4"))
        assert report.order == 1
        assert report.equation in (
            parse_poly("z3*dz2 - z2*dz3", out),
            parse_poly("z2*dz3 - z3*dz2", out),
        )

    def test_quadratic_family(self, ex2_file):
        """The second example's family is a 2-web."""
        family = ex2_file.family
        report = web_from_family(family.generators[0], family.parameter)
        assert report.order == 2
        assert not report.equation.is_zero()

    def test_degenerate_families(self, ctx4):
        """Missing or unused parameters are rejected."""
        ctx = ctx4.with_aux(["c"])
        with pytest.raises(DegenerateFamilyError):
            web_from_family(parse_poly("z3 - c*z2", ctx), "t")
        with pytest.raises(DegenerateFamilyError):
            web_from_family(parse_poly("z3 - z2", ctx), "c")


class TestHyperplaneSections:
    """Restriction to hyperplanes."""

    def test_restrict_ideal(self, ctx3):
        """z1 is solved for and substituted."""
        ideal = Ideal(ctx3, parse_polys("z1*z2 - z3", ctx3))
        restricted, report = restrict_to_hyperplane(ideal, parse_poly("z3 - z1", ctx3))
        target = restricted.context
        assert target.names == ("z2", "z3")
        assert report.solved_variable == "z1"
        assert restricted.equals(Ideal(target, parse_polys("z2*z3 - z3", target)))

    def test_variety_inside_hyperplane(self, ctx3):
        """Restricting to a hyperplane containing the variety fails."""
        with pytest.raises(HyperplaneError):
            restrict_to_hyperplane(Ideal(ctx3, parse_polys("z1", ctx3)), parse_poly("2*z1", ctx3))

    def test_nonlinear_hyperplane(self, ctx3):
        """Hyperplanes have degree one."""
        with pytest.raises(HyperplaneError):
            restrict_to_hyperplane(Ideal(ctx3), parse_poly("z1^2", ctx3))

    def test_restrict_forms(self, ex1_file):
        """A generic section of the pencil keeps a codimension-two singular locus."""
        F = ex1_file.foliation
        zctx = F.context
        section, report = restrict_to_hyperplane(F, parse_poly("z1 - z4", zctx))
        assert section.context.names == ("z2", "z3", "z4")
        assert report.generic
        assert report.singular_locus.codim == 2

    def test_hyperplane_leaf(self, ctx3):
        """The leaf of dz1 through the origin cannot be sectioned."""
        F = FoliationPresentation(ctx3, forms=[parse_one_form("dz1", ctx3)])
        with pytest.raises(HyperplaneError):
            restrict_to_hyperplane(F, parse_poly("z1", ctx3))

    def test_restrict_fields(self, ctx3):
        """Only the tangent part of the distribution survives."""
        F = FoliationPresentation(ctx3, fields=[_field(ctx3, "1, 0, 0"), _field(ctx3, "0, 1, 0")])
        section, _ = restrict_to_hyperplane(F, parse_poly("z1 - z2", ctx3))
        assert len(section.fields) == 1
        assert section.context.names == ("z2", "z3")


class TestIcompSingularLocus:
    """Singular points of the intrinsic complexification."""

    def test_quadric_cone(self, ex3):
        """The quadric cone is singular only at its vertex."""
        report = icomp_singular_locus(ex3)
        assert report.dimension == 0
        assert report.ambient_dimension == 3
        assert report.codim == 3

    def test_smooth_icomp(self, ex1):
        """A hyperplane is smooth everywhere."""
        report = icomp_singular_locus(ex1)
        assert report.dimension is None
        assert report.codim_at_least_two
