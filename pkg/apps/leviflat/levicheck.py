"""CR tangent spaces and sample-based checks of a claimed Levi foliation."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import sympy

from shared.logging import get_logger

from .errors import ContextMismatchError, DegenerateFamilyError, LeviflatError, NotOnVarietyError
from .foliation import FoliationPresentation, VectorField
from .groebner import Ideal, krull_dimension
from .hermitian import LeviFlatModel, diagonal_point
from .models import CRReport, LeviCheckReport, MultiLeafReport, SampleReport
from .parser import parse_polys
from .polycore import (
    GaussianRational,
    Polynomial,
    Scalar,
    VarContext,
    exact_rank,
    from_sympy,
    nullspace,
)
from .segre import verify_leaf

logger = get_logger(__name__)


def _point(H: LeviFlatModel, p: Sequence[Scalar]) -> List[GaussianRational]:
    if len(p) != H.N:
        raise NotOnVarietyError(f"expected a point with {H.N} coordinates, got {len(p)}")
    return [GaussianRational.coerce(v) for v in p]


def _holomorphic_rows(
    polys: Sequence[Polynomial], point: Sequence[GaussianRational], n_z: int
) -> List[List[GaussianRational]]:
    return [[g.partial_derivative(k).evaluate(point) for k in range(n_z)] for g in polys]


def cr_tangent(H: LeviFlatModel, p: Sequence[Scalar]) -> CRReport:
    """``T_pH cap J(T_pH)`` as the kernel of the holomorphic differentials at ``p``."""
    point = _point(H, p)
    if not H.contains_point(point):
        raise NotOnVarietyError("the point does not lie on the model")
    N = H.N
    diag = diagonal_point(H.context, point)
    bodies = [g.body for g in H.generators]
    rows = _holomorphic_rows(bodies, diag, N)
    rank = exact_rank(rows)
    kernel = nullspace(rows, N)
    real_rows = [
        [g.partial_derivative(k).evaluate(diag) for k in range(2 * N)] for g in bodies
    ]
    real_rank = exact_rank(real_rows)
    cr_dimension = N - rank
    regular = real_rank == 2 * N - 2 * cr_dimension - 1
    if H.levi_dimension is not None:
        regular = regular and cr_dimension == H.levi_dimension
    return CRReport(
        point=point,
        cr_dimension=cr_dimension,
        intrinsic_dimension=cr_dimension + 1,
        jacobian_rank=rank,
        real_jacobian_rank=real_rank,
        regular=regular,
        kernel=kernel,
    )


@dataclass(frozen=True)
class LeafFamily:
    """Leaves ``L_c`` cut out by polynomials in ``z`` and one real parameter."""

    context: VarContext
    generators: Tuple[Polynomial, ...]
    parameter: str

    @classmethod
    def parse(cls, z_context: VarContext, sources: Sequence[str], parameter: str) -> "LeafFamily":
        ctx = z_context.with_aux((parameter,))
        gens: List[Polynomial] = []
        for src in sources:
            gens.extend(parse_polys(src, ctx))
        return cls(ctx, tuple(gens), parameter)

    def __post_init__(self) -> None:
        if self.context.has_w or self.context.aux_index(self.parameter) is None:
            raise ContextMismatchError("a leaf family lives in z plus its parameter")
        for g in self.generators:
            if g.context != self.context:
                raise ContextMismatchError("family generator belongs to another context")

    @property
    def parameter_index(self) -> int:
        index = self.context.aux_index(self.parameter)
        assert index is not None
        return index

    @property
    def z_context(self) -> VarContext:
        return VarContext(self.context.n_z, 0, (), self.context.z_names)

    def at(self, value: Scalar) -> Ideal:
        """The leaf ideal for one parameter value."""
        c = GaussianRational.coerce(value)
        zctx = self.z_context
        return Ideal(
            zctx,
            [g.specialize({self.parameter_index: c}).transfer(zctx) for g in self.generators],
        )


def _same_row_space(a: List[List[GaussianRational]], b: List[List[GaussianRational]]) -> bool:
    ra, rb = exact_rank(a), exact_rank(b)
    return ra == rb and exact_rank(a + b) == ra


def _check_sample(
    H: LeviFlatModel, family: LeafFamily, value: Scalar, p: Sequence[Scalar], expected: Optional[int]
) -> SampleReport:
    c = GaussianRational.coerce(value)
    point = _point(H, p)
    leaf = family.at(c)
    report = SampleReport(
        parameter=c,
        point=point,
        on_model=H.contains_point(point),
        on_leaf=leaf.contains_point(point),
        expected_dimension=expected,
    )
    if not c.is_real():
        report.errors.append("the leaf parameter is not real")
    if not (report.on_model and report.on_leaf):
        report.errors.append("the sample point is off the model or off its leaf")
        return report
    report.leaf_dimension = krull_dimension(leaf)
    report.leaf = verify_leaf(H, leaf, point)
    cr = cr_tangent(H, point)
    leaf_rows = _holomorphic_rows(leaf.generators, point, H.N)
    cr_rows = _holomorphic_rows([g.body for g in H.generators], diagonal_point(H.context, point), H.N)
    report.tangent_matches_cr = cr.regular and _same_row_space(leaf_rows, cr_rows)
    return report


def check_levi_foliation(
    H: LeviFlatModel, family: LeafFamily, samples: Sequence[Tuple[Scalar, Sequence[Scalar]]]
) -> LeviCheckReport:
    """Check a claimed leaf family at ``(parameter, point)`` samples.

    Each sample passes when the leaf lies in ``H`` and in the Segre variety of
    the point, has the Levi dimension, and its tangent space at the point is
    the CR tangent space of ``H``. Failures are recorded on the sample.
    """
    if family.z_context != H.z_context:
        raise ContextMismatchError("the family must live on the model's z-coordinates")
    expected = H.levi_dimension
    if expected is None:
        icomp_dim = krull_dimension(H.icomp)
        expected = icomp_dim - 1 if icomp_dim is not None else None
    reports = []
    for value, p in samples:
        try:
            sample = _check_sample(H, family, value, p, expected)
        except LeviflatError as exc:
            sample = SampleReport(
                parameter=GaussianRational.coerce(value),
                point=[GaussianRational.coerce(v) for v in p],
                on_model=False,
                on_leaf=False,
                expected_dimension=expected,
                errors=[str(exc)],
            )
        if not sample.passed:
            logger.info("sample at parameter %s failed", sample.parameter)
        reports.append(sample)
    return LeviCheckReport(levi_dimension=expected, samples=reports)


# ---------------------------------------------------------------------------
# several leaves through one point
# ---------------------------------------------------------------------------


def _to_sympy(q: Polynomial, index: int, symbol, part: str):
    expr = sympy.Integer(0)
    for m, c in q.terms.items():
        value = c.re if part == "re" else c.im
        expr += sympy.Rational(value.numerator, value.denominator) * symbol ** m[index]
    return sympy.Poly(expr, symbol)


def multi_leaf_detector(H: LeviFlatModel, family: LeafFamily, p: Sequence[Scalar]) -> MultiLeafReport:
    """Real parameters whose leaf passes through ``p``.

    The parameter is real, so the real and imaginary parts of every
    specialized generator must vanish; their gcd carries the solutions. Real
    roots are counted exactly and rational ones are returned with their leaves.
    """
    point = _point(H, p)
    if not H.contains_point(point):
        raise NotOnVarietyError("the point does not lie on the model")
    c = sympy.Symbol(family.parameter)
    index = family.parameter_index
    values = {k: v for k, v in enumerate(point)}
    parts = []
    for g in family.generators:
        q = g.specialize(values)
        for part in ("re", "im"):
            poly = _to_sympy(q, index, c, part)
            if not poly.is_zero:
                parts.append(poly)
    if not parts:
        raise DegenerateFamilyError("every leaf of the family passes through the point")
    common = parts[0]
    for poly in parts[1:]:
        common = sympy.gcd(common, poly)
    common = sympy.Poly(sympy.sqf_part(common.as_expr()), c)
    if common.degree() <= 0:
        roots: List[GaussianRational] = []
        count = 0
    else:
        count = int(common.count_roots())
        roots = [from_sympy(r) for r in common.real_roots() if r.is_Rational]
    param_ctx = VarContext(1, 0, (), (family.parameter,))
    parameter_polynomial = Polynomial(
        param_ctx,
        {(e,): from_sympy(coeff) for (e,), coeff in common.terms()},
    )
    leaves = [family.at(r) for r in roots]
    if count >= 2:
        logger.info("%d leaves pass through %s", count, point)
    return MultiLeafReport(
        point=point,
        parameter=family.parameter,
        parameter_polynomial=parameter_polynomial,
        real_root_count=count,
        rational_roots=roots,
        leaves=leaves,
    )


def frozen_branch_fields(family: LeafFamily, value: Scalar) -> FoliationPresentation:
    """Constant fields spanning the (linear) leaf ``L_value``.

    Freezing one branch of a web gives a candidate foliation by parallel
    copies of a single leaf.
    """
    leaf = family.at(value)
    zctx = leaf.context
    origin = [GaussianRational(0)] * zctx.n_z
    for g in leaf.generators:
        if g.total_degree() > 1:
            raise DegenerateFamilyError("frozen branches need leaves cut out by linear equations")
    rows = _holomorphic_rows(leaf.generators, origin, zctx.n_z)
    kernel = nullspace(rows, zctx.n_z)
    if not kernel:
        raise DegenerateFamilyError("the leaf is a point")
    fields = [
        VectorField(zctx, [Polynomial.constant(zctx, v) for v in vector]) for vector in kernel
    ]
    return FoliationPresentation(zctx, fields=fields)
