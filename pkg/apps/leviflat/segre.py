"""Segre varieties, Segre degeneracy and the degenerate locus."""

from typing import Dict, List, Optional, Sequence

from shared.logging import get_logger

from .errors import ContextMismatchError, NotOnVarietyError
from .groebner import Ideal, krull_dimension
from .hermitian import LeviFlatModel, mirror
from .models import (
    Classification,
    ClassificationReport,
    DegenerateLocusReport,
    LeafReport,
    SegreResult,
    Witness,
)
from .polycore import GaussianRational, Polynomial, Scalar, TermOrder

logger = get_logger(__name__)


def _coerce_point(H: LeviFlatModel, p: Sequence[Scalar]) -> List[GaussianRational]:
    if len(p) != H.N:
        raise NotOnVarietyError(f"expected a point with {H.N} coordinates, got {len(p)}")
    return [GaussianRational.coerce(v) for v in p]


def _codim(ambient: Optional[int], sub: Optional[int]) -> int:
    if ambient is None:
        return 0
    if sub is None:
        return ambient + 1
    return ambient - sub


def segre_ideal(H: LeviFlatModel, p: Sequence[Scalar]) -> Ideal:
    """``I(H^i) + <phi^C(z, conj p)>`` in the z-only context (no membership check)."""
    point = _coerce_point(H, p)
    ctx = H.context
    values = {ctx.n_z + k: v.conj() for k, v in enumerate(point)}
    zctx = H.z_context
    substituted = [g.specialize(values).transfer(zctx) for g in H.complexified.generators]
    return H.icomp.with_generators(substituted)


def segre_variety(H: LeviFlatModel, p: Sequence[Scalar]) -> SegreResult:
    """The Segre variety ``Sigma_p`` of a point ``p`` of ``H^i``."""
    point = _coerce_point(H, p)
    icomp = H.icomp
    if not icomp.contains_point(point):
        raise NotOnVarietyError("the point does not lie on the intrinsic complexification")
    ideal = segre_ideal(H, point)
    dim = krull_dimension(ideal)
    codim = _codim(krull_dimension(icomp), dim)
    return SegreResult(
        point=point,
        ideal=ideal,
        dimension=dim,
        codim_in_icomp=codim,
        classification=Classification.DEGENERATE if codim == 0 else Classification.ORDINARY,
        contains_point=ideal.contains_point(point),
    )


def classify_point(H: LeviFlatModel, p: Sequence[Scalar]) -> ClassificationReport:
    result = segre_variety(H, p)
    return ClassificationReport(classification=result.classification, codim=result.codim_in_icomp)


def degenerate_coefficients(H: LeviFlatModel) -> List[Polynomial]:
    """Mirrored w-coefficients of the complexified generators reduced modulo ``I(H^i)``.

    ``p`` is Segre degenerate exactly when all of them vanish at ``p``.
    """
    ctx = H.context
    zctx = H.z_context
    z_basis = H.icomp.groebner_basis(TermOrder.grevlex())
    block = TermOrder.eliminating(ctx.size, ctx.z_indices)
    lifted = Ideal(ctx, [g.transfer(ctx) for g in z_basis])
    # a z-only grevlex basis stays a reduced basis under the z-first block order
    lifted.seed_basis(block, lifted.generators)
    coefficients: List[Polynomial] = []
    for g in H.complexified.generators:
        remainder = lifted.normal_form(g, block)
        for coefficient in remainder.collect(ctx.z_indices).values():
            q = mirror(coefficient).transfer(zctx)
            if not q.is_zero() and q not in coefficients:
                coefficients.append(q)
    return coefficients


def degenerate_locus(H: LeviFlatModel) -> DegenerateLocusReport:
    """The Segre degenerate locus ``S_d`` with its codimension in ``H^i``."""

    def compute() -> DegenerateLocusReport:
        coefficients = degenerate_coefficients(H)
        ideal = H.icomp.with_generators(coefficients)
        dim = krull_dimension(ideal)
        icomp_dim = krull_dimension(H.icomp)
        codim = _codim(icomp_dim, dim)
        if codim < 2:
            logger.warning(
                "model %s: degenerate locus has codimension %d in H^i", H.name, codim
            )
        return DegenerateLocusReport(
            ideal=ideal,
            coefficients=coefficients,
            dimension=dim,
            icomp_dimension=icomp_dim,
            codim=codim,
            codim_at_least_two=codim >= 2,
        )

    return H.cached("degenerate_locus", compute)


def segre_symmetry_check(H: LeviFlatModel, p: Sequence[Scalar], q: Sequence[Scalar]) -> bool:
    """``q in Sigma_p`` if and only if ``p in Sigma_q``."""
    p_point, q_point = _coerce_point(H, p), _coerce_point(H, q)
    icomp = H.icomp
    for point in (p_point, q_point):
        if not icomp.contains_point(point):
            raise NotOnVarietyError("both points must lie on the intrinsic complexification")
    return segre_ideal(H, p_point).contains_point(q_point) == segre_ideal(
        H, q_point
    ).contains_point(p_point)


def leaf_extension(H: LeviFlatModel, leaf: Ideal) -> Ideal:
    """``I(L)(z) + mirror(I(L))(w)``, the complexification of a complex leaf."""
    ctx = H.context
    gens: List[Polynomial] = []
    for g in leaf.generators:
        lifted = g.transfer(ctx)
        gens.extend([lifted, mirror(lifted)])
    return Ideal(ctx, gens)


def verify_leaf(H: LeviFlatModel, leaf: Ideal, p: Sequence[Scalar]) -> LeafReport:
    """Check that a complex variety through ``p`` is a Levi leaf of ``H``.

    (a) ``L`` lies in ``H``; (b) ``L`` lies in ``Sigma_p``; (c) ``dim L = dim H^i - 1``.
    """
    point = _coerce_point(H, p)
    if leaf.context != H.z_context:
        raise ContextMismatchError("leaf ideals live in the z-only context of the model")
    if not leaf.contains_point(point):
        raise NotOnVarietyError("the point does not lie on the leaf")
    witnesses: List[Witness] = []

    extension = leaf_extension(H, leaf)
    for k, g in enumerate(H.complexified.generators):
        remainder = extension.normal_form(g)
        if not remainder.is_zero():
            witnesses.append(Witness(label=f"generator {k} not in I(L x L*)", remainder=remainder))
    in_real_set = not witnesses

    in_segre = False
    if H.icomp.contains_point(point):
        sigma = segre_ideal(H, point)
        in_segre = True
        for g in sigma.generators:
            remainder = leaf.normal_form(g)
            if not remainder.is_zero():
                in_segre = False
                witnesses.append(Witness(label="Segre generator not in I(L)", remainder=remainder))
    else:
        logger.info("verify_leaf: point is off the intrinsic complexification")

    dim = krull_dimension(leaf)
    icomp_dim = krull_dimension(H.icomp)
    expected = icomp_dim - 1 if icomp_dim is not None else None
    return LeafReport(
        leaf=leaf,
        point=point,
        in_real_set=in_real_set,
        in_segre=in_segre,
        dimension=dim,
        expected_dimension=expected,
        dimension_ok=dim is not None and dim == expected,
        witnesses=witnesses,
    )
