"""Real-analytic algebraic data on C^N written as polynomials in (z, z-bar).

A polynomial in ``(z, z-bar)`` is stored as a :class:`Polynomial` of a two-block
context whose w-block stands for the conjugate coordinates. Its complexification
is the same storage read with ``w`` as an independent variable.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

from shared.config import get_config
from shared.logging import get_logger
from shared.utils import truncate_string

from .errors import ConeError, ContextMismatchError, PointLengthError
from .groebner import Ideal, eliminate, krull_dimension
from .polycore import GaussianRational, Polynomial, Scalar, VarContext

logger = get_logger(__name__)

T = TypeVar("T")

_HALF = GaussianRational(1, 0) / 2
_HALF_OVER_I = GaussianRational(0, -1) / 2  # 1/(2i)


def conjugate_polynomial(p: Polynomial) -> Polynomial:
    """The complex conjugate function: coefficients conjugated, blocks swapped."""
    return p.swap_blocks().conjugate_coefficients()


def is_real_polynomial(p: Polynomial) -> bool:
    """True iff ``a_{mu nu} = conj(a_{nu mu})`` for every coefficient."""
    return conjugate_polynomial(p) == p


@dataclass(frozen=True)
class HermitianPoly:
    """A polynomial in (z, z-bar) with its reality certificate.

    ``mirrored`` marks the mirror function, whose variables are the mirror
    coordinates ``w`` and ``w-bar`` instead of ``z`` and ``z-bar``.
    """

    body: Polynomial
    is_real: bool
    mirrored: bool = False

    @classmethod
    def of(cls, body: Polynomial, mirrored: bool = False) -> "HermitianPoly":
        if not body.context.has_w:
            body = body.transfer(body.context.full())
        return cls(body, is_real_polynomial(body), mirrored)

    @property
    def context(self) -> VarContext:
        return self.body.context

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def evaluate(self, point: Sequence[Scalar]) -> GaussianRational:
        """Value at the diagonal point ``(p, conj p)``."""
        return self.body.evaluate(diagonal_point(self.context, point))

    def __str__(self) -> str:
        from .parser import print_poly

        text = print_poly(self.body, conjugate_notation=True)
        if not self.mirrored:
            return text
        # mirror coordinates print with the w-names of the context
        ctx = self.context
        mirrored_ctx = VarContext(ctx.n_z, ctx.n_w, ctx.aux, ctx.w_display)
        return print_poly(
            Polynomial._raw(mirrored_ctx, dict(self.body.terms)), conjugate_notation=True
        )


def diagonal_point(ctx: VarContext, point: Sequence[Scalar]) -> List[GaussianRational]:
    """The point ``(p, conj p)`` of the two-block context for a z-point ``p``."""
    if len(point) != ctx.n_z:
        raise PointLengthError(f"expected {ctx.n_z} coordinates, got {len(point)}")
    values = [GaussianRational.coerce(v) for v in point]
    if ctx.aux:
        raise ContextMismatchError("diagonal points need a context without auxiliary variables")
    return values + [v.conj() for v in values][: ctx.n_w]


HermitianLike = Union[HermitianPoly, Polynomial]


def mirror(p: HermitianLike) -> Any:
    """The mirror function: conjugated coefficients in the mirror coordinates.

    A polynomial in the z-block alone becomes ``f*`` in the w-block. A
    two-block polynomial ``P(z, w)`` becomes ``conj(P)(w, z)``.
    """
    if isinstance(p, HermitianPoly):
        return HermitianPoly(p.body.conjugate_coefficients(), p.is_real, not p.mirrored)
    ctx = p.context
    if not ctx.has_w:
        return conjugate_polynomial(p.transfer(ctx.full()))
    return conjugate_polynomial(p)


def conjugate(p: HermitianLike) -> HermitianLike:
    """The conjugate function ``z -> conj(p(z))``."""
    if isinstance(p, HermitianPoly):
        return HermitianPoly(conjugate_polynomial(p.body), p.is_real, p.mirrored)
    return conjugate_polynomial(p)


def complexify(p: HermitianPoly) -> Polynomial:
    """Substitute an independent variable ``w`` for ``z-bar``.

    A mirrored input lives in the mirror coordinates, so its blocks are swapped:
    ``complexify(mirror(p)) == mirror(complexify(p))``. Non-real input is
    accepted with a warning.
    """
    if not p.is_real:
        logger.warning("complexifying a polynomial that is not real: %s", truncate_string(str(p)))
    if p.mirrored:
        return p.body.swap_blocks()
    return p.body


def diagonal_restrict(P: Polynomial) -> HermitianPoly:
    """Fold the w-block back onto the conjugate coordinates (``w := z-bar``)."""
    if not P.context.has_w:
        raise ContextMismatchError("diagonal restriction needs a two-block polynomial")
    return HermitianPoly.of(P)


def split_real(p: HermitianLike) -> List[HermitianPoly]:
    """Real and imaginary parts ``(p + p-bar)/2`` and ``(p - p-bar)/(2i)``, zeros dropped."""
    body = p.body if isinstance(p, HermitianPoly) else p
    if not body.context.has_w:
        body = body.transfer(body.context.full())
    bar = conjugate_polynomial(body)
    parts = [(body + bar) * _HALF, (body - bar) * _HALF_OVER_I]
    return [HermitianPoly(q, True) for q in parts if not q.is_zero()]


def holomorphic_equations(polys: Sequence[Polynomial]) -> List[HermitianPoly]:
    """Real generators of the complex variety ``{f_1 = ... = f_k = 0}``."""
    result: List[HermitianPoly] = []
    for f in polys:
        result.extend(split_real(f))
    return result


def complexify_variety(gens: Sequence[HermitianPoly], context: Optional[VarContext] = None) -> Ideal:
    """The ideal of ``H^C`` generated by the complexified generators."""
    if not gens:
        if context is None:
            raise ValueError("an empty generator list needs an explicit context")
        return Ideal.zero(context)
    ctx = context or gens[0].context
    return Ideal(ctx, [complexify(g) for g in gens])


def bihomogeneous_components(p: HermitianLike) -> List[Tuple[Tuple[int, int], HermitianPoly]]:
    """Decompose by (z-degree, z-bar-degree), sorted by bidegree."""
    body = p.body if isinstance(p, HermitianPoly) else p
    groups: Dict[Tuple[int, int], Dict] = {}
    for m, c in body.terms.items():
        groups.setdefault(body.bidegree_of(m), {})[m] = c
    mirrored = p.mirrored if isinstance(p, HermitianPoly) else False
    return [
        (bd, HermitianPoly.of(Polynomial._raw(body.context, terms), mirrored))
        for bd, terms in sorted(groups.items())
    ]


@dataclass(frozen=True)
class ConeCertificate:
    """Proof that every generator is invariant under ``z -> lambda*z``.

    ``kinds[j]`` is ``"balanced"`` for bidegree ``(d, d)``, ``"holomorphic"``
    for ``(d, 0)`` and ``"antiholomorphic"`` for ``(0, d)``; ``degrees[j]`` is ``d``.
    """

    kinds: Tuple[str, ...]
    degrees: Tuple[int, ...]
    holomorphic: Tuple[Polynomial, ...] = field(default=())


def _cone_kind(g: Polynomial) -> Tuple[str, int]:
    bidegrees = g.bidegrees()
    if len(bidegrees) != 1:
        raise ConeError(
            f"generator {g} mixes bidegrees {sorted(bidegrees)}", generator=str(g)
        )
    (j, k) = next(iter(bidegrees))
    if j == k and j > 0:
        return "balanced", j
    if k == 0 and j > 0:
        return "holomorphic", j
    if j == 0 and k > 0:
        return "antiholomorphic", k
    if j == k == 0:
        raise ConeError(f"constant generator {g} defines no cone", generator=str(g))
    raise ConeError(f"generator {g} has unbalanced bidegree ({j}, {k})", generator=str(g))


def certify_cone(gens: Sequence[HermitianLike]) -> ConeCertificate:
    kinds, degrees, holo = [], [], []
    for p in gens:
        body = p.body if isinstance(p, HermitianPoly) else p
        if not body.context.has_w:
            body = body.transfer(body.context.full())
        if body.is_zero():
            continue
        kind, d = _cone_kind(body)
        kinds.append(kind)
        degrees.append(d)
        if kind == "holomorphic":
            holo.append(body)
        elif kind == "antiholomorphic":
            holo.append(conjugate_polynomial(body))
    return ConeCertificate(tuple(kinds), tuple(degrees), tuple(holo))


class LeviFlatModel:
    """A real algebraic subset of C^N given by a generating map.

    ``inputs`` are the equations as entered; complex-valued ones are split into
    real and imaginary parts to form ``generators``. Derived ideals are cached
    once computed.
    """

    def __init__(
        self,
        context: VarContext,
        inputs: Sequence[Polynomial],
        levi_dimension: Optional[int] = None,
        name: str = "model",
        cone: Optional[ConeCertificate] = None,
    ):
        if not context.has_w or context.aux:
            raise ContextMismatchError("a model lives in a plain two-block context")
        for p in inputs:
            if p.context != context:
                raise ContextMismatchError("model generator belongs to another context")
        self.context = context
        self.inputs = tuple(p for p in inputs if not p.is_zero())
        self.levi_dimension = levi_dimension
        self.name = name
        self.cone = cone
        generators: List[HermitianPoly] = []
        for p in self.inputs:
            generators.extend(split_real(p))
        self.generators: Tuple[HermitianPoly, ...] = tuple(generators)
        self._cache: Dict[str, Any] = {}
        logger.info(
            "model %s: N=%d, %d inputs, %d real generators",
            name,
            context.n_z,
            len(self.inputs),
            len(self.generators),
        )

    @property
    def N(self) -> int:
        return self.context.n_z

    @property
    def z_context(self) -> VarContext:
        return self.context.z_only()

    def cached(self, key: str, factory: Callable[[], T]) -> T:
        """Write-once cache slot."""
        if key not in self._cache:
            value = factory()
            self._cache.setdefault(key, value)
            logger.info("model %s: computed %s", self.name, key)
        return self._cache[key]

    @property
    def complexified(self) -> Ideal:
        return self.cached("complexified", lambda: complexify_variety(self.generators, self.context))

    @property
    def icomp(self) -> Ideal:
        return intrinsic_complexification(self)

    def contains_point(self, point: Sequence[Scalar]) -> bool:
        """True iff every generator vanishes at ``(p, conj p)``."""
        return all(g.evaluate(point).is_zero() for g in self.generators)

    def __repr__(self) -> str:
        return f"LeviFlatModel({self.name!r}, N={self.N}, n={self.levi_dimension})"


def _icomp_from_cone(H: LeviFlatModel) -> Ideal:
    assert H.cone is not None
    zctx = H.z_context
    return Ideal(zctx, [f.transfer(zctx) for f in H.cone.holomorphic])


def intrinsic_complexification(H: LeviFlatModel, use_cone: Optional[bool] = None) -> Ideal:
    """``I(H^i)``: eliminate the w-block from ``I(H^C)``.

    For certified cones the elimination ideal is generated by the holomorphic
    equations (``w := 0`` kills every balanced generator), which is used when
    enabled in the configuration.
    """

    def compute() -> Ideal:
        shortcut = get_config().hermitian.cone_shortcut if use_cone is None else use_cone
        if shortcut and H.cone is not None:
            ideal = _icomp_from_cone(H)
        else:
            ideal = eliminate(H.complexified, "w")
        dim = krull_dimension(ideal)
        logger.info("model %s: intrinsic complexification has dimension %s", H.name, dim)
        if H.levi_dimension is not None and dim != H.levi_dimension + 1:
            logger.warning(
                "model %s: dim H^i = %s but the Levi dimension %d predicts %d",
                H.name,
                dim,
                H.levi_dimension,
                H.levi_dimension + 1,
            )
        return ideal

    if use_cone is not None:
        return compute()
    return H.cached("icomp", compute)


def icomp_with_mirror(H: LeviFlatModel) -> Ideal:
    """``I(H^i)(z) + mirror(I(H^i))(w)`` in the two-block context."""
    ctx = H.context
    gens: List[Polynomial] = []
    for g in H.icomp.generators:
        lifted = g.transfer(ctx)
        gens.extend([lifted, mirror(lifted)])
    return Ideal(ctx, gens)


def projective_cone(
    gens: Sequence[HermitianLike],
    check_only: bool = False,
    levi_dimension: Optional[int] = None,
    name: str = "cone",
) -> Union[ConeCertificate, LeviFlatModel]:
    """Certify that the generators define a complex cone and build its model.

    Accepts balanced ``(d, d)`` generators and holomorphic or antiholomorphic
    homogeneous equations; anything else raises :class:`ConeError`.
    """
    certificate = certify_cone(gens)
    if check_only:
        return certificate
    bodies = []
    for p in gens:
        body = p.body if isinstance(p, HermitianPoly) else p
        if not body.context.has_w:
            body = body.transfer(body.context.full())
        bodies.append(body)
    if not bodies:
        raise ConeError("a cone needs at least one generator")
    return LeviFlatModel(bodies[0].context, bodies, levi_dimension, name, certificate)
