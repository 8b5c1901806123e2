"""Polynomial vector fields, differential forms and foliation tests.

A foliation is presented by vector fields spanning its tangent distribution or
by 1-forms spanning its conormal directions. Tangency to a real subset ``H`` is
decided on the complexification: ``F x F*`` must be tangent to ``H^C``.
"""

import random
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from shared.config import get_config
from shared.logging import get_logger

from .errors import ContextMismatchError, DegenerateFamilyError, HyperplaneError, ParseError
from .groebner import Ideal, krull_dimension
from .hermitian import HermitianPoly, LeviFlatModel, complexify, mirror, split_real
from .models import (
    FirstIntegralReport,
    LevelSetReport,
    RestrictionReport,
    SingularLocusReport,
    WebReport,
    Witness,
)
from .parser import parse_poly, parse_polys
from .polycore import (
    ONE,
    GaussianRational,
    Polynomial,
    VarContext,
    determinant,
    exact_rank,
)

logger = get_logger(__name__)

Key = Tuple[int, ...]


def coordinate_indices(ctx: VarContext) -> Tuple[int, ...]:
    """Indices that carry differentials: the z-block and the w-block."""
    return tuple(range(ctx.n_z + ctx.n_w))


def _positional_index(source: VarContext, target: VarContext, index: int) -> int:
    if index < source.n_z:
        return index
    if index < source.n_z + source.n_w:
        return target.n_z + index - source.n_z
    raise ContextMismatchError("auxiliary variables carry no differentials")


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------


class VectorField:
    """A derivation ``sum_k components[k] * d/dx_{variables[k]}``."""

    def __init__(
        self,
        context: VarContext,
        components: Sequence[Polynomial],
        variables: Optional[Sequence[int]] = None,
    ):
        comps = tuple(components)
        variables = tuple(variables) if variables is not None else tuple(range(len(comps)))
        if len(variables) != len(comps):
            raise ContextMismatchError("one component per variable is required")
        if len(set(variables)) != len(variables):
            raise ContextMismatchError("repeated variable in a vector field")
        for i in variables:
            context.check_index(i)
        for c in comps:
            if c.context != context:
                raise ContextMismatchError("field component belongs to another context")
        self.context = context
        self._components: Dict[int, Polynomial] = {
            i: c for i, c in zip(variables, comps) if not c.is_zero()
        }

    @classmethod
    def coordinate(cls, context: VarContext, index: int) -> "VectorField":
        return cls(context, [Polynomial.constant(context, ONE)], [index])

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted(self._components))

    def component(self, index: int) -> Polynomial:
        return self._components.get(index, Polynomial.zero(self.context))

    def components(self, indices: Optional[Sequence[int]] = None) -> List[Polynomial]:
        indices = indices if indices is not None else coordinate_indices(self.context)
        return [self.component(i) for i in indices]

    def is_zero(self) -> bool:
        return not self._components

    def apply(self, f: Polynomial) -> Polynomial:
        if f.context != self.context:
            raise ContextMismatchError("field and polynomial live in different contexts")
        result = Polynomial.zero(self.context)
        for i, c in self._components.items():
            result = result + c * f.partial_derivative(i)
        return result

    def __add__(self, other: "VectorField") -> "VectorField":
        if other.context != self.context:
            raise ContextMismatchError("fields live in different contexts")
        indices = sorted(set(self._components) | set(other._components))
        return VectorField(
            self.context, [self.component(i) + other.component(i) for i in indices], indices
        )

    def __neg__(self) -> "VectorField":
        return self.scale(Polynomial.constant(self.context, -1))

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def scale(self, f: Polynomial) -> "VectorField":
        indices = self.variables
        return VectorField(self.context, [f * self.component(i) for i in indices], indices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.context == other.context and self._components == other._components

    def __hash__(self) -> int:
        return hash((self.context, frozenset(self._components.items())))

    def lift(self, target: VarContext) -> "VectorField":
        """Move to ``target`` matching z_k and w_k positionally."""
        indices = self.variables
        return VectorField(
            target,
            [self.component(i).transfer(target) for i in indices],
            [_positional_index(self.context, target, i) for i in indices],
        )

    def mirror(self) -> "VectorField":
        """``v*``: conjugated coefficients acting on the mirror coordinates."""
        target = self.context.full()
        indices = self.variables
        return VectorField(
            target,
            [mirror(self.component(i)) for i in indices],
            [target.partner(_positional_index(self.context, target, i)) for i in indices],
        )

    def __str__(self) -> str:
        names = self.context.names
        parts = [f"({self._components[i]})*d/d{names[i]}" for i in self.variables]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"VectorField({self})"


def lie_bracket(u: VectorField, v: VectorField) -> VectorField:
    """``[u, v]_k = u(v_k) - v(u_k)``."""
    if u.context != v.context:
        raise ContextMismatchError("fields live in different contexts")
    indices = sorted(set(u.variables) | set(v.variables))
    return VectorField(
        u.context,
        [u.apply(v.component(k)) - v.apply(u.component(k)) for k in indices],
        indices,
    )


# ---------------------------------------------------------------------------
# differential forms
# ---------------------------------------------------------------------------


def _normalize(key: Sequence[int]) -> Tuple[int, Optional[Key]]:
    """Sort an index tuple; returns the permutation sign, or no key if an index repeats."""
    if len(set(key)) != len(key):
        return 0, None
    items = list(key)
    sign = 1
    for i in range(len(items)):
        for j in range(len(items) - 1 - i):
            if items[j] > items[j + 1]:
                items[j], items[j + 1] = items[j + 1], items[j]
                sign = -sign
    return sign, tuple(items)


def _accumulate(terms: Dict[Key, Polynomial], key: Sequence[int], coeff: Polynomial) -> None:
    sign, sorted_key = _normalize(key)
    if sorted_key is None or coeff.is_zero():
        return
    value = coeff if sign > 0 else -coeff
    prev = terms.get(sorted_key)
    total = value if prev is None else prev + value
    if total.is_zero():
        terms.pop(sorted_key, None)
    else:
        terms[sorted_key] = total


class DifferentialForm:
    """A polynomial p-form ``sum_I a_I dx_I`` stored on increasing index tuples."""

    def __init__(
        self,
        context: VarContext,
        degree: int,
        coefficients: Optional[Mapping[Sequence[int], Polynomial]] = None,
    ):
        terms: Dict[Key, Polynomial] = {}
        for key, coeff in (coefficients or {}).items():
            if len(key) != degree:
                raise ContextMismatchError(f"index {tuple(key)} does not have degree {degree}")
            if coeff.context != context:
                raise ContextMismatchError("form coefficient belongs to another context")
            for i in key:
                context.check_index(i)
            _accumulate(terms, key, coeff)
        self.context = context
        self.degree = degree
        self._terms = terms

    @classmethod
    def one_form(
        cls,
        context: VarContext,
        components: Sequence[Polynomial],
        variables: Optional[Sequence[int]] = None,
    ) -> "DifferentialForm":
        variables = variables if variables is not None else range(len(components))
        return cls(context, 1, {(i,): c for i, c in zip(variables, components)})

    @classmethod
    def function(cls, f: Polynomial) -> "DifferentialForm":
        return cls(f.context, 0, {(): f})

    @classmethod
    def exact(cls, f: Polynomial) -> "DifferentialForm":
        return cls.function(f).d()

    @property
    def coefficients(self) -> Mapping[Key, Polynomial]:
        return dict(self._terms)

    def coefficient(self, key: Sequence[int]) -> Polynomial:
        sign, sorted_key = _normalize(key)
        if sorted_key is None or sorted_key not in self._terms:
            return Polynomial.zero(self.context)
        c = self._terms[sorted_key]
        return c if sign > 0 else -c

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "DifferentialForm") -> None:
        if other.context != self.context:
            raise ContextMismatchError("forms live in different contexts")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degrees")
        terms = dict(self._terms)
        for key, c in other._terms.items():
            _accumulate(terms, key, c)
        return DifferentialForm(self.context, self.degree, terms)

    def __neg__(self) -> "DifferentialForm":
        return DifferentialForm(self.context, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def scale(self, f: Polynomial) -> "DifferentialForm":
        return DifferentialForm(self.context, self.degree, {k: f * c for k, c in self._terms.items()})

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        terms: Dict[Key, Polynomial] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                _accumulate(terms, k1 + k2, c1 * c2)
        return DifferentialForm(self.context, self.degree + other.degree, terms)

    def d(self) -> "DifferentialForm":
        """Exterior derivative over the coordinate variables."""
        terms: Dict[Key, Polynomial] = {}
        for key, c in self._terms.items():
            for k in coordinate_indices(self.context):
                _accumulate(terms, (k,) + key, c.partial_derivative(k))
        return DifferentialForm(self.context, self.degree + 1, terms)

    def interior(self, v: VectorField) -> "DifferentialForm":
        """Contraction ``i_v``."""
        if v.context != self.context:
            raise ContextMismatchError("field and form live in different contexts")
        if self.degree == 0:
            return DifferentialForm(self.context, 0)
        terms: Dict[Key, Polynomial] = {}
        for key, c in self._terms.items():
            for pos, idx in enumerate(key):
                comp = v.component(idx)
                if comp.is_zero():
                    continue
                value = c * comp
                _accumulate(terms, key[:pos] + key[pos + 1 :], value if pos % 2 == 0 else -value)
        return DifferentialForm(self.context, self.degree - 1, terms)

    def mirror(self) -> "DifferentialForm":
        target = self.context.full()
        terms = {
            tuple(target.partner(_positional_index(self.context, target, i)) for i in key): mirror(c)
            for key, c in self._terms.items()
        }
        return DifferentialForm(target, self.degree, terms)

    def lift(self, target: VarContext) -> "DifferentialForm":
        terms = {
            tuple(_positional_index(self.context, target, i) for i in key): c.transfer(target)
            for key, c in self._terms.items()
        }
        return DifferentialForm(target, self.degree, terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (
            self.context == other.context
            and self.degree == other.degree
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.context, self.degree, frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = self.context.names
        parts = []
        for key in sorted(self._terms):
            basis = "^".join(f"d{names[i]}" for i in key)
            parts.append(f"({self._terms[key]})*{basis}" if basis else f"({self._terms[key]})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"DifferentialForm({self})"


def differential_names(ctx: VarContext) -> Tuple[str, ...]:
    return tuple("d" + ctx.names[i] for i in coordinate_indices(ctx))


def parse_one_form(src: str, ctx: VarContext) -> DifferentialForm:
    """Parse ``a_1*dz1 + ... + a_N*dzN`` (coefficients in the parser grammar)."""
    dnames = differential_names(ctx)
    ext = ctx.with_aux(dnames)
    p = parse_poly(src, ext)
    d_indices = [ext.index_of(name) for name in dnames]
    coefficients: Dict[Key, Polynomial] = {}
    for head, coeff in p.collect(d_indices).items():
        if sum(head) != 1:
            raise ParseError("a 1-form must be linear in the differentials")
        k = head.index(1)
        coefficients[(coordinate_indices(ctx)[k],)] = coeff.transfer(ctx)
    return DifferentialForm(ctx, 1, coefficients)


def parse_field(src: str, ctx: VarContext) -> VectorField:
    """Parse comma-separated components along the coordinate variables."""
    comps = parse_polys(src, ctx)
    indices = coordinate_indices(ctx)
    if len(comps) != len(indices):
        raise ParseError(f"a vector field needs {len(indices)} components, got {len(comps)}")
    return VectorField(ctx, comps, indices)


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------


def kernel_fields(forms: Sequence[DifferentialForm]) -> List[VectorField]:
    """Fields annihilated by every form, from the maximal minors of the coefficient matrix.

    For ``q`` forms and each ``(q+1)``-subset ``S`` of coordinates the field
    ``sum_s (-1)^pos det(A[:, S - s]) d/dx_s`` lies in the kernel (Cramer).
    """
    if not forms:
        return []
    ctx = forms[0].context
    coords = coordinate_indices(ctx)
    rows = [[form.coefficient((i,)) for i in coords] for form in forms]
    q = len(forms)
    fields: List[VectorField] = []
    for subset in combinations(range(len(coords)), q + 1):
        comps = []
        for pos, s in enumerate(subset):
            cols = [c for c in subset if c != s]
            minor = determinant([[row[c] for c in cols] for row in rows], ctx)
            comps.append(minor if pos % 2 == 0 else -minor)
        field = VectorField(ctx, comps, [coords[s] for s in subset])
        if not field.is_zero() and field not in fields:
            fields.append(field)
    return fields


class FoliationPresentation:
    """A foliation given either by vector fields or by 1-forms."""

    def __init__(
        self,
        context: VarContext,
        fields: Sequence[VectorField] = (),
        forms: Sequence[DifferentialForm] = (),
    ):
        if bool(fields) == bool(forms):
            raise ValueError("give either vector fields or 1-forms")
        for f in fields:
            if f.context != context:
                raise ContextMismatchError("field belongs to another context")
        for w in forms:
            if w.context != context or w.degree != 1:
                raise ContextMismatchError("forms must be 1-forms of the presentation context")
        self.context = context
        self.fields: Tuple[VectorField, ...] = tuple(fields)
        self.forms: Tuple[DifferentialForm, ...] = tuple(forms)
        self._singular: Optional[SingularLocusReport] = None

    @property
    def kind(self) -> str:
        return "fields" if self.fields else "forms"

    def as_fields(self) -> Tuple[VectorField, ...]:
        if self.fields:
            return self.fields
        return tuple(kernel_fields(self.forms))

    def mirror(self) -> "FoliationPresentation":
        target = self.context.full()
        return FoliationPresentation(
            target,
            fields=[f.mirror() for f in self.fields],
            forms=[w.mirror() for w in self.forms],
        )

    def lift(self, target: VarContext) -> "FoliationPresentation":
        return FoliationPresentation(
            target,
            fields=[f.lift(target) for f in self.fields],
            forms=[w.lift(target) for w in self.forms],
        )

    def __repr__(self) -> str:
        items = self.fields or self.forms
        return f"FoliationPresentation({self.kind}: {', '.join(str(x) for x in items)})"


def mirror_foliation(F: FoliationPresentation) -> FoliationPresentation:
    return F.mirror()


def _field_matrix(fields: Sequence[VectorField]) -> Tuple[List[int], List[List[Polynomial]]]:
    coords = sorted({i for f in fields for i in f.variables})
    return coords, [[f.component(i) for i in coords] for f in fields]


def _minors(
    rows: Sequence[Sequence[Polynomial]], size: int, ctx: VarContext
) -> Iterable[Polynomial]:
    if not rows:
        return
    width = len(rows[0])
    for row_set in combinations(range(len(rows)), size):
        for col_set in combinations(range(width), size):
            yield determinant([[rows[r][c] for c in col_set] for r in row_set], ctx)


def _random_point(ctx: VarContext, rng: random.Random) -> List[GaussianRational]:
    return [
        GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), rng.randint(-9, 9))
        for _ in range(ctx.size)
    ]


def generic_rank(rows: Sequence[Sequence[Polynomial]], ctx: VarContext) -> int:
    """Rank of a polynomial matrix over the function field.

    Seeded random evaluations give a lower bound which is then confirmed by
    checking that every larger minor vanishes identically.
    """
    if not rows or not rows[0]:
        return 0
    sampling = get_config().sampling
    rng = random.Random(sampling.seed)
    rank = 0
    for _ in range(sampling.random_points):
        point = _random_point(ctx, rng)
        rank = max(rank, exact_rank([[p.evaluate(point) for p in row] for row in rows]))
    limit = min(len(rows), len(rows[0]))
    while rank < limit and any(not m.is_zero() for m in _minors(rows, rank + 1, ctx)):
        rank += 1
    return rank


def is_integrable(F: FoliationPresentation) -> bool:
    """Frobenius integrability of the presented distribution."""
    if F.kind == "forms":
        forms = F.forms
        if len(forms) == 1:
            w = forms[0]
            return w.wedge(w.d()).is_zero()
        total = forms[0]
        for w in forms[1:]:
            total = total.wedge(w)
        return all(w.d().wedge(total).is_zero() for w in forms)

    ctx = F.context
    fields = list(F.fields)
    brackets = [lie_bracket(u, v) for u, v in combinations(fields, 2)]
    coords = sorted({i for f in fields + brackets for i in f.variables})
    rows = [[f.component(i) for i in coords] for f in fields]
    m = generic_rank(rows, ctx)
    for bracket in brackets:
        b_row = [bracket.component(i) for i in coords]
        # [u, v] lies in the span iff every (m+1)-minor with it appended vanishes
        for row_set in combinations(range(len(rows)), m):
            for col_set in combinations(range(len(coords)), m + 1):
                sub = [[rows[r][c] for c in col_set] for r in row_set]
                sub.append([b_row[c] for c in col_set])
                if not determinant(sub, ctx).is_zero():
                    return False
    return True


def _codim_report(ideal: Ideal, ambient: int) -> SingularLocusReport:
    dim = krull_dimension(ideal)
    codim = ambient + 1 if dim is None else ambient - dim
    return SingularLocusReport(
        ideal=ideal,
        dimension=dim,
        ambient_dimension=ambient,
        codim=codim,
        codim_at_least_two=codim >= 2,
    )


def singular_locus(F: FoliationPresentation) -> SingularLocusReport:
    """Where the presentation drops rank, with its codimension."""
    if F._singular is not None:
        return F._singular
    ctx = F.context
    if F.kind == "fields":
        _, rows = _field_matrix(F.fields)
        m = generic_rank(rows, ctx)
        gens = list(_minors(rows, m, ctx)) if m else []
    else:
        total = F.forms[0]
        for w in F.forms[1:]:
            total = total.wedge(w)
        gens = list(total.coefficients.values())
    report = _codim_report(Ideal(ctx, gens), ctx.size)
    if not report.codim_at_least_two:
        logger.warning("singular locus of codimension %d (expected at least 2)", report.codim)
    F._singular = report
    return report


def is_invariant(ideal: Ideal, F: FoliationPresentation) -> bool:
    """True iff ``v(g)`` lies in the ideal for every field ``v`` and generator ``g``."""
    if ideal.context != F.context:
        raise ContextMismatchError("ideal and foliation live in different contexts")
    return all(ideal.contains(v.apply(g)) for v in F.as_fields() for g in ideal.generators)


def combined_field(v: VectorField, ctx: VarContext) -> VectorField:
    """``v + v*`` on the two-block context ``ctx``."""
    return v.lift(ctx) + v.mirror().lift(ctx)


def fields_tangent_to(fields: Sequence[VectorField], ideal: Ideal) -> List[VectorField]:
    """Fields spanning ``F cap T V(ideal)``, one generator of the ideal at a time.

    Fields ``v`` with ``v(f)`` in the ideal are kept; every other pair is
    combined into ``r_i v_j - r_j v_i`` where ``r`` is the normal form of ``v(f)``.
    """
    current = [v for v in fields if not v.is_zero()]
    for f in ideal.generators:
        values = [ideal.normal_form(v.apply(f)) for v in current]
        kept = [v for v, r in zip(current, values) if r.is_zero()]
        for i, j in combinations(range(len(current)), 2):
            if values[i].is_zero() and values[j].is_zero():
                continue
            kept.append(current[j].scale(values[i]) - current[i].scale(values[j]))
        current = []
        for v in kept:
            if not v.is_zero() and v not in current:
                current.append(v)
    return current


def _tangent_rank(fields: Sequence[VectorField], icomp: Ideal) -> int:
    """Generic rank of the fields with components reduced modulo ``icomp``."""
    if not fields:
        return 0
    _, rows = _field_matrix(fields)
    rows = [[icomp.normal_form(p) for p in row] for row in rows]
    return generic_rank(rows, icomp.context)


def _moved_generators(
    fields: Sequence[VectorField], H: LeviFlatModel
) -> List[Witness]:
    ambient = H.complexified
    witnesses: List[Witness] = []
    for idx, v in enumerate(fields):
        V = combined_field(v, H.context)
        for k, g in enumerate(ambient.generators):
            remainder = ambient.normal_form(V.apply(g))
            if not remainder.is_zero():
                witnesses.append(
                    Witness(label=f"field {idx} moves generator {k}", remainder=remainder)
                )
    return witnesses


def tangency_witnesses(F: FoliationPresentation, H: LeviFlatModel) -> List[Witness]:
    """Generators of ``I(H^C)`` moved out of the ideal by some ``v + v*``.

    Vector fields are tested as given. A presentation by 1-forms describes a
    foliation of the ambient space, so its kernel is first cut down to the
    directions tangent to ``H^i``; that part must still have rank ``n``,
    otherwise the kernel fields themselves are reported.
    """
    if F.context.n_z != H.N or F.context.has_w:
        raise ContextMismatchError("the foliation must live on the model's z-coordinates")
    if F.kind == "fields":
        return _moved_generators(F.fields, H)
    icomp = H.icomp
    kernel = F.as_fields()
    tangent = fields_tangent_to(kernel, icomp)
    needed = H.levi_dimension
    if needed is None:
        dim = icomp.dimension()
        needed = dim - 1 if dim is not None else 0
    rank = _tangent_rank(tangent, icomp)
    if rank >= needed:
        return _moved_generators(tangent, H)
    logger.info("tangent part of the kernel has rank %d, expected %d", rank, needed)
    witnesses = _moved_generators(kernel, H)
    if not witnesses:
        witnesses.append(
            Witness(
                label=f"tangent part has rank {rank}, expected {needed}",
                remainder=Polynomial.constant(H.context, needed - rank),
            )
        )
    return witnesses


def tangent_to_leviflat(F: FoliationPresentation, H: LeviFlatModel) -> bool:
    return not tangency_witnesses(F, H)


def first_integral_report(
    num: Polynomial, den: Polynomial, F: FoliationPresentation, ambient: Ideal
) -> FirstIntegralReport:
    if den.is_zero():
        raise DegenerateFamilyError("the denominator of a first integral must be nonzero")
    if not (num.context == den.context == ambient.context == F.context):
        raise ContextMismatchError("first integral, foliation and ambient ideal must share a context")
    constant = all(
        (den * num.partial_derivative(k) - num * den.partial_derivative(k)).is_zero()
        for k in coordinate_indices(num.context)
    )
    if constant:
        logger.info("first integral %s / %s is constant", num, den)
    witnesses = []
    for idx, v in enumerate(F.as_fields()):
        remainder = ambient.normal_form(den * v.apply(num) - num * v.apply(den))
        if not remainder.is_zero():
            witnesses.append(Witness(label=f"field {idx}", remainder=remainder))
    return FirstIntegralReport(first_integral=not witnesses, constant=constant, witnesses=witnesses)


def verify_first_integral(
    num: Polynomial, den: Polynomial, F: FoliationPresentation, ambient: Ideal
) -> bool:
    return first_integral_report(num, den, F, ambient).first_integral


def level_set_report(
    H: LeviFlatModel,
    num: Polynomial,
    den: Polynomial,
    curve: Union[HermitianPoly, Polynomial],
) -> LevelSetReport:
    """Pull a real curve back along ``R = num/den`` and test ``H`` against it.

    Each real part ``s(u, u-bar)`` of the curve becomes the hermitian polynomial
    ``sum s_jk num^j num*^k den^(a-j) den*^(b-k)``; ``H`` lies in the level set
    iff all of them complexify into ``I(H^C)``.
    """
    ctx = H.context
    if den.is_zero() or H.icomp.contains(den.transfer(H.z_context)):
        raise DegenerateFamilyError("the denominator vanishes identically on H^i")
    body = curve.body if isinstance(curve, HermitianPoly) else curve
    cctx = body.context
    if cctx.n_z != 1 or cctx.aux:
        raise ContextMismatchError("a level curve is a polynomial in one variable and its conjugate")
    n, d = num.transfer(ctx), den.transfer(ctx)
    n_bar, d_bar = mirror(n), mirror(d)
    cleared: List[HermitianPoly] = []
    remainders: List[Polynomial] = []
    for part in split_real(body):
        a = part.body.degree_in(0)
        b = part.body.degree_in(1)
        total = Polynomial.zero(ctx)
        for (j, k), c in part.body.terms.items():
            total = total + (n ** j) * (n_bar ** k) * (d ** (a - j)) * (d_bar ** (b - k)) * c
        hp = HermitianPoly.of(total)
        cleared.append(hp)
        remainders.append(H.complexified.normal_form(complexify(hp)))
    return LevelSetReport(
        contained=all(r.is_zero() for r in remainders),
        cleared=cleared,
        remainders=remainders,
    )


def verify_level_set_containment(
    H: LeviFlatModel,
    num: Polynomial,
    den: Polynomial,
    curve: Union[HermitianPoly, Polynomial],
) -> bool:
    return level_set_report(H, num, den, curve).contained


# ---------------------------------------------------------------------------
# webs
# ---------------------------------------------------------------------------


def _coefficients_in(p: Polynomial, index: int) -> List[Polynomial]:
    """Coefficients of ``p`` as a polynomial in one variable, constant term first."""
    groups = p.collect([index])
    degree = max((h[0] for h in groups), default=-1)
    return [groups.get((e,), Polynomial.zero(p.context)) for e in range(degree + 1)]


def sylvester_resultant(f: Polynomial, g: Polynomial, index: int) -> Polynomial:
    """Resultant of ``f`` and ``g`` with respect to the variable ``index``."""
    ctx = f.context
    fc, gc = _coefficients_in(f, index), _coefficients_in(g, index)
    if not fc or not gc:
        return Polynomial.zero(ctx)
    m, n = len(fc) - 1, len(gc) - 1
    size = m + n
    if size == 0:
        return Polynomial.constant(ctx, ONE)
    zero = Polynomial.zero(ctx)
    rows = []
    for r in range(n):
        row = [zero] * size
        for e, c in enumerate(reversed(fc)):
            row[r + e] = c
        rows.append(row)
    for r in range(m):
        row = [zero] * size
        for e, c in enumerate(reversed(gc)):
            row[r + e] = c
        rows.append(row)
    return determinant(rows, ctx)


def web_from_family(family: Polynomial, parameter: str) -> WebReport:
    """Implicit equation of the web whose leaves are ``family(z, c) = 0``.

    Eliminates ``c`` between the family and its differential
    ``sum_k (d family / d z_k) dz_k``; the result is a polynomial in ``z`` and
    formal ``dz`` symbols.
    """
    ctx = family.context
    c_index = ctx.aux_index(parameter)
    if c_index is None:
        raise DegenerateFamilyError(f"the family has no parameter named {parameter!r}")
    order = family.degree_in(c_index)
    if order < 1:
        raise DegenerateFamilyError("the family does not depend on its parameter")
    if ctx.has_w:
        raise ContextMismatchError("a leaf family is holomorphic in z")
    dnames = tuple("d" + name for name in ctx.z_display)
    web_ctx = VarContext(ctx.n_z, 0, (parameter,) + dnames, ctx.z_names)
    F = family.transfer(web_ctx)
    c_web = web_ctx.aux_index(parameter)
    G = Polynomial.zero(web_ctx)
    for k in range(ctx.n_z):
        G = G + F.partial_derivative(k) * Polynomial.from_name(web_ctx, dnames[k])
    resultant = sylvester_resultant(F, G, c_web)
    if resultant.is_zero():
        raise DegenerateFamilyError("the resultant vanishes identically")
    out_ctx = VarContext(ctx.n_z, 0, dnames, ctx.z_names)
    equation = resultant.transfer(out_ctx)
    logger.info("web of order %d with equation of degree %d", order, equation.total_degree())
    return WebReport(equation=equation, order=order, parameter=parameter)


# ---------------------------------------------------------------------------
# hyperplane sections
# ---------------------------------------------------------------------------


RestrictionTarget = Union[Ideal, FoliationPresentation]


def restrict_to_hyperplane(
    obj: RestrictionTarget, hyperplane: Polynomial
) -> Tuple[RestrictionTarget, RestrictionReport]:
    """Restrict an ideal or a foliation to ``{hyperplane = 0}``.

    The lowest-index variable with a nonzero coefficient is solved for and
    substituted. Foliations report the codimension of the restricted singular
    locus; a section is generic when it stays at least two.
    """
    ctx = hyperplane.context
    if ctx.has_w or ctx.aux:
        raise HyperplaneError("hyperplanes live in the plain z-context")
    if obj.context != ctx:
        raise ContextMismatchError("hyperplane and object live in different contexts")
    if hyperplane.total_degree() != 1:
        raise HyperplaneError("the hyperplane must be given by a polynomial of degree one")
    linear = [hyperplane.partial_derivative(i).constant_term() for i in range(ctx.n_z)]
    k = next(i for i, a in enumerate(linear) if a)
    x_k = Polynomial.variable(ctx, k)
    solution = (hyperplane - x_k * linear[k]) * (-linear[k].inverse())
    target = ctx.drop_z(k)
    index_map = [None if i == k else (i if i < k else i - 1) for i in range(ctx.size)]

    def restrict(p: Polynomial) -> Polynomial:
        return p.substitute({k: solution}).remap(target, index_map)

    solved = ctx.names[k]
    substitution = solution.remap(target, index_map)

    if isinstance(obj, Ideal):
        if obj.contains(hyperplane):
            raise HyperplaneError("the variety lies inside the hyperplane")
        restricted = Ideal(target, [restrict(g) for g in obj.generators])
        return restricted, RestrictionReport(
            solved_variable=solved,
            substitution=substitution,
            generators=[str(g) for g in restricted.generators],
        )

    coords = [i for i in range(ctx.n_z) if i != k]
    if obj.kind == "fields":
        tangent = fields_tangent_to(obj.fields, Ideal(ctx, [hyperplane]))
        new_fields: List[VectorField] = []
        for v in tangent:
            w = VectorField(target, [restrict(v.component(i)) for i in coords])
            if not w.is_zero() and w not in new_fields:
                new_fields.append(w)
        if not new_fields:
            raise HyperplaneError("no direction of the foliation is tangent to the hyperplane")
        section = FoliationPresentation(target, fields=new_fields)
    else:
        new_forms: List[DifferentialForm] = []
        for w in obj.forms:
            a_k = w.coefficient((k,))
            comps = [
                restrict(w.coefficient((i,)) - a_k * (linear[i] / linear[k])) for i in coords
            ]
            pulled = DifferentialForm.one_form(target, comps)
            if not pulled.is_zero():
                new_forms.append(pulled)
        if not new_forms:
            raise HyperplaneError("the hyperplane is a leaf of the foliation")
        section = FoliationPresentation(target, forms=new_forms)

    locus = singular_locus(section)
    if not locus.codim_at_least_two:
        logger.warning("hyperplane %s is not in general position", hyperplane)
    printed = [str(x) for x in (section.fields or section.forms)]
    return section, RestrictionReport(
        solved_variable=solved,
        substitution=substitution,
        generators=printed,
        singular_locus=locus,
        generic=locus.codim_at_least_two,
    )


def icomp_singular_locus(H: LeviFlatModel) -> SingularLocusReport:
    """Singular points of ``H^i`` (Jacobian minors) and their codimension in ``H^i``."""
    icomp = H.icomp
    zctx = H.z_context
    dim = krull_dimension(icomp)
    if dim is None:
        raise DegenerateFamilyError("the intrinsic complexification is empty")
    codim = H.N - dim
    if codim == 0:
        ideal = Ideal.unit(zctx)
    else:
        rows = [[g.partial_derivative(k) for k in range(H.N)] for g in icomp.generators]
        ideal = icomp.with_generators(_minors(rows, codim, zctx))
    return _codim_report(ideal, dim)
