"""Groebner bases, ideal membership, elimination, dimension and saturation.

Buchberger's algorithm with the Gebauer-Moeller pair criteria over Q(i).
Internally polynomials are plain ``{monomial: coefficient}`` dicts kept monic.
"""

from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from shared.config import get_config
from shared.logging import get_logger

from .errors import BudgetExceededError, ContextMismatchError
from .polycore import (
    ONE,
    ZERO,
    GaussianRational,
    Monomial,
    Polynomial,
    TermOrder,
    VarContext,
    default_order,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

logger = get_logger(__name__)

Terms = Dict[Monomial, GaussianRational]
KeyFunc = Callable[[Monomial], Tuple]


def _monic(terms: Terms, lm: Monomial) -> Terms:
    inv = terms[lm].inverse()
    if inv == ONE:
        return terms
    return {m: c * inv for m, c in terms.items()}


def _reduce(terms: Terms, basis: Sequence[Tuple[Monomial, Terms]], key: KeyFunc) -> Terms:
    """Fully reduce ``terms`` modulo a list of monic ``(lm, terms)`` pairs."""
    p = dict(terms)
    remainder: Terms = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in basis:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.items():
                    t = mono_mul(gm, q)
                    v = p.get(t, ZERO) - c * gc
                    if v:
                        p[t] = v
                    else:
                        p.pop(t, None)
                break
        else:
            remainder[m] = c
            del p[m]
    return remainder


def _s_polynomial(f: Tuple[Monomial, Terms], g: Tuple[Monomial, Terms]) -> Terms:
    lcm = mono_lcm(f[0], g[0])
    qf, qg = mono_div(lcm, f[0]), mono_div(lcm, g[0])
    result: Terms = {}
    for m, c in f[1].items():
        result[mono_mul(m, qf)] = c
    for m, c in g[1].items():
        t = mono_mul(m, qg)
        v = result.get(t, ZERO) - c
        if v:
            result[t] = v
        else:
            result.pop(t, None)
    return result


class _Buchberger:
    """One basis computation; ``store`` holds every polynomial ever added."""

    def __init__(self, key: KeyFunc, budget: int):
        self.key = key
        self.budget = budget
        self.store: List[Tuple[Monomial, Terms]] = []
        self.basis: List[int] = []
        self.pairs: List[Tuple[int, int]] = []
        self.processed = 0
        self.unit = False

    def lm(self, i: int) -> Monomial:
        return self.store[i][0]

    def _current(self) -> List[Tuple[Monomial, Terms]]:
        return [self.store[i] for i in self.basis]

    def add(self, terms: Terms) -> None:
        h = _reduce(terms, self._current(), self.key)
        if not h:
            return
        lm = max(h, key=self.key)
        if not any(lm):
            self.unit = True
            return
        self.store.append((lm, _monic(h, lm)))
        self._update(len(self.store) - 1)

    def _update(self, h: int) -> None:
        lm_h = self.lm(h)
        candidates = list(self.basis)
        kept: List[int] = []
        while candidates:
            g1 = candidates.pop(0)
            lcm1 = mono_lcm(lm_h, self.lm(g1))
            if mono_coprime(lm_h, self.lm(g1)) or not any(
                mono_divides(mono_lcm(lm_h, self.lm(g2)), lcm1)
                for g2 in candidates + kept
            ):
                kept.append(g1)
        new_pairs = [(g, h) for g in kept if not mono_coprime(lm_h, self.lm(g))]
        pairs = []
        for g1, g2 in self.pairs:
            lcm12 = mono_lcm(self.lm(g1), self.lm(g2))
            if (
                not mono_divides(lm_h, lcm12)
                or mono_lcm(self.lm(g1), lm_h) == lcm12
                or mono_lcm(lm_h, self.lm(g2)) == lcm12
            ):
                pairs.append((g1, g2))
        self.pairs = pairs + new_pairs
        self.basis = [g for g in self.basis if not mono_divides(lm_h, self.lm(g))] + [h]

    def run(self, generators: Iterable[Terms]) -> None:
        for terms in generators:
            self.add(terms)
            if self.unit:
                return
        while self.pairs:
            best = min(
                range(len(self.pairs)),
                key=lambda k: self.key(
                    mono_lcm(self.lm(self.pairs[k][0]), self.lm(self.pairs[k][1]))
                ),
            )
            g1, g2 = self.pairs.pop(best)
            self.processed += 1
            if self.processed > self.budget:
                raise BudgetExceededError(self.budget, self.processed - 1)
            self.add(_s_polynomial(self.store[g1], self.store[g2]))
            if self.unit:
                return

    def reduced(self) -> List[Terms]:
        elements = self._current()
        out = []
        for k, (lm, g) in enumerate(elements):
            others = elements[:k] + elements[k + 1 :]
            out.append(_reduce(g, others, self.key))
        out.sort(key=lambda t: self.key(max(t, key=self.key)), reverse=True)
        return out


def _compute_basis(
    context: VarContext,
    generators: Sequence[Polynomial],
    order: TermOrder,
    budget: int,
) -> Tuple[Polynomial, ...]:
    key = order.key_function()
    engine = _Buchberger(key, budget)
    engine.run(dict(g.terms) for g in generators if not g.is_zero())
    if engine.unit:
        logger.debug("groebner basis: unit ideal after %d S-pairs", engine.processed)
        return (Polynomial.constant(context, ONE),)
    basis = tuple(Polynomial._raw(context, t) for t in engine.reduced())
    logger.debug(
        "groebner basis (%s): %d generators -> %d elements, %d S-pairs",
        order,
        len(generators),
        len(basis),
        engine.processed,
    )
    return basis


class Ideal:
    """An ideal given by generators, with reduced Groebner bases cached per order."""

    def __init__(self, context: VarContext, generators: Iterable[Polynomial] = ()):
        gens: List[Polynomial] = []
        for g in generators:
            if g.context != context:
                raise ContextMismatchError("generator belongs to another context")
            if not g.is_zero() and g not in gens:
                gens.append(g)
        self.context = context
        self.generators: Tuple[Polynomial, ...] = tuple(gens)
        self._bases: Dict[TermOrder, Tuple[Polynomial, ...]] = {}

    @classmethod
    def zero(cls, context: VarContext) -> "Ideal":
        return cls(context)

    @classmethod
    def unit(cls, context: VarContext) -> "Ideal":
        return cls(context, [Polynomial.constant(context, ONE)])

    def _order(self, order: Optional[TermOrder]) -> TermOrder:
        return order if order is not None else default_order()

    def groebner_basis(
        self, order: Optional[TermOrder] = None, budget: Optional[int] = None
    ) -> Tuple[Polynomial, ...]:
        order = self._order(order)
        cached = self._bases.get(order)
        if cached is None:
            if budget is None:
                budget = get_config().groebner.s_pair_budget
            cached = _compute_basis(self.context, self.generators, order, budget)
            self._bases.setdefault(order, cached)
        return cached

    def seed_basis(self, order: TermOrder, basis: Sequence[Polynomial]) -> None:
        """Publish a basis known to be reduced for ``order`` (first write wins)."""
        self._bases.setdefault(order, tuple(basis))

    def normal_form(self, f: Polynomial, order: Optional[TermOrder] = None) -> Polynomial:
        if f.context != self.context:
            raise ContextMismatchError("polynomial and ideal live in different contexts")
        order = self._order(order)
        basis = self.groebner_basis(order)
        key = order.key_function()
        pairs = [(g.leading_monomial(order), dict(g.terms)) for g in basis]
        return Polynomial._raw(self.context, _reduce(dict(f.terms), pairs, key))

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other: "Ideal") -> bool:
        if other.context != self.context:
            raise ContextMismatchError("ideals live in different contexts")
        return all(self.contains(g) for g in other.generators)

    def equals(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        if self.is_zero():
            return False
        basis = self.groebner_basis()
        return len(basis) == 1 and basis[0].is_constant()

    def contains_point(self, point: Sequence[object]) -> bool:
        return all(g.evaluate(point).is_zero() for g in self.generators)  # type: ignore[arg-type]

    def dimension(self) -> Optional[int]:
        return krull_dimension(self)

    def transfer(self, target: VarContext) -> "Ideal":
        return Ideal(target, (g.transfer(target) for g in self.generators))

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.context != self.context:
            raise ContextMismatchError("ideals live in different contexts")
        return Ideal(self.context, self.generators + other.generators)

    def with_generators(self, extra: Iterable[Polynomial]) -> "Ideal":
        return Ideal(self.context, self.generators + tuple(extra))

    def __str__(self) -> str:
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __repr__(self) -> str:
        return f"Ideal({self})"


def groebner_basis(
    ideal: Ideal, order: Optional[TermOrder] = None, budget: Optional[int] = None
) -> Tuple[Polynomial, ...]:
    return ideal.groebner_basis(order, budget)


def normal_form(f: Polynomial, ideal: Ideal, order: Optional[TermOrder] = None) -> Polynomial:
    return ideal.normal_form(f, order)


def is_groebner_basis(basis: Sequence[Polynomial], order: Optional[TermOrder] = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    order = order or default_order()
    key = order.key_function()
    pairs = []
    for g in basis:
        if g.is_zero():
            continue
        lm = g.leading_monomial(order)
        pairs.append((lm, _monic(dict(g.terms), lm)))
    for f, g in combinations(pairs, 2):
        if mono_coprime(f[0], g[0]):
            continue
        if _reduce(_s_polynomial(f, g), pairs, key):
            return False
    return True


def _eliminate_indices(
    ideal: Ideal,
    indices: Sequence[int],
    target: VarContext,
    index_map: Sequence[Optional[int]],
    budget: Optional[int] = None,
) -> Ideal:
    order = TermOrder.eliminating(ideal.context.size, indices)
    basis = ideal.groebner_basis(order, budget)
    survivors = [g.remap(target, index_map) for g in basis if not g.uses_any(indices)]
    result = Ideal(target, survivors)
    # the rest block is grevlex in increasing index order, which the remap preserves
    result.seed_basis(TermOrder.grevlex(), result.generators)
    return result


def eliminate(ideal: Ideal, block: str, budget: Optional[int] = None) -> Ideal:
    """Eliminate the ``"w"`` or ``"z"`` block of a two-block ideal.

    Eliminating w yields an ideal of the z-only context. Eliminating z yields
    an ideal of a standalone context whose variables carry the w-block names.
    """
    ctx = ideal.context
    if not ctx.has_w:
        raise ContextMismatchError("elimination needs a context with both blocks")
    if block == "w":
        removed = list(ctx.w_indices)
        target = ctx.z_only()
        index_map: List[Optional[int]] = [
            i if i < ctx.n_z else (None if i < ctx.n_z + ctx.n_w else i - ctx.n_w)
            for i in range(ctx.size)
        ]
    elif block == "z":
        removed = list(ctx.z_indices)
        target = VarContext(ctx.n_z, 0, ctx.aux, ctx.w_display)
        index_map = [None if i < ctx.n_z else i - ctx.n_z for i in range(ctx.size)]
    else:
        raise ValueError(f"block must be 'z' or 'w', not {block!r}")
    result = _eliminate_indices(ideal, removed, target, index_map, budget)
    logger.debug("eliminated %s-block: %d generators survive", block, len(result.generators))
    return result


def krull_dimension(ideal: Ideal) -> Optional[int]:
    """Dimension of the zero set, or ``None`` for the unit ideal (empty variety).

    Computed as the largest set of variables independent modulo the leading
    monomials of the grevlex basis.
    """
    size = ideal.context.size
    if ideal.is_zero():
        return size
    basis = ideal.groebner_basis(TermOrder.grevlex())
    if len(basis) == 1 and basis[0].is_constant():
        return None
    supports = []
    for g in basis:
        lm = g.leading_monomial(TermOrder.grevlex())
        supports.append(frozenset(k for k, e in enumerate(lm) if e))
    for k in range(size, -1, -1):
        for subset in combinations(range(size), k):
            chosen = set(subset)
            if not any(s <= chosen for s in supports):
                return k
    return 0


def saturate(ideal: Ideal, f: Polynomial, budget: Optional[int] = None) -> Ideal:
    """``I : f^oo`` via ``I + <1 - t*f>`` and elimination of ``t``."""
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    if f.context != ideal.context:
        raise ContextMismatchError("polynomial and ideal live in different contexts")
    ctx = ideal.context
    if f.is_constant():
        return Ideal(ctx, ideal.generators)
    name = "t"
    while name in ctx.names:
        name += "_"
    ext = ctx.with_aux((name,))
    t = Polynomial.from_name(ext, name)
    gens = [g.transfer(ext) for g in ideal.generators]
    gens.append(Polynomial.constant(ext, ONE) - t * f.transfer(ext))
    t_index = ext.size - 1
    index_map: List[Optional[int]] = list(range(ctx.size)) + [None]
    return _eliminate_indices(Ideal(ext, gens), [t_index], ctx, index_map, budget)
