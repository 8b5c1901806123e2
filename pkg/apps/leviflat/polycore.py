"""Exact Gaussian-rational arithmetic and multivariate polynomials.

Every polynomial lives in a :class:`VarContext` made of a z-block, an optional
w-block (the conjugate coordinates) and an optional block of auxiliary
variables (parameters, saturation variables, formal differentials).
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from types import MappingProxyType
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import sympy

from .errors import ContextMismatchError, InvalidIndexError, PointLengthError

RationalLike = Union[int, Fraction, str]
Monomial = Tuple[int, ...]

_F0 = Fraction(0)
_F1 = Fraction(1)


class GaussianRational:
    """An element a + b*i of Q(i) with arbitrary-precision rational parts.

    Instances are treated as immutable; both parts are ``Fraction`` objects and
    therefore always in lowest terms with a positive denominator.
    """

    __slots__ = ("re", "im")

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _make(re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(GaussianRational)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def coerce(cls, value: object) -> "GaussianRational":
        """Convert ints, fractions and numeric strings to a Gaussian rational."""
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not coefficients")
        if isinstance(value, (int, Fraction)):
            return cls._make(Fraction(value), _F0)
        if isinstance(value, str):
            return cls(value)
        raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")

    def __add__(self, other: object) -> "GaussianRational":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: object) -> "GaussianRational":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: object) -> "GaussianRational":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other: object) -> "GaussianRational":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._make(a * c, _F0)
        return GaussianRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational._make(self.re / norm, -self.im / norm)

    def __truediv__(self, other: object) -> "GaussianRational":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> "GaussianRational":
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._make(-self.re, -self.im)

    def __pow__(self, exponent: int) -> "GaussianRational":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conj(self) -> "GaussianRational":
        return GaussianRational._make(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        o = _coerce_or_none(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        imag = "i" if abs(self.im) == 1 else f"{abs(self.im)}*i"
        if not self.re:
            return f"-{imag}" if self.im < 0 else imag
        sign = "-" if self.im < 0 else "+"
        return f"{self.re}{sign}{imag}"

    def __repr__(self) -> str:
        return f"GaussianRational('{self.re}', '{self.im}')"

    def to_sympy(self):
        return sympy.Rational(self.re.numerator, self.re.denominator) + sympy.I * (
            sympy.Rational(self.im.numerator, self.im.denominator)
        )


def _coerce_or_none(value: object) -> Optional[GaussianRational]:
    try:
        return GaussianRational.coerce(value)
    except TypeError:
        return None


ZERO = GaussianRational._make(_F0, _F0)
ONE = GaussianRational._make(_F1, _F0)
I_UNIT = GaussianRational._make(_F0, _F1)

Scalar = Union[int, Fraction, GaussianRational]


# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True if ``a`` divides ``b``."""
    return all(x <= y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return all(not x or not y for x, y in zip(a, b))


def total_degree(m: Monomial) -> int:
    return sum(m)


# ---------------------------------------------------------------------------
# term orders
# ---------------------------------------------------------------------------


class OrderKind(str, Enum):
    """Supported monomial orders."""

    GREVLEX = "grevlex"
    LEX = "lex"
    BLOCK = "block"


def _grevlex_key(m: Sequence[int]) -> Tuple:
    return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class TermOrder:
    """A monomial order given by a sort key (larger key = larger monomial).

    Block orders compare the blocks in the given priority with grevlex inside
    each block, which makes them elimination orders for their leading block.
    """

    kind: OrderKind = OrderKind.GREVLEX
    blocks: Tuple[Tuple[int, ...], ...] = ()

    @classmethod
    def grevlex(cls) -> "TermOrder":
        return cls(OrderKind.GREVLEX)

    @classmethod
    def lex(cls) -> "TermOrder":
        return cls(OrderKind.LEX)

    @classmethod
    def from_name(cls, name: str) -> "TermOrder":
        kind = OrderKind(name)
        if kind is OrderKind.BLOCK:
            raise ValueError("block orders need explicit blocks")
        return cls(kind)

    @classmethod
    def eliminating(cls, size: int, indices: Iterable[int]) -> "TermOrder":
        """Block order with ``indices`` as the leading (eliminated) block."""
        first = tuple(sorted(set(indices)))
        rest = tuple(i for i in range(size) if i not in first)
        return cls(OrderKind.BLOCK, (first, rest))

    def key(self, m: Monomial) -> Tuple:
        if self.kind is OrderKind.LEX:
            return m
        if self.kind is OrderKind.GREVLEX:
            return _grevlex_key(m)
        return tuple(_grevlex_key([m[i] for i in block]) for block in self.blocks)

    def key_function(self) -> Callable[[Monomial], Tuple]:
        return _cached_key(self)

    def __str__(self) -> str:
        if self.kind is OrderKind.BLOCK:
            return "block" + "".join(str(list(b)) for b in self.blocks)
        return self.kind.value


@lru_cache(maxsize=64)
def _cached_key(order: TermOrder) -> Callable[[Monomial], Tuple]:
    return lru_cache(maxsize=1 << 16)(order.key)


def default_order() -> TermOrder:
    """The configured default term order (grevlex unless overridden)."""
    from shared.config import get_config

    return TermOrder.from_name(get_config().groebner.term_order)


# ---------------------------------------------------------------------------
# variable contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VarContext:
    """The variables a polynomial lives in.

    Layout: ``z1..zN`` (indices ``0..N-1``), then ``w1..wN`` when the w-block
    is present, then the auxiliary variables in order.
    """

    n_z: int
    n_w: int = 0
    aux: Tuple[str, ...] = ()
    z_names: Optional[Tuple[str, ...]] = field(default=None)

    def __post_init__(self) -> None:
        if self.n_z < 0:
            raise ValueError("n_z must be non-negative")
        if self.n_w not in (0, self.n_z):
            raise ValueError("the w-block is either absent or as large as the z-block")
        if self.z_names is not None and len(self.z_names) != self.n_z:
            raise ValueError("one display name per z-variable is required")
        names = self.names
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")

    @classmethod
    def create(
        cls,
        n_z: int,
        conjugates: bool = False,
        aux: Sequence[str] = (),
        names: Optional[Sequence[str]] = None,
    ) -> "VarContext":
        return cls(
            n_z,
            n_z if conjugates else 0,
            tuple(aux),
            tuple(names) if names is not None else None,
        )

    @property
    def size(self) -> int:
        return self.n_z + self.n_w + len(self.aux)

    @property
    def has_w(self) -> bool:
        return self.n_w > 0

    @cached_property
    def z_display(self) -> Tuple[str, ...]:
        if self.z_names is not None:
            return self.z_names
        return tuple(f"z{k + 1}" for k in range(self.n_z))

    @cached_property
    def w_display(self) -> Tuple[str, ...]:
        if not self.n_w:
            return ()
        return tuple(
            "w" + name[1:] if name.startswith("z") else "w_" + name
            for name in self.z_display
        )

    @cached_property
    def names(self) -> Tuple[str, ...]:
        return self.z_display + self.w_display + self.aux

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def index_of(self, name: str) -> Optional[int]:
        return self._index.get(name)

    @property
    def z_indices(self) -> range:
        return range(0, self.n_z)

    @property
    def w_indices(self) -> range:
        return range(self.n_z, self.n_z + self.n_w)

    @property
    def aux_indices(self) -> range:
        return range(self.n_z + self.n_w, self.size)

    def aux_index(self, name: str) -> Optional[int]:
        if name not in self.aux:
            return None
        return self.n_z + self.n_w + self.aux.index(name)

    def check_index(self, index: int) -> None:
        if not 0 <= index < self.size:
            raise InvalidIndexError(
                f"variable index {index} outside context of size {self.size}"
            )

    def partner(self, index: int) -> int:
        """The index of the mirror variable (z_k <-> w_k)."""
        if not self.n_w:
            raise ContextMismatchError("context has no w-block")
        if index < self.n_z:
            return index + self.n_z
        if index < self.n_z + self.n_w:
            return index - self.n_z
        return index

    def full(self) -> "VarContext":
        return VarContext(self.n_z, self.n_z, self.aux, self.z_names)

    def z_only(self) -> "VarContext":
        return VarContext(self.n_z, 0, self.aux, self.z_names)

    def with_aux(self, names: Sequence[str]) -> "VarContext":
        return VarContext(self.n_z, self.n_w, self.aux + tuple(names), self.z_names)

    def without_aux(self) -> "VarContext":
        return VarContext(self.n_z, self.n_w, (), self.z_names)

    def w_block_context(self) -> "VarContext":
        """A standalone context whose variables are this context's w-block."""
        return VarContext(self.n_z, 0, (), self.w_display)

    def drop_z(self, index: int) -> "VarContext":
        """The z-only context with one z-variable removed."""
        if self.n_w:
            raise ContextMismatchError("only z-only contexts can drop a variable")
        names = tuple(n for k, n in enumerate(self.z_display) if k != index)
        return VarContext(self.n_z - 1, 0, self.aux, names)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """A sparse polynomial over Q(i): a map from exponent tuples to coefficients.

    Polynomials are immutable; zero coefficients are never stored.
    """

    __slots__ = ("context", "_terms", "_hash")

    def __init__(
        self,
        context: VarContext,
        terms: Optional[Mapping[Sequence[int], object]] = None,
    ):
        clean: Dict[Monomial, GaussianRational] = {}
        for mono, coeff in (terms or {}).items():
            m = tuple(int(e) for e in mono)
            if len(m) != context.size:
                raise InvalidIndexError(
                    f"monomial {m} does not match context of size {context.size}"
                )
            if any(e < 0 for e in m):
                raise InvalidIndexError(f"negative exponent in {m}")
            c = GaussianRational.coerce(coeff)
            if c:
                clean[m] = clean.get(m, ZERO) + c
        self.context = context
        self._terms = {m: c for m, c in clean.items() if c}
        self._hash: Optional[int] = None

    @classmethod
    def _raw(
        cls, context: VarContext, terms: Dict[Monomial, GaussianRational]
    ) -> "Polynomial":
        obj = object.__new__(cls)
        obj.context = context
        obj._terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, context: VarContext) -> "Polynomial":
        return cls._raw(context, {})

    @classmethod
    def constant(cls, context: VarContext, value: Scalar) -> "Polynomial":
        c = GaussianRational.coerce(value)
        if not c:
            return cls.zero(context)
        return cls._raw(context, {(0,) * context.size: c})

    @classmethod
    def variable(cls, context: VarContext, index: int) -> "Polynomial":
        context.check_index(index)
        m = tuple(1 if k == index else 0 for k in range(context.size))
        return cls._raw(context, {m: ONE})

    @classmethod
    def from_name(cls, context: VarContext, name: str) -> "Polynomial":
        index = context.index_of(name)
        if index is None:
            raise InvalidIndexError(f"unknown variable {name!r}")
        return cls.variable(context, index)

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, GaussianRational]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (
            len(self._terms) == 1 and not any(next(iter(self._terms)))
        )

    def constant_term(self) -> GaussianRational:
        return self._terms.get((0,) * self.context.size, ZERO)

    def sorted_terms(
        self, order: Optional[TermOrder] = None
    ) -> List[Tuple[Monomial, GaussianRational]]:
        key = (order or default_order()).key_function()
        return sorted(self._terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self, order: Optional[TermOrder] = None) -> Monomial:
        if not self._terms:
            raise ValueError("the zero polynomial has no leading monomial")
        key = (order or default_order()).key_function()
        return max(self._terms, key=key)

    def leading_coefficient(self, order: Optional[TermOrder] = None) -> GaussianRational:
        return self._terms[self.leading_monomial(order)]

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, index: int) -> int:
        self.context.check_index(index)
        return max((m[index] for m in self._terms), default=-1)

    def bidegree_of(self, m: Monomial) -> Tuple[int, int]:
        ctx = self.context
        return (sum(m[: ctx.n_z]), sum(m[ctx.n_z : ctx.n_z + ctx.n_w]))

    def bidegrees(self) -> Set[Tuple[int, int]]:
        return {self.bidegree_of(m) for m in self._terms}

    def is_bihomogeneous(self) -> bool:
        return len(self.bidegrees()) <= 1

    def variables(self) -> Set[int]:
        used: Set[int] = set()
        for m in self._terms:
            used.update(k for k, e in enumerate(m) if e)
        return used

    def uses_any(self, indices: Iterable[int]) -> bool:
        wanted = set(indices)
        return bool(self.variables() & wanted)

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other: object) -> Optional["Polynomial"]:
        if isinstance(other, Polynomial):
            if other.context is not self.context and other.context != self.context:
                raise ContextMismatchError(
                    "polynomials belong to different variable contexts"
                )
            return other
        c = _coerce_or_none(other)
        if c is None:
            return None
        return Polynomial.constant(self.context, c)

    def __add__(self, other: object) -> "Polynomial":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in o._terms.items():
            prev = terms.get(m)
            if prev is None:
                terms[m] = c
            else:
                s = prev + c
                if s:
                    terms[m] = s
                else:
                    del terms[m]
        return Polynomial._raw(self.context, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.context, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: object) -> "Polynomial":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other: object) -> "Polynomial":
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, value: Scalar) -> "Polynomial":
        c = GaussianRational.coerce(value)
        if not c:
            return Polynomial.zero(self.context)
        return Polynomial._raw(self.context, {m: a * c for m, a in self._terms.items()})

    def __mul__(self, other: object) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = _coerce_or_none(other)
            if c is None:
                return NotImplemented
            return self.scale(c)
        o = self._lift(other)
        assert o is not None
        terms: Dict[Monomial, GaussianRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in o._terms.items():
                m = mono_mul(m1, m2)
                prev = terms.get(m)
                terms[m] = c1 * c2 if prev is None else prev + c1 * c2
        return Polynomial._raw(self.context, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative exponent")
        result = Polynomial.constant(self.context, ONE)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def multiply_monomial(self, m: Monomial, coeff: Scalar = ONE) -> "Polynomial":
        c = GaussianRational.coerce(coeff)
        return Polynomial._raw(
            self.context, {mono_mul(k, m): v * c for k, v in self._terms.items()}
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Polynomial):
            return self.context == other.context and self._terms == other._terms
        c = _coerce_or_none(other)
        if c is None:
            return NotImplemented
        if not c:
            return not self._terms
        return self._terms == {(0,) * self.context.size: c}

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.context, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and evaluation -------------------------------------------

    def partial_derivative(self, index: int) -> "Polynomial":
        self.context.check_index(index)
        terms: Dict[Monomial, GaussianRational] = {}
        for m, c in self._terms.items():
            e = m[index]
            if e:
                dm = m[:index] + (e - 1,) + m[index + 1 :]
                terms[dm] = c * e
        return Polynomial._raw(self.context, terms)

    def evaluate(self, point: Sequence[Scalar]) -> GaussianRational:
        if len(point) != self.context.size:
            raise PointLengthError(
                f"point of length {len(point)} for context of size {self.context.size}"
            )
        values = [GaussianRational.coerce(v) for v in point]
        powers: Dict[Tuple[int, int], GaussianRational] = {}
        total = ZERO
        for m, c in self._terms.items():
            term = c
            for k, e in enumerate(m):
                if e:
                    p = powers.get((k, e))
                    if p is None:
                        p = values[k] ** e
                        powers[(k, e)] = p
                    term = term * p
            total = total + term
        return total

    def specialize(self, values: Mapping[int, Scalar]) -> "Polynomial":
        """Substitute constants for some variables (same context)."""
        fixed = {}
        for k, v in values.items():
            self.context.check_index(k)
            fixed[k] = GaussianRational.coerce(v)
        terms: Dict[Monomial, GaussianRational] = {}
        for m, c in self._terms.items():
            coeff = c
            mono = list(m)
            for k, v in fixed.items():
                if m[k]:
                    coeff = coeff * v ** m[k]
                    mono[k] = 0
            if coeff:
                key = tuple(mono)
                prev = terms.get(key)
                terms[key] = coeff if prev is None else prev + coeff
        return Polynomial._raw(self.context, {m: c for m, c in terms.items() if c})

    def substitute(self, mapping: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials (of the same context) for variables."""
        for k, p in mapping.items():
            self.context.check_index(k)
            self._lift(p)
        result = Polynomial.zero(self.context)
        cache: Dict[Tuple[int, int], Polynomial] = {}
        for m, c in self._terms.items():
            rest = tuple(0 if k in mapping else e for k, e in enumerate(m))
            term = Polynomial._raw(self.context, {rest: c})
            for k, e in enumerate(m):
                if e and k in mapping:
                    p = cache.get((k, e))
                    if p is None:
                        p = mapping[k] ** e
                        cache[(k, e)] = p
                    term = term * p
            result = result + term
        return result

    def conjugate_coefficients(self) -> "Polynomial":
        return Polynomial._raw(self.context, {m: c.conj() for m, c in self._terms.items()})

    def swap_blocks(self) -> "Polynomial":
        """Exchange the z-block and the w-block exponents."""
        ctx = self.context
        if not ctx.n_w:
            raise ContextMismatchError("swap_blocks needs a context with a w-block")
        n = ctx.n_z
        return Polynomial._raw(
            ctx,
            {m[n : 2 * n] + m[:n] + m[2 * n :]: c for m, c in self._terms.items()},
        )

    def remap(
        self, target: VarContext, index_map: Sequence[Optional[int]]
    ) -> "Polynomial":
        """Move to ``target``; ``index_map[i]`` is the new index of variable i."""
        if len(index_map) != self.context.size:
            raise ContextMismatchError("index map does not cover the source context")
        terms: Dict[Monomial, GaussianRational] = {}
        for m, c in self._terms.items():
            new = [0] * target.size
            for k, e in enumerate(m):
                if not e:
                    continue
                j = index_map[k]
                if j is None:
                    raise ContextMismatchError(
                        f"variable {self.context.names[k]} has no counterpart in the target context"
                    )
                new[j] += e
            key = tuple(new)
            prev = terms.get(key)
            terms[key] = c if prev is None else prev + c
        return Polynomial._raw(target, {m: c for m, c in terms.items() if c})

    def transfer(self, target: VarContext) -> "Polynomial":
        """Move to ``target`` matching z_k, w_k and auxiliary names."""
        src = self.context
        if src == target:
            return self
        index_map: List[Optional[int]] = []
        for i in range(src.size):
            if i < src.n_z:
                index_map.append(i if i < target.n_z else None)
            elif i < src.n_z + src.n_w:
                k = i - src.n_z
                index_map.append(target.n_z + k if k < target.n_w else None)
            else:
                index_map.append(target.aux_index(src.aux[i - src.n_z - src.n_w]))
        return self.remap(target, index_map)

    def collect(self, indices: Iterable[int]) -> Dict[Monomial, "Polynomial"]:
        """Group terms by their exponents on ``indices``.

        Returns a map from the sub-monomial on ``indices`` to the coefficient
        polynomial in the remaining variables.
        """
        chosen = tuple(indices)
        groups: Dict[Monomial, Dict[Monomial, GaussianRational]] = {}
        for m, c in self._terms.items():
            head = tuple(m[k] for k in chosen)
            rest = tuple(0 if k in chosen else e for k, e in enumerate(m))
            groups.setdefault(head, {})[rest] = c
        return {h: Polynomial._raw(self.context, t) for h, t in groups.items()}

    def __str__(self) -> str:
        from .parser import print_poly

        return print_poly(self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def poly_arith(p: Polynomial, q: Polynomial, op: str) -> Polynomial:
    """Binary polynomial arithmetic by operation name (add, sub, mul)."""
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    raise ValueError(f"unknown operation {op!r}")


def partial_derivative(p: Polynomial, var_index: int) -> Polynomial:
    return p.partial_derivative(var_index)


def evaluate(p: Polynomial, point: Sequence[Scalar]) -> GaussianRational:
    return p.evaluate(point)


def determinant(rows: Sequence[Sequence[Polynomial]], context: VarContext) -> Polynomial:
    """Determinant of a small square matrix of polynomials (Laplace expansion)."""
    n = len(rows)
    if n == 0:
        return Polynomial.constant(context, ONE)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant needs a square matrix")
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Polynomial.zero(context)
    for j in range(n):
        entry = rows[0][j]
        if entry.is_zero():
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = entry * determinant(minor, context)
        total = total + term if j % 2 == 0 else total - term
    return total


# ---------------------------------------------------------------------------
# exact linear algebra over Q(i)
# ---------------------------------------------------------------------------


def from_sympy(value) -> GaussianRational:
    """Convert an exact sympy number of Q(i) back to a Gaussian rational."""
    re, im = sympy.expand(sympy.sympify(value)).as_real_imag()
    re, im = sympy.Rational(re), sympy.Rational(im)
    return GaussianRational(
        Fraction(int(re.p), int(re.q)), Fraction(int(im.p), int(im.q))
    )


def _sympy_matrix(rows: Sequence[Sequence[Scalar]]):
    return sympy.Matrix(
        [[GaussianRational.coerce(v).to_sympy() for v in row] for row in rows]
    )


def exact_rank(rows: Sequence[Sequence[Scalar]]) -> int:
    """Rank of a constant matrix over Q(i)."""
    if not rows or not rows[0]:
        return 0
    return int(_sympy_matrix(rows).rank(simplify=True))


def nullspace(rows: Sequence[Sequence[Scalar]], width: int) -> List[List[GaussianRational]]:
    """A basis of the right kernel of a constant matrix with ``width`` columns."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(width)] for j in range(width)]
    basis = _sympy_matrix(rows).nullspace(simplify=True)
    return [[from_sympy(v) for v in vector] for vector in basis]
