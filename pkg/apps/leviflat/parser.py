"""Parser and printer for the polynomial expression language.

Grammar (see ``docs/model_file.bnf``)::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | 'i' | NAME | '~' NAME | '(' expr ')'

``~z3`` denotes the conjugate of ``z3`` and lowers to the w-block. Implicit
multiplication is not supported.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from .errors import ParseError
from .polycore import (
    I_UNIT,
    GaussianRational,
    Polynomial,
    TermOrder,
    VarContext,
)

MAX_EXPONENT = 64
MAX_DEPTH = 100

_TOKEN_SPEC = [
    ("NUMBER", r"\d+(?:/\d+)?"),
    ("NAME", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("TILDE", r"~"),
    ("PLUS", r"\+"),
    ("MINUS", r"-"),
    ("STAR", r"\*"),
    ("CARET", r"\^"),
    ("SLASH", r"/"),
    ("LPAREN", r"\("),
    ("RPAREN", r"\)"),
    ("COMMA", r","),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("MISMATCH", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(source: str) -> List[Token]:
    """Split ``source`` into tokens carrying 1-based line/column positions."""
    tokens: List[Token] = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(source):
        kind = match.lastgroup or "MISMATCH"
        text = match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
            continue
        if kind == "SKIP":
            continue
        if kind == "MISMATCH":
            raise ParseError(f"unexpected character {text!r}", line, column)
        tokens.append(Token(kind, text, line, column))
    tokens.append(Token("EOF", "", line, len(source) - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    line: int
    column: int


@dataclass(frozen=True)
class Number(Expr):
    value: GaussianRational


@dataclass(frozen=True)
class Variable(Expr):
    name: str
    conjugate: bool = False


@dataclass(frozen=True)
class Negate(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinaryOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: int


class Parser:
    """Recursive descent parser over a token list."""

    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "EOF":
            self.pos += 1
        return token

    def accept(self, kind: str) -> Optional[Token]:
        if self.current.kind == kind:
            return self.advance()
        return None

    def expect(self, kind: str, what: str) -> Token:
        token = self.current
        if token.kind != kind:
            found = token.text or "end of input"
            raise ParseError(f"expected {what}, found {found!r}", token.line, token.column)
        return self.advance()

    def at_end(self) -> bool:
        return self.current.kind == "EOF"

    def enter(self, token: Token) -> None:
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError(
                f"nesting too deep (more than {MAX_DEPTH} levels)", token.line, token.column
            )

    def expect_end(self) -> None:
        if not self.at_end():
            token = self.current
            raise ParseError(f"unexpected {token.text!r}", token.line, token.column)

    def parse_expr(self) -> Expr:
        node = self.parse_term()
        while self.current.kind in ("PLUS", "MINUS"):
            op = self.advance()
            right = self.parse_term()
            node = BinaryOp(op.line, op.column, "+" if op.kind == "PLUS" else "-", node, right)
        return node

    def parse_term(self) -> Expr:
        node = self.parse_unary()
        while self.current.kind == "STAR":
            op = self.advance()
            node = BinaryOp(op.line, op.column, "*", node, self.parse_unary())
        if self.current.kind in ("NAME", "NUMBER", "TILDE", "LPAREN"):
            token = self.current
            raise ParseError(
                "missing '*' (implicit multiplication is not supported)",
                token.line,
                token.column,
            )
        return node

    def parse_unary(self) -> Expr:
        token = self.current
        if token.kind in ("MINUS", "PLUS"):
            self.advance()
            self.enter(token)
            operand = self.parse_unary()
            self.depth -= 1
            if token.kind == "MINUS":
                return Negate(token.line, token.column, operand)
            return operand
        return self.parse_power()

    def parse_power(self) -> Expr:
        base = self.parse_atom()
        caret = self.accept("CARET")
        if caret is None:
            return base
        token = self.expect("NUMBER", "an integer exponent")
        if "/" in token.text:
            raise ParseError("exponents must be integers", token.line, token.column)
        exponent = int(token.text)
        if exponent > MAX_EXPONENT:
            raise ParseError(
                f"exponent {exponent} exceeds the limit of {MAX_EXPONENT}",
                token.line,
                token.column,
            )
        if self.current.kind == "CARET":
            token = self.current
            raise ParseError("chained exponents need parentheses", token.line, token.column)
        return Power(caret.line, caret.column, base, exponent)

    def parse_atom(self) -> Expr:
        token = self.current
        if token.kind == "NUMBER":
            self.advance()
            num, _, den = token.text.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", token.line, token.column)
            value = Fraction(int(num), int(den) if den else 1)
            return Number(token.line, token.column, GaussianRational(value))
        if token.kind == "NAME":
            self.advance()
            if token.text == "i":
                return Number(token.line, token.column, I_UNIT)
            return Variable(token.line, token.column, token.text)
        if token.kind == "TILDE":
            self.advance()
            name = self.expect("NAME", "a variable after '~'")
            if name.text == "i":
                raise ParseError("'i' cannot be conjugated as a variable", name.line, name.column)
            return Variable(token.line, token.column, name.text, conjugate=True)
        if token.kind == "LPAREN":
            self.advance()
            self.enter(token)
            node = self.parse_expr()
            self.expect("RPAREN", "')'")
            self.depth -= 1
            return node
        found = token.text or "end of input"
        raise ParseError(f"unexpected {found!r}", token.line, token.column)


# ---------------------------------------------------------------------------
# lowering
# ---------------------------------------------------------------------------


def _resolve(node: Variable, ctx: VarContext) -> int:
    if node.conjugate:
        index = ctx.index_of(node.name)
        if index is None or index >= ctx.n_z:
            raise ParseError(
                f"'~{node.name}' needs a z-variable of the context", node.line, node.column
            )
        if not ctx.has_w:
            raise ParseError(
                f"conjugate '~{node.name}' used in a holomorphic context",
                node.line,
                node.column,
            )
        return ctx.partner(index)
    index = ctx.index_of(node.name)
    if index is None:
        raise ParseError(f"unknown variable {node.name!r}", node.line, node.column)
    return index


def lower(node: Expr, ctx: VarContext) -> Polynomial:
    """Evaluate an AST into a polynomial of ``ctx``."""
    if isinstance(node, Number):
        return Polynomial.constant(ctx, node.value)
    if isinstance(node, Variable):
        return Polynomial.variable(ctx, _resolve(node, ctx))
    if isinstance(node, Negate):
        return -lower(node.operand, ctx)
    if isinstance(node, Power):
        return lower(node.base, ctx) ** node.exponent
    if isinstance(node, BinaryOp):
        # long sums and products nest to the left; walk that spine iteratively
        spine: List[BinaryOp] = []
        while isinstance(node, BinaryOp):
            spine.append(node)
            node = node.left
        value = lower(node, ctx)
        for op in reversed(spine):
            right = lower(op.right, ctx)
            if op.op == "+":
                value = value + right
            elif op.op == "-":
                value = value - right
            else:
                value = value * right
        return value
    raise TypeError(f"unknown node {node!r}")


def parse_expr(src: str) -> Expr:
    parser = Parser(src)
    node = parser.parse_expr()
    parser.expect_end()
    return node


def parse_poly(src: str, ctx: VarContext) -> Polynomial:
    """Parse ``src`` into a polynomial of ``ctx``."""
    return lower(parse_expr(src), ctx)


def parse_polys(src: str, ctx: VarContext) -> List[Polynomial]:
    """Parse a comma-separated list of polynomials."""
    parser = Parser(src)
    result = [lower(parser.parse_expr(), ctx)]
    while parser.accept("COMMA"):
        result.append(lower(parser.parse_expr(), ctx))
    parser.expect_end()
    return result


def parse_constant(src: str) -> GaussianRational:
    return parse_poly(src, VarContext(0)).constant_term()


def parse_point(src: str) -> List[GaussianRational]:
    """Parse comma-separated constants such as ``"3/5, 1, -i, 0"``."""
    return [p.constant_term() for p in parse_polys(src, VarContext(0))]


def parse_rational_function(src: str, ctx: VarContext) -> Tuple[Polynomial, Polynomial]:
    """Parse ``num / den`` (or a bare polynomial, with denominator 1)."""
    parser = Parser(src)
    num = lower(parser.parse_expr(), ctx)
    den = Polynomial.constant(ctx, 1)
    slash = parser.accept("SLASH")
    if slash is not None:
        den = lower(parser.parse_expr(), ctx)
        if den.is_zero():
            raise ParseError("zero denominator", slash.line, slash.column)
    parser.expect_end()
    return num, den


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _monomial_text(m: Sequence[int], names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, m):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def _term_text(coeff: GaussianRational, mono: str) -> Tuple[bool, str]:
    if coeff.is_real():
        negative, text = coeff.re < 0, str(abs(coeff.re))
        if text == "1" and mono:
            return negative, mono
    elif not coeff.re:
        negative = coeff.im < 0
        size = abs(coeff.im)
        text = "i" if size == 1 else f"{size}*i"
    else:
        negative = coeff.re < 0
        text = f"({-coeff if negative else coeff})"
    return negative, f"{text}*{mono}" if mono else text


def print_poly(
    p: Polynomial,
    order: Optional[TermOrder] = None,
    conjugate_notation: bool = False,
) -> str:
    """Canonical text of ``p``; ``parse_poly`` reads it back to the same polynomial.

    With ``conjugate_notation`` the w-block is printed as ``~z`` names.
    """
    if p.is_zero():
        return "0"
    ctx = p.context
    names = list(ctx.names)
    if conjugate_notation:
        names[ctx.n_z : ctx.n_z + ctx.n_w] = ["~" + name for name in ctx.z_display][: ctx.n_w]
    parts: List[str] = []
    for m, c in p.sorted_terms(order):
        negative, body = _term_text(c, _monomial_text(m, names))
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"-{body}" if negative else f"+{body}")
    return "".join(parts)


def print_polys(polys: Sequence[Polynomial], conjugate_notation: bool = False) -> List[str]:
    return [print_poly(p, conjugate_notation=conjugate_notation) for p in polys]


def iter_names(node: Expr) -> Iterator[Variable]:
    """Yield every variable occurrence of an AST, left to right."""
    stack: List[Expr] = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, Variable):
            yield current
        elif isinstance(current, Negate):
            stack.append(current.operand)
        elif isinstance(current, Power):
            stack.append(current.base)
        elif isinstance(current, BinaryOp):
            stack.append(current.right)
            stack.append(current.left)
