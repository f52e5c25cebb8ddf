"""Semantic AST for mathematical expressions.

Structural equality (dataclass ``==``) is the notion of equality used
throughout: two parses agree iff their trees compare equal, including the
``explicit`` flag on multiplication and the Apply/Times distinction.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

#: Relation symbols allowed in a Relation chain.  ``or``/``and`` are textual
#: connectives so answer lines like ``x=1 or x=9`` stay a single chain.
RELATORS = ("<=>", "=>", "<=", ">=", "!=", "->", "=", "<", ">", "in", "or", "and")

BRACKET_STYLES = ("paren", "square", "brace")

BIGOP_NAMES = ("sum", "prod", "int")


class Expr:
    """Base class for all expression nodes."""

    __slots__ = ()


@dataclass(frozen=True)
class Integer(Expr):
    value: int


@dataclass(frozen=True)
class Decimal(Expr):
    text: str  # spelling preserved: "1.50" stays "1.50"


@dataclass(frozen=True)
class Ident(Expr):
    name: str


@dataclass(frozen=True)
class SymbolConst(Expr):
    """Named symbol from the symbol table: pi, e, oo, AA, EE, uu, nn, ..."""

    name: str


@dataclass(frozen=True)
class Greek(Expr):
    name: str


@dataclass(frozen=True)
class BlackboardSet(Expr):
    name: str  # one of N Z Q R C

    def __post_init__(self) -> None:
        if self.name not in ("N", "Z", "Q", "R", "C"):
            raise ValueError(f"not a blackboard set: {self.name!r}")


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class Times(Expr):
    left: Expr
    right: Expr
    explicit: bool = False  # True for ``*``/``xx``/``\times``, False for juxtaposition


@dataclass(frozen=True)
class Apply(Expr):
    """Function application; never collapsed into Times."""

    head: Expr
    args: Tuple[Expr, ...]


@dataclass(frozen=True)
class Frac(Expr):
    numerator: Expr
    denominator: Expr


@dataclass(frozen=True)
class Power(Expr):
    base: Expr
    exponent: Expr


@dataclass(frozen=True)
class Subscript(Expr):
    base: Expr
    index: Expr


@dataclass(frozen=True)
class Sqrt(Expr):
    arg: Expr


@dataclass(frozen=True)
class Root(Expr):
    index: Expr
    arg: Expr


@dataclass(frozen=True)
class BigOp(Expr):
    op: str  # sum | prod | int
    binder: Optional[Expr]
    lower: Optional[Expr]
    upper: Optional[Expr]
    body: Optional[Expr]

    def __post_init__(self) -> None:
        if self.op not in BIGOP_NAMES:
            raise ValueError(f"unknown big operator {self.op!r}")


@dataclass(frozen=True)
class Matrix(Expr):
    rows: Tuple[Tuple[Expr, ...], ...]

    def __post_init__(self) -> None:
        widths = {len(r) for r in self.rows}
        if len(widths) > 1:
            raise ValueError("matrix rows must all have equal length")


@dataclass(frozen=True)
class Relation(Expr):
    """Alternating chain (operand, relator, operand, relator, operand...)."""

    chain: Tuple[object, ...]

    def __post_init__(self) -> None:
        if len(self.chain) < 3 or len(self.chain) % 2 == 0:
            raise ValueError("relation chain must alternate and have length >= 3")
        for i, item in enumerate(self.chain):
            if i % 2 == 0:
                if not isinstance(item, Expr):
                    raise ValueError("even chain positions must be expressions")
            elif item not in RELATORS:
                raise ValueError(f"unknown relator {item!r}")

    def operands(self) -> Tuple[Expr, ...]:
        return self.chain[0::2]

    def relators(self) -> Tuple[str, ...]:
        return self.chain[1::2]


@dataclass(frozen=True)
class Bracketed(Expr):
    """Brackets the author actually typed (grouping parens are absorbed)."""

    style: str
    inner: Expr

    def __post_init__(self) -> None:
        if self.style not in BRACKET_STYLES:
            raise ValueError(f"unknown bracket style {self.style!r}")


@dataclass(frozen=True)
class Sequence(Expr):
    """Comma-separated run, e.g. the ``[x,-3,3]`` argument of plot."""

    items: Tuple[Expr, ...]


@dataclass(frozen=True)
class TextFragment(Expr):
    text: str


@dataclass(frozen=True)
class ErrorNode(Expr):
    """Unparseable input, preserved verbatim so rendering never loses it."""

    raw: str


def children(expr: Expr) -> Tuple[Expr, ...]:
    """Direct child expressions of a node."""
    if isinstance(expr, (Add, Sub, Times)):
        return (expr.left, expr.right)
    if isinstance(expr, Neg):
        return (expr.arg,)
    if isinstance(expr, Apply):
        return (expr.head, *expr.args)
    if isinstance(expr, Frac):
        return (expr.numerator, expr.denominator)
    if isinstance(expr, Power):
        return (expr.base, expr.exponent)
    if isinstance(expr, Subscript):
        return (expr.base, expr.index)
    if isinstance(expr, Sqrt):
        return (expr.arg,)
    if isinstance(expr, Root):
        return (expr.index, expr.arg)
    if isinstance(expr, BigOp):
        return tuple(e for e in (expr.binder, expr.lower, expr.upper, expr.body) if e is not None)
    if isinstance(expr, Matrix):
        return tuple(c for row in expr.rows for c in row)
    if isinstance(expr, Relation):
        return expr.operands()
    if isinstance(expr, Bracketed):
        return (expr.inner,)
    if isinstance(expr, Sequence):
        return expr.items
    return ()


def walk(expr: Expr) -> Iterator[Expr]:
    """Yield ``expr`` and every descendant, preorder."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def contains_errors(expr: Expr) -> bool:
    return any(isinstance(node, ErrorNode) for node in walk(expr))


def tree_depth(expr: Expr, limit: int = 10 ** 9) -> int:
    """Depth of the tree, iteratively; stops early once past ``limit``."""
    deepest = 0
    stack = [(expr, 1)]
    while stack:
        node, depth = stack.pop()
        if depth > deepest:
            deepest = depth
            if deepest > limit:
                return deepest
        for child in children(node):
            stack.append((child, depth + 1))
    return deepest


def free_names(expr: Expr) -> set:
    """Names of identifiers and Greek letters appearing in the tree."""
    names = set()
    for node in walk(expr):
        if isinstance(node, (Ident, Greek)):
            names.add(node.name)
    return names
