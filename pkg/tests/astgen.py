"""Random generator of parser-shaped ASTs for round-trip properties.

The generator mirrors the grammar: it only produces tree shapes the parser
can actually emit (left-leaning operator combs, big operators in trailing
factor position, no bare negative literals), so serialize-then-parse must
reproduce the tree exactly.
"""

from __future__ import annotations

import random
from typing import List, Optional

from examdown.mathexpr import ast

IDENTS = list("abcdfghijkmnpqrstuvwxyz")  # 'e' and 'l'-likes fine; 'e' is a constant
IDENTS.remove("e") if "e" in IDENTS else None
FUNC_NAMES = ["sin", "cos", "tan", "ln", "log", "falling", "gcd"]
GREEKS = ["alpha", "beta", "gamma", "delta", "theta", "lambda", "mu", "omega",
          "Gamma", "Omega"]
CONSTS = ["pi", "e", "oo", "AA", "EE", "uu", "nn"]
SETS = ["N", "Z", "Q", "R", "C"]
RELATORS = ["=", "<", ">", "<=", ">=", "!=", "->", "=>", "<=>", "in", "or", "and"]
DECIMALS = ["0.5", "1.25", "3.14", "2.50", "0.125", "10.0"]
WORDS = ["so", "note", "step two", "hence", "by induction"]


class ExprGen:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def pick(self, seq):
        return seq[self.rng.randrange(len(seq))]

    def chance(self, p: float) -> bool:
        return self.rng.random() < p

    # ------------------------------------------------------------------

    def expr(self, depth: int) -> ast.Expr:
        if depth > 1 and self.chance(0.08):
            items = tuple(self.relation(depth - 1) for _ in range(self.rng.randint(2, 3)))
            return ast.Sequence(items)
        return self.relation(depth)

    def relation(self, depth: int) -> ast.Expr:
        if depth > 1 and self.chance(0.25):
            n = self.rng.randint(2, 3)
            chain: List[object] = [self.additive(depth - 1)]
            for _ in range(n - 1):
                chain.append(self.pick(RELATORS))
                chain.append(self.additive(depth - 1))
            return ast.Relation(tuple(chain))
        return self.additive(depth)

    def additive(self, depth: int) -> ast.Expr:
        node = self.mult(depth, tail=True)
        if depth <= 1:
            return node
        for _ in range(self.rng.randint(0, 2)):
            term = self.mult(depth - 1, tail=True)
            node = ast.Add(node, term) if self.chance(0.6) else ast.Sub(node, term)
        return node

    def mult(self, depth: int, tail: bool, allow_leading_neg: bool = True) -> ast.Expr:
        steps = self.rng.randint(0, 2) if depth > 1 else 0
        node = self.unary(depth - 1, tail=tail and steps == 0,
                          allow_neg=allow_leading_neg)
        for i in range(steps):
            last = i == steps - 1
            kind = self.pick(["juxt", "times", "div"])
            if kind == "div":
                den = self.unary(depth - 1, tail=False, allow_neg=True)
                node = ast.Frac(node, den)
            elif kind == "times":
                right = self.unary(depth - 1, tail=tail and last, allow_neg=True)
                node = ast.Times(node, right, explicit=True)
            else:
                right = self.unary(depth - 1, tail=tail and last, allow_neg=False)
                node = ast.Times(node, right, explicit=False)
        return node

    def unary(self, depth: int, tail: bool, allow_neg: bool) -> ast.Expr:
        if allow_neg and self.chance(0.12):
            return ast.Neg(self.unary(depth, tail=tail, allow_neg=True))
        return self.power(depth, tail)

    def power(self, depth: int, tail: bool) -> ast.Expr:
        if depth > 0 and self.chance(0.1):
            # big operators live at factor level and must close the term
            if tail:
                return self.bigop(depth)
        base = self.postfix(depth, tail=tail)
        if depth > 0 and not isinstance(base, ast.BigOp):
            if self.chance(0.18):
                base = ast.Subscript(self._no_bracketed(base), self.script(depth - 1))
            if self.chance(0.22):
                base = ast.Power(self._no_bracketed(base), self.script(depth - 1))
        return base

    @staticmethod
    def _no_bracketed(base: ast.Expr) -> ast.Expr:
        # Script bases absorb grouping parens, so a Bracketed base would be
        # stripped on reparse; hoist its inner expression instead.
        while isinstance(base, ast.Bracketed) and base.style == "paren":
            base = base.inner
        return base

    def script(self, depth: int) -> ast.Expr:
        roll = self.rng.random()
        if roll < 0.35:
            return ast.Integer(self.rng.randint(0, 99))
        if roll < 0.5:
            return ast.Ident(self.pick(IDENTS))
        if roll < 0.6:
            return ast.Neg(ast.Integer(self.rng.randint(1, 9)))
        if roll < 0.7 and depth > 0:
            return ast.Power(self.atomic(), self.atomic())
        if depth > 0:
            return self.additive(max(1, depth))
        return self.atomic()

    def postfix(self, depth: int, tail: bool) -> ast.Expr:
        if depth > 0 and self.chance(0.15):
            head = ast.Ident(self.pick(IDENTS + FUNC_NAMES)) if self.chance(0.8) \
                else ast.Greek(self.pick(GREEKS))
            nargs = self.rng.randint(1, 3)
            args = tuple(self.relation(depth - 1) for _ in range(nargs))
            return ast.Apply(head, args)
        return self.atom(depth, tail)

    def atomic(self) -> ast.Expr:
        roll = self.rng.random()
        if roll < 0.4:
            return ast.Integer(self.rng.randint(0, 999))
        if roll < 0.7:
            return ast.Ident(self.pick(IDENTS))
        if roll < 0.8:
            return ast.Greek(self.pick(GREEKS))
        if roll < 0.9:
            return ast.SymbolConst(self.pick(CONSTS))
        return ast.Decimal(self.pick(DECIMALS))

    def atom(self, depth: int, tail: bool) -> ast.Expr:
        roll = self.rng.random()
        if depth <= 0 or roll < 0.55:
            if self.chance(0.08):
                return ast.BlackboardSet(self.pick(SETS))
            if self.chance(0.06):
                return ast.TextFragment(self.pick(WORDS))
            return self.atomic()
        if roll < 0.67:
            return self.bracketed(depth)
        if roll < 0.75:
            return ast.Sqrt(self.expr(depth - 1))
        if roll < 0.8:
            return ast.Root(self.atomic(), self.expr(depth - 1))
        if roll < 0.9:
            return self.matrix(depth)
        if tail:
            return self.bigop(depth)
        return self.bracketed(depth)

    def bracketed(self, depth: int) -> ast.Expr:
        style = self.pick(["paren", "paren", "square", "brace"])
        inner = self.expr(depth - 1)
        # An all-square-rows square group would reparse as a matrix.
        if style == "square" and self._looks_like_matrix_rows(inner):
            style = "paren"
        return ast.Bracketed(style, inner)

    @staticmethod
    def _looks_like_matrix_rows(inner: ast.Expr) -> bool:
        if isinstance(inner, ast.Bracketed) and inner.style == "square":
            return True
        if isinstance(inner, ast.Sequence) and inner.items and all(
                isinstance(i, ast.Bracketed) and i.style == "square" for i in inner.items):
            return True
        return False

    def matrix(self, depth: int) -> ast.Expr:
        nrows = self.rng.randint(1, 3)
        ncols = self.rng.randint(1, 3)
        rows = tuple(
            tuple(self._cell(self.additive(max(1, depth - 1))) for _ in range(ncols))
            for _ in range(nrows))
        return ast.Matrix(rows)

    @staticmethod
    def _cell(cell: ast.Expr) -> ast.Expr:
        # A top-level square group or matrix as a cell would make the row
        # re-detect as a nested matrix; those shapes have no surface syntax.
        if isinstance(cell, ast.Matrix):
            return ast.Bracketed("paren", cell)
        if isinstance(cell, ast.Bracketed) and cell.style == "square":
            return ast.Bracketed("paren", cell.inner)
        return cell

    def bigop(self, depth: int) -> ast.Expr:
        op = self.pick(["sum", "prod", "int"])
        shape = self.rng.random()
        binder = lower = upper = None
        if shape < 0.5:
            binder = ast.Ident(self.pick(IDENTS))
            lower = self.additive(max(1, depth - 1))
            upper = self._bound(depth)
        elif shape < 0.75:
            lower = self._bound(depth)
            upper = self._bound(depth)
        elif shape < 0.9:
            upper = self._bound(depth)
        body: Optional[ast.Expr] = None
        if self.chance(0.85):
            body = self.mult(max(1, depth - 1), tail=True, allow_leading_neg=False)
        return ast.BigOp(op, binder, lower, upper, body)

    def _bound(self, depth: int) -> ast.Expr:
        if self.chance(0.6):
            return self.atomic()
        return self.additive(max(1, depth - 1))
