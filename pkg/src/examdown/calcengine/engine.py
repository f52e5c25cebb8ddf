"""Exact rational evaluator with a double-precision fallback.

Exact arithmetic uses ``fractions.Fraction`` (always lowest terms,
positive denominator).  A per-evaluation step budget bounds runaway
inputs such as towers of huge exponents; exceeding it raises
``EvalError('budget-exceeded')`` rather than hanging.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Union

from examdown.diagnostics import Diagnostic, Span, info
from examdown.mathexpr import ast

Rational = Fraction

DEFAULT_BUDGET = 10 ** 6
_MAX_EXACT_BITS = 4 * 10 ** 6  # size cap for exact power results


@dataclass(frozen=True)
class Exact:
    value: Fraction


@dataclass(frozen=True)
class Approx:
    value: float

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


@dataclass(frozen=True)
class Boolean:
    value: bool


Value = Union[Exact, Approx, Boolean]


class EvalError(Exception):
    """code is one of: unbound-variable, division-by-zero,
    unsupported-operation, budget-exceeded."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def make_env(bindings: Optional[Mapping[str, object]] = None) -> Dict[str, Value]:
    """Coerce plain numbers into Values for convenience."""
    env: Dict[str, Value] = {}
    for name, val in (bindings or {}).items():
        if isinstance(val, (Exact, Approx, Boolean)):
            env[name] = val
        elif isinstance(val, bool):
            env[name] = Boolean(val)
        elif isinstance(val, (int, Fraction)):
            env[name] = Exact(Fraction(val))
        elif isinstance(val, float):
            env[name] = Approx(val)
        else:
            raise TypeError(f"cannot bind {name}={val!r}")
    return env


class _Budget:
    __slots__ = ("left",)

    def __init__(self, limit: int):
        self.left = limit

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise EvalError("budget-exceeded", "evaluation step budget exhausted")


# ----------------------------------------------------------------------
# exact path

def eval_exact(expr: ast.Expr, env: Optional[Mapping[str, object]] = None,
               budget: int = DEFAULT_BUDGET,
               diagnostics: Optional[List[Diagnostic]] = None) -> Value:
    """Exact rational evaluation; raises EvalError on unsupported input.

    A non-integer exponent falls through to numeric evaluation for that
    subtree, recording an info diagnostic when a list is supplied.
    """
    return _EvalExact(make_env(env), _Budget(budget), diagnostics).eval(expr)


class _EvalExact:
    def __init__(self, env: Dict[str, Value], budget: _Budget,
                 diagnostics: Optional[List[Diagnostic]]):
        self.env = env
        self.budget = budget
        self.diagnostics = diagnostics

    def eval(self, expr: ast.Expr) -> Value:
        self.budget.spend()
        e = self.eval  # local alias

        if isinstance(expr, ast.Integer):
            return Exact(Fraction(expr.value))
        if isinstance(expr, ast.Decimal):
            return Exact(Fraction(expr.text))
        if isinstance(expr, (ast.Ident, ast.Greek)):
            try:
                return self.env[expr.name]
            except KeyError:
                raise EvalError("unbound-variable", f"unbound variable {expr.name!r}") from None
        if isinstance(expr, ast.SymbolConst):
            if expr.name in self.env:
                return self.env[expr.name]
            raise EvalError("unsupported-operation",
                            f"{expr.name!r} has no exact rational value")
        if isinstance(expr, ast.Bracketed):
            return e(expr.inner)
        if isinstance(expr, ast.Add):
            return self._arith(e(expr.left), e(expr.right), lambda a, b: a + b)
        if isinstance(expr, ast.Sub):
            return self._arith(e(expr.left), e(expr.right), lambda a, b: a - b)
        if isinstance(expr, ast.Times):
            return self._arith(e(expr.left), e(expr.right), lambda a, b: a * b)
        if isinstance(expr, ast.Neg):
            value = self._exact(e(expr.arg))
            return Exact(-value)
        if isinstance(expr, ast.Frac):
            den = self._exact(e(expr.denominator))
            if den == 0:
                raise EvalError("division-by-zero", "division by zero")
            return Exact(self._exact(e(expr.numerator)) / den)
        if isinstance(expr, ast.Power):
            return self._power(expr)
        if isinstance(expr, ast.Apply):
            return self._apply(expr)
        if isinstance(expr, ast.BigOp):
            return self._bigop(expr)
        if isinstance(expr, ast.Relation):
            return self._relation(expr)
        if isinstance(expr, ast.ErrorNode):
            raise EvalError("unsupported-operation",
                            f"cannot evaluate unparsed input {expr.raw!r}")
        raise EvalError("unsupported-operation",
                        f"cannot evaluate {type(expr).__name__} exactly")

    @staticmethod
    def _exact(value: Value) -> Fraction:
        if isinstance(value, Exact):
            return value.value
        raise EvalError("unsupported-operation", "expected an exact rational value")

    def _arith(self, a: Value, b: Value, op: Callable) -> Value:
        return Exact(op(self._exact(a), self._exact(b)))

    def _power(self, expr: ast.Power) -> Value:
        base = self._exact(self.eval(expr.base))
        exponent = self._exact(self.eval(expr.exponent))
        if exponent.denominator != 1:
            if self.diagnostics is not None:
                self.diagnostics.append(info(
                    Span(0, 0), "non-integer-exponent",
                    "non-integer exponent evaluated numerically"))
            result = float(base) ** float(exponent)
            if isinstance(result, complex) or not math.isfinite(result):
                return Approx(float("nan"))
            return Approx(result)
        n = exponent.numerator
        if n < 0 and base == 0:
            raise EvalError("division-by-zero", "zero to a negative power")
        size = abs(n) * max(base.numerator.bit_length() + base.denominator.bit_length(), 1)
        if size > _MAX_EXACT_BITS:
            raise EvalError("budget-exceeded", "power result would be too large")
        self.budget.spend(max(1, abs(n).bit_length()))
        return Exact(base ** n)  # int pow is binary (repeated squaring)

    def _apply(self, expr: ast.Apply) -> Value:
        if isinstance(expr.head, ast.Ident) and expr.head.name == "falling":
            if len(expr.args) != 2:
                raise EvalError("unsupported-operation", "falling takes two arguments")
            x = self._exact(self.eval(expr.args[0]))
            n_val = self._exact(self.eval(expr.args[1]))
            if n_val.denominator != 1 or n_val < 0:
                raise EvalError("unsupported-operation",
                                "falling needs a non-negative integer count")
            n = n_val.numerator
            self.budget.spend(n)
            product = Fraction(1)
            for k in range(n):
                product *= (x - k)
            return Exact(product)
        if isinstance(expr.head, ast.Ident) and expr.head.name == "abs":
            if len(expr.args) != 1:
                raise EvalError("unsupported-operation", "abs takes one argument")
            return Exact(abs(self._exact(self.eval(expr.args[0]))))
        head = expr.head.name if isinstance(expr.head, ast.Ident) else type(expr.head).__name__
        raise EvalError("unsupported-operation", f"no exact rule for {head!r}")

    def _bigop(self, expr: ast.BigOp) -> Value:
        if expr.op not in ("sum", "prod"):
            raise EvalError("unsupported-operation", f"cannot evaluate {expr.op!r} exactly")
        if expr.body is None or expr.lower is None or expr.upper is None \
                or not isinstance(expr.binder, (ast.Ident, ast.Greek)):
            raise EvalError("unsupported-operation",
                            f"{expr.op} needs a binder, integer bounds and a body")
        lo = self._exact(self.eval(expr.lower))
        hi = self._exact(self.eval(expr.upper))
        if lo.denominator != 1 or hi.denominator != 1:
            raise EvalError("unsupported-operation", f"{expr.op} bounds must be integers")
        count = hi.numerator - lo.numerator + 1
        if count > 0:
            self.budget.spend(count)
        total = Fraction(0) if expr.op == "sum" else Fraction(1)
        name = expr.binder.name
        saved = self.env.get(name)
        try:
            for k in range(lo.numerator, hi.numerator + 1):
                self.env[name] = Exact(Fraction(k))
                term = self._exact(self.eval(expr.body))
                total = total + term if expr.op == "sum" else total * term
        finally:
            if saved is None:
                self.env.pop(name, None)
            else:
                self.env[name] = saved
        return Exact(total)

    def _relation(self, expr: ast.Relation) -> Value:
        comparisons = {"=": lambda a, b: a == b, "!=": lambda a, b: a != b,
                       "<": lambda a, b: a < b, "<=": lambda a, b: a <= b,
                       ">": lambda a, b: a > b, ">=": lambda a, b: a >= b}
        # Split the chain on textual connectives, then fold left.
        segments: List[List[object]] = [[expr.chain[0]]]
        connectives: List[str] = []
        for rel, operand in zip(expr.chain[1::2], expr.chain[2::2]):
            if rel in ("or", "and"):
                connectives.append(rel)
                segments.append([operand])
            else:
                segments[-1].append(rel)
                segments[-1].append(operand)
        def seg_value(seg: List[object]) -> bool:
            if len(seg) == 1:
                value = self.eval(seg[0])
                if isinstance(value, Boolean):
                    return value.value
                raise EvalError("unsupported-operation",
                                "connective operand is not a comparison")
            ok = True
            for i in range(1, len(seg), 2):
                rel = seg[i]
                if rel not in comparisons:
                    raise EvalError("unsupported-operation",
                                    f"cannot evaluate relator {rel!r}")
                a = self._exact(self.eval(seg[i - 1]))
                b = self._exact(self.eval(seg[i + 1]))
                ok = ok and comparisons[rel](a, b)
            return ok
        result = seg_value(segments[0])
        for conn, seg in zip(connectives, segments[1:]):
            rhs = seg_value(seg)
            result = (result or rhs) if conn == "or" else (result and rhs)
        return Boolean(result)


# ----------------------------------------------------------------------
# numeric path

_NUMERIC_FUNCS: Dict[str, Callable[[float], float]] = {
    "sqrt": math.sqrt, "sin": math.sin, "cos": math.cos, "tan": math.tan,
    "ln": math.log, "log": math.log10, "exp": math.exp,
    "arcsin": math.asin, "arccos": math.acos, "arctan": math.atan,
    "sinh": math.sinh, "cosh": math.cosh, "tanh": math.tanh,
    "abs": abs, "floor": math.floor, "ceil": math.ceil,
}

_NUMERIC_CONSTS = {"pi": math.pi, "e": math.e, "oo": math.inf}


def eval_numeric(expr: ast.Expr, env: Optional[Mapping[str, object]] = None,
                 budget: int = DEFAULT_BUDGET) -> Value:
    """Double-precision evaluation; domain errors yield non-finite values."""
    return Approx(_EvalNumeric(make_env(env), _Budget(budget)).eval(expr))


class _EvalNumeric:
    def __init__(self, env: Dict[str, Value], budget: _Budget):
        self.env = env
        self.budget = budget

    def _num(self, value: Value) -> float:
        if isinstance(value, Exact):
            return float(value.value)
        if isinstance(value, Approx):
            return value.value
        raise EvalError("unsupported-operation", "expected a numeric value")

    def eval(self, expr: ast.Expr) -> float:
        self.budget.spend()
        e = self.eval

        if isinstance(expr, ast.Integer):
            return float(expr.value)
        if isinstance(expr, ast.Decimal):
            return float(expr.text)
        if isinstance(expr, (ast.Ident, ast.Greek)):
            if expr.name in self.env:
                return self._num(self.env[expr.name])
            raise EvalError("unbound-variable", f"unbound variable {expr.name!r}")
        if isinstance(expr, ast.SymbolConst):
            if expr.name in self.env:
                return self._num(self.env[expr.name])
            if expr.name in _NUMERIC_CONSTS:
                return _NUMERIC_CONSTS[expr.name]
            raise EvalError("unsupported-operation", f"{expr.name!r} has no numeric value")
        if isinstance(expr, ast.Bracketed):
            return e(expr.inner)
        if isinstance(expr, ast.Add):
            return e(expr.left) + e(expr.right)
        if isinstance(expr, ast.Sub):
            return e(expr.left) - e(expr.right)
        if isinstance(expr, ast.Times):
            return e(expr.left) * e(expr.right)
        if isinstance(expr, ast.Neg):
            return -e(expr.arg)
        if isinstance(expr, ast.Frac):
            den = e(expr.denominator)
            num = e(expr.numerator)
            if den == 0:
                return math.nan
            return num / den
        if isinstance(expr, ast.Power):
            base, exponent = e(expr.base), e(expr.exponent)
            try:
                result = base ** exponent
            except (ValueError, OverflowError, ZeroDivisionError):
                return math.nan
            if isinstance(result, complex):
                return math.nan
            return result
        if isinstance(expr, ast.Sqrt):
            arg = e(expr.arg)
            return math.sqrt(arg) if arg >= 0 else math.nan
        if isinstance(expr, ast.Root):
            index, arg = e(expr.index), e(expr.arg)
            if index == 0 or arg < 0:
                return math.nan
            try:
                return arg ** (1.0 / index)
            except (ValueError, OverflowError, ZeroDivisionError):
                return math.nan
        if isinstance(expr, ast.Apply):
            return self._apply(expr)
        if isinstance(expr, ast.BigOp):
            return self._bigop(expr)
        raise EvalError("unsupported-operation",
                        f"cannot evaluate {type(expr).__name__} numerically")

    def _apply(self, expr: ast.Apply) -> float:
        if not isinstance(expr.head, ast.Ident):
            raise EvalError("unsupported-operation", "cannot apply a non-identifier")
        name = expr.head.name
        args = [self.eval(a) for a in expr.args]
        if name in _NUMERIC_FUNCS and len(args) == 1:
            try:
                return float(_NUMERIC_FUNCS[name](args[0]))
            except (ValueError, OverflowError, ZeroDivisionError):
                return math.nan
        if name == "falling" and len(args) == 2:
            x, n_f = args
            if n_f < 0 or n_f != int(n_f):
                return math.nan
            n = int(n_f)
            self.budget.spend(n)
            product = 1.0
            for k in range(n):
                product *= (x - k)
            return product
        if name in ("min", "max", "gcd") and args:
            if name == "min":
                return min(args)
            if name == "max":
                return max(args)
            if all(a == int(a) for a in args):
                return float(math.gcd(*(int(a) for a in args)))
            return math.nan
        raise EvalError("unsupported-operation", f"unknown function {name!r}")

    def _bigop(self, expr: ast.BigOp) -> float:
        if expr.op not in ("sum", "prod"):
            raise EvalError("unsupported-operation", f"cannot evaluate {expr.op!r}")
        if expr.body is None or expr.lower is None or expr.upper is None \
                or not isinstance(expr.binder, (ast.Ident, ast.Greek)):
            raise EvalError("unsupported-operation",
                            f"{expr.op} needs a binder, integer bounds and a body")
        lo, hi = self.eval(expr.lower), self.eval(expr.upper)
        if lo != int(lo) or hi != int(hi):
            raise EvalError("unsupported-operation", f"{expr.op} bounds must be integers")
        count = int(hi) - int(lo) + 1
        if count > 0:
            self.budget.spend(count)
        total = 0.0 if expr.op == "sum" else 1.0
        name = expr.binder.name
        saved = self.env.get(name)
        try:
            for k in range(int(lo), int(hi) + 1):
                self.env[name] = Approx(float(k))
                term = self.eval(expr.body)
                total = total + term if expr.op == "sum" else total * term
        finally:
            if saved is None:
                self.env.pop(name, None)
            else:
                self.env[name] = saved
        return total


# ----------------------------------------------------------------------
# facade used by the document renderer and the CLI

class Calculator:
    """Exact-first evaluator handle; safe to share across renders."""

    def __init__(self, budget: int = DEFAULT_BUDGET):
        self.budget = budget

    def eval(self, expr: ast.Expr,
             env: Optional[Mapping[str, object]] = None) -> Value:
        """Exact evaluation, falling back to numeric for non-rational input."""
        try:
            return eval_exact(expr, env, self.budget)
        except EvalError as err:
            if err.code != "unsupported-operation":
                raise
        return eval_numeric(expr, env, self.budget)


def format_value(value: Value) -> str:
    if isinstance(value, Exact):
        frac = value.value
        if frac.denominator == 1:
            return str(frac.numerator)
        return f"{frac.numerator}/{frac.denominator}"
    if isinstance(value, Approx):
        if math.isnan(value.value):
            return "undefined"
        return f"{value.value:.10g}"
    return "true" if value.value else "false"


def value_to_expr(value: Value) -> ast.Expr:
    """Parser-shaped expression tree for a computed value (for rendering)."""
    if isinstance(value, Exact):
        frac = value.value
        negative = frac < 0
        num: ast.Expr = ast.Integer(abs(frac.numerator))
        if negative:
            num = ast.Neg(num)
        if frac.denominator == 1:
            return num
        return ast.Frac(num, ast.Integer(frac.denominator))
    if isinstance(value, Approx):
        text = format_value(value)
        if text == "undefined":
            return ast.TextFragment("undefined")
        if text.startswith("-"):
            return ast.Neg(_decimal_or_int(text[1:]))
        return _decimal_or_int(text)
    return ast.TextFragment("true" if value.value else "false")


def _decimal_or_int(text: str) -> ast.Expr:
    if text.isdigit():
        return ast.Integer(int(text))
    return ast.Decimal(text)
