"""Probabilistic equivalence checking by randomized evaluation.

Two expressions that agree at enough random rational points are almost
certainly the same function (Schwartz-Zippel for the polynomial case).
This is an oracle-grade helper, not a grader: it reports
``equivalent-probably`` / ``not-equivalent`` (with a checkable witness) /
``undecided``, never a verdict about correctness.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from examdown.calcengine.engine import (
    Approx, Boolean, EvalError, Exact, Value, eval_exact, eval_numeric,
)
from examdown.mathexpr import ast

EQUIVALENT_PROBABLY = "equivalent-probably"
NOT_EQUIVALENT = "not-equivalent"
UNDECIDED = "undecided"

_REL_TOL = 1e-9
_MAX_RESAMPLES = 10


@dataclass(frozen=True)
class EquivVerdict:
    kind: str
    witness: Optional[Dict[str, Fraction]] = None
    trials_used: int = 0

    def __bool__(self) -> bool:  # truthy when probably equivalent
        return self.kind == EQUIVALENT_PROBABLY


def _sample_point(rng: random.Random, names: Sequence[str]) -> Dict[str, Fraction]:
    # Rational coordinates p/q with |p| <= 40, 1 <= q <= 4.
    return {name: Fraction(rng.randint(-40, 40), rng.randint(1, 4)) for name in names}


def _usable(v1: Value, v2: Value) -> Optional[Tuple[Value, Value]]:
    for v in (v1, v2):
        if isinstance(v, Approx) and not v.finite:
            return None
    return v1, v2


def _eval_pair(e1: ast.Expr, e2: ast.Expr,
               env: Dict[str, Fraction]) -> Optional[Tuple[Value, Value]]:
    """Both values via a common path, or None when the point is unusable."""
    try:
        return _usable(eval_exact(e1, env), eval_exact(e2, env))
    except EvalError as err:
        if err.code != "unsupported-operation":
            return None
    try:
        return _usable(eval_numeric(e1, env), eval_numeric(e2, env))
    except EvalError:
        return None


def _agree(v1: Value, v2: Value) -> bool:
    if isinstance(v1, Exact) and isinstance(v2, Exact):
        return v1.value == v2.value
    if isinstance(v1, Boolean) or isinstance(v2, Boolean):
        return isinstance(v1, Boolean) and isinstance(v2, Boolean) and v1.value == v2.value
    a = float(v1.value) if isinstance(v1, Exact) else v1.value
    b = float(v2.value) if isinstance(v2, Exact) else v2.value
    return math.isclose(a, b, rel_tol=_REL_TOL, abs_tol=_REL_TOL)


def check_equiv(e1: ast.Expr, e2: ast.Expr, vars: Sequence[str],
                trials: int = 12, seed: int = 0) -> EquivVerdict:
    """Deterministic per seed; a not-equivalent verdict carries the witness."""
    rng = random.Random(seed)
    names: List[str] = list(vars)
    valid = 0
    for _ in range(trials):
        pair = None
        env: Dict[str, Fraction] = {}
        for _ in range(_MAX_RESAMPLES):
            env = _sample_point(rng, names)
            pair = _eval_pair(e1, e2, env)
            if pair is not None:
                break
        if pair is None:
            continue
        valid += 1
        if not _agree(*pair):
            return EquivVerdict(NOT_EQUIVALENT, witness=env, trials_used=valid)
    if valid < trials:
        # Too few usable sample points to commit either way.
        return EquivVerdict(UNDECIDED, trials_used=valid)
    return EquivVerdict(EQUIVALENT_PROBABLY, trials_used=valid)
