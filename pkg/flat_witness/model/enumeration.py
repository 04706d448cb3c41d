"""
Enumeration of the equations of bounded length holding in a finite algebra.

Equations are produced up to renaming of variables and swapping of sides:
variables are named x, y, z, u, v, w, x7, x8, ... by first appearance, and of
the two orientations the one with the smaller text is kept. Output is
ordered by length, then by text.
"""
import logging
from functools import lru_cache
from typing import Iterator, List, Tuple

from flat_witness.config import (
    BudgetExceededError,
    DEFAULT_ASSIGNMENT_BUDGET,
    DEFAULT_EQUATION_COUNT_BUDGET,
    DEFAULT_EQUATION_LENGTH_CAP,
)
from flat_witness.model.algebra import FiniteAlgebra, satisfies_equation
from flat_witness.model.terms import Equation, Op, Signature, Term, Var, substitute

logger = logging.getLogger(__name__)

_HOLE = "_"
_NAMES = ("x", "y", "z", "u", "v", "w")


def variable_name(k: int) -> str:
    return _NAMES[k] if k < len(_NAMES) else f"x{k + 1}"


@lru_cache(maxsize=None)
def term_shapes(signature: Signature, size: int) -> Tuple[Term, ...]:
    """Terms of exactly `size` symbols whose variables are all the hole ``_``."""
    if size < 1:
        return ()
    shapes: List[Term] = []
    if size == 1:
        shapes.append(Var(_HOLE))
    for symbol, arity in signature.operations:
        if arity == 0 and size == 1:
            shapes.append(Op(symbol))
        elif arity == 1:
            shapes.extend(Op(symbol, (t,)) for t in term_shapes(signature, size - 1))
        elif arity == 2:
            for left in range(1, size - 1):
                for a in term_shapes(signature, left):
                    for b in term_shapes(signature, size - 1 - left):
                        shapes.append(Op(symbol, (a, b)))
    return tuple(shapes)


def _holes(term: Term) -> int:
    if isinstance(term, Var):
        return 1
    return sum(_holes(a) for a in term.args)


def _growth_strings(k: int) -> Iterator[Tuple[int, ...]]:
    def extend(prefix: Tuple[int, ...], top: int) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == k:
            yield prefix
            return
        for v in range(top + 2):
            yield from extend(prefix + (v,), max(top, v))
    yield from extend((), -1)


def _fill(term: Term, labels: List[int]) -> Term:
    if isinstance(term, Var):
        return Var(variable_name(labels.pop(0)))
    return Op(term.symbol, tuple(_fill(a, labels) for a in term.args))


def canonical(equation: Equation) -> Equation:
    """Rename variables x, y, z, ... by first appearance, left side first."""
    mapping = {v: Var(variable_name(k)) for k, v in enumerate(equation.variables())}
    return Equation(substitute(equation.lhs, mapping), substitute(equation.rhs, mapping))


def normal_form(equation: Equation) -> Equation:
    """Canonical renaming of the orientation with the smaller text."""
    forward = canonical(equation)
    backward = canonical(Equation(equation.rhs, equation.lhs))
    return forward if forward.format() <= backward.format() else backward


def iter_equations(signature: Signature, max_len: int,
                   count_budget: int = DEFAULT_EQUATION_COUNT_BUDGET) -> Iterator[Equation]:
    """
    Every equation of length <= max_len in normal form, by length then text.

    Raises:
        BudgetExceededError: more than count_budget candidates at one length.
    """
    for length in range(2, max_len + 1):
        found = {}
        for left in range(1, length):
            for lhs_shape in term_shapes(signature, left):
                for rhs_shape in term_shapes(signature, length - left):
                    k = _holes(lhs_shape) + _holes(rhs_shape)
                    for labels in _growth_strings(k):
                        filled = list(labels)
                        eq = Equation(_fill(lhs_shape, filled), _fill(rhs_shape, filled))
                        norm = normal_form(eq)
                        found.setdefault(norm.format(), norm)
                        if len(found) > count_budget:
                            raise BudgetExceededError(
                                f"More than {count_budget} equations of length {length}")
        for text in sorted(found):
            yield found[text]


def enumerate_equations(algebra: FiniteAlgebra, max_len: int,
                        length_cap: int = DEFAULT_EQUATION_LENGTH_CAP,
                        budget: int = DEFAULT_ASSIGNMENT_BUDGET,
                        count_budget: int = DEFAULT_EQUATION_COUNT_BUDGET) -> List[Equation]:
    """Equations of length <= max_len that hold in the algebra."""
    check_length(max_len, length_cap)
    holding = [eq for eq in iter_equations(algebra.signature, max_len, count_budget)
               if satisfies_equation(algebra, eq, budget)]
    logger.debug(f"{len(holding)} equations of length <= {max_len} hold in {algebra.label or 'algebra'}")
    return holding


def check_length(max_len: int, length_cap: int) -> None:
    if max_len > length_cap:
        raise BudgetExceededError(f"Equation length {max_len} is above the cap of {length_cap}")
