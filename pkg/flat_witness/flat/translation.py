"""
From group quasi-equations to equations of flat extensions.

For a quasi-equation  u1 = v1 , ... , un = vn -> u0 = v0  and an exponent d,
with P the left-associated product of the meets (ui & vi), the equation

    P^d * (u0 & v0)^d = P^d

holds in the flat extension of a group whose exponent divides d exactly
when the quasi-equation holds in the group. Every conclusion variable must
occur in a premise; missing ones get the premise x = x.
"""
import logging
from typing import List, Optional

from flat_witness.model.terms import (
    ONE,
    PRODUCT,
    UNIT,
    INVERSE,
    Equation,
    Op,
    QuasiEquation,
    Term,
    Var,
    meet,
    power,
    product,
)

logger = logging.getLogger(__name__)


class EmptyPremiseUnpaddableError(ValueError):
    """Raised when premises would need padding and padding is disabled."""
    pass


def pad_premises(quasi: QuasiEquation) -> QuasiEquation:
    """Add x = x for every conclusion variable missing from the premises (and 1 = 1 if nothing is left)."""
    covered = set()
    for p in quasi.premises:
        covered.update(p.variables())
    extra = [Equation(Var(v), Var(v)) for v in quasi.conclusion.variables() if v not in covered]
    premises = quasi.premises + tuple(extra)
    if not premises:
        premises = (Equation(ONE, ONE),)
    return QuasiEquation(premises, quasi.conclusion)


def needs_padding(quasi: QuasiEquation) -> bool:
    return pad_premises(quasi).premises != quasi.premises


def translate_qe_to_eq(quasi: QuasiEquation, exponent: int, pad: bool = True) -> Equation:
    """
    The flat equation of a quasi-equation for exponent d.

    Raises:
        EmptyPremiseUnpaddableError: pad is False and the premises do not
            cover the conclusion (or are empty).
        ValueError: exponent < 1.
    """
    if exponent < 1:
        raise ValueError(f"Exponent must be positive, got {exponent}")
    if needs_padding(quasi):
        if not pad:
            raise EmptyPremiseUnpaddableError(f"Premises of '{quasi}' do not cover its conclusion")
        quasi = pad_premises(quasi)
    guard = product([meet(p.lhs, p.rhs) for p in quasi.premises])
    guard_power = power(guard, exponent)
    conclusion = meet(quasi.conclusion.lhs, quasi.conclusion.rhs)
    lhs = Op(PRODUCT, (guard_power, power(conclusion, exponent)))
    equation = Equation(lhs, guard_power)
    logger.debug(f"Translated quasi-equation of length {quasi.length} to equation of length {equation.length}")
    return equation


def _unit_free(term: Term, exponent: int, unit: Term) -> Term:
    if isinstance(term, Var):
        return term
    if term.symbol == UNIT:
        return unit
    args = tuple(_unit_free(a, exponent, unit) for a in term.args)
    if term.symbol == INVERSE:
        (arg,) = args
        return unit if exponent == 1 else power(arg, exponent - 1)
    return Op(term.symbol, args)


def semiring_form(quasi: QuasiEquation, exponent: int) -> QuasiEquation:
    """
    Rewrite a group quasi-equation with the product alone.

    Uses x^-1 = x^(d-1) and 1 = v^d for the first variable v of the premises,
    both valid in groups whose exponent divides d.

    Raises:
        ValueError: the quasi-equation has no variable to express 1 with.
    """
    if exponent < 1:
        raise ValueError(f"Exponent must be positive, got {exponent}")
    variables: List[str] = []
    for p in quasi.premises:
        variables.extend(p.variables())
    variables.extend(quasi.conclusion.variables())
    anchor: Optional[str] = variables[0] if variables else None
    if anchor is None:
        raise ValueError(f"'{quasi}' has no variable to express the unit with")
    unit = power(Var(anchor), exponent)

    def rewrite(eq: Equation) -> Equation:
        return Equation(_unit_free(eq.lhs, exponent, unit), _unit_free(eq.rhs, exponent, unit))

    return QuasiEquation(tuple(rewrite(p) for p in quasi.premises), rewrite(quasi.conclusion))
