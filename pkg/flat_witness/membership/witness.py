"""
Witnesses that H is not in the quasivariety or the flat variety of G.

The quasi-equation witness reads a short presentation <C; R> of H and a
word w for an element h killed by every homomorphism H -> G as

    (u = 1 for every relator u of R) -> w = 1

which G satisfies and H fails at the generator assignment. Its flat
translation is an equation that holds in the flat extension of G and fails
in that of H. Both are machine-checked before they are returned.
"""
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

from flat_witness.config import (
    BudgetExceededError,
    DEFAULT_ASSIGNMENT_BUDGET,
    DEFAULT_COSET_FACTOR,
    DEFAULT_HOM_NODE_BUDGET,
)
from flat_witness.flat.extension import flat_extension
from flat_witness.flat.translation import semiring_form, translate_qe_to_eq
from flat_witness.groups.core import FiniteGroup, exponent
from flat_witness.membership.quasivariety import in_quasivariety
from flat_witness.model.algebra import evaluate_at, group_algebra, satisfies_equation
from flat_witness.model.terms import (
    FLAT_UNIT,
    ONE,
    SEMIRING,
    Equation,
    QuasiEquation,
    Signature,
    Term,
    Var,
    inverse,
    product,
)
from flat_witness.presentation.lifting import BuiltPresentation, SimpleCatalog, build_short_presentation, express_element
from flat_witness.presentation.presentation import iter_relator_solutions
from flat_witness.presentation.words import GroupWord, eval_word

logger = logging.getLogger(__name__)


class PreconditionViolatedError(ValueError):
    """Raised when a witness is requested for a member of SP(G)."""
    pass


class VerificationFailedError(Exception):
    """Raised when a constructed witness does not separate the groups."""
    pass


def word_term(word: GroupWord) -> Term:
    """A group word as a left-associated product term; the empty word is 1."""
    if not word.letters:
        return ONE
    factors = [Var(g) if s > 0 else inverse(Var(g)) for g, s in word.letters]
    return product(factors)


@dataclass(frozen=True)
class QuasiEquationWitness:
    quasi_equation: QuasiEquation
    element: int
    word: GroupWord
    built: BuiltPresentation

    @property
    def assignment(self) -> Dict[str, int]:
        """Generator images in H falsifying the quasi-equation."""
        return dict(self.built.generator_map.images)


@dataclass(frozen=True)
class EquationWitness:
    equation: Equation
    exponent: int
    signature: Signature
    quasi: QuasiEquationWitness
    falsifying_assignment: Dict[str, int]
    holds_checked: bool

    @property
    def inconclusive(self) -> bool:
        """True when the flat extension of G was too large to check exhaustively."""
        return not self.holds_checked


def witness_quasi_equation(
    generator: FiniteGroup,
    member: FiniteGroup,
    catalog: Optional[SimpleCatalog] = None,
    node_budget: int = DEFAULT_HOM_NODE_BUDGET,
    coset_factor: int = DEFAULT_COSET_FACTOR,
) -> QuasiEquationWitness:
    """
    Quasi-equation true in G and false in H.

    Raises:
        PreconditionViolatedError: H lies in SP(G).
        VerificationFailedError: the constructed quasi-equation does not
            separate G from H.
    """
    verdict = in_quasivariety(member, generator, node_budget)
    if verdict.holds:
        raise PreconditionViolatedError(
            f"{member.label or 'H'} lies in SP({generator.label or 'G'}); no witness exists")
    h = verdict.witness_element
    built = build_short_presentation(member, catalog, coset_factor=coset_factor)
    word = express_element(built, h)
    pres = built.presentation
    premises = tuple(Equation(word_term(lhs), word_term(rhs)) for lhs, rhs in pres.relations)
    quasi = QuasiEquation(premises, Equation(word_term(word), ONE))

    # H fails it at the generator assignment, read through the term encoding
    algebra = group_algebra(member)
    images = built.generator_map.images
    premises_hold = all(evaluate_at(algebra, p.lhs, images) == evaluate_at(algebra, p.rhs, images) for p in premises)
    if not premises_hold or evaluate_at(algebra, quasi.conclusion.lhs, images) == member.identity:
        raise VerificationFailedError(f"Quasi-equation does not fail in {member.label} at the generator assignment")

    # G satisfies it: every solution of the relators kills w
    for solution in iter_relator_solutions(pres, generator, node_budget):
        if eval_word(generator, solution, word) != generator.identity:
            raise VerificationFailedError(
                f"Quasi-equation fails in {generator.label} at {solution}")

    logger.info(f"Witness quasi-equation for {member.label or 'H'} against {generator.label or 'G'}: "
                f"length {quasi.length}, element {h}")
    return QuasiEquationWitness(quasi, h, word, built)


def witness_equation_flat(
    generator: FiniteGroup,
    member: FiniteGroup,
    signature: Signature = FLAT_UNIT,
    catalog: Optional[SimpleCatalog] = None,
    node_budget: int = DEFAULT_HOM_NODE_BUDGET,
    assignment_budget: int = DEFAULT_ASSIGNMENT_BUDGET,
    coset_factor: int = DEFAULT_COSET_FACTOR,
) -> EquationWitness:
    """
    Equation true in the flat extension of G and false in that of H.

    In the flat signatures the exponent is that of G. In the semiring
    signature the quasi-equation is first rewritten with the product alone,
    using the lcm of both exponents.

    The flat extension of H is checked exhaustively when within the
    assignment budget, otherwise at the generator assignment. The flat
    extension of G is checked exhaustively when within budget; otherwise a
    warning is logged and the result is marked inconclusive.

    Raises:
        PreconditionViolatedError, VerificationFailedError
    """
    quasi = witness_quasi_equation(generator, member, catalog, node_budget, coset_factor)
    if signature is SEMIRING:
        d = math.lcm(exponent(generator), exponent(member))
        equation = translate_qe_to_eq(semiring_form(quasi.quasi_equation, d), d)
    else:
        d = exponent(generator)
        equation = translate_qe_to_eq(quasi.quasi_equation, d)

    flat_h = flat_extension(member, signature).algebra
    flat_g = flat_extension(generator, signature).algebra
    variables = equation.variables()

    assignment = {v: quasi.assignment[v] for v in variables}
    if evaluate_at(flat_h, equation.lhs, assignment) == evaluate_at(flat_h, equation.rhs, assignment):
        raise VerificationFailedError(f"Flat equation holds in flat({member.label}) at the generator assignment")
    if flat_h.size ** len(variables) <= assignment_budget:
        result = satisfies_equation(flat_h, equation, assignment_budget)
        if result.holds:
            raise VerificationFailedError(f"Flat equation holds in flat({member.label})")
        assignment = result.assignment

    holds_checked = False
    try:
        if not satisfies_equation(flat_g, equation, assignment_budget).holds:
            raise VerificationFailedError(f"Flat equation fails in flat({generator.label})")
        holds_checked = True
    except BudgetExceededError:
        logger.warning(f"flat({generator.label}) |= equation not checked exhaustively: "
                       f"{flat_g.size}^{len(variables)} assignments exceed the budget")

    logger.info(f"Witness equation for flat({member.label or 'H'}) against flat({generator.label or 'G'}): "
                f"length {equation.length}, exponent {d}")
    return EquationWitness(equation, d, signature, quasi, assignment, holds_checked)
