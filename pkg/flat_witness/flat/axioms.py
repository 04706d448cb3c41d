"""
Axiom checks for flat extensions read as semilattice-ordered Clifford
semigroups, or as additively idempotent semirings without the inverse.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from flat_witness.config import DEFAULT_ASSIGNMENT_BUDGET
from flat_witness.model.algebra import FiniteAlgebra, satisfies_equation
from flat_witness.model.terms import FLAT, SEMIRING, Equation, Signature, parse_equation

logger = logging.getLogger(__name__)

SEMIRING_AXIOMS: List[Tuple[str, str]] = [
    ("meet commutative", "& x y = & y x"),
    ("meet associative", "& & x y z = & x & y z"),
    ("meet idempotent", "& x x = x"),
    ("product associative", "* * x y z = * x * y z"),
    ("left distributive", "* x & y z = & * x y * x z"),
    ("right distributive", "* & x y z = & * x z * y z"),
]

NSOC_AXIOMS: List[Tuple[str, str]] = SEMIRING_AXIOMS + [
    ("regular", "* * x inv x x = x"),
    ("inverse involution", "inv inv x = x"),
    ("inverse reverses products", "inv * x y = * inv y inv x"),
    ("idempotents commute", "* * x inv x * y inv y = * * y inv y * x inv x"),
    ("meet and natural order", "& x y = * * x inv & x y & x y"),
    ("idempotents central", "* * x inv x y = * y * x inv x"),
]


@dataclass(frozen=True)
class AxiomCheck:
    ok: bool
    failing_axiom: Optional[str] = None
    assignment: Optional[Dict[str, int]] = None

    def __bool__(self) -> bool:
        return self.ok


def _check(algebra: FiniteAlgebra, axioms: List[Tuple[str, str]], signature: Signature,
           budget: int) -> AxiomCheck:
    for name, text in axioms:
        equation: Equation = parse_equation(text, signature)
        result = satisfies_equation(algebra, equation, budget)
        if not result.holds:
            logger.info(f"{algebra.label or 'algebra'} fails '{name}' at {result.assignment}")
            return AxiomCheck(False, name, result.assignment)
    return AxiomCheck(True)


def verify_nsoc_axioms(algebra: FiniteAlgebra, budget: int = DEFAULT_ASSIGNMENT_BUDGET) -> AxiomCheck:
    """Semilattice, inverse-semigroup, natural-order and Clifford laws, first failure reported."""
    return _check(algebra, NSOC_AXIOMS, FLAT, budget)


def verify_semiring_axioms(algebra: FiniteAlgebra, budget: int = DEFAULT_ASSIGNMENT_BUDGET) -> AxiomCheck:
    return _check(algebra, SEMIRING_AXIOMS, SEMIRING, budget)
