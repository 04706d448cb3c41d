"""
Variety membership for flat extensions and the Sylow-based complexity gate.

The subdirectly irreducible members of the variety generated by the flat
extension of G are the flat extensions of the groups in SP(G), so a finite
algebra belongs to that variety exactly when each of its SI quotients is
such a flat extension.
"""
import logging
from functools import reduce
from typing import List, Optional

from flat_witness.config import (
    DEFAULT_ALGEBRA_CAP,
    DEFAULT_ASSIGNMENT_BUDGET,
    DEFAULT_EQUATION_COUNT_BUDGET,
    DEFAULT_EQUATION_LENGTH_CAP,
    DEFAULT_HOM_NODE_BUDGET,
)
from flat_witness.flat.extension import recognize_flat
from flat_witness.groups.core import FiniteGroup, direct_product
from flat_witness.groups.named import cyclic_group
from flat_witness.groups.series import sylow_classification
from flat_witness.membership.quasivariety import MembershipKind, MembershipVerdict, in_quasivariety
from flat_witness.model.algebra import FiniteAlgebra, SignatureMismatchError, satisfies_equation
from flat_witness.model.congruence import si_quotients
from flat_witness.model.enumeration import check_length, iter_equations
from flat_witness.model.terms import Equation

logger = logging.getLogger(__name__)

BOUNDED = "finitely based — bounded complexity predicted"
UNBOUNDED = "unbounded, O(log³) witnesses"


class NotCliffordError(ValueError):
    """Raised when an SI quotient of an algebra is not a flat extension of a group."""
    pass


def in_variety_of_flat(algebra: FiniteAlgebra, generator: FiniteGroup,
                       cap: int = DEFAULT_ALGEBRA_CAP,
                       node_budget: int = DEFAULT_HOM_NODE_BUDGET) -> MembershipVerdict:
    """
    Decide whether `algebra` lies in the variety of the flat extension of G.

    Returns:
        IN_VARIETY with the groups under its SI quotients as certificates, or
        NOT_IN_VARIETY naming the first SI quotient that is not flat or
        whose group is outside SP(G).
    """
    groups = []
    for quotient in si_quotients(algebra, cap):
        recognition = recognize_flat(quotient)
        if not recognition.is_flat:
            return MembershipVerdict(MembershipKind.NOT_IN_VARIETY, witness_algebra=quotient,
                                     reason=f"SI quotient is not flat: {recognition.reason}")
        verdict = in_quasivariety(recognition.group, generator, node_budget)
        if not verdict.holds:
            return MembershipVerdict(MembershipKind.NOT_IN_VARIETY, witness_algebra=quotient,
                                     witness_element=verdict.witness_element,
                                     reason=f"group of order {recognition.group.order} is outside SP(G)")
        groups.append(recognition.group)
    return MembershipVerdict(MembershipKind.IN_VARIETY, certificates=tuple(g.label or f"order {g.order}" for g in groups))


def shortest_failing_equation(failing_in: FiniteAlgebra, holding_in: FiniteAlgebra, max_len: int,
                              length_cap: int = DEFAULT_EQUATION_LENGTH_CAP,
                              budget: int = DEFAULT_ASSIGNMENT_BUDGET,
                              count_budget: int = DEFAULT_EQUATION_COUNT_BUDGET) -> Optional[Equation]:
    """
    First equation of `holding_in`, in enumeration order, that fails in `failing_in`.

    Returns None when no equation of length <= max_len separates them.
    """
    if set(failing_in.signature.symbols) != set(holding_in.signature.symbols):
        raise SignatureMismatchError("Both algebras must share a signature")
    check_length(max_len, length_cap)
    for eq in iter_equations(holding_in.signature, max_len, count_budget):
        if satisfies_equation(holding_in, eq, budget) and not satisfies_equation(failing_in, eq, budget):
            logger.info(f"Shortest separating equation: {eq} (length {eq.length})")
            return eq
    logger.info(f"No equation of length <= {max_len} separates the algebras")
    return None


def complexity_prediction(group: FiniteGroup) -> str:
    """Bounded when every Sylow subgroup is abelian, unbounded otherwise."""
    report = sylow_classification(group)
    return UNBOUNDED if report.has_nonabelian_sylow else BOUNDED


def group_for_clifford(algebra: FiniteAlgebra, cap: int = DEFAULT_ALGEBRA_CAP) -> FiniteGroup:
    """
    A group G whose flat extension generates the same variety as `algebra`.

    Each SI quotient is recognised as a flat extension of some G_i; G is the
    product of the G_i, one per isomorphism type of quotient.

    Raises:
        NotCliffordError: some SI quotient is not a flat extension.
    """
    factors: List[FiniteGroup] = []
    for quotient in si_quotients(algebra, cap):
        recognition = recognize_flat(quotient)
        if not recognition.is_flat:
            raise NotCliffordError(f"SI quotient {quotient.label} is not flat: {recognition.reason}")
        factors.append(recognition.group)
    if not factors:
        return cyclic_group(1)
    group = reduce(lambda a, b: direct_product(a, b), factors)
    logger.info(f"{algebra.label or 'algebra'} generates the variety of a flat extension of a group of order {group.order}")
    return group


def classify_clifford(algebra: FiniteAlgebra, cap: int = DEFAULT_ALGEBRA_CAP) -> str:
    return complexity_prediction(group_for_clifford(algebra, cap))
