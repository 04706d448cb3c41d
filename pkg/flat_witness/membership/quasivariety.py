"""
Membership of a finite group in the quasivariety SP(G) generated by a finite group.

H lies in SP(G) exactly when homomorphisms H -> G separate the points of H:
every nonidentity element survives under some homomorphism.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from flat_witness.config import BudgetExceededError, DEFAULT_HOM_NODE_BUDGET
from flat_witness.groups.core import FiniteGroup, Homomorphism, generating_set, homomorphisms

logger = logging.getLogger(__name__)

ORACLE_MAX_ORDER = 8


class MembershipKind(Enum):
    IN_QUASIVARIETY = "in-quasivariety"
    NOT_IN_QUASIVARIETY = "not-in-quasivariety"
    IN_VARIETY = "in-variety"
    NOT_IN_VARIETY = "not-in-variety"


@dataclass(frozen=True)
class MembershipVerdict:
    """
    Verdict with its certificates.

    Attributes:
        kind: the decision.
        witness_element: the element every homomorphism kills, for
            NOT_IN_QUASIVARIETY.
        witness_algebra: the offending SI quotient, for NOT_IN_VARIETY.
        certificates: homomorphisms, quasi-equations or equations backing the
            decision.
    """
    kind: MembershipKind
    witness_element: Optional[int] = None
    witness_algebra: Optional[Any] = None
    certificates: Tuple[Any, ...] = field(default_factory=tuple)
    reason: str = ""

    @property
    def holds(self) -> bool:
        return self.kind in (MembershipKind.IN_QUASIVARIETY, MembershipKind.IN_VARIETY)

    def to_json(self) -> Dict:
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.witness_element is not None:
            data["witness_element"] = self.witness_element
        if self.witness_algebra is not None:
            data["witness_algebra"] = self.witness_algebra.to_json()
        if self.reason:
            data["reason"] = self.reason
        certs = []
        for c in self.certificates:
            if isinstance(c, Homomorphism):
                certs.append({"homomorphism": list(c.key())})
            elif hasattr(c, "format"):
                certs.append({"statement": c.format()})
            else:
                certs.append({"value": str(c)})
        data["certificates"] = certs
        return data


def in_quasivariety(member: FiniteGroup, generator: FiniteGroup,
                    node_budget: int = DEFAULT_HOM_NODE_BUDGET) -> MembershipVerdict:
    """
    Decide H in SP(G).

    Returns:
        IN_QUASIVARIETY with one separating homomorphism per nonidentity
        element (duplicates dropped), or NOT_IN_QUASIVARIETY with the least
        element killed by every homomorphism and all homomorphisms as
        certificates.

    Raises:
        BudgetExceededError: the homomorphism search ran out of nodes.
    """
    homs = homomorphisms(member, generator, node_budget)
    separating: List[Homomorphism] = []
    seen = set()
    for h in member.elements:
        if h == member.identity:
            continue
        survivor = next((f for f in homs if f(h) != generator.identity), None)
        if survivor is None:
            logger.info(f"{member.label or 'H'} not in SP({generator.label or 'G'}): element {h} is killed by all {len(homs)} homomorphisms")
            return MembershipVerdict(MembershipKind.NOT_IN_QUASIVARIETY, witness_element=h,
                                     certificates=tuple(homs))
        if survivor.key() not in seen:
            seen.add(survivor.key())
            separating.append(survivor)
    logger.info(f"{member.label or 'H'} in SP({generator.label or 'G'}) via {len(separating)} homomorphisms")
    return MembershipVerdict(MembershipKind.IN_QUASIVARIETY, certificates=tuple(separating))


def _all_homomorphisms_brute(source: FiniteGroup, target: FiniteGroup, budget: int) -> List[np.ndarray]:
    gens = generating_set(source)
    if target.order ** len(gens) > budget:
        raise BudgetExceededError(f"{target.order}^{len(gens)} generator images exceed the budget of {budget}")
    # express every element as a product of generators once
    words: Dict[int, List[int]] = {source.identity: []}
    frontier = [source.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for k, g in enumerate(gens):
                y = source.mul(x, g)
                if y not in words:
                    words[y] = words[x] + [k]
                    nxt.append(y)
        frontier = nxt
    maps = []
    for images in itertools.product(target.elements, repeat=len(gens)):
        mapping = np.empty(source.order, dtype=np.int64)
        for x, word in words.items():
            value = target.identity
            for k in word:
                value = target.mul(value, images[k])
            mapping[x] = value
        if Homomorphism(source, target, mapping).is_homomorphism():
            maps.append(mapping)
    return maps


def embedding_oracle(member: FiniteGroup, generator: FiniteGroup,
                     budget: int = DEFAULT_HOM_NODE_BUDGET) -> bool:
    """
    Whether H embeds into G^k, k the number of nonidentity elements of H.

    Independent of in_quasivariety: homomorphisms are found by trying every
    tuple of generator images, and an embedding is a choice of at most k
    homomorphisms whose kernels meet in the identity.

    Raises:
        BudgetExceededError: H has more than eight elements or the image
            tuples exceed the budget.
    """
    if member.order > ORACLE_MAX_ORDER:
        raise BudgetExceededError(f"Embedding oracle handles groups of order <= {ORACLE_MAX_ORDER}")
    maps = _all_homomorphisms_brute(member, generator, budget)
    kernels = sorted({frozenset(np.flatnonzero(m == generator.identity).tolist()) for m in maps}, key=sorted)
    k = member.order - 1
    if k == 0:
        return True
    trivial = frozenset([member.identity])
    for size in range(1, min(k, len(kernels)) + 1):
        for combo in itertools.combinations(kernels, size):
            if frozenset.intersection(*combo) == trivial:
                return True
    return False
