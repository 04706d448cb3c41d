"""
Composition series and Sylow subgroups of finite groups.

Subgroups are handled as frozensets of element indices of the ambient group;
relabelled copies are only made for the simple factors.
"""
import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Tuple

import numpy as np
from sympy import factorint

from flat_witness.groups.core import (
    FiniteGroup,
    generating_set,
    quotient_by,
    restrict,
    subgroup_generated,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompositionSeries:
    """
    Chain {e} = H_0 <| H_1 <| ... <| H_m = G with simple factors.

    Attributes:
        group: the ambient group.
        subgroups: H_0 .. H_m as element sets of `group`.
        factors: H_{i+1}/H_i for i = 0 .. m-1.
    """
    group: FiniteGroup
    subgroups: Tuple[FrozenSet[int], ...]
    factors: Tuple[FiniteGroup, ...]

    @property
    def length(self) -> int:
        return len(self.factors)

    @property
    def orders(self) -> List[int]:
        return [len(h) for h in self.subgroups]


@dataclass(frozen=True)
class SylowSubgroup:
    prime: int
    elements: FrozenSet[int]
    is_abelian: bool


@dataclass(frozen=True)
class SylowReport:
    group: FiniteGroup
    subgroups: Tuple[SylowSubgroup, ...]

    @property
    def has_nonabelian_sylow(self) -> bool:
        return any(not s.is_abelian for s in self.subgroups)


def normal_closure(group: FiniteGroup, elements: Iterable[int],
                   within: Optional[Iterable[int]] = None) -> FrozenSet[int]:
    """
    Smallest subgroup containing `elements` and normalised by `within`.

    `within` defaults to the whole group and must itself be a subgroup
    containing the elements.
    """
    conjugators = generating_set(group, within) if within is not None else generating_set(group)
    current = subgroup_generated(group, elements)
    while True:
        idx = np.array(sorted(current), dtype=np.int64)
        extra = set()
        for g in conjugators:
            conj = group.table[group.table[g, idx], group.inverse[g]]
            extra.update(int(x) for x in conj if int(x) not in current)
        if not extra:
            return current
        current = subgroup_generated(group, current | extra)


def maximal_normal_subgroup(group: FiniteGroup, within: FrozenSet[int]) -> FrozenSet[int]:
    """
    Lexicographically least maximal proper normal subgroup of `within`.

    Elements are decided in index order: x joins the subgroup under
    construction whenever the normal closure of (current + x) stays proper and
    avoids every element already rejected. The result is maximal, and no other
    maximal normal subgroup has a smaller sorted element list.
    """
    top = len(within)
    included = frozenset([group.identity])
    rejected = set()
    for x in sorted(within):
        if x in included or x in rejected:
            continue
        candidate = normal_closure(group, included | {x}, within)
        if len(candidate) < top and not (candidate & rejected):
            included = candidate
        else:
            rejected.add(x)
    return included


def is_simple(group: FiniteGroup) -> bool:
    """Nontrivial with no proper nontrivial normal subgroup."""
    if group.order == 1:
        return False
    for x in group.elements:
        if x != group.identity and len(normal_closure(group, [x])) != group.order:
            return False
    return True


def composition_series(group: FiniteGroup) -> CompositionSeries:
    """
    Canonical composition series, built top-down then reversed.

    At each step the current top group is replaced by its lexicographically
    least maximal normal subgroup.
    """
    chain = [frozenset(group.elements)]
    while len(chain[-1]) > 1:
        chain.append(maximal_normal_subgroup(group, chain[-1]))
    chain.reverse()

    factors = []
    for lower, upper in zip(chain, chain[1:]):
        sub, inclusion = restrict(group, upper)
        lower_labels = np.searchsorted(inclusion.map, np.array(sorted(lower), dtype=np.int64))
        factor, _ = quotient_by(sub, lower_labels.tolist())
        factors.append(factor)
    logger.info(f"Composition series of {group.label or 'group'}: orders {[len(h) for h in chain]}")
    return CompositionSeries(group=group, subgroups=tuple(chain), factors=tuple(factors))


def _is_prime_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def sylow_subgroup(group: FiniteGroup, prime: int) -> FrozenSet[int]:
    """
    One Sylow p-subgroup, grown greedily from the identity.

    A non-Sylow p-subgroup is properly contained in its normaliser inside a
    Sylow subgroup, so some p-element extends it; scanning elements in index
    order makes the choice deterministic.
    """
    target = prime ** factorint(group.order).get(prime, 0)
    orders = group.element_orders
    current = frozenset([group.identity])
    while len(current) < target:
        for x in group.elements:
            if x in current or not _is_prime_power(int(orders[x]), prime):
                continue
            grown = subgroup_generated(group, current | {x})
            if _is_prime_power(len(grown), prime):
                current = grown
                break
        else:
            raise RuntimeError(f"No p-element extends the {prime}-subgroup of order {len(current)}")
    return current


def sylow_classification(group: FiniteGroup) -> SylowReport:
    """One Sylow subgroup per prime divisor of the order, with abelian flags."""
    entries = []
    for prime in sorted(factorint(group.order)):
        elements = sylow_subgroup(group, prime)
        entries.append(SylowSubgroup(prime=prime, elements=elements,
                                     is_abelian=group.is_abelian_subset(elements)))
    report = SylowReport(group=group, subgroups=tuple(entries))
    logger.info(f"Sylow classification of {group.label or 'group'}: "
                f"nonabelian Sylow = {report.has_nonabelian_sylow}")
    return report
