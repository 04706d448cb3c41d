"""
Flat extensions of groups.

The flat extension of G adds an absorbing zero to G and the flat meet
x & y = x when x = y, zero otherwise. Zero is element |G|; group elements
keep their indices.
"""
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from flat_witness.groups.core import FiniteGroup, GroupTableError, from_table
from flat_witness.model.algebra import FiniteAlgebra, make_algebra
from flat_witness.model.terms import FLAT, FLAT_UNIT, INVERSE, MEET, PRODUCT, SEMIRING, UNIT, Signature

logger = logging.getLogger(__name__)

FLAT_SIGNATURES = (FLAT, FLAT_UNIT, SEMIRING)


@dataclass(frozen=True, eq=False)
class FlatAlgebra:
    algebra: FiniteAlgebra
    group: FiniteGroup

    @property
    def zero(self) -> int:
        return self.group.order

    @property
    def size(self) -> int:
        return self.algebra.size

    @property
    def signature(self) -> Signature:
        return self.algebra.signature


def flat_extension(group: FiniteGroup, signature: Signature = FLAT) -> FlatAlgebra:
    """
    Flat extension of a group in one of the flat signatures.

    With the unit symbol present, 1 is the identity of the group.
    """
    if signature not in FLAT_SIGNATURES:
        raise ValueError(f"Not a flat signature: {signature.name}")
    n = group.order
    zero = n
    product = np.full((n + 1, n + 1), zero, dtype=np.int64)
    product[:n, :n] = group.table
    inverse = np.append(group.inverse, zero)
    meet = np.full((n + 1, n + 1), zero, dtype=np.int64)
    idx = np.arange(n)
    meet[idx, idx] = idx
    available = {PRODUCT: product, INVERSE: inverse, MEET: meet, UNIT: np.int64(group.identity)}
    ops = {s: available[s] for s in signature.symbols}
    algebra = make_algebra(n + 1, signature, ops, label=f"flat({group.label})")
    return FlatAlgebra(algebra, group)


@dataclass(frozen=True)
class FlatRecognition:
    """The group under a flat algebra, or the reason there is none."""
    group: Optional[FiniteGroup]
    zero: Optional[int] = None
    reason: str = ""

    @property
    def is_flat(self) -> bool:
        return self.group is not None


def recognize_flat(algebra: FiniteAlgebra) -> FlatRecognition:
    """
    Decide whether an algebra is the flat extension of a group.

    The zero is the only element that x & y can produce for x != y. The meet
    must be flat around it, zero must absorb the product (and the inverse),
    and the remaining elements must form a group under the product whose
    inverse and unit agree with the algebra's own.
    """
    if MEET not in algebra.signature or PRODUCT not in algebra.signature:
        return FlatRecognition(None, reason="signature lacks the meet or the product")
    meet = algebra.operations[MEET]
    product = algebra.operations[PRODUCT]
    n = algebra.size
    if n == 1:
        return FlatRecognition(None, reason="a one-element algebra has no nonzero part")

    off_diagonal = meet[~np.eye(n, dtype=bool)]
    candidates = np.unique(off_diagonal)
    if candidates.size > 1:
        return FlatRecognition(None, reason="x & y takes several values off the diagonal")
    zero = int(candidates[0]) if candidates.size else None
    if zero is None:
        return FlatRecognition(None, reason="no zero element")
    if not np.array_equal(np.diag(meet), np.arange(n)):
        return FlatRecognition(None, reason="meet is not idempotent")
    if not ((product[zero, :] == zero).all() and (product[:, zero] == zero).all()):
        return FlatRecognition(None, reason="zero does not absorb the product")
    if INVERSE in algebra.signature and algebra.operations[INVERSE][zero] != zero:
        return FlatRecognition(None, reason="zero is not fixed by the inverse")

    nonzero = np.array([x for x in range(n) if x != zero], dtype=np.int64)
    block = product[np.ix_(nonzero, nonzero)]
    if (block == zero).any():
        return FlatRecognition(None, reason="nonzero part is not closed under the product")
    try:
        group = from_table(n - 1, np.searchsorted(nonzero, block), label=f"{algebra.label}*")
    except GroupTableError as e:
        return FlatRecognition(None, reason=f"nonzero part is not a group: {e}")
    if INVERSE in algebra.signature:
        values = algebra.operations[INVERSE][nonzero]
        if (values == zero).any():
            return FlatRecognition(None, reason="inverse sends a nonzero element to zero")
        if not np.array_equal(np.searchsorted(nonzero, values), group.inverse):
            return FlatRecognition(None, reason="inverse differs from the group inverse")
    if UNIT in algebra.signature and int(algebra.operations[UNIT]) != int(nonzero[group.identity]):
        return FlatRecognition(None, reason="unit differs from the group identity")
    logger.debug(f"{algebra.label or 'algebra'} is flat over a group of order {group.order}")
    return FlatRecognition(group, zero=zero)
