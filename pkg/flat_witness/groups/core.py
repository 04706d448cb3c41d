"""
Finite groups as multiplication tables over {0..n-1}.

Every group that enters the pipeline is a concrete table: named groups,
permutation groups and quotients are all converted at construction time, so
the brute-force checks downstream only ever index numpy arrays.
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from functools import cached_property, reduce
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from flat_witness.config import BudgetExceededError, DEFAULT_HOM_NODE_BUDGET

logger = logging.getLogger(__name__)


class GroupTableError(ValueError):
    """Raised when a multiplication table does not define a group."""
    pass


class NotAssociativeError(GroupTableError):
    """Raised when (x*y)*z != x*(y*z) for some triple."""

    def __init__(self, triple: Tuple[int, int, int]):
        self.triple = triple
        super().__init__(f"Table is not associative at (x, y, z) = {triple}")


class NoIdentityError(GroupTableError):
    """Raised when no two-sided identity exists."""
    pass


class NoInverseError(GroupTableError):
    """Raised when an element has no two-sided inverse."""

    def __init__(self, element: int):
        self.element = element
        super().__init__(f"Element {element} has no inverse")


class NotSubgroupError(ValueError):
    """Raised when an element set is not closed under the group product."""
    pass


class NotNormalError(ValueError):
    """Raised when a subgroup is not invariant under conjugation."""
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """
    A finite group given by its Cayley table.

    Attributes:
        table: order x order array, table[x, y] is the index of x*y.
        identity: index of the identity element.
        inverse: inverse[x] is the index of x^-1.
        label: free-form name used in reports.
    """
    table: np.ndarray
    identity: int
    inverse: np.ndarray
    label: str = ""

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @property
    def elements(self) -> range:
        return range(self.order)

    def mul(self, x: int, y: int) -> int:
        return int(self.table[x, y])

    def power(self, x: int, k: int) -> int:
        if k < 0:
            x, k = int(self.inverse[x]), -k
        result = self.identity
        for _ in range(k):
            result = int(self.table[result, x])
        return result

    def conjugate(self, g: int, x: int) -> int:
        """Return g*x*g^-1."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        current = np.arange(n)
        for k in range(1, n + 1):
            hit = (current == self.identity) & (orders == 0)
            orders[hit] = k
            if orders.all():
                break
            current = self.table[current, np.arange(n)]
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def is_abelian_subset(self, elements: Iterable[int]) -> bool:
        idx = np.array(sorted(elements), dtype=np.int64)
        block = self.table[np.ix_(idx, idx)]
        return bool(np.array_equal(block, block.T))

    def to_json(self) -> Dict:
        return {"label": self.label, "order": self.order, "table": self.table.tolist()}

    def __repr__(self) -> str:
        return f"FiniteGroup(label={self.label!r}, order={self.order})"


@dataclass(frozen=True, eq=False)
class Homomorphism:
    """A map source -> target given by one target index per source element."""
    source: FiniteGroup
    target: FiniteGroup
    map: np.ndarray

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    @cached_property
    def kernel(self) -> frozenset:
        return frozenset(int(x) for x in np.flatnonzero(self.map == self.target.identity))

    @cached_property
    def image(self) -> frozenset:
        return frozenset(int(y) for y in np.unique(self.map))

    def is_homomorphism(self) -> bool:
        lhs = self.map[self.source.table]
        rhs = self.target.table[self.map[:, None], self.map[None, :]]
        return bool(np.array_equal(lhs, rhs))

    def is_injective(self) -> bool:
        return len(self.image) == self.source.order

    def key(self) -> Tuple[int, ...]:
        return tuple(int(y) for y in self.map)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.int64, order="C")
    array.setflags(write=False)
    return array


def from_table(order: int, table: Union[Sequence[Sequence[int]], np.ndarray], label: str = "") -> FiniteGroup:
    """
    Validate a multiplication table and build the group it defines.

    Args:
        order: number of elements.
        table: order x order nested sequence of element indices.
        label: name carried into reports.

    Returns:
        FiniteGroup with identity and inverses computed.

    Raises:
        GroupTableError: wrong shape or entries out of range.
        NoIdentityError, NoInverseError, NotAssociativeError: each names the
            violating element or triple.
    """
    if order < 1:
        raise GroupTableError(f"Group order must be positive, got {order}")
    array = np.asarray(table, dtype=np.int64)
    if array.shape != (order, order):
        raise GroupTableError(f"Table shape {array.shape} does not match order {order}")
    if array.min() < 0 or array.max() >= order:
        raise GroupTableError("Table entries must lie in 0..order-1")

    idx = np.arange(order)
    identity = None
    for e in range(order):
        if np.array_equal(array[e], idx) and np.array_equal(array[:, e], idx):
            identity = e
            break
    if identity is None:
        raise NoIdentityError("No two-sided identity element in table")

    inverse = np.full(order, -1, dtype=np.int64)
    for x in range(order):
        candidates = np.flatnonzero((array[x] == identity) & (array[:, x] == identity))
        if candidates.size == 0:
            raise NoInverseError(x)
        inverse[x] = candidates[0]

    for x in range(order):
        # (x*y)*z for all y, z versus x*(y*z)
        left = array[array[x]]
        right = array[x][array]
        bad = np.argwhere(left != right)
        if bad.size:
            y, z = (int(v) for v in bad[0])
            raise NotAssociativeError((x, y, z))

    return FiniteGroup(table=_frozen(array), identity=int(identity), inverse=_frozen(inverse), label=label)


def load_group(path: Union[str, Path]) -> FiniteGroup:
    with open(path, "r", encoding="utf-8") as f:
        data = json.load(f)
    return group_from_json(data)


def group_from_json(data: Dict) -> FiniteGroup:
    if "table" not in data:
        raise GroupTableError("Group JSON needs a 'table' key")
    order = int(data.get("order", len(data["table"])))
    return from_table(order, data["table"], label=data.get("label", ""))


def dump_group(group: FiniteGroup, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(group.to_json(), f)


def subgroup_generated(group: FiniteGroup, generators: Iterable[int]) -> frozenset:
    """Smallest subgroup containing the given elements (closure under products)."""
    mask = np.zeros(group.order, dtype=bool)
    mask[group.identity] = True
    for g in generators:
        mask[g] = True
    while True:
        elems = np.flatnonzero(mask)
        grown = mask.copy()
        grown[group.table[np.ix_(elems, elems)].ravel()] = True
        if grown.sum() == mask.sum():
            return frozenset(int(x) for x in elems)
        mask = grown


def is_subgroup(group: FiniteGroup, elements: Iterable[int]) -> bool:
    elems = np.array(sorted(set(elements)), dtype=np.int64)
    if elems.size == 0 or group.identity not in set(elems.tolist()):
        return False
    products = group.table[np.ix_(elems, elems)]
    return bool(np.isin(products, elems).all())


def is_normal(group: FiniteGroup, elements: Iterable[int], within: Optional[Iterable[int]] = None) -> bool:
    """True if the element set is invariant under conjugation by `within` (default: whole group)."""
    elems = np.array(sorted(set(elements)), dtype=np.int64)
    conjugators = range(group.order) if within is None else sorted(set(within))
    for g in conjugators:
        conj = group.table[group.table[g, elems], group.inverse[g]]
        if not np.isin(conj, elems).all():
            return False
    return True


def generating_set(group: FiniteGroup, within: Optional[Iterable[int]] = None) -> List[int]:
    """Greedy generating set: scan elements in index order, keep any not yet generated."""
    universe = sorted(set(within)) if within is not None else list(group.elements)
    gens: List[int] = []
    current = frozenset([group.identity])
    for x in universe:
        if x not in current:
            gens.append(x)
            current = subgroup_generated(group, gens)
            if len(current) == len(universe):
                break
    return gens


def restrict(group: FiniteGroup, elements: Iterable[int], label: str = "") -> Tuple[FiniteGroup, Homomorphism]:
    """
    Relabel a subgroup as a FiniteGroup of its own.

    Returns:
        (subgroup, inclusion) where subgroup element k is the k-th smallest
        element of the set and inclusion maps it back into `group`.
    """
    elems = np.array(sorted(set(elements)), dtype=np.int64)
    if not is_subgroup(group, elems):
        raise NotSubgroupError(f"Element set of size {elems.size} is not a subgroup of {group.label}")
    block = group.table[np.ix_(elems, elems)]
    relabelled = np.searchsorted(elems, block)
    sub = from_table(int(elems.size), relabelled, label=label or f"sub({group.label},{elems.size})")
    return sub, Homomorphism(sub, group, _frozen(elems))


def quotient_by(group: FiniteGroup, normal: Iterable[int]) -> Tuple[FiniteGroup, Homomorphism]:
    """
    Quotient of a group by a normal subgroup.

    Cosets are represented by their smallest element index; quotient element
    k is the coset with the k-th smallest representative.

    Returns:
        (quotient group, canonical projection).

    Raises:
        NotSubgroupError, NotNormalError
    """
    n_elems = np.array(sorted(set(normal)), dtype=np.int64)
    if not is_subgroup(group, n_elems):
        raise NotSubgroupError("Quotient requires a subgroup")
    if not is_normal(group, n_elems):
        raise NotNormalError("Quotient requires a normal subgroup")

    reps = group.table[:, n_elems].min(axis=1)
    rep_values = np.unique(reps)
    projection = np.searchsorted(rep_values, reps)
    table = projection[group.table[np.ix_(rep_values, rep_values)]]
    label = f"{group.label}/N{n_elems.size}" if group.label else ""
    quotient = from_table(int(rep_values.size), table, label=label)
    return quotient, Homomorphism(group, quotient, _frozen(projection))


def direct_product(first: FiniteGroup, second: FiniteGroup, label: str = "") -> FiniteGroup:
    """Coordinatewise product; element (i, j) has index i*|second| + j."""
    m = second.order
    t1 = first.table[:, None, :, None]
    t2 = second.table[None, :, None, :]
    table = (t1 * m + t2).reshape(first.order * m, first.order * m)
    return from_table(first.order * m, table, label=label or f"({first.label}x{second.label})")


def exponent(group: FiniteGroup) -> int:
    """Least d with x^d = 1 for every element."""
    return int(reduce(math.lcm, (int(k) for k in group.element_orders), 1))


def _extend_from_generators(
    source: FiniteGroup,
    target: FiniteGroup,
    gens: Sequence[int],
    images: Sequence[int],
) -> Optional[np.ndarray]:
    """
    Extend generator images to the subgroup they generate.

    Walks the Cayley graph of <gens> from the identity, requiring
    f(x*g) = f(x)*f(g) on every edge; returns None on the first conflict.
    Unreached elements keep the value -1.
    """
    mapping = np.full(source.order, -1, dtype=np.int64)
    mapping[source.identity] = target.identity
    queue = [source.identity]
    head = 0
    while head < len(queue):
        x = queue[head]
        head += 1
        fx = mapping[x]
        for g, img in zip(gens, images):
            y = source.table[x, g]
            fy = target.table[fx, img]
            if mapping[y] == -1:
                mapping[y] = fy
                queue.append(int(y))
            elif mapping[y] != fy:
                return None
    return mapping


def _search_maps(
    source: FiniteGroup,
    target: FiniteGroup,
    node_budget: int,
    injective: bool,
    first_only: bool,
) -> List[Homomorphism]:
    gens = generating_set(source)
    src_orders = source.element_orders
    tgt_orders = target.element_orders
    results: List[Homomorphism] = []
    nodes = 0

    def candidates(g: int) -> List[int]:
        order = int(src_orders[g])
        if injective:
            return [y for y in target.elements if int(tgt_orders[y]) == order]
        return [y for y in target.elements if order % int(tgt_orders[y]) == 0]

    options = [candidates(g) for g in gens]

    def search(k: int, images: List[int]) -> bool:
        nonlocal nodes
        if k == len(gens):
            mapping = _extend_from_generators(source, target, gens, images)
            if mapping is None:
                return False
            if injective and np.unique(mapping).size != source.order:
                return False
            results.append(Homomorphism(source, target, _frozen(mapping)))
            return first_only
        for y in options[k]:
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError(
                    f"Homomorphism search {source.label}->{target.label} exceeded {node_budget} nodes")
            images.append(y)
            if _extend_from_generators(source, target, gens[:k + 1], images) is not None:
                if search(k + 1, images):
                    return True
            images.pop()
        return False

    search(0, [])
    logger.debug(f"Map search {source.label}->{target.label}: {len(results)} found, {nodes} nodes")
    return results


def homomorphisms(source: FiniteGroup, target: FiniteGroup,
                  node_budget: int = DEFAULT_HOM_NODE_BUDGET) -> List[Homomorphism]:
    """
    All homomorphisms source -> target.

    Backtracks over images of a greedy generating set of the source in index
    order, pruning any partial assignment that is inconsistent on the
    subgroup it generates. The result is ordered lexicographically by the
    generator images and is duplicate-free.

    Raises:
        BudgetExceededError: more than node_budget candidate images tried.
    """
    return _search_maps(source, target, node_budget, injective=False, first_only=False)


def isomorphism(first: FiniteGroup, second: FiniteGroup,
                node_budget: int = DEFAULT_HOM_NODE_BUDGET) -> Optional[Homomorphism]:
    """First isomorphism first -> second in search order, or None."""
    if first.order != second.order:
        return None
    if sorted(first.element_orders.tolist()) != sorted(second.element_orders.tolist()):
        return None
    found = _search_maps(first, second, node_budget, injective=True, first_only=True)
    return found[0] if found else None
