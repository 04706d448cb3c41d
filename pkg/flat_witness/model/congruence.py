"""
Congruences of finite algebras and subdirect irreducibility.
"""
import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from flat_witness.config import BudgetExceededError, DEFAULT_ALGEBRA_CAP
from flat_witness.model.algebra import FiniteAlgebra, find_isomorphism, quotient_algebra

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Congruence:
    """Partition given by block ids, numbered 0.. in order of least element."""
    blocks: Tuple[int, ...]

    @classmethod
    def from_labels(cls, labels: Iterable) -> "Congruence":
        renumber = {}
        return cls(tuple(renumber.setdefault(x, len(renumber)) for x in labels))

    @classmethod
    def identity(cls, size: int) -> "Congruence":
        return cls(tuple(range(size)))

    @classmethod
    def total(cls, size: int) -> "Congruence":
        return cls((0,) * size)

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def n_blocks(self) -> int:
        return max(self.blocks) + 1 if self.blocks else 0

    @property
    def is_identity(self) -> bool:
        return self.n_blocks == self.size

    @property
    def is_total(self) -> bool:
        return self.n_blocks <= 1

    def related(self, x: int, y: int) -> bool:
        return self.blocks[x] == self.blocks[y]

    def refines(self, other: "Congruence") -> bool:
        """self <= other: each block of self sits inside a block of other."""
        image = {}
        for b, c in zip(self.blocks, other.blocks):
            if image.setdefault(b, c) != c:
                return False
        return True

    def meet(self, other: "Congruence") -> "Congruence":
        return Congruence.from_labels(zip(self.blocks, other.blocks))

    def join(self, other: "Congruence") -> "Congruence":
        uf = UnionFind(range(self.size))
        for part in (self, other):
            first = {}
            for x, b in enumerate(part.blocks):
                uf.union(first.setdefault(b, x), x)
        return Congruence.from_labels(uf[x] for x in range(self.size))

    def pair(self) -> Optional[Tuple[int, int]]:
        """Least pair x < y of related elements."""
        first = {}
        for y, b in enumerate(self.blocks):
            if b in first:
                return first[b], y
            first[b] = y
        return None


def is_congruence(algebra: FiniteAlgebra, congruence: Congruence) -> bool:
    blocks = np.array(congruence.blocks, dtype=np.int64)
    for symbol, arity in algebra.signature.operations:
        table = algebra.operations[symbol]
        if arity == 1:
            image = blocks[table]
            for x in algebra.elements:
                same = blocks == blocks[x]
                if np.unique(image[same]).size > 1:
                    return False
        elif arity == 2:
            # compatibility in each argument separately
            image = blocks[table]
            for x in algebra.elements:
                same = np.flatnonzero(blocks == blocks[x])
                if (image[same] != image[x]).any() or (image[:, same] != image[:, [x]]).any():
                    return False
    return True


def congruence_generated(algebra: FiniteAlgebra, pairs: Iterable[Tuple[int, int]]) -> Congruence:
    """
    Least congruence containing the pairs.

    Every pair that merges two classes is pushed through the basic
    translations x -> f(x, c), x -> f(c, x) and x -> f(x) until no merge
    happens; the merged pairs generate the congruence as an equivalence.
    """
    uf = UnionFind(range(algebra.size))
    queue: List[Tuple[int, int]] = []

    def merge(a: int, b: int) -> None:
        if uf[a] != uf[b]:
            uf.union(a, b)
            queue.append((a, b))

    for a, b in pairs:
        merge(int(a), int(b))
    head = 0
    while head < len(queue):
        a, b = queue[head]
        head += 1
        for symbol, arity in algebra.signature.operations:
            table = algebra.operations[symbol]
            if arity == 1:
                merge(int(table[a]), int(table[b]))
            elif arity == 2:
                for c in algebra.elements:
                    merge(int(table[a, c]), int(table[b, c]))
                    merge(int(table[c, a]), int(table[c, b]))
    return Congruence.from_labels(uf[x] for x in algebra.elements)


def principal_congruence(algebra: FiniteAlgebra, a: int, b: int) -> Congruence:
    return congruence_generated(algebra, [(a, b)])


def _check_cap(algebra: FiniteAlgebra, cap: int) -> None:
    if algebra.size > cap:
        raise BudgetExceededError(f"Algebra of size {algebra.size} is above the cap of {cap}")


def is_subdirectly_irreducible(algebra: FiniteAlgebra,
                               cap: int = DEFAULT_ALGEBRA_CAP) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """
    Whether the algebra has a least nontrivial congruence.

    Returns:
        (True, pair generating the monolith) or (False, None).
    """
    _check_cap(algebra, cap)
    if algebra.size < 2:
        return False, None
    monolith: Optional[Congruence] = None
    for a in algebra.elements:
        for b in range(a + 1, algebra.size):
            theta = principal_congruence(algebra, a, b)
            monolith = theta if monolith is None else monolith.meet(theta)
            if monolith.is_identity:
                return False, None
    return True, monolith.pair()


def congruence_lattice(algebra: FiniteAlgebra, cap: int = DEFAULT_ALGEBRA_CAP) -> List[Congruence]:
    """
    Every congruence, as joins of principal congruences.

    Sorted by decreasing number of blocks, then by block ids, so the identity
    congruence comes first and the total one last.
    """
    _check_cap(algebra, cap)
    principals = []
    seen_principal = set()
    for a in algebra.elements:
        for b in range(a + 1, algebra.size):
            theta = principal_congruence(algebra, a, b)
            if theta not in seen_principal:
                seen_principal.add(theta)
                principals.append(theta)
    bottom = Congruence.identity(algebra.size)
    found = {bottom}
    frontier = [bottom]
    while frontier:
        grown = []
        for theta in frontier:
            for p in principals:
                joined = theta.join(p)
                if joined not in found:
                    found.add(joined)
                    grown.append(joined)
        frontier = grown
    lattice = sorted(found, key=lambda c: (-c.n_blocks, c.blocks))
    logger.debug(f"Congruence lattice of {algebra.label or 'algebra'}: {len(lattice)} congruences")
    return lattice


def hasse_diagram(lattice: List[Congruence]) -> nx.DiGraph:
    """Cover relation of the lattice, edges pointing upwards."""
    order = nx.DiGraph()
    order.add_nodes_from(lattice)
    for lower in lattice:
        for upper in lattice:
            if lower != upper and lower.refines(upper):
                order.add_edge(lower, upper)
    return nx.transitive_reduction(order)


def si_decomposition(algebra: FiniteAlgebra,
                     cap: int = DEFAULT_ALGEBRA_CAP) -> List[Tuple[Congruence, FiniteAlgebra]]:
    """
    Meet-irreducible congruences with their quotients.

    A proper congruence is meet-irreducible exactly when it has one upper
    cover; the quotients are then subdirectly irreducible and the algebra
    embeds into their product.
    """
    lattice = congruence_lattice(algebra, cap)
    covers = hasse_diagram(lattice)
    result = []
    for theta in lattice:
        if not theta.is_total and covers.out_degree(theta) == 1:
            quotient = quotient_algebra(algebra, np.array(theta.blocks), label=f"{algebra.label}/{theta.n_blocks}")
            result.append((theta, quotient))
    return result


def si_quotients(algebra: FiniteAlgebra, cap: int = DEFAULT_ALGEBRA_CAP) -> List[FiniteAlgebra]:
    """Subdirectly irreducible quotients, one per isomorphism type."""
    distinct: List[FiniteAlgebra] = []
    for _, quotient in si_decomposition(algebra, cap):
        if not any(find_isomorphism(quotient, other) is not None for other in distinct):
            distinct.append(quotient)
    logger.info(f"{algebra.label or 'algebra'} has {len(distinct)} SI quotient types")
    return distinct
