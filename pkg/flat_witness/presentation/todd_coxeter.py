"""
Todd-Coxeter coset enumeration over the trivial subgroup.

HLT strategy: every live coset in turn is scanned under every relator,
defining new cosets to complete each scan, with coincidences processed
immediately through a union-find queue. Column 2k holds generator k and
column 2k+1 its inverse.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

from flat_witness.config import DEFAULT_COSET_FACTOR
from flat_witness.groups.core import subgroup_generated
from flat_witness.presentation.presentation import GeneratorMap, Presentation

logger = logging.getLogger(__name__)


class CosetEnumerationInconclusiveError(Exception):
    """Raised when coset enumeration hits its coset cap before closing."""
    pass


class _CosetOverflow(Exception):
    pass


@dataclass(frozen=True)
class CosetEnumeration:
    """Outcome of an enumeration: the index when it closed, None when inconclusive."""
    order: Optional[int]
    max_cosets: int
    defined: int

    @property
    def inconclusive(self) -> bool:
        return self.order is None


@dataclass(frozen=True)
class PresentsReport:
    ok: bool
    diagnostics: List[str] = field(default_factory=list)
    enumeration: Optional[CosetEnumeration] = None


class _CosetTable:
    def __init__(self, n_generators: int, max_cosets: int):
        self.width = 2 * n_generators
        self.max_cosets = max_cosets
        self.rows: List[List[int]] = [[-1] * self.width]
        self.parent: List[int] = [0]
        self.live = 1

    def define(self, coset: int, column: int) -> None:
        if self.live >= self.max_cosets:
            raise _CosetOverflow()
        new = len(self.rows)
        self.rows.append([-1] * self.width)
        self.parent.append(new)
        self.live += 1
        self.rows[coset][column] = new
        self.rows[new][column ^ 1] = coset

    def rep(self, coset: int) -> int:
        root = coset
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[coset] != root:
            self.parent[coset], coset = root, self.parent[coset]
        return root

    def _merge(self, first: int, second: int, queue: List[int]) -> None:
        first, second = self.rep(first), self.rep(second)
        if first == second:
            return
        low, high = min(first, second), max(first, second)
        self.parent[high] = low
        self.live -= 1
        queue.append(high)

    def coincidence(self, first: int, second: int) -> None:
        queue: List[int] = []
        self._merge(first, second, queue)
        head = 0
        while head < len(queue):
            dead = queue[head]
            head += 1
            for column in range(self.width):
                target = self.rows[dead][column]
                if target == -1:
                    continue
                self.rows[target][column ^ 1] = -1
                e, f = self.rep(dead), self.rep(target)
                if self.rows[e][column] != -1:
                    self._merge(f, self.rows[e][column], queue)
                elif self.rows[f][column ^ 1] != -1:
                    self._merge(e, self.rows[f][column ^ 1], queue)
                else:
                    self.rows[e][column] = f
                    self.rows[f][column ^ 1] = e

    def scan_and_fill(self, coset: int, word: List[int]) -> None:
        rows = self.rows
        forward, backward = coset, coset
        i, j = 0, len(word) - 1
        while True:
            while i <= j and rows[forward][word[i]] != -1:
                forward = rows[forward][word[i]]
                i += 1
            if i > j:
                if forward != backward:
                    self.coincidence(forward, backward)
                return
            while j >= i and rows[backward][word[j] ^ 1] != -1:
                backward = rows[backward][word[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(forward, backward)
                return
            if i == j:
                # deduction closes the gap
                rows[forward][word[i]] = backward
                rows[backward][word[i] ^ 1] = forward
                return
            self.define(forward, word[i])

    def is_live(self, coset: int) -> bool:
        return self.parent[coset] == coset


def todd_coxeter(presentation: Presentation, max_cosets: int) -> CosetEnumeration:
    """
    Order of the group presented by `presentation`.

    Relations u = v are enumerated as relators u v^-1, so the unit-free and
    inverse-free translations present the same group as their source.

    Returns:
        CosetEnumeration with the order, or order None when more than
        max_cosets live cosets were needed.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    column = {g: 2 * k for k, g in enumerate(presentation.generators)}
    relators = [
        [column[g] if s > 0 else column[g] ^ 1 for g, s in word.letters]
        for word in presentation.relators
    ]
    relators = [r for r in relators if r]
    table = _CosetTable(len(presentation.generators), max_cosets)
    try:
        coset = 0
        while coset < len(table.rows):
            if table.is_live(coset):
                for relator in relators:
                    table.scan_and_fill(coset, relator)
                    if not table.is_live(coset):
                        break
                if table.is_live(coset):
                    for col in range(table.width):
                        if table.rows[coset][col] == -1:
                            table.define(coset, col)
            coset += 1
    except _CosetOverflow:
        logger.debug(f"Coset enumeration stopped at {table.live} live cosets (cap {max_cosets})")
        return CosetEnumeration(order=None, max_cosets=max_cosets, defined=len(table.rows))
    logger.debug(f"Coset enumeration closed: index {table.live}, {len(table.rows)} cosets defined")
    return CosetEnumeration(order=table.live, max_cosets=max_cosets, defined=len(table.rows))


def verify_presents(gmap: GeneratorMap, max_cosets: Optional[int] = None,
                    coset_factor: int = DEFAULT_COSET_FACTOR) -> PresentsReport:
    """
    Check that a presentation presents the target of its generator map.

    Three conditions: every relation holds under the map, the images generate
    the target, and coset enumeration finds exactly the target's order.

    Args:
        gmap: presentation with its generator images.
        max_cosets: enumeration cap; defaults to coset_factor * |target|.

    Raises:
        CosetEnumerationInconclusiveError: enumeration hit the cap.
    """
    group = gmap.target
    presentation = gmap.presentation
    diagnostics: List[str] = []
    failing = gmap.failing_relations()
    if failing:
        lhs, rhs = failing[0]
        diagnostics.append(f"relation {lhs} = {rhs} fails under the map ({len(failing)} failing)")
    generated = subgroup_generated(group, gmap.images.values())
    if len(generated) != group.order:
        diagnostics.append(f"images generate a subgroup of order {len(generated)}, target has order {group.order}")
    if diagnostics:
        return PresentsReport(ok=False, diagnostics=diagnostics)

    cap = max_cosets if max_cosets is not None else coset_factor * group.order
    enumeration = todd_coxeter(presentation, cap)
    if enumeration.inconclusive:
        raise CosetEnumerationInconclusiveError(
            f"Coset enumeration for {group.label or 'target'} exceeded {cap} cosets; raise the budget")
    if enumeration.order != group.order:
        diagnostics.append(f"presented group has order {enumeration.order}, target has order {group.order}")
    return PresentsReport(ok=not diagnostics, diagnostics=diagnostics, enumeration=enumeration)
