"""
Short presentations built along a composition series.

A presentation of M is lifted from presentations of a normal subgroup N
(generators a, relators w) and of the quotient M/N (generators b, relators v):

    (1) the relators w of N
    (2) w_ab . b . a^-1 . b^-1, w_ab a shortest a-word for b a b^-1
    (3) u^-1 . v, u a shortest a-word for the value of v in M

Iterating over the simple factors of a composition series gives a
presentation whose size grows with the cube of log2 |H|. Every element of
M gets a normal-form word w_a w_b.
"""
import logging
import string
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from flat_witness.config import DEFAULT_COSET_FACTOR, DEFAULT_HOM_NODE_BUDGET
from flat_witness.groups.core import (
    FiniteGroup,
    Homomorphism,
    NotNormalError,
    is_normal,
    isomorphism,
    restrict,
    quotient_by,
)
from flat_witness.groups.series import CompositionSeries, composition_series, is_simple
from flat_witness.presentation.presentation import (
    GeneratorMap,
    Presentation,
    PresentationError,
    Relation,
)
from flat_witness.presentation.todd_coxeter import verify_presents
from flat_witness.presentation.words import GroupWord, eval_word, minimal_words

logger = logging.getLogger(__name__)


class NotSimpleError(ValueError):
    """Raised when a base presentation is requested for a non-simple group."""
    pass


class GeneratorImageNotInNError(ValueError):
    """Raised when an element that must lie in the normal subgroup does not."""
    pass


class PresentationNotVerifiedError(Exception):
    """Raised when a built presentation fails verify_presents."""
    pass


def base_presentation(group: FiniteGroup, letter: str = "a") -> Tuple[Presentation, GeneratorMap]:
    """
    Fixed presentation of a simple group.

    Z_p gets <a | a^p> with a sent to the least nonidentity element; any other
    simple group gets its multiplication-table presentation, one generator
    per element and one relator g_x g_y g_xy^-1 per pair.

    Raises:
        NotSimpleError
    """
    if group.order > 1 and group.is_abelian and _is_prime(group.order):
        generator = min(x for x in group.elements if x != group.identity)
        pres = Presentation.from_relators([letter], [GroupWord.of(*[letter] * group.order)])
        return pres, GeneratorMap(pres, group, {letter: generator})
    if not is_simple(group):
        raise NotSimpleError(f"{group.label or 'group'} of order {group.order} is not simple")
    names = [f"{letter}{x}" for x in group.elements]
    relators = [
        GroupWord(((names[x], 1), (names[y], 1), (names[group.mul(x, y)], -1)))
        for x in group.elements for y in group.elements
    ]
    pres = Presentation.from_relators(names, relators)
    return pres, GeneratorMap(pres, group, {name: x for x, name in enumerate(names)})


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, int(n ** 0.5) + 1))


def _normal_forms(gmap: GeneratorMap) -> Dict[int, GroupWord]:
    pres = gmap.presentation
    if len(pres.generators) == gmap.target.order:
        # table presentation: element x is its own generator
        words = {x: GroupWord.of(g) for g, x in gmap.images.items()}
        words[gmap.target.identity] = GroupWord()
        return words
    return minimal_words(gmap.target, gmap.images)


@dataclass(eq=False)
class CatalogEntry:
    group: FiniteGroup
    presentation: Presentation
    generator_map: GeneratorMap
    element_words: Dict[int, GroupWord]

    @property
    def word_length(self) -> int:
        return max(len(w) for w in self.element_words.values())


@dataclass
class SimpleCatalog:
    """
    Simple groups with fixed presentations, extended on the fly.

    Composition factors are matched against entries of the same order by
    isomorphism search; an unmatched factor gets a base presentation, checked
    with verify_presents, and becomes a new entry.
    """
    entries: List[CatalogEntry] = field(default_factory=list)
    verify: bool = True
    coset_factor: int = DEFAULT_COSET_FACTOR
    node_budget: int = DEFAULT_HOM_NODE_BUDGET

    def add(self, group: FiniteGroup) -> CatalogEntry:
        pres, gmap = base_presentation(group)
        if self.verify:
            report = verify_presents(gmap, coset_factor=self.coset_factor)
            if not report.ok:
                raise PresentationNotVerifiedError(
                    f"Base presentation of {group.label}: {'; '.join(report.diagnostics)}")
        entry = CatalogEntry(group, pres, gmap, _normal_forms(gmap))
        self.entries.append(entry)
        logger.info(f"Catalog extended with simple group of order {group.order} ({len(self.entries)} entries)")
        return entry

    def lookup(self, group: FiniteGroup) -> Tuple[CatalogEntry, Homomorphism]:
        """Entry isomorphic to `group` together with an isomorphism entry -> group."""
        for entry in self.entries:
            if entry.group.order != group.order:
                continue
            iso = isomorphism(entry.group, group, node_budget=self.node_budget)
            if iso is not None:
                return entry, iso
        entry = self.add(group)
        identity = np.arange(group.order, dtype=np.int64)
        return entry, Homomorphism(entry.group, group, identity)

    # Constants of the size recurrences, taken over the given entries.
    @staticmethod
    def constants(entries: List[CatalogEntry]) -> Dict[str, int]:
        return {
            "gen": max((len(e.presentation.generators) for e in entries), default=0),
            "len": max((e.word_length for e in entries), default=0),
            "rel": max((len(e.presentation.relations) for e in entries), default=0),
            "rellen": max((e.presentation.max_relation_length for e in entries), default=0),
        }


@dataclass(frozen=True)
class LiftedPresentation:
    presentation: Presentation
    generator_map: GeneratorMap
    element_words: Dict[int, GroupWord]
    family_sizes: Tuple[int, int, int]


def lift_presentation(
    group: FiniteGroup,
    normal: FrozenSet[int],
    lower: GeneratorMap,
    upper: GeneratorMap,
    projection: Homomorphism,
    lower_words: Optional[Dict[int, GroupWord]] = None,
    upper_words: Optional[Dict[int, GroupWord]] = None,
    allow_inverses: bool = False,
) -> LiftedPresentation:
    """
    Presentation of M from presentations of N and M/N.

    Args:
        group: M.
        normal: N as a set of elements of M.
        lower: presentation of N with generator images in M.
        upper: presentation of M/N with generator images in the quotient.
        projection: M -> M/N, the target of `upper`.
        lower_words, upper_words: normal-form words of the elements of N
            (keyed by elements of M) and of M/N; shortest words by default.
        allow_inverses: shortest a-words may use inverse literals.

    Returns:
        LiftedPresentation whose b-generators map to the least element of
        their coset.

    Raises:
        NotNormalError: N is not normal in M.
        GeneratorImageNotInNError: an element required to lie in N does not.
        PresentationError: a- and b-generator symbols clash.
    """
    normal = frozenset(int(x) for x in normal)
    if not is_normal(group, normal):
        raise NotNormalError(f"Subgroup of order {len(normal)} is not normal in {group.label}")
    clash = set(lower.presentation.generators) & set(upper.presentation.generators)
    if clash:
        raise PresentationError(f"Generator symbols {sorted(clash)} used for both N and M/N")

    a_words = minimal_words(group, lower.images, allow_inverses=allow_inverses)
    if set(a_words) != normal:
        raise GeneratorImageNotInNError(
            f"Images of the N-generators generate {len(a_words)} elements, N has {len(normal)}")
    if lower_words is None:
        lower_words = a_words

    coset_min: Dict[int, int] = {}
    for x in group.elements:
        coset_min.setdefault(projection(x), x)
    b_images = {b: coset_min[q] for b, q in upper.images.items()}
    if upper_words is None:
        upper_words = minimal_words(upper.target, upper.images)

    family1: List[Relation] = list(lower.presentation.relations)

    family2: List[Relation] = []
    for b in upper.presentation.generators:
        bx = b_images[b]
        for a in lower.presentation.generators:
            target = group.conjugate(bx, lower.images[a])
            if target not in a_words:
                raise GeneratorImageNotInNError(f"Conjugate of {a} by {b} lies outside N")
            word = a_words[target] + GroupWord(((b, 1), (a, -1), (b, -1)))
            family2.append((word, GroupWord()))

    family3: List[Relation] = []
    for relator in upper.presentation.relators:
        value = eval_word(group, b_images, relator)
        if value not in a_words:
            raise GeneratorImageNotInNError(f"Quotient relator {relator} evaluates outside N")
        family3.append((a_words[value].inverse() + relator, GroupWord()))

    generators = lower.presentation.generators + upper.presentation.generators
    pres = Presentation(generators, tuple(family1 + family2 + family3))
    images = dict(lower.images)
    images.update(b_images)
    gmap = GeneratorMap(pres, group, images)

    element_words: Dict[int, GroupWord] = {}
    for x in group.elements:
        wb = upper_words[projection(x)]
        y = eval_word(group, b_images, wb)
        n = group.mul(x, int(group.inverse[y]))
        element_words[x] = lower_words[n] + wb

    logger.debug(f"Lifted presentation of order {group.order}: families "
                 f"{len(family1)}/{len(family2)}/{len(family3)}, length {pres.total_length}")
    return LiftedPresentation(pres, gmap, element_words, (len(family1), len(family2), len(family3)))


@dataclass(frozen=True)
class PresentationMetrics:
    """
    Stage sizes of a composition-series build, stage 0 being the trivial group.

    gen, length, rel and rellen hold the generator count, the longest
    element normal form, the relator count and the longest relator at each
    stage; the ``catalog`` dict holds the matching per-factor constants.
    """
    gen: Tuple[int, ...]
    length: Tuple[int, ...]
    rel: Tuple[int, ...]
    rellen: Tuple[int, ...]
    catalog: Dict[str, int]
    total_length: int
    prefix_size: int

    @property
    def stages(self) -> int:
        return len(self.gen) - 1

    def recurrence_violations(self) -> List[str]:
        c = self.catalog
        problems = []
        for i in range(self.stages + 1):
            if self.gen[i] > i * c["gen"]:
                problems.append(f"gen({i}) = {self.gen[i]} > {i}*{c['gen']}")
            if self.length[i] > i * c["len"]:
                problems.append(f"len({i}) = {self.length[i]} > {i}*{c['len']}")
        for i in range(self.stages):
            bound = self.rel[i] + c["gen"] * self.gen[i] + c["rel"]
            if self.rel[i + 1] > bound:
                problems.append(f"rel({i + 1}) = {self.rel[i + 1]} > {bound}")
            bound = max(self.rellen[i], 3 + self.length[i], c["rellen"] + self.length[i])
            if self.rellen[i + 1] > bound:
                problems.append(f"rellen({i + 1}) = {self.rellen[i + 1]} > {bound}")
        return problems

    def to_json(self) -> Dict:
        return {
            "gen": list(self.gen),
            "len": list(self.length),
            "rel": list(self.rel),
            "rellen": list(self.rellen),
            "catalog": dict(self.catalog),
            "total_length": self.total_length,
            "prefix_size": self.prefix_size,
        }


@dataclass(frozen=True)
class BuiltPresentation:
    presentation: Presentation
    generator_map: GeneratorMap
    metrics: PresentationMetrics
    element_words: Dict[int, GroupWord]
    series: CompositionSeries


def _stage_letter(stage: int) -> str:
    letters = string.ascii_lowercase
    return letters[stage - 1] if stage <= len(letters) else f"g{stage}_"


def _stage_names(entry: CatalogEntry, stage: int) -> Dict[str, str]:
    letter = _stage_letter(stage)
    gens = entry.presentation.generators
    if len(gens) == 1:
        return {gens[0]: letter}
    return {g: f"{letter}{k}" for k, g in enumerate(gens, start=1)}


def build_short_presentation(
    group: FiniteGroup,
    catalog: Optional[SimpleCatalog] = None,
    allow_inverses: bool = False,
    verify: bool = True,
    coset_factor: int = DEFAULT_COSET_FACTOR,
) -> BuiltPresentation:
    """
    Presentation of `group` lifted along its composition series.

    Stage i presents H_i; its new generators are named after the stage
    (``a`` for stage 1, ``b`` for stage 2, ...), with a numeric suffix when
    the simple factor needs more than one generator.

    Raises:
        PresentationNotVerifiedError: verify is set and the result does not
            present the group.
    """
    catalog = catalog if catalog is not None else SimpleCatalog(coset_factor=coset_factor)
    series = composition_series(group)
    chain = series.subgroups

    prev_group, prev_incl = restrict(group, chain[0])
    empty = Presentation(())
    gmap = GeneratorMap(empty, prev_group, {})
    words: Dict[int, GroupWord] = {prev_group.identity: GroupWord()}
    gen, length, rel, rellen = [0], [0], [0], [0]
    used: List[CatalogEntry] = []

    for stage in range(1, len(chain)):
        current, incl = restrict(group, chain[stage], label=f"{group.label}[H{stage}]")
        to_current = {int(h): k for k, h in enumerate(incl.map)}

        def relabel(x: int) -> int:
            return to_current[int(prev_incl.map[x])]

        normal = frozenset(relabel(x) for x in prev_group.elements)
        lower = GeneratorMap(gmap.presentation, current, {g: relabel(x) for g, x in gmap.images.items()})
        lower_words = {relabel(x): w for x, w in words.items()}

        quotient, projection = quotient_by(current, normal)
        entry, iso = catalog.lookup(quotient)
        if not any(e is entry for e in used):
            used.append(entry)
        names = _stage_names(entry, stage)
        upper_pres = entry.presentation.rename(names)
        upper = GeneratorMap(upper_pres, quotient,
                             {names[g]: iso(x) for g, x in entry.generator_map.images.items()})
        upper_words = {
            iso(s): GroupWord(tuple((names[g], sign) for g, sign in w.letters))
            for s, w in entry.element_words.items()
        }

        lifted = lift_presentation(current, normal, lower, upper, projection,
                                   lower_words=lower_words, upper_words=upper_words,
                                   allow_inverses=allow_inverses)
        gmap, words = lifted.generator_map, lifted.element_words
        prev_group, prev_incl = current, incl

        pres = lifted.presentation
        gen.append(len(pres.generators))
        length.append(max(len(w) for w in words.values()))
        rel.append(len(pres.relations))
        rellen.append(pres.max_relation_length)
        logger.debug(f"Stage {stage}: order {current.order}, {gen[-1]} generators, {rel[-1]} relators")

    # the last stage is H relabelled by the identity
    final_images = {g: int(prev_incl.map[x]) for g, x in gmap.images.items()}
    final_words = {int(prev_incl.map[x]): w for x, w in words.items()}
    final_map = GeneratorMap(gmap.presentation, group, final_images)

    pres = final_map.presentation
    metrics = PresentationMetrics(
        gen=tuple(gen), length=tuple(length), rel=tuple(rel), rellen=tuple(rellen),
        catalog=SimpleCatalog.constants(used),
        total_length=pres.total_length, prefix_size=pres.prefix_size,
    )
    if verify:
        report = verify_presents(final_map, coset_factor=coset_factor)
        if not report.ok:
            raise PresentationNotVerifiedError(
                f"Presentation of {group.label or 'group'} failed: {'; '.join(report.diagnostics)}")
    logger.info(f"Built presentation of {group.label or 'group'} (order {group.order}): "
                f"{len(pres.generators)} generators, {len(pres.relations)} relators, total length {pres.total_length}")
    return BuiltPresentation(pres, final_map, metrics, final_words, series)


def express_element(built: BuiltPresentation, element: int) -> GroupWord:
    """Stored normal-form word w_a w_b of an element."""
    return built.element_words[element]
