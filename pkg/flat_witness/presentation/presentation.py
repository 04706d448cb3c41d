"""
Presentations <C; R> and their generator maps into finite groups.

Relations are stored as (lhs, rhs) word pairs. In signatures containing the
unit every relation is a relator (rhs empty); the unit-free signatures need
genuine pairs such as ``a e = a``.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from flat_witness.config import BudgetExceededError, DEFAULT_HOM_NODE_BUDGET
from flat_witness.groups.core import FiniteGroup
from flat_witness.presentation.words import GroupWord, WordSyntaxError, eval_word

logger = logging.getLogger(__name__)

Relation = Tuple[GroupWord, GroupWord]


class PresentationError(ValueError):
    """Raised when relations use undeclared generators or symbols the signature lacks."""
    pass


class UnsupportedTargetError(ValueError):
    """Raised when a presentation cannot be translated into the requested signature."""
    pass


class SignatureTag(Enum):
    FULL = "*,inv,1"
    MONOID = "*,1"
    INVERSE = "*,inv"
    SEMIGROUP = "*"

    @property
    def has_inverse(self) -> bool:
        return "inv" in self.value

    @property
    def has_unit(self) -> bool:
        return "1" in self.value


def _word_prefix_size(word: GroupWord) -> int:
    # left-associated product of literals, the empty word read as the constant 1
    if not word.letters:
        return 1
    return 2 * len(word) - 1 + sum(1 for _, s in word.letters if s < 0)


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[str, ...]
    relations: Tuple[Relation, ...] = ()
    signature: SignatureTag = SignatureTag.FULL

    def __post_init__(self):
        declared = set(self.generators)
        if len(declared) != len(self.generators):
            raise PresentationError(f"Duplicate generator symbols in {self.generators}")
        for lhs, rhs in self.relations:
            for word in (lhs, rhs):
                unknown = [g for g in word.generators if g not in declared]
                if unknown:
                    raise PresentationError(f"Relation '{_format_relation(lhs, rhs)}' uses undeclared {unknown}")
                if not self.signature.has_inverse and not word.is_positive:
                    raise PresentationError(f"Inverse literal in '{word}' under signature {self.signature.value}")
                if not self.signature.has_unit and not word.letters:
                    raise PresentationError(f"Empty word in a relation under signature {self.signature.value}")

    @classmethod
    def from_relators(cls, generators: Sequence[str], relators: Sequence[GroupWord],
                      signature: SignatureTag = SignatureTag.FULL) -> "Presentation":
        return cls(tuple(generators), tuple((r, GroupWord()) for r in relators), signature)

    @property
    def relators(self) -> Tuple[GroupWord, ...]:
        """Each relation u = v as the group word u v^-1."""
        return tuple(lhs + rhs.inverse() for lhs, rhs in self.relations)

    @property
    def total_length(self) -> int:
        return sum(len(lhs) + len(rhs) for lhs, rhs in self.relations)

    @property
    def prefix_size(self) -> int:
        """Symbols of all relations read as left-associated prefix terms."""
        return sum(_word_prefix_size(lhs) + _word_prefix_size(rhs) for lhs, rhs in self.relations)

    @property
    def max_relation_length(self) -> int:
        return max((len(lhs) + len(rhs) for lhs, rhs in self.relations), default=0)

    def rename(self, mapping: Mapping[str, str]) -> "Presentation":
        def sub(word: GroupWord) -> GroupWord:
            return GroupWord(tuple((mapping.get(g, g), s) for g, s in word.letters))
        return Presentation(
            tuple(mapping.get(g, g) for g in self.generators),
            tuple((sub(lhs), sub(rhs)) for lhs, rhs in self.relations),
            self.signature,
        )

    def to_text(self) -> str:
        lines = ["gens: " + " ".join(self.generators)]
        if self.signature is not SignatureTag.FULL:
            lines.append(f"signature: {self.signature.value}")
        lines.extend(_format_relation(lhs, rhs) for lhs, rhs in self.relations)
        return "\n".join(lines) + "\n"

    def __str__(self) -> str:
        rels = ", ".join(_format_relation(lhs, rhs) for lhs, rhs in self.relations)
        return f"<{' '.join(self.generators)} | {rels}>"


def _format_relation(lhs: GroupWord, rhs: GroupWord) -> str:
    if not rhs.letters:
        return lhs.format()
    return f"{lhs.format()} = {rhs.format()}"


def parse_presentation(text: str) -> Presentation:
    """
    Read the text format: a ``gens:`` line, an optional ``signature:`` line,
    then one relator (or ``lhs = rhs`` relation) per line. Blank lines and
    lines starting with ``#`` are skipped.
    """
    generators: Optional[Tuple[str, ...]] = None
    signature = SignatureTag.FULL
    relations: List[Relation] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("gens:"):
            generators = tuple(line[len("gens:"):].split())
            continue
        if line.startswith("signature:"):
            value = line[len("signature:"):].strip().replace(" ", "")
            try:
                signature = SignatureTag(value)
            except ValueError as e:
                raise PresentationError(f"Unknown signature '{value}'") from e
            continue
        if generators is None:
            raise PresentationError("Presentation text must start with a 'gens:' line")
        lhs_text, sep, rhs_text = line.partition("=")
        try:
            lhs = GroupWord.parse(lhs_text)
            rhs = GroupWord.parse(rhs_text) if sep else GroupWord()
        except WordSyntaxError as e:
            raise PresentationError(str(e)) from e
        relations.append((lhs, rhs))
    if generators is None:
        raise PresentationError("Presentation text has no 'gens:' line")
    return Presentation(generators, tuple(relations), signature)


def load_presentation(path: Union[str, Path]) -> Presentation:
    with open(path, "r", encoding="utf-8") as f:
        return parse_presentation(f.read())


def dump_presentation(presentation: Presentation, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(presentation.to_text())


@dataclass(frozen=True)
class GeneratorMap:
    """Images of the generators of a presentation in a finite group."""
    presentation: Presentation
    target: FiniteGroup
    images: Dict[str, int] = field(default_factory=dict)

    def __call__(self, word: GroupWord) -> int:
        return eval_word(self.target, self.images, word)

    def failing_relations(self) -> List[Relation]:
        return [(lhs, rhs) for lhs, rhs in self.presentation.relations if self(lhs) != self(rhs)]

    def holds(self) -> bool:
        return not self.failing_relations()


def _fresh(base: str, taken: set) -> str:
    name = base
    k = 1
    while name in taken:
        name = f"{base}{k}"
        k += 1
    taken.add(name)
    return name


def _inverse_names(generators: Sequence[str], taken: set) -> Dict[str, str]:
    return {g: _fresh(f"{g}_inv", taken) for g in generators}


def _drop_inverse(presentation: Presentation) -> Tuple[Presentation, Dict[str, str]]:
    taken = set(presentation.generators)
    names = _inverse_names(presentation.generators, taken)

    def positive(word: GroupWord) -> GroupWord:
        return GroupWord(tuple((g, 1) if s > 0 else (names[g], 1) for g, s in word.letters))

    relations = [(positive(lhs), positive(rhs)) for lhs, rhs in presentation.relations]
    relations.extend((GroupWord.of(g, names[g]), GroupWord()) for g in presentation.generators)
    target = SignatureTag.MONOID if presentation.signature.has_unit else SignatureTag.SEMIGROUP
    generators = presentation.generators + tuple(names[g] for g in presentation.generators)
    return Presentation(generators, tuple(relations), target), names


def _drop_unit(presentation: Presentation) -> Tuple[Presentation, str]:
    taken = set(presentation.generators)
    unit = _fresh("e", taken)
    unit_word = GroupWord.of(unit)

    def nonempty(word: GroupWord) -> GroupWord:
        return word if word.letters else unit_word

    relations: List[Relation] = []
    seen = set()

    def add(relation: Relation):
        if relation not in seen:
            seen.add(relation)
            relations.append(relation)

    for lhs, rhs in presentation.relations:
        add((nonempty(lhs), nonempty(rhs)))
    for g in presentation.generators + (unit,):
        add((GroupWord.of(g, unit), GroupWord.of(g)))
        add((GroupWord.of(unit, g), GroupWord.of(g)))
    target = SignatureTag.INVERSE if presentation.signature.has_inverse else SignatureTag.SEMIGROUP
    return Presentation(presentation.generators + (unit,), tuple(relations), target), unit


def translate_signature(presentation: Presentation, target: SignatureTag) -> Presentation:
    """
    Rewrite a group presentation for a smaller signature.

    Dropping inverses doubles the alphabet with formal inverse generators
    ``g_inv`` and adds the relators g g_inv. Dropping the unit adds a fresh
    generator ``e`` acting as a two-sided identity on every generator, itself
    included, and replaces empty sides of relations with ``e``.

    Raises:
        UnsupportedTargetError: the source is not in the full group signature.
    """
    if presentation.signature is not SignatureTag.FULL:
        raise UnsupportedTargetError(
            f"Translation starts from signature {SignatureTag.FULL.value}, got {presentation.signature.value}")
    result = presentation
    if not target.has_inverse:
        result, _ = _drop_inverse(result)
    if not target.has_unit:
        result, _ = _drop_unit(result)
    logger.debug(f"Translated presentation to {target.value}: length {presentation.total_length} -> {result.total_length}")
    return result


def translate_generator_map(gmap: GeneratorMap, target: SignatureTag) -> GeneratorMap:
    """Carry a generator map across translate_signature: g_inv to inverses, e to the identity."""
    presentation = gmap.presentation
    if presentation.signature is not SignatureTag.FULL:
        raise UnsupportedTargetError("Generator maps translate from the full group signature only")
    images = dict(gmap.images)
    group = gmap.target
    translated = presentation
    if not target.has_inverse:
        translated, names = _drop_inverse(translated)
        for g, name in names.items():
            images[name] = int(group.inverse[images[g]])
    if not target.has_unit:
        translated, unit = _drop_unit(translated)
        images[unit] = group.identity
    return GeneratorMap(translated, group, images)


def iter_relator_solutions(presentation: Presentation, group: FiniteGroup,
                           node_budget: int = DEFAULT_HOM_NODE_BUDGET) -> Iterator[Dict[str, int]]:
    """
    Generator assignments into `group` satisfying every relation, lazily.

    Generators are assigned in order; a relation is tested as soon as its last
    generator is bound, so failing partial assignments are cut early.
    Assignments come out in lexicographic order of images.

    Raises:
        BudgetExceededError: more than node_budget partial assignments tried.
    """
    gens = presentation.generators
    position = {g: k for k, g in enumerate(gens)}
    ready: List[List[Relation]] = [[] for _ in range(len(gens) + 1)]
    for lhs, rhs in presentation.relations:
        used = lhs.generators + rhs.generators
        ready[max((position[g] + 1 for g in used), default=0)].append((lhs, rhs))

    image: Dict[str, int] = {}
    nodes = 0

    def consistent(level: int) -> bool:
        return all(eval_word(group, image, lhs) == eval_word(group, image, rhs) for lhs, rhs in ready[level])

    def search(k: int) -> Iterator[Dict[str, int]]:
        nonlocal nodes
        if k == len(gens):
            yield dict(image)
            return
        for x in group.elements:
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError(f"Relator search into {group.label} exceeded {node_budget} nodes")
            image[gens[k]] = x
            if consistent(k + 1):
                yield from search(k + 1)
        image.pop(gens[k], None)

    if consistent(0):
        yield from search(0)


def relator_solutions(presentation: Presentation, group: FiniteGroup,
                      node_budget: int = DEFAULT_HOM_NODE_BUDGET) -> List[Dict[str, int]]:
    """All generator assignments into `group` satisfying the relations (homomorphisms from <C;R>)."""
    return list(iter_relator_solutions(presentation, group, node_budget))
