"""
Group words over named generators.

A word is a tuple of literals (generator, sign). Text form is space-separated
literals with a trailing ``'`` for inverses, e.g. ``a a b a' b'``; the empty
word is written ``1``.
"""
import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from flat_witness.groups.core import FiniteGroup

logger = logging.getLogger(__name__)

Literal = Tuple[str, int]


class UnboundGeneratorError(KeyError):
    """Raised when a word mentions a generator with no image."""
    pass


class WordSyntaxError(ValueError):
    """Raised when word text cannot be parsed."""
    pass


@dataclass(frozen=True)
class GroupWord:
    letters: Tuple[Literal, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __add__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((g, -s) for g, s in reversed(self.letters)))

    @property
    def generators(self) -> List[str]:
        seen: Dict[str, None] = {}
        for g, _ in self.letters:
            seen.setdefault(g, None)
        return list(seen)

    @property
    def is_positive(self) -> bool:
        return all(s > 0 for _, s in self.letters)

    def format(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(g if s > 0 else f"{g}'" for g, s in self.letters)

    def __str__(self) -> str:
        return self.format()

    @classmethod
    def of(cls, *generators: str) -> "GroupWord":
        """Positive word spelling the given generators."""
        return cls(tuple((g, 1) for g in generators))

    @classmethod
    def parse(cls, text: str) -> "GroupWord":
        tokens = text.split()
        if tokens == ["1"] or not tokens:
            return cls()
        letters = []
        for token in tokens:
            sign = 1
            while token.endswith("'"):
                token = token[:-1]
                sign = -sign
            if not token.isidentifier():
                raise WordSyntaxError(f"Bad generator symbol '{token}' in word '{text}'")
            letters.append((token, sign))
        return cls(tuple(letters))


def eval_word(group: FiniteGroup, image: Mapping[str, int], word: GroupWord) -> int:
    """Evaluate a word in a group; the empty word is the identity."""
    result = group.identity
    for g, s in word.letters:
        try:
            x = image[g]
        except KeyError as e:
            raise UnboundGeneratorError(f"Generator '{g}' has no image") from e
        result = int(group.table[result, x if s > 0 else group.inverse[x]])
    return result


def literal_order(generators: Sequence[str], allow_inverses: bool) -> List[Literal]:
    """BFS alphabet: (g1,+), (g1,-), (g2,+), ... with inverses only when allowed."""
    order = []
    for g in generators:
        order.append((g, 1))
        if allow_inverses:
            order.append((g, -1))
    return order


def minimal_words(group: FiniteGroup, images: Mapping[str, int],
                  allow_inverses: bool = False) -> Dict[int, GroupWord]:
    """
    Shortest word for every element reachable from the generator images.

    Breadth-first search from the identity, extending words on the right with
    literals in alphabet order. The first word to reach an element is the
    shortest one, and among those the least in generator order.

    Args:
        group: the group the images live in.
        images: generator symbol -> element, in generator order.
        allow_inverses: also use inverse literals.

    Returns:
        element index -> word, covering exactly the generated subgroup.
    """
    alphabet = literal_order(list(images), allow_inverses)
    steps = [int(images[g]) if s > 0 else int(group.inverse[images[g]]) for g, s in alphabet]
    words: Dict[int, Tuple[Literal, ...]] = {group.identity: ()}
    queue = deque([group.identity])
    while queue:
        x = queue.popleft()
        prefix = words[x]
        for literal, step in zip(alphabet, steps):
            y = int(group.table[x, step])
            if y not in words:
                words[y] = prefix + (literal,)
                queue.append(y)
    return {x: GroupWord(w) for x, w in words.items()}


def words_of_length(alphabet: Sequence[Literal], length: int) -> Iterable[GroupWord]:
    """Every word over the alphabet of exactly the given length, in lexicographic order."""
    if length == 0:
        yield GroupWord()
        return
    for shorter in words_of_length(alphabet, length - 1):
        for literal in alphabet:
            yield GroupWord(shorter.letters + (literal,))
