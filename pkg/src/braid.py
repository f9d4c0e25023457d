"""Braid words: construction, free reduction, named braids and enumeration"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)


class BraidError(ValueError):
    """Invalid braid word or braid-word operation"""


def free_reduce(letters: Sequence[int]) -> Tuple[int, ...]:
    """Cancel every adjacent (i, -i) pair, cascading"""
    stack: List[int] = []
    for letter in letters:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def alphabet(strands: int) -> Tuple[int, ...]:
    """Letters in enumeration order: 1, -1, 2, -2, ..."""
    letters: List[int] = []
    for i in range(1, strands):
        letters.extend((i, -i))
    return tuple(letters)


def _letter_rank(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (letter < 0)


@dataclass(frozen=True)
class BraidWord:
    """Freely reduced word in sigma_1..sigma_{n-1} and their inverses

    Positive letter i is sigma_i, negative letter -i is sigma_i^-1.
    """

    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 2:
            raise BraidError(f"Braid words need at least 2 strands, got {self.strands}")
        letters = tuple(int(x) for x in self.letters)
        for letter in letters:
            if letter == 0 or abs(letter) > self.strands - 1:
                raise BraidError(
                    f"Letter {letter} is not a generator of B_{self.strands}"
                )
        object.__setattr__(self, "letters", free_reduce(letters))

    @classmethod
    def parse(cls, text: str, strands: int = 6) -> "BraidWord":
        """Parse whitespace-separated signed generator indices, e.g. '3 2 1 1 2 3'"""
        try:
            letters = [int(token) for token in text.split()]
        except ValueError as e:
            raise BraidError(f"Cannot parse braid word {text!r}: {e}") from e
        return cls(strands, letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __str__(self) -> str:
        return " ".join(str(x) for x in self.letters)

    def compose(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise BraidError(
                f"Cannot compose words on {self.strands} and {other.strands} strands"
            )
        return BraidWord(self.strands, self.letters + other.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if not isinstance(other, BraidWord):
            return NotImplemented
        return self.compose(other)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-x for x in reversed(self.letters)))

    def __pow__(self, exponent: int) -> "BraidWord":
        base = self if exponent >= 0 else self.inverse()
        return BraidWord(self.strands, base.letters * abs(exponent))

    @property
    def exponent_sum(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        """(length, lexicographic rank) ordering used for deterministic output"""
        return len(self.letters), tuple(_letter_rank(x) for x in self.letters)


def compose(u: BraidWord, v: BraidWord) -> BraidWord:
    return u.compose(v)


def inverse(w: BraidWord) -> BraidWord:
    return w.inverse()


class NamedBraid(str, Enum):
    DELTA = "Delta"
    SIGMA = "Sigma"
    HALF_TWIST_TRIPLE = "HalfTwistTriple"


_NAMED_LETTERS: Dict[NamedBraid, Tuple[int, ...]] = {
    # half-twist: s1 (s2 s1)(s3 s2 s1)(s4 s3 s2 s1)(s5 s4 s3 s2 s1)
    NamedBraid.DELTA: (1, 2, 1, 3, 2, 1, 4, 3, 2, 1, 5, 4, 3, 2, 1),
    # pure braid taking strand 4 around strands 1..3
    NamedBraid.SIGMA: (3, 2, 1, 1, 2, 3),
    # (s3 s2 s1)(s4 s3 s2)(s5 s4 s3): swaps the two triples
    NamedBraid.HALF_TWIST_TRIPLE: (3, 2, 1, 4, 3, 2, 5, 4, 3),
}


def named_braid(name: Union[str, NamedBraid]) -> BraidWord:
    try:
        key = NamedBraid(name)
    except ValueError as e:
        known = ", ".join(n.value for n in NamedBraid)
        raise BraidError(f"Unknown named braid {name!r}; known: {known}") from e
    return BraidWord(6, _NAMED_LETTERS[key])


def can_follow(previous: Optional[int], letter: int, normalize_commuting: bool) -> bool:
    if previous is None:
        return True
    if letter == -previous:
        return False
    if normalize_commuting and abs(abs(previous) - abs(letter)) > 1:
        return abs(previous) < abs(letter)
    return True


def is_canonical(letters: Sequence[int], normalize_commuting: bool = False) -> bool:
    """True if the letters are a word enumerate_words would produce"""
    previous = None
    for letter in letters:
        if not can_follow(previous, letter, normalize_commuting):
            return False
        previous = letter
    return True


def enumerate_words(
    strands: int,
    length: int,
    normalize_commuting: bool = False,
    prefix: Sequence[int] = (),
) -> Iterator[BraidWord]:
    """Yield every freely reduced word of exactly `length` letters, lexicographically

    With `normalize_commuting`, adjacent commuting letters must appear with the
    smaller generator index first. A `prefix` restricts the stream to words
    beginning with it, which is how the search splits work into shards.
    """
    if length < 0:
        raise BraidError(f"Word length must be non-negative, got {length}")
    prefix = tuple(prefix)
    if not is_canonical(prefix, normalize_commuting):
        raise BraidError(f"Prefix {prefix} is not a canonical reduced word")
    if len(prefix) > length:
        return
    letters = alphabet(strands)
    stack = list(prefix)

    def extend(depth: int) -> Iterator[BraidWord]:
        if depth == length:
            yield BraidWord(strands, tuple(stack))
            return
        previous = stack[-1] if stack else None
        for letter in letters:
            if can_follow(previous, letter, normalize_commuting):
                stack.append(letter)
                yield from extend(depth + 1)
                stack.pop()

    yield from extend(len(prefix))


def reduced_word_count(strands: int, length: int) -> int:
    """Number of freely reduced words: 2(n-1) * (2(n-1)-1)^(L-1)"""
    if length == 0:
        return 1
    k = 2 * (strands - 1)
    return k * (k - 1) ** (length - 1)


def prefix_shards(
    strands: int, depth: int, normalize_commuting: bool = False
) -> List[Tuple[int, ...]]:
    """Disjoint prefixes whose sub-streams together cover every word of length >= depth"""
    return [w.letters for w in enumerate_words(strands, depth, normalize_commuting)]


@dataclass(frozen=True)
class WordSketch:
    """Exact length and boundary letters of a freely reduced word too long to store

    `head` and `tail` hold the first and last `window` letters. Composition
    computes free cancellation across the junction from these windows, so the
    reported length stays exact. `word` keeps the explicit word while it is
    short enough to materialise.
    """

    strands: int
    length: int
    head: Tuple[int, ...]
    tail: Tuple[int, ...]
    word: Optional[BraidWord] = None

    @classmethod
    def of(cls, word: BraidWord, window: int) -> "WordSketch":
        letters = word.letters
        tail = letters[-window:] if letters else ()
        return cls(word.strands, len(letters), letters[:window], tail, word)

    @property
    def is_explicit(self) -> bool:
        return self.word is not None

    def to_word(self) -> BraidWord:
        if self.word is None:
            raise BraidError(f"Word of length {self.length} was not materialised")
        return self.word

    def inverse(self) -> "WordSketch":
        return WordSketch(
            self.strands,
            self.length,
            tuple(-x for x in reversed(self.tail)),
            tuple(-x for x in reversed(self.head)),
            self.word.inverse() if self.word is not None else None,
        )

    def letter(self, position: int) -> int:
        if self.word is not None:
            return self.word.letters[position]
        if position < len(self.head):
            return self.head[position]
        offset = position - (self.length - len(self.tail))
        if offset >= 0:
            return self.tail[offset]
        raise BraidError(
            f"Letter {position} of a length-{self.length} sketch lies outside its window"
        )

    def compose(self, other: "WordSketch", window: int, max_letters: int) -> "WordSketch":
        if self.strands != other.strands:
            raise BraidError(
                f"Cannot compose words on {self.strands} and {other.strands} strands"
            )
        if self.word is not None and other.word is not None:
            word = self.word.compose(other.word)
            sketch = WordSketch.of(word, window)
            if len(word) > max_letters:
                sketch = WordSketch(sketch.strands, sketch.length, sketch.head, sketch.tail)
            return sketch

        cancelled = 0
        while (
            cancelled < min(self.length, other.length)
            and self.letter(self.length - 1 - cancelled) == -other.letter(cancelled)
        ):
            cancelled += 1
        left = self.length - cancelled
        length = left + other.length - cancelled

        def letter_at(position: int) -> int:
            if position < left:
                return self.letter(position)
            return other.letter(position - left + cancelled)

        # a fully cancelled factor can leave fewer than `window` known letters
        head = _known_letters(letter_at, range(min(window, length)))
        tail = _known_letters(letter_at, range(length - 1, max(0, length - window) - 1, -1))
        return WordSketch(self.strands, length, head, tuple(reversed(tail)))


def _known_letters(letter_at, positions: Iterable[int]) -> Tuple[int, ...]:
    letters = []
    for p in positions:
        try:
            letters.append(letter_at(p))
        except BraidError:
            break
    return tuple(letters)
