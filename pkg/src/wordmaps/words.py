"""Free-group words in syllable form.

A word is an immutable, freely reduced tuple of ``(generator, exponent)``
syllables.  Generators are numbered from 1 and ``rank`` records how many
variables the word map takes, whether or not they all occur.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

Letter = tuple[int, int]


def _reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            if merged:
                out[-1] = (gen, merged)
            else:
                out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


@dataclass(frozen=True)
class Word:
    rank: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be positive, got {self.rank}")
        prev = None
        for gen, exp in self.letters:
            if not 1 <= gen <= self.rank:
                raise ValueError(f"generator x{gen} outside rank {self.rank}")
            if exp == 0:
                raise ValueError("zero exponent in word")
            if gen == prev:
                raise ValueError("word is not freely reduced")
            prev = gen

    @classmethod
    def from_letters(cls, letters: Iterable[Letter], rank: int | None = None) -> "Word":
        letters = _reduce((int(g), int(e)) for g, e in letters)
        if rank is None:
            rank = max((g for g, _ in letters), default=1)
        return cls(rank, letters)

    @classmethod
    def identity(cls, rank: int = 1) -> "Word":
        return cls(rank, ())

    @classmethod
    def generator(cls, index: int, rank: int | None = None) -> "Word":
        return cls(rank if rank is not None else index, ((index, 1),))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def with_rank(self, rank: int) -> "Word":
        return Word(rank, self.letters)

    def generators(self) -> set[int]:
        return {g for g, _ in self.letters}

    def exponent_sums(self) -> list[int]:
        sums = [0] * self.rank
        for g, e in self.letters:
            sums[g - 1] += e
        return sums

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "*".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.letters)


def invert(w: Word) -> Word:
    return Word(w.rank, tuple((g, -e) for g, e in reversed(w.letters)))


def concat(a: Word, b: Word) -> Word:
    """Freely reduced product; the rank is promoted to the larger of the two."""
    return Word(max(a.rank, b.rank), _reduce(itertools.chain(a.letters, b.letters)))


def power(w: Word, k: int) -> Word:
    if k < 0:
        w, k = invert(w), -k
    if k == 0 or not w.letters:
        return Word(w.rank, ())
    if len(w.letters) == 1:
        g, e = w.letters[0]
        return Word(w.rank, ((g, e * k),))
    body = itertools.chain.from_iterable(itertools.repeat(w.letters, k))
    return Word(w.rank, _reduce(body))


def commutator_word(a: Word, b: Word) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    return concat(concat(invert(a), invert(b)), concat(a, b))


def substitute(w: Word, s, rank: int | None = None) -> Word:
    """Replace each ``x_g`` in ``w`` by the image word ``s[g]``.

    ``s`` is a mapping from generator index to :class:`Word`, or any object
    with an ``images`` mapping (such as a change-of-variables record).
    """
    images: Mapping[int, Word] = getattr(s, "images", s)
    missing = sorted(w.generators() - set(images))
    if missing:
        raise KeyError(f"substitution has no image for generators {missing}")
    if rank is None:
        rank = max((img.rank for img in images.values()), default=w.rank)
    out: list[Letter] = []
    for g, e in w.letters:
        out.extend(power(images[g], e).letters)
    return Word(rank, _reduce(out))


def with_rank(w: Word, rank: int) -> Word:
    return Word(rank, w.letters)


# -- parsing ---------------------------------------------------------------


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class _Parser:
    # expr := term ("*"? term)* ; term := atom ("^" int)? ;
    # atom := "x" int | "[" expr "," expr "]" | "(" expr ")" | "1"

    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.max_gen = 0

    def error(self, message: str):
        raise WordSyntaxError(message, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def integer(self, signed: bool) -> int:
        self.skip()
        start = self.pos
        if signed and self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
            self.skip()
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            self.pos = start
            self.error("expected integer")
        return int(self.text[start:self.pos].replace(" ", ""))

    def expr(self) -> list[Letter]:
        letters = self.term()
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                letters += self.term()
            elif ch in ("x", "[", "(", "1"):
                letters += self.term()
            else:
                return letters

    def term(self) -> list[Letter]:
        letters = self.atom()
        if self.peek() == "^":
            self.pos += 1
            k = self.integer(signed=True)
            letters = list(power(Word(max(self.max_gen, 1), _reduce(letters)), k).letters)
        return letters

    def atom(self) -> list[Letter]:
        ch = self.peek()
        if ch == "x":
            self.pos += 1
            at = self.pos
            g = self.integer(signed=False)
            if g < 1:
                self.pos = at
                self.error("generator index must be at least 1")
            self.max_gen = max(self.max_gen, g)
            return [(g, 1)]
        if ch == "1":
            self.pos += 1
            return []
        if ch == "[":
            self.pos += 1
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect("]")
            r = max(self.max_gen, 1)
            return list(commutator_word(Word(r, _reduce(a)), Word(r, _reduce(b))).letters)
        if ch == "(":
            self.pos += 1
            a = self.expr()
            self.expect(")")
            return a
        self.error("expected 'x<index>', '[', '(' or '1'")


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``text`` such as ``"x1^2*[x1,x2]^-1"`` into a reduced word.

    The rank defaults to the largest generator index mentioned (at least 1).
    ``"1"`` denotes the empty word.
    """
    p = _Parser(text)
    letters = p.expr()
    if p.peek():
        p.error("unexpected character")
    if rank is None:
        rank = max(p.max_gen, 1)
    elif p.max_gen > rank:
        raise ValueError(f"generator x{p.max_gen} exceeds rank {rank}")
    return Word(rank, _reduce(letters))


# -- word sources ----------------------------------------------------------


def random_word(rng: random.Random, rank: int, max_length: int, max_exp: int = 3) -> Word:
    """A random reduced word with at most ``max_length`` syllables."""
    length = rng.randint(0, max_length)
    letters: list[Letter] = []
    prev = None
    for _ in range(length):
        choices = [g for g in range(1, rank + 1) if g != prev] or [prev]
        g = rng.choice(choices)
        e = rng.choice([k for k in range(-max_exp, max_exp + 1) if k])
        letters.append((g, e))
        prev = g
    return Word(rank, _reduce(letters))


def enumerate_words(rank: int, max_syllables: int, exponents: Sequence[int]) -> Iterator[Word]:
    """Every reduced word over ``rank`` variables with at most ``max_syllables``
    syllables whose exponents come from ``exponents`` (zero is skipped)."""
    exponents = [e for e in exponents if e]
    yield Word(rank, ())
    for length in range(1, max_syllables + 1):
        for gens in itertools.product(range(1, rank + 1), repeat=length):
            if any(a == b for a, b in zip(gens, gens[1:])):
                continue
            for exps in itertools.product(exponents, repeat=length):
                yield Word(rank, tuple(zip(gens, exps)))
