"""Reduced words in the free group on two generators.

Words are stored as tuples of syllables ``(generator, exponent)`` and are kept
freely reduced at all times: exponents are nonzero and adjacent syllables use
different generators.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence


class Generator(IntEnum):
    A = 0
    B = 1

    @property
    def other(self) -> "Generator":
        return Generator(1 - self)


Syllable = tuple[Generator, int]


class WordParseError(ValueError):
    """Raised on malformed word text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


def _reduce(syllables: Iterable[tuple[int, int]]) -> tuple[Syllable, ...]:
    stack: list[list[int]] = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    return tuple((Generator(g), e) for g, e in stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; the empty word is the identity."""

    syllables: tuple[Syllable, ...] = ()

    @classmethod
    def from_syllables(cls, syllables: Iterable[tuple[int, int]]) -> "Word":
        return cls(_reduce(syllables))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def gen(cls, g: Generator, exponent: int = 1) -> "Word":
        return cls.from_syllables([(g, exponent)])

    def __len__(self) -> int:
        """Letter length (sum of absolute exponents)."""
        return sum(abs(e) for _, e in self.syllables)

    def __bool__(self) -> bool:
        return bool(self.syllables)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        return power(self, k)

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"Word({render(self)!r})"

    @property
    def is_identity(self) -> bool:
        return not self.syllables


def multiply(u: Word, v: Word) -> Word:
    if not u.syllables:
        return v
    if not v.syllables:
        return u
    left = list(u.syllables)
    right = list(v.syllables)
    # cancel across the seam only; both halves are already reduced
    while left and right and left[-1][0] == right[0][0]:
        gen = left[-1][0]
        total = left[-1][1] + right[0][1]
        left.pop()
        right.pop(0)
        if total != 0:
            left.append((gen, total))
            break
    return Word(tuple(left) + tuple(right))


def invert(u: Word) -> Word:
    return Word(tuple((g, -e) for g, e in reversed(u.syllables)))


def conjugate(x: Word, u: Word) -> Word:
    """Return ``x u x^-1``."""
    return multiply(multiply(x, u), invert(x))


def commutator(x: Word, y: Word) -> Word:
    """Return ``[x, y] = x y x^-1 y^-1``."""
    return multiply(multiply(x, y), multiply(invert(x), invert(y)))


def _cyclic_split(u: Word) -> tuple[Word, Word]:
    """Write ``u = p c p^-1`` with ``c`` cyclically reduced."""
    syl = list(u.syllables)
    prefix: list[Syllable] = []
    while len(syl) >= 2 and syl[0][0] == syl[-1][0]:
        gen = syl[0][0]
        e0, e1 = syl[0][1], syl[-1][1]
        if e0 + e1 == 0:
            prefix.append(syl[0])
            syl = syl[1:-1]
        else:
            # merge the ends: u = g^e0 (mid) g^e1 = g^e0 (mid g^(e0+e1)) g^-e0
            prefix.append((gen, e0))
            syl = syl[1:-1] + [(gen, e0 + e1)]
            break
    return Word(tuple(prefix)), Word.from_syllables(syl)


def power(u: Word, k: int) -> Word:
    if k == 0 or not u.syllables:
        return Word()
    if k < 0:
        return power(invert(u), -k)
    if len(u.syllables) == 1:
        g, e = u.syllables[0]
        return Word(((g, e * k),))
    prefix, core = _cyclic_split(u)
    if len(core.syllables) == 1:
        g, e = core.syllables[0]
        body = Word(((g, e * k),))
    else:
        body = Word(core.syllables * k)
    return multiply(multiply(prefix, body), invert(prefix))


@dataclass(frozen=True)
class BasisMap:
    """Endomorphism of the free group given by the images of ``a`` and ``b``."""

    image_a: Word
    image_b: Word

    @classmethod
    def identity(cls) -> "BasisMap":
        return cls(Word.gen(Generator.A), Word.gen(Generator.B))

    @classmethod
    def swap(cls) -> "BasisMap":
        return cls(Word.gen(Generator.B), Word.gen(Generator.A))

    def image(self, g: Generator) -> Word:
        return self.image_a if g == Generator.A else self.image_b

    def then(self, outer: "BasisMap") -> "BasisMap":
        """The composite ``w -> substitute(substitute(w, self), outer)``."""
        return BasisMap(substitute(self.image_a, outer), substitute(self.image_b, outer))


def substitute(w: Word, m: BasisMap) -> Word:
    out = Word()
    for g, e in w.syllables:
        out = multiply(out, power(m.image(g), e))
    return out


def exponent_sums(w: Word) -> tuple[int, int]:
    sums = [0, 0]
    for g, e in w.syllables:
        sums[g] += e
    return sums[0], sums[1]


def _c_b(c_exp: int, b_exp: int) -> Word:
    return commutator(Word.gen(Generator.A, c_exp), Word.gen(Generator.B, b_exp))


def _b_c(b_exp: int, c_exp: int) -> Word:
    return commutator(Word.gen(Generator.B, b_exp), Word.gen(Generator.A, c_exp))


def _product(words: Iterable[Word]) -> Word:
    out = Word()
    for w in words:
        out = multiply(out, w)
    return out


def goto_rewrite_pos(n: int, m: int) -> Word:
    """``[a^n, b^m]`` for ``n >= 1`` rewritten over ``(c, b)`` with ``c = ab``.

    The generator ``A`` of the returned word stands for ``c``. Substituting
    ``A -> ab`` recovers ``[a^n, b^m]``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    first = _product(
        _c_b(i, -i) * _b_c(-i, i + 1) for i in range(1, n)
    )
    second = _product(
        _c_b(n + 1 - i, m - n + i) * _b_c(m - n + i, n - i) for i in range(1, n + 1)
    )
    return first * second


def goto_rewrite_neg(n: int, m: int) -> Word:
    """``[a^-n, b^m]`` for ``n >= 1`` rewritten over ``(c, b)`` with ``c = ab``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    first = _product(_c_b(1 - i, i) * _b_c(i, -i) for i in range(1, n + 1))
    second = _product(
        _c_b(-(n + 1) + i, n + m + 1 - i) * _b_c(n + m + 1 - i, -n + i)
        for i in range(1, n + 1)
    )
    return first * second


# --- text format ---------------------------------------------------------

DEFAULT_SYMBOLS = ("a", "b")


def render(w: Word, symbols: Sequence[str] = DEFAULT_SYMBOLS) -> str:
    if not w.syllables:
        return "e"
    parts = []
    for g, e in w.syllables:
        s = symbols[g]
        parts.append(s if e == 1 else f"{s}^{e}")
    return " ".join(parts)


class _Parser:
    def __init__(self, text: str, symbols: Sequence[str]):
        self.text = text
        self.pos = 0
        self.letters = {symbols[0]: (Generator.A, 1), symbols[1]: (Generator.B, 1),
                        symbols[0].upper(): (Generator.A, -1),
                        symbols[1].upper(): (Generator.B, -1)}

    def error(self, message: str, pos: int | None = None) -> WordParseError:
        return WordParseError(message, self.text, self.pos if pos is None else pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def parse(self) -> Word:
        w = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return w

    def expr(self) -> Word:
        out = Word()
        while True:
            ch = self.peek()
            if not ch or ch in ",])":
                return out
            out = out * self.term()

    def term(self) -> Word:
        base = self.atom()
        if self.peek() == "^":
            self.pos += 1
            base = power(base, self.integer())
        return base

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] in "+-":
            self.pos += 1
        digits_start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits_start:
            raise self.error("expected integer exponent")
        value = int(self.text[start:self.pos])
        if value == 0:
            raise self.error("zero exponent", start)
        return value

    def atom(self) -> Word:
        ch = self.peek()
        if ch in self.letters:
            self.pos += 1
            g, e = self.letters[ch]
            return Word.gen(g, e)
        if ch == "e":
            self.pos += 1
            return Word()
        if ch == "(":
            self.pos += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if ch == "[":
            self.pos += 1
            x = self.expr()
            self.expect(",")
            y = self.expr()
            self.expect("]")
            return commutator(x, y)
        if not ch:
            raise self.error("unexpected end of input")
        raise self.error(f"unexpected {ch!r}")


def parse(text: str, symbols: Sequence[str] = DEFAULT_SYMBOLS) -> Word:
    """Parse word text into a reduced :class:`Word`.

    Grammar: letters ``a``/``b`` (``A``/``B`` are inverses), ``x^k`` powers,
    juxtaposition for products, ``[x,y]`` commutators and parentheses.
    ``e`` denotes the identity.

    >>> str(parse("[a,b]"))
    'a b a^-1 b^-1'
    """
    return _Parser(text, symbols).parse()


# --- random words ---------------------------------------------------------

def random_word(rng: random.Random, max_len: int) -> Word:
    """Free reduction of a uniform random letter string of length ``<= max_len``."""
    length = rng.randint(0, max_len)
    return Word.from_syllables((rng.randint(0, 1), rng.choice((1, -1))) for _ in range(length))


def random_derived_word(rng: random.Random, max_len: int) -> Word:
    """Random word in ``F'``: a shuffle of balanced letters, then reduced."""
    half = rng.randint(1, max(1, max_len // 2))
    n_a = rng.randint(0, half)
    letters = [(0, 1), (0, -1)] * n_a + [(1, 1), (1, -1)] * (half - n_a)
    rng.shuffle(letters)
    return Word.from_syllables(letters)
