"""Free-group words, braid words, the Artin action, and braid longitudes.

A word in the free group F(q) on x1..xq is stored as a freely reduced tuple
of signed generator indices: +i for xi, -i for xi^-1.  Braid words on n
strands store signed positions: +i for the standard generator si (the strand
at position i crossing over the strand at position i+1), -i for its inverse.

Conventions (pinned by the golden tests in tests/test_words.py):
  * si acts on the free group by xi -> xi x(i+1) xi^-1, x(i+1) -> xi;
  * a braid word acts letter by letter, first letter first;
  * the preferred longitude of strand l is the conjugating word of
    artin_apply(b, xl) with its total xl-exponent removed on the right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class PurityError(ValueError):
    """Raised when a pure braid is required but the braid permutes strands."""


class ConventionError(RuntimeError):
    """Raised when a construction fails its built-in consistency check."""


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for s in letters:
        s = int(s)
        if s == 0:
            raise ValueError("generator index 0 is not allowed")
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word in the free group of the given rank."""

    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise ValueError("rank must be a positive integer")
        reduced = _reduce(self.letters)
        for s in reduced:
            if abs(s) > self.rank:
                raise ValueError(f"letter {s} out of range for rank {self.rank}")
        object.__setattr__(self, "letters", reduced)

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls(rank, ())

    @classmethod
    def generator(cls, rank: int, i: int, power: int = 1) -> "Word":
        if not 1 <= i <= rank:
            raise ValueError(f"generator index {i} out of range 1..{rank}")
        sign = 1 if power >= 0 else -1
        return cls(rank, (sign * i,) * abs(power))

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return Word(self.rank, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.rank, tuple(-s for s in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word.identity(self.rank)
        for _ in range(n):
            out = out * self
        return out

    def conjugate(self, by: "Word") -> "Word":
        return by * self * by.inverse()

    def exponent_sum(self, i: int) -> int:
        return sum(1 if s == i else -1 if s == -i else 0 for s in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def embed(self, rank: int) -> "Word":
        """The same word viewed in a larger free group."""
        if rank < self.rank:
            raise ValueError("cannot embed into smaller rank")
        return Word(rank, self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{s}" if s > 0 else f"x{-s}^-1" for s in self.letters)

    @classmethod
    def parse(cls, text: str, rank: int) -> "Word":
        """Parse whitespace-separated tokens like ``x1 x2^-1``; ``1`` is the identity."""
        letters: list[int] = []
        for tok in text.split():
            if tok == "1":
                continue
            body = tok[1:] if tok.startswith("x") else tok
            if body.endswith("^-1"):
                letters.append(-int(body[:-3]))
            else:
                letters.append(int(body))
        return cls(rank, tuple(letters))


def free_reduce(letters: Iterable[int], rank: int) -> Word:
    """Freely reduce a raw signed-index sequence into a Word."""
    return Word(rank, tuple(letters))


def commutator(a: Word, b: Word) -> Word:
    """The commutator a b a^-1 b^-1."""
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")
    return a * b * a.inverse() * b.inverse()


@dataclass(frozen=True)
class BraidWord:
    """Word in the braid group on ``strands`` strands; letters are signed positions."""

    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 1:
            raise ValueError("strand count must be positive")
        letters = tuple(int(s) for s in self.letters)
        for s in letters:
            if s == 0 or abs(s) > self.strands - 1:
                raise ValueError(f"position {s} out of range for {self.strands} strands")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def identity(cls, strands: int) -> "BraidWord":
        return cls(strands, ())

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.strands != other.strands:
            raise ValueError("strand count mismatch")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-s for s in reversed(self.letters)))

    def __pow__(self, n: int) -> "BraidWord":
        if n < 0:
            return self.inverse() ** (-n)
        out = BraidWord.identity(self.strands)
        for _ in range(n):
            out = out * self
        return out

    def permutation(self) -> tuple[int, ...]:
        """Position occupied at the bottom by the strand starting at each top position."""
        perm = list(range(self.strands))
        for s in self.letters:
            i = abs(s) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        # perm maps current position -> starting strand; invert for strand -> end.
        out = [0] * self.strands
        for pos, strand in enumerate(perm):
            out[strand] = pos
        return tuple(p + 1 for p in out)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "e"
        return " ".join(f"s{s}" if s > 0 else f"s{-s}^-1" for s in self.letters)

    @classmethod
    def parse(cls, text: str, strands: int) -> "BraidWord":
        """Parse whitespace-separated tokens ``s<i>`` and ``s<i>^-1``."""
        letters: list[int] = []
        for tok in text.split():
            if tok in ("e", "1"):
                continue
            if not tok.startswith("s"):
                raise ValueError(f"bad braid token {tok!r}")
            body = tok[1:]
            if body.endswith("^-1"):
                letters.append(-int(body[:-3]))
            else:
                letters.append(int(body))
        return cls(strands, tuple(letters))

    def simplified(self) -> "BraidWord":
        """Cancel inverse pairs, using far commutation to bring them together."""
        letters = list(self.letters)
        changed = True
        while changed:
            changed = False
            n = len(letters)
            for a in range(n):
                sa = letters[a]
                for b in range(a + 1, n):
                    sb = letters[b]
                    if sb == -sa and all(abs(abs(letters[c]) - abs(sa)) >= 2 for c in range(a + 1, b)):
                        del letters[b]
                        del letters[a]
                        changed = True
                        break
                    if abs(abs(sb) - abs(sa)) <= 1:
                        break
                if changed:
                    break
        return BraidWord(self.strands, tuple(letters))


def _act_letter(s: int, w: Word) -> Word:
    """Image of w under the automorphism of the single braid letter s."""
    i = abs(s)
    out: list[int] = []
    for a in w.letters:
        g, sign = abs(a), 1 if a > 0 else -1
        if g != i and g != i + 1:
            image = (a,)
        elif s > 0:
            if g == i:
                image = (i, i + 1, -i) if sign > 0 else (i, -(i + 1), -i)
            else:
                image = (sign * i,)
        else:
            if g == i:
                image = (sign * (i + 1),)
            else:
                image = (-(i + 1), i, i + 1) if sign > 0 else (-(i + 1), -i, i + 1)
        out.extend(image)
    return Word(w.rank, tuple(out))


def artin_apply(b: BraidWord, w: Word) -> Word:
    """Image of w under the Artin automorphism of b (first letter acts first)."""
    if w.rank != b.strands:
        raise ValueError(f"word rank {w.rank} != braid strands {b.strands}")
    for s in b.letters:
        w = _act_letter(s, w)
    return w


def is_pure(b: BraidWord) -> bool:
    """True iff the underlying permutation of the braid is the identity."""
    return b.permutation() == tuple(range(1, b.strands + 1))


def _conjugator(b: BraidWord, ell: int) -> Word:
    """The word w with artin_apply(b, xl) = w xl w^-1, zero xl-exponent."""
    n = b.strands
    img = artin_apply(b, Word.generator(n, ell))
    m = len(img.letters)
    if m % 2 == 0 or img.letters[m // 2] != ell:
        raise ConventionError(
            f"image of x{ell} is not visibly a conjugate of x{ell}: {img}"
        )
    conj = Word(n, img.letters[: m // 2])
    e = conj.exponent_sum(ell)
    return conj * Word.generator(n, ell, -e)


def _relabel_reverse(w: Word) -> Word:
    n = w.rank
    return Word(n, tuple((1 if s > 0 else -1) * (n + 1 - abs(s)) for s in w.letters))


def longitudes(b: BraidWord) -> list[Word]:
    """Preferred (zero-framed) longitudes of all strands of a pure braid.

    The Artin conjugators are rebased to the meridian system
    y_l = (x1..x_{l-1}) x_l (x1..x_{l-1})^-1 and rewritten in that basis, so
    that the peripheral relation [x1,l1][x2,l2]...[xq,lq] = 1 holds exactly;
    positions are counted so that the relation comes out in ascending strand
    order.  Each longitude carries zero total exponent of its own meridian.
    """
    if not is_pure(b):
        raise PurityError("braid is not pure")
    n = b.strands
    flipped = BraidWord(n, tuple((1 if s > 0 else -1) * (n - abs(s)) for s in b.letters))
    raw = [_conjugator(flipped, ell) for ell in range(1, n + 1)]

    # prefix products and the rewriting x_l -> (x_{l-1}..x1)^-1 x_l (x_{l-1}..x1)
    prefix = [Word.identity(n)]
    for ell in range(1, n + 1):
        prefix.append(prefix[-1] * Word.generator(n, ell))
    exprs: list[Word] = [Word.identity(n)] * (n + 1)
    for ell in range(1, n + 1):
        tail = Word.identity(n)
        for t in range(1, ell):
            tail = tail * exprs[t]
        exprs[ell] = tail.inverse() * Word.generator(n, ell) * tail

    out: list[Word] = []
    for ell in range(1, n + 1):
        nu = prefix[ell - 1] * raw[ell - 1] * prefix[ell - 1].inverse()
        lam = Word.identity(n)
        for s in nu.letters:
            rep = exprs[abs(s)]
            lam = lam * (rep if s > 0 else rep.inverse())
        e = lam.exponent_sum(ell)
        out.append(lam * Word.generator(n, ell, -e))
    return [_relabel_reverse(out[n - ell]) for ell in range(1, n + 1)]


def band_generator(j: int, q: int) -> BraidWord:
    """The pure braid on q+1 strands clasping strand j with the last strand."""
    if not 1 <= j <= q:
        raise ValueError(f"band generator index {j} out of range 1..{q}")
    down = list(range(q, j, -1))
    word = down + [j, j] + [-p for p in reversed(down)]
    return BraidWord(q + 1, tuple(word))


def realize_last_longitude(w: Word, truncation: int) -> BraidWord:
    """Pure braid on rank+1 strands whose last longitude is w modulo F_truncation.

    Each letter xj of w is replaced by the band generator clasping strand j
    with the new last strand.  The result is post-verified through the Magnus
    expansion at the requested truncation and a ConventionError is raised on
    mismatch rather than returning a wrong braid.
    """
    from .magnus import magnus_expand

    q = w.rank
    letters: list[int] = []
    for s in w.letters:
        band = band_generator(abs(s), q)
        if s < 0:
            band = band.inverse()
        letters.extend(band.letters)
    braid = BraidWord(q + 1, tuple(letters))
    lam = longitudes(braid)[q]
    diff = lam * w.embed(q + 1).inverse()
    if magnus_expand(diff, truncation).is_one():
        return braid
    raise ConventionError(
        f"realized longitude {lam} does not match {w} modulo F_{truncation}"
    )
