"""Lyndon words, Witt ranks, and the free Lie algebra in the Lyndon basis.

A LieElement stores exact-rational coordinates keyed by Lyndon words; the
bracketing of a Lyndon word (by its standard right factorization) is the
corresponding basis element of the free Lie algebra, with the Lyndon word
itself as its leading monomial in the tensor algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .magnus import Monomial, NotPrimitiveError, TruncatedTensor
from .words import Word, commutator


@lru_cache(maxsize=None)
def lyndon_words(q: int, n: int) -> tuple[Monomial, ...]:
    """All Lyndon words of length exactly n over the alphabet 1..q, in lex order.

    Duval's algorithm, restricted to the requested length.
    """
    if q < 1 or n < 1:
        return ()
    out: list[Monomial] = []
    w = [0]
    while w:
        w[-1] += 1
        if len(w) == n:
            out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[-m])
        while w and w[-1] == q:
            w.pop()
    return tuple(out)


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    result, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def witt_rank(q: int, h: int) -> int:
    """Necklace/Moebius count of Lyndon words of length h over q letters."""
    total = sum(_mobius(d) * q ** (h // d) for d in range(1, h + 1) if h % d == 0)
    assert total % h == 0
    return total // h


@dataclass(frozen=True)
class WittTable:
    """Ranks N_h of the graded pieces of the free Lie algebra on q generators."""

    q: int
    ranks: tuple[int, ...]  # ranks[h-1] = N_h

    def __getitem__(self, h: int) -> int:
        if not 1 <= h <= len(self.ranks):
            raise IndexError(f"h={h} outside the computed range")
        return self.ranks[h - 1]


def witt_ranks(q: int, h_max: int) -> WittTable:
    """Witt table computed two ways (enumeration and Moebius); they must agree."""
    if q < 1:
        raise ValueError("q must be positive")
    ranks = []
    for h in range(1, h_max + 1):
        by_count = len(lyndon_words(q, h))
        by_moebius = witt_rank(q, h)
        if by_count != by_moebius:
            raise AssertionError(f"Witt rank mismatch at q={q}, h={h}")
        ranks.append(by_count)
    return WittTable(q, tuple(ranks))


@lru_cache(maxsize=None)
def standard_factorization(w: Monomial) -> tuple[Monomial, Monomial]:
    """Chen-Fox-Lyndon factorization w = u v with v the least proper suffix."""
    if len(w) < 2:
        raise ValueError("cannot factor a single letter")
    v = min(w[i:] for i in range(1, len(w)))
    return w[: len(w) - len(v)], v


@lru_cache(maxsize=None)
def bracket_tensor(w: Monomial) -> tuple[tuple[Monomial, int], ...]:
    """Tensor-algebra expansion of the Lyndon bracketing of w (homogeneous)."""
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    left = dict(bracket_tensor(u))
    right = dict(bracket_tensor(v))
    out: dict[Monomial, int] = {}
    for m1, c1 in left.items():
        for m2, c2 in right.items():
            out[m1 + m2] = out.get(m1 + m2, 0) + c1 * c2
            out[m2 + m1] = out.get(m2 + m1, 0) - c1 * c2
    return tuple(sorted((m, c) for m, c in out.items() if c))


@lru_cache(maxsize=None)
def commutator_word(w: Monomial, q: int) -> Word:
    """Group-commutator word whose Magnus expansion is 1 + bracketing(w) + higher."""
    if len(w) == 1:
        return Word.generator(q, w[0])
    u, v = standard_factorization(w)
    return commutator(commutator_word(u, q), commutator_word(v, q))


def bracket_str(w: Monomial) -> str:
    if len(w) == 1:
        return f"x{w[0]}"
    u, v = standard_factorization(w)
    return f"[{bracket_str(u)},{bracket_str(v)}]"


@dataclass
class LieElement:
    """Exact-rational coordinates over the Lyndon basis, graded by word length."""

    rank: int
    coords: dict[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.coords = {w: Fraction(c) for w, c in self.coords.items() if c}

    @classmethod
    def zero(cls, rank: int) -> "LieElement":
        return cls(rank, {})

    @classmethod
    def basis(cls, rank: int, w: Monomial) -> "LieElement":
        return cls(rank, {tuple(w): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "LieElement") -> "LieElement":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        coords = dict(self.coords)
        for w, c in other.coords.items():
            coords[w] = coords.get(w, Fraction(0)) + c
        return LieElement(self.rank, coords)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + other.scale(-1)

    def scale(self, c) -> "LieElement":
        c = Fraction(c)
        return LieElement(self.rank, {w: c * v for w, v in self.coords.items()})

    def degree_part(self, d: int) -> "LieElement":
        return LieElement(self.rank, {w: c for w, c in self.coords.items() if len(w) == d})

    def degrees(self) -> list[int]:
        return sorted({len(w) for w in self.coords})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LieElement):
            return NotImplemented
        return self.rank == other.rank and self.coords == other.coords

    def __str__(self) -> str:
        if not self.coords:
            return "0"
        bits = [
            f"{bracket_str(w)} : {c}"
            for w, c in sorted(self.coords.items(), key=lambda kv: (len(kv[0]), kv[0]))
        ]
        return "; ".join(bits)

    def to_json(self) -> dict[str, str]:
        return {
            "".join(str(i) for i in w): str(c)
            for w, c in sorted(self.coords.items(), key=lambda kv: (len(kv[0]), kv[0]))
        }


def expand_lie(elem: LieElement, trunc: int) -> TruncatedTensor:
    """Tensor-algebra image of a Lie element, truncated at degree trunc."""
    terms: dict[Monomial, Fraction] = {}
    for w, c in elem.coords.items():
        if len(w) >= trunc:
            continue
        for m, k in bracket_tensor(w):
            terms[m] = terms.get(m, Fraction(0)) + c * k
    return TruncatedTensor(elem.rank, trunc, terms)


def lie_coordinates(t: TruncatedTensor) -> LieElement:
    """Lyndon coordinates of a tensor that is a sum of homogeneous Lie elements.

    Works degree by degree by triangular elimination against the Lyndon
    bracketings (each has its own word as leading monomial).  Raises
    NotPrimitiveError naming the offending degree if a nonzero residual
    remains after the projection.
    """
    coords: dict[Monomial, Fraction] = {}
    residual = {m: c for m, c in t.terms.items() if m}
    if t.coefficient(()):
        raise NotPrimitiveError(0, "nonzero constant term")
    for d in sorted({len(m) for m in residual}):
        for w in lyndon_words(t.rank, d):
            c = residual.get(w)
            if not c:
                continue
            coords[w] = c
            for m, k in bracket_tensor(w):
                new = residual.get(m, Fraction(0)) - c * k
                if new:
                    residual[m] = new
                else:
                    residual.pop(m, None)
        if any(len(m) == d for m in residual):
            raise NotPrimitiveError(d)
    return LieElement(t.rank, coords)


def lie_bracket(a: LieElement, b: LieElement, max_degree: int) -> LieElement:
    """Bracket [a, b] = ab - ba computed in the tensor algebra, degrees <= max_degree."""
    if a.rank != b.rank:
        raise ValueError("rank mismatch")
    trunc = max_degree + 1
    ta, tb = expand_lie(a, trunc), expand_lie(b, trunc)
    return lie_coordinates(ta * tb - tb * ta)
