"""Truncated noncommutative polynomials and the Magnus expansion xi -> 1 + Xi.

Monomials are tuples of generator indices; coefficients are exact rationals.
A TruncatedTensor with truncation m keeps degrees 0..m-1 ("modulo O(m)").
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .words import Word

Monomial = tuple[int, ...]


class NotPrimitiveError(ValueError):
    """Raised when a tensor expected to be a Lie element fails primitivity."""

    def __init__(self, degree: int, message: str | None = None):
        self.degree = degree
        super().__init__(message or f"non-primitive residual in degree {degree}")


def _clean(terms: dict[Monomial, Fraction]) -> dict[Monomial, Fraction]:
    return {m: c for m, c in terms.items() if c}


@dataclass
class TruncatedTensor:
    """Element of Q<X1..Xq> modulo the ideal of degree >= trunc."""

    rank: int
    trunc: int
    terms: dict[Monomial, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.trunc < 1:
            raise ValueError("truncation must be at least 1")
        self.terms = {
            m: Fraction(c) for m, c in self.terms.items() if len(m) < self.trunc and c
        }

    @classmethod
    def zero(cls, rank: int, trunc: int) -> "TruncatedTensor":
        return cls(rank, trunc, {})

    @classmethod
    def one(cls, rank: int, trunc: int) -> "TruncatedTensor":
        return cls(rank, trunc, {(): Fraction(1)})

    @classmethod
    def gen(cls, rank: int, trunc: int, i: int) -> "TruncatedTensor":
        if not 1 <= i <= rank:
            raise ValueError(f"generator index {i} out of range")
        return cls(rank, trunc, {(i,): Fraction(1)})

    def copy(self) -> "TruncatedTensor":
        return TruncatedTensor(self.rank, self.trunc, dict(self.terms))

    def coefficient(self, mono: Monomial) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(): Fraction(1)}

    def min_degree(self) -> int | None:
        """Lowest degree with a nonzero term, or None for the zero tensor."""
        return min((len(m) for m in self.terms), default=None)

    def degree_part(self, d: int) -> "TruncatedTensor":
        return TruncatedTensor(
            self.rank, self.trunc, {m: c for m, c in self.terms.items() if len(m) == d}
        )

    def _check_compatible(self, other: "TruncatedTensor") -> None:
        if self.rank != other.rank or self.trunc != other.trunc:
            raise ValueError("rank/truncation mismatch")

    def __add__(self, other: "TruncatedTensor") -> "TruncatedTensor":
        self._check_compatible(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, Fraction(0)) + c
        return TruncatedTensor(self.rank, self.trunc, _clean(terms))

    def __sub__(self, other: "TruncatedTensor") -> "TruncatedTensor":
        return self + (-other)

    def __neg__(self) -> "TruncatedTensor":
        return TruncatedTensor(self.rank, self.trunc, {m: -c for m, c in self.terms.items()})

    def scale(self, c) -> "TruncatedTensor":
        c = Fraction(c)
        return TruncatedTensor(self.rank, self.trunc, {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other: "TruncatedTensor") -> "TruncatedTensor":
        self._check_compatible(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            room = self.trunc - len(m1)
            for m2, c2 in other.terms.items():
                if len(m2) < room:
                    m = m1 + m2
                    out[m] = out.get(m, Fraction(0)) + c1 * c2
        return TruncatedTensor(self.rank, self.trunc, _clean(out))

    def _shift(self, i: int, sign: int = 1) -> "TruncatedTensor":
        """Right multiplication by +-Xi (fast path)."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            if len(m) + 1 < self.trunc:
                out[m + (i,)] = sign * c
        return TruncatedTensor(self.rank, self.trunc, out)

    def mul_gen(self, i: int, exponent: int) -> "TruncatedTensor":
        """Right multiplication by (1 + Xi) or its inverse."""
        if exponent == 1:
            return self + self._shift(i)
        if exponent == -1:
            acc = self.copy()
            cur = self
            for t in range(1, self.trunc):
                cur = cur._shift(i)
                if cur.is_zero():
                    break
                acc = acc + (cur if t % 2 == 0 else -cur)
            return acc
        raise ValueError("exponent must be +1 or -1")

    def inverse(self) -> "TruncatedTensor":
        """Inverse of a tensor with constant term 1."""
        if self.coefficient(()) != 1:
            raise ValueError("only tensors with constant term 1 are invertible here")
        u = self - TruncatedTensor.one(self.rank, self.trunc)
        acc = TruncatedTensor.one(self.rank, self.trunc)
        p = TruncatedTensor.one(self.rank, self.trunc)
        for t in range(1, self.trunc):
            p = p * u
            if p.is_zero():
                break
            acc = acc + (p if t % 2 == 0 else -p)
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruncatedTensor):
            return NotImplemented
        return (
            self.rank == other.rank
            and self.trunc == other.trunc
            and self.terms == other.terms
        )

    def coproduct(self) -> dict[tuple[Monomial, Monomial], Fraction]:
        """Unshuffle coproduct with every Xi primitive, on the tensor square."""
        out: dict[tuple[Monomial, Monomial], Fraction] = {}
        for m, c in self.terms.items():
            d = len(m)
            for mask in range(1 << d):
                left = tuple(m[p] for p in range(d) if mask >> p & 1)
                right = tuple(m[p] for p in range(d) if not mask >> p & 1)
                key = (left, right)
                out[key] = out.get(key, Fraction(0)) + c
        return {k: v for k, v in out.items() if v}

    def is_primitive(self) -> bool:
        """True iff coproduct(a) = a (x) 1 + 1 (x) a exactly."""
        delta = self.coproduct()
        for m, c in self.terms.items():
            for key in ((m, ()), ((), m)):
                delta[key] = delta.get(key, Fraction(0)) - c
        return not any(delta.values())

    def __str__(self) -> str:
        if not self.terms:
            return f"0 + O({self.trunc})"
        bits = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            c = self.terms[m]
            body = "*".join(f"X{i}" for i in m) if m else "1"
            if c == 1 and m:
                frag = body
            elif c == -1 and m:
                frag = f"-{body}"
            elif m:
                frag = f"{c}*{body}"
            else:
                frag = str(c)
            bits.append(frag)
        joined = " + ".join(bits).replace("+ -", "- ")
        return f"{joined} + O({self.trunc})"

    def to_json(self) -> dict[str, str]:
        """Monomial-string to rational-string map; the empty monomial prints as 1."""
        return {
            ("*".join(f"X{i}" for i in m) if m else "1"): str(c)
            for m, c in sorted(self.terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        }


def magnus_expand(w: Word, trunc: int) -> TruncatedTensor:
    """Multiplicative Magnus image of a word, xi -> 1 + Xi, modulo O(trunc)."""
    if trunc < 1:
        raise ValueError("truncation must be at least 1")
    t = TruncatedTensor.one(w.rank, trunc)
    for s in w.letters:
        t = t.mul_gen(abs(s), 1 if s > 0 else -1)
    return t


def log_magnus(w: Word, trunc: int) -> TruncatedTensor:
    """log of the Magnus image, as the truncated series log(1+u)."""
    u = magnus_expand(w, trunc) - TruncatedTensor.one(w.rank, trunc)
    acc = TruncatedTensor.zero(w.rank, trunc)
    p = TruncatedTensor.one(w.rank, trunc)
    for t in range(1, trunc):
        p = p * u
        if p.is_zero():
            break
        acc = acc + p.scale(Fraction((-1) ** (t + 1), t))
    return acc


def lcs_degree(w: Word, m_cap: int) -> int | None:
    """Largest k <= m_cap with magnus(w) = 1 + O(k); None means 'at least m_cap'.

    By the Magnus embedding this is the lower-central-series degree of w,
    capped at m_cap.
    """
    u = magnus_expand(w, m_cap) - TruncatedTensor.one(w.rank, m_cap)
    d = u.min_degree()
    return None if d is None else d


def mu_invariant(longs: list[Word], index: Iterable[int]) -> Fraction:
    """Milnor invariant of an index sequence from the longitude words.

    For the index i1..im this is the coefficient of X_{i1}...X_{i(m-1)} in the
    Magnus expansion of the longitude of strand im.
    """
    idx = tuple(int(i) for i in index)
    if len(idx) < 2:
        raise ValueError("index sequence must have length at least 2")
    q = longs[0].rank
    if any(not 1 <= i <= q for i in idx):
        raise ValueError(f"index out of range 1..{q}: {idx}")
    if len(longs) != q:
        raise ValueError("need one longitude per strand")
    m = len(idx)
    return magnus_expand(longs[idx[-1] - 1], m).coefficient(idx[:-1])
