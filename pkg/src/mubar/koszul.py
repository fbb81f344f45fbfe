"""Koszul complex of the degree-truncated free Lie algebra, and its H3.

Chains are exterior products of Lyndon-basis generators of the quotient of
the free Lie algebra by all brackets of degree >= the truncation.  Wedges are
stored with generators strictly increasing in (degree, word) order; the
boundary is the Chevalley-Eilenberg formula

    d(h1 ^ ... ^ hn) = sum_{i<j} (-1)^{i+j} [hi, hj] ^ h1 ^ ... ^ hi^ ... ^ hj^ ... ^ hn.

Everything is graded by total degree (weight), and all linear algebra is
done exactly, one weight block at a time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .linalg import rref, solve as _solve
from .lyndon import LieElement, lie_bracket, lyndon_words, witt_rank
from .magnus import Monomial

Generator = Monomial  # a Lyndon word; its length is the degree
Wedge = tuple[Generator, ...]  # strictly increasing in (len, word)
Chain = dict[Wedge, Fraction]


def gen_key(g: Generator) -> tuple[int, Monomial]:
    return (len(g), g)


def normalize_wedge(gens: tuple[Generator, ...]) -> tuple[Wedge | None, int]:
    """Sorted wedge and permutation sign; None for a repeated generator."""
    keyed = sorted(range(len(gens)), key=lambda i: gen_key(gens[i]))
    sign = 1
    seen = list(gens)
    # count inversions for the permutation sign
    perm = keyed
    visited = [False] * len(perm)
    for start in range(len(perm)):
        if visited[start]:
            continue
        length = 0
        i = start
        while not visited[i]:
            visited[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    out = tuple(gens[i] for i in keyed)
    for a, b in zip(out, out[1:]):
        if a == b:
            return None, 0
    return out, sign


def chain_add(dst: Chain, wedge: Wedge, coeff: Fraction) -> None:
    if not coeff:
        return
    cur = dst.get(wedge, Fraction(0)) + coeff
    if cur:
        dst[wedge] = cur
    else:
        dst.pop(wedge, None)


def wedge_of_elements(parts: list[LieElement], trunc: int) -> Chain:
    """Expand a wedge of Lie elements over the generator basis, degrees < trunc."""
    out: Chain = {}

    def rec(idx: int, gens: tuple[Generator, ...], coeff: Fraction) -> None:
        if idx == len(parts):
            wedge, sign = normalize_wedge(gens)
            if sign:
                chain_add(out, wedge, coeff * sign)
            return
        for w, c in parts[idx].coords.items():
            if len(w) < trunc:
                rec(idx + 1, gens + (w,), coeff * c)

    rec(0, (), Fraction(1))
    return out


def weight(wedge: Wedge) -> int:
    return sum(len(g) for g in wedge)


def boundary(chain: Chain, trunc: int, q: int) -> Chain:
    """Chevalley-Eilenberg boundary, truncated below degree trunc."""
    out: Chain = {}
    for wedge, coeff in chain.items():
        n = len(wedge)
        for i in range(n):
            for j in range(i + 1, n):
                deg = len(wedge[i]) + len(wedge[j])
                if deg >= trunc:
                    continue
                br = lie_bracket(
                    LieElement.basis(q, wedge[i]), LieElement.basis(q, wedge[j]), deg
                )
                rest = tuple(g for t, g in enumerate(wedge) if t != i and t != j)
                sign = (-1) ** (i + j)  # equals the 1-based (-1)^{i+j} convention
                for w, c in br.coords.items():
                    full, s2 = normalize_wedge((w,) + rest)
                    if s2:
                        chain_add(out, full, coeff * c * sign * s2)
    return out


@lru_cache(maxsize=None)
def wedge_basis(q: int, trunc: int, n: int, wt: int) -> tuple[Wedge, ...]:
    """All n-fold wedges of generators of degree < trunc with total degree wt."""
    gens = [w for d in range(1, trunc) for w in lyndon_words(q, d)]
    gens.sort(key=gen_key)
    return tuple(
        combo for combo in combinations(gens, n) if weight(combo) == wt
    )


def _boundary_matrix(q: int, trunc: int, n: int, wt: int) -> tuple[list[list[Fraction]], tuple[Wedge, ...], dict[Wedge, int]]:
    """Matrix of the boundary from n-wedges of weight wt to (n-1)-wedges."""
    dom = wedge_basis(q, trunc, n, wt)
    cod = wedge_basis(q, trunc, n - 1, wt)
    cod_index = {w: r for r, w in enumerate(cod)}
    mat = [[Fraction(0)] * len(dom) for _ in cod]
    for c, wedge in enumerate(dom):
        img = boundary({wedge: Fraction(1)}, trunc, q)
        for w2, coeff in img.items():
            mat[cod_index[w2]][c] = coeff
    return mat, dom, cod_index


@dataclass(frozen=True)
class H3Basis:
    """Homology basis of the 3-chains, per weight block, with reduction data."""

    q: int
    k: int
    basis_id: str
    dimension: int
    # per weight: (domain wedges, boundary-image vectors, class representatives)
    blocks: dict

    def reduce_cycle(self, chain: Chain) -> tuple[Fraction, ...]:
        """Coordinates of a 3-cycle in the homology basis."""
        coords: list[Fraction] = []
        by_weight: dict[int, Chain] = {}
        for wedge, coeff in chain.items():
            by_weight.setdefault(weight(wedge), {})[wedge] = coeff
        for wt in sorted(self.blocks):
            dom, b_vecs, h_vecs = self.blocks[wt]
            part = by_weight.pop(wt, {})
            rhs = [part.get(w, Fraction(0)) for w in dom]
            cols = [list(col) for col in (h_vecs + b_vecs)]
            mat = [[cols[c][r] for c in range(len(cols))] for r in range(len(dom))]
            sol = _solve(mat, rhs)
            if sol is None:
                raise ValueError(f"chain is not a cycle in weight {wt}")
            coords.extend(sol[: len(h_vecs)])
        if any(by_weight.values()):
            bad = sorted(wt for wt, part in by_weight.items() if part)
            raise ValueError(f"cycle has terms in unexpected weights {bad}")
        return tuple(coords)


@dataclass(frozen=True)
class H3Class:
    """A homology 3-class in coordinates over a fixed H3 basis."""

    k: int
    coords: tuple[Fraction, ...]
    basis_id: str

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __add__(self, other: "H3Class") -> "H3Class":
        if self.basis_id != other.basis_id:
            raise ValueError("basis mismatch")
        return H3Class(self.k, tuple(a + b for a, b in zip(self.coords, other.coords)), self.basis_id)

    def to_json(self) -> dict:
        return {"k": self.k, "basis_id": self.basis_id, "coords": [str(c) for c in self.coords]}


@lru_cache(maxsize=None)
def h3_basis(q: int, k: int) -> H3Basis:
    """H3 of the Koszul complex at truncation k = ker d3 / im d4, weight-blocked.

    The dimension must match sum_{h=k}^{2k-2} (q N_h - N_{h+1}); a mismatch
    aborts since it would signal a convention bug.
    """
    if k < 2:
        raise ValueError("truncation k must be at least 2")
    blocks: dict[int, tuple] = {}
    total = 0
    max_wt = 3 * (k - 1)
    for wt in range(3, max_wt + 1):
        dom = wedge_basis(q, k, 3, wt)
        if not dom:
            continue
        d3, _, _ = _boundary_matrix(q, k, 3, wt)
        from .linalg import kernel_basis as _matrix_kernel

        cycles = _matrix_kernel(d3, len(dom))
        d4, dom4, _cod = _boundary_matrix(q, k, 4, wt)
        # image vectors of d4 in the Lambda^3 weight block
        dom3_index = {w: r for r, w in enumerate(dom)}
        b_cols = []
        for c in range(len(dom4)):
            img = boundary({dom4[c]: Fraction(1)}, k, q)
            vec = [Fraction(0)] * len(dom)
            for w2, coeff in img.items():
                vec[dom3_index[w2]] = coeff
            b_cols.append(vec)
        # pick cycle vectors independent modulo the boundary image
        h_vecs: list[list[Fraction]] = []
        current = [col[:] for col in b_cols]
        for vec in cycles:
            rows = [[c[r] for c in current + [vec]] for r in range(len(dom))]
            red, pivots = rref(rows)
            if len(pivots) > len(current):
                current.append(vec)
                h_vecs.append(vec)
        expected = 0
        if k + 1 <= wt <= 2 * k - 1:
            expected = q * witt_rank(q, wt - 1) - witt_rank(q, wt)
        if len(h_vecs) != expected:
            raise AssertionError(
                f"H3 dimension {len(h_vecs)} != expected {expected} at q={q}, k={k}, weight {wt}"
            )
        total += len(h_vecs)
        if h_vecs or b_cols:
            blocks[wt] = (dom, b_cols, h_vecs)
    return H3Basis(q, k, f"h3-q{q}k{k}-lex", total, blocks)


def solve_boundary(target: Chain, trunc: int, q: int, reverse_columns: bool = False) -> Chain:
    """A 3-chain t with boundary(t) = target, solved per weight block."""
    by_weight: dict[int, Chain] = {}
    for wedge, coeff in target.items():
        by_weight.setdefault(weight(wedge), {})[wedge] = coeff
    out: Chain = {}
    for wt, part in sorted(by_weight.items()):
        mat, dom, cod_index = _boundary_matrix(q, trunc, 3, wt)
        rhs = [Fraction(0)] * len(cod_index)
        for wedge, coeff in part.items():
            rhs[cod_index[wedge]] = coeff
        sol = _solve(mat, rhs, reverse_columns=reverse_columns)
        if sol is None:
            raise ValueError(f"target is not a boundary in weight {wt}")
        for c, coeff in enumerate(sol):
            chain_add(out, dom[c], coeff)
    return out


def restrict_chain(chain: Chain, trunc: int) -> Chain:
    """Drop wedge terms containing a generator of degree >= trunc."""
    return {
        wedge: coeff
        for wedge, coeff in chain.items()
        if all(len(g) < trunc for g in wedge)
    }


def chain_str(chain: Chain) -> str:
    if not chain:
        return "0"
    bits = []
    for wedge in sorted(chain, key=lambda w: (weight(w), w)):
        body = " ^ ".join("".join(str(i) for i in g) for g in wedge)
        bits.append(f"{chain[wedge]}*({body})")
    return " + ".join(bits)
