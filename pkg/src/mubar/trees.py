"""Labeled uni-trivalent trees: canonical forms, comm, eta, and eta-inverse.

A rooted tree is a nested structure: an int leaf label, or a pair
(left, right) of rooted trees; the cyclic orientation at an internal vertex
is (parent, left, right).  An unrooted tree of degree j (j+1 leaves) is
stored as a pair (A, B) hung on an edge; swapping the two sides of the hang
edge or re-hanging on another edge does not change the tree, while swapping
the children of a vertex flips the sign (antisymmetry).

Canonical form: minimum over all leaf re-hangings of the recursively sorted
representation, with the sign tracked; trees admitting an orientation-odd
automorphism are zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .linalg import solve as _solve
from .lyndon import LieElement, lie_bracket, lyndon_words, witt_rank

Rooted = int | tuple  # leaf label or (Rooted, Rooted)


def leaves_of(t: Rooted) -> list[int]:
    if isinstance(t, int):
        return [t]
    return leaves_of(t[0]) + leaves_of(t[1])


def degree_of_rooted(t: Rooted) -> int:
    """Number of leaves; comm of the tree is homogeneous of this degree."""
    return len(leaves_of(t))


def comm(t: Rooted, q: int) -> LieElement:
    """Iterated bracket read off a rooted tree: leaves are generators."""
    if isinstance(t, int):
        if not 1 <= t <= q:
            raise ValueError(f"leaf label {t} out of range 1..{q}")
        return LieElement.basis(q, (t,))
    left, right = comm(t[0], q), comm(t[1], q)
    return lie_bracket(left, right, degree_of_rooted(t))


def _sorted_rooted(t: Rooted) -> tuple[Rooted, int]:
    """Recursively order children; sign flips per swap; equal children kill."""
    if isinstance(t, int):
        return t, 1
    a, sa = _sorted_rooted(t[0])
    b, sb = _sorted_rooted(t[1])
    if sa == 0 or sb == 0:
        return (a, b), 0
    ka, kb = repr(a), repr(b)
    if ka == kb:
        return (a, b), 0
    if ka <= kb:
        return (a, b), sa * sb
    return (b, a), -sa * sb


@dataclass(frozen=True)
class UnrootedTree:
    """AS-canonical representative (hung at a leaf) with leaf count >= 3."""

    hang_label: int
    rest: tuple
    # rest is a Rooted structure; degree = total leaves - 1

    @property
    def degree(self) -> int:
        return degree_of_rooted(self.rest)

    def labels(self) -> list[int]:
        return sorted([self.hang_label] + leaves_of(self.rest))

    def __str__(self) -> str:
        if self.degree == 2:
            a, b = self.rest
            return f"tripod[{self.hang_label},{a},{b}]"
        return f"tree[{self.hang_label},{_rooted_str(self.rest)}]"


def _rooted_str(t: Rooted) -> str:
    if isinstance(t, int):
        return str(t)
    return f"({_rooted_str(t[0])},{_rooted_str(t[1])})"


def _reroot(up: Rooted, side: Rooted, path: tuple[int, ...]) -> Rooted:
    """Rooted tree seen from the leaf at `path` inside `side`; `up` hangs across.

    Cyclic orientation (parent, left, right) is preserved by rotation.
    """
    if not path:
        return up
    if path[0] == 0:
        return _reroot((side[1], up), side[0], path[1:])
    return _reroot((up, side[0]), side[1], path[1:])


def _leaf_paths(t: Rooted, prefix: tuple[int, ...] = ()) -> list[tuple[tuple[int, ...], int]]:
    if isinstance(t, int):
        return [(prefix, t)]
    return _leaf_paths(t[0], prefix + (0,)) + _leaf_paths(t[1], prefix + (1,))


def _hangings(pair: tuple[Rooted, Rooted]) -> list[tuple[int, Rooted]]:
    """All (leaf label, rest-of-tree-as-rooted) presentations of the tree."""
    a, b = pair
    out = []
    for path, label in _leaf_paths(a):
        out.append((label, _reroot(b, a, path)))
    for path, label in _leaf_paths(b):
        out.append((label, _reroot(a, b, path)))
    return out


def canonical(pair: tuple[Rooted, Rooted]) -> tuple[UnrootedTree | None, int]:
    """Canonical unrooted representative and sign; (None, 0) for a zero tree."""
    best: tuple[int, str, Rooted] | None = None
    best_sign = 0
    for label, rest in _hangings(pair):
        sorted_rest, sign = _sorted_rooted(rest)
        if sign == 0:
            return None, 0
        key = (label, repr(sorted_rest), sorted_rest)
        if best is None or (key[0], key[1]) < (best[0], best[1]):
            best = key
            best_sign = sign
        elif (key[0], key[1]) == (best[0], best[1]) and sign != best_sign:
            return None, 0
    assert best is not None
    return UnrootedTree(best[0], best[2] if isinstance(best[2], tuple) else best[2]), best_sign


TreeCombination = dict[UnrootedTree, Fraction]


def combine(items: list[tuple[tuple[Rooted, Rooted], Fraction]]) -> TreeCombination:
    out: TreeCombination = {}
    for pair, coeff in items:
        tree, sign = canonical(pair)
        if sign == 0 or not coeff:
            continue
        out[tree] = out.get(tree, Fraction(0)) + sign * coeff
    return {t: c for t, c in out.items() if c}


def eta(t: UnrootedTree, q: int) -> dict[int, LieElement]:
    """sum over leaves v of x_label(v) (x) comm(tree re-rooted at v).

    The output lies in the kernel of the degree-wise bracket map; this is
    checked and a failure aborts (it would signal a convention error).
    """
    pair: tuple[Rooted, Rooted] = (t.hang_label, t.rest)
    out: dict[int, LieElement] = {}
    j = t.degree
    for label, rest in _hangings(pair):
        elem = comm(rest, q)
        out[label] = out.get(label, LieElement.zero(q)) + elem
    out = {ell: e for ell, e in out.items() if not e.is_zero()}
    total = LieElement.zero(q)
    for ell, elem in out.items():
        total = total + lie_bracket(LieElement.basis(q, (ell,)), elem, j + 1)
    if not total.is_zero():
        raise AssertionError(f"eta image of {t} fails kernel membership")
    return out


def eta_combination(comb: TreeCombination, q: int) -> dict[int, LieElement]:
    out: dict[int, LieElement] = {}
    for tree, coeff in comb.items():
        for ell, elem in eta(tree, q).items():
            out[ell] = out.get(ell, LieElement.zero(q)) + elem.scale(coeff)
    return {ell: e for ell, e in out.items() if not e.is_zero()}


def _all_shapes(n: int) -> list[Rooted]:
    """All rooted binary shapes on n ordered leaf slots (slots are 0..n-1)."""
    def build(slots: tuple[int, ...]) -> list[Rooted]:
        if len(slots) == 1:
            return [slots[0]]
        out = []
        for cut in range(1, len(slots)):
            for left in build(slots[:cut]):
                for right in build(slots[cut:]):
                    out.append((left, right))
        return out

    return build(tuple(range(n)))


def _assign(shape: Rooted, labels: tuple[int, ...]) -> Rooted:
    if isinstance(shape, int):
        return labels[shape]
    return (_assign(shape[0], labels), _assign(shape[1], labels))


@lru_cache(maxsize=None)
def enumerate_trees(q: int, degree: int) -> tuple[UnrootedTree, ...]:
    """All nonzero AS-canonical trees of the given degree with labels in 1..q."""
    if degree < 2:
        raise ValueError("tree degree must be at least 2")
    n = degree + 1
    shapes = _all_shapes(n - 1)
    seen: dict[UnrootedTree, None] = {}
    import itertools

    for labels in itertools.product(range(1, q + 1), repeat=n):
        for shape in shapes:
            pair = (labels[0], _assign(shape, labels[1:]))
            tree, sign = canonical(pair)
            if sign != 0 and tree not in seen:
                seen[tree] = None
    return tuple(sorted(seen, key=lambda t: (t.hang_label, repr(t.rest))))


def eta_inverse(z: dict[int, LieElement], j: int, q: int) -> TreeCombination:
    """A tree combination c with eta(c) = z, for z in the degree-j kernel.

    Solved exactly over the enumerated trees of degree j; an inconsistent
    system signals a convention bug and raises.
    """
    trees = enumerate_trees(q, j)
    cols = [(i, w) for i in range(1, q + 1) for w in lyndon_words(q, j)]
    col_index = {cw: r for r, cw in enumerate(cols)}
    mat = [[Fraction(0)] * len(trees) for _ in cols]
    for c, tree in enumerate(trees):
        for ell, elem in eta(tree, q).items():
            for w, coeff in elem.coords.items():
                mat[col_index[(ell, w)]][c] = coeff
    rhs = [Fraction(0)] * len(cols)
    for ell, elem in z.items():
        for w, coeff in elem.coords.items():
            rhs[col_index[(ell, w)]] = coeff
    sol = _solve(mat, rhs)
    if sol is None:
        raise AssertionError("eta_inverse: inconsistent system (convention bug)")
    return {trees[c]: sol[c] for c in range(len(trees)) if sol[c]}


def eta_rank(q: int, j: int) -> int:
    """Rank of eta on degree-j trees; equals q N_j - N_{j+1}."""
    trees = enumerate_trees(q, j)
    cols = {cw: r for r, cw in enumerate(
        [(i, w) for i in range(1, q + 1) for w in lyndon_words(q, j)]
    )}
    mat = [[Fraction(0)] * len(trees) for _ in cols]
    for c, tree in enumerate(trees):
        for ell, elem in eta(tree, q).items():
            for w, coeff in elem.coords.items():
                mat[cols[(ell, w)]][c] = coeff
    from .linalg import rank as _rank

    return _rank(mat)
