"""Bracket maps on graded longitude data, their kernels, and Milnor residues.

The class of a word w in F_k/F_m (for m <= 2k, where the quotient is abelian
and w -> magnus(w) - 1 is additive) is stored as graded Lyndon coordinates
obtained by peeling magnus(w) - 1 against the Magnus images of the Lyndon
commutator words.  The residue sum_l x_l (x) lambda_l of a pure-braid
longitude tuple is then resolved degree by degree into the kernel of the
degree-wise bracket map z -> sum_l [X_l, z_l]; the resulting coordinate
vector is the Orr datum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import kernel_basis as _matrix_kernel, solve as _solve
from .lyndon import (
    LieElement,
    commutator_word,
    lie_bracket,
    lie_coordinates,
    lyndon_words,
    witt_rank,
)
from .magnus import Monomial, TruncatedTensor, lcs_degree, magnus_expand
from .words import Word, commutator

GradedLie = dict[int, LieElement]  # degree -> homogeneous Lie element
StrandData = dict[int, GradedLie]  # generator index -> graded data


class DegreeAssumptionError(ValueError):
    """A longitude fails the lower-central-series degree assumption."""

    def __init__(self, strand: int, degree: int | None, required: int):
        self.strand = strand
        self.degree = degree
        self.required = required
        super().__init__(
            f"longitude of strand {strand} has degree {degree}, needs >= {required}"
        )


class ResidueConsistencyError(RuntimeError):
    """The longitude tuple is not in the kernel of the bracket map."""


_U_CACHE: dict[tuple[Monomial, int, int], TruncatedTensor] = {}


def _u_tensor(w: Monomial, q: int, trunc: int) -> TruncatedTensor:
    """magnus(c_w) - 1 for the Lyndon commutator word c_w."""
    key = (w, q, trunc)
    if key not in _U_CACHE:
        cw = commutator_word(w, q)
        _U_CACHE[key] = magnus_expand(cw, trunc) - TruncatedTensor.one(q, trunc)
    return _U_CACHE[key]


def u_coordinates(word: Word, k: int, m: int) -> GradedLie:
    """Graded Lyndon coordinates of the class of word in F_k/F_m.

    Requires the word to lie in F_k; peels magnus(word) - 1 degree by degree
    against the commutator-word Magnus images, so the result is exactly
    additive on F_k/F_m whenever m <= 2k.
    """
    q = word.rank
    residual = magnus_expand(word, m) - TruncatedTensor.one(q, m)
    low = residual.min_degree()
    if low is not None and low < k:
        raise DegreeAssumptionError(0, low, k)
    out: GradedLie = {}
    for j in range(k, m):
        part = lie_coordinates(residual.degree_part(j))
        if not part.is_zero():
            out[j] = part
            for w, c in part.coords.items():
                residual = residual - _u_tensor(w, q, m).scale(c)
    return out


def bracket_map(z: StrandData, k: int, m: int) -> LieElement:
    """Degree-wise bracket sum_l [X_l, z_l], landing in degrees k+1..m."""
    q = max(z) if z else 1
    total = LieElement.zero(q)
    for ell, graded in z.items():
        q = graded[next(iter(graded))].rank if graded else q
        for j, elem in graded.items():
            if not k <= j <= m - 1:
                raise ValueError(f"degree {j} outside {k}..{m - 1}")
            total = total + lie_bracket(LieElement.basis(elem.rank, (ell,)), elem, j + 1)
    return total


@dataclass(frozen=True)
class BracketKernel:
    """Basis of the kernel of the degree-wise bracket map, graded by degree.

    Basis elements are pairs (degree, strand data); ordering is by degree,
    then by the deterministic kernel ordering of the underlying matrix.
    """

    q: int
    k: int
    m: int
    basis: tuple[tuple[int, tuple[tuple[int, LieElement], ...]], ...]
    basis_id: str

    def __len__(self) -> int:
        return len(self.basis)


def _diagonal_matrix(q: int, j: int) -> tuple[list[list[Fraction]], list[tuple[int, Monomial]]]:
    """Matrix of (l, w) -> [X_l, P_w] in Lyndon coordinates, degree j -> j+1."""
    cols = [(i, w) for i in range(1, q + 1) for w in lyndon_words(q, j)]
    rows_idx = {w: r for r, w in enumerate(lyndon_words(q, j + 1))}
    mat = [[Fraction(0)] * len(cols) for _ in rows_idx]
    for c, (i, w) in enumerate(cols):
        br = lie_bracket(LieElement.basis(q, (i,)), LieElement.basis(q, w), j + 1)
        for w2, coeff in br.coords.items():
            mat[rows_idx[w2]][c] = coeff
    return mat, cols


_DIAG_KERNEL_CACHE: dict[tuple[int, int], list[list[Fraction]]] = {}


def _diagonal_kernel(q: int, j: int) -> tuple[list[list[Fraction]], list[tuple[int, Monomial]]]:
    mat, cols = _diagonal_matrix(q, j)
    key = (q, j)
    if key not in _DIAG_KERNEL_CACHE:
        vecs = _matrix_kernel(mat, len(cols))
        expected = q * witt_rank(q, j) - witt_rank(q, j + 1)
        if len(vecs) != expected:
            raise AssertionError(
                f"kernel dimension {len(vecs)} != {expected} at q={q}, degree {j}"
            )
        _DIAG_KERNEL_CACHE[key] = vecs
    return _DIAG_KERNEL_CACHE[key], cols


def _vec_to_strand_data(vec: list[Fraction], cols: list[tuple[int, Monomial]], q: int) -> tuple[tuple[int, LieElement], ...]:
    per: dict[int, dict[Monomial, Fraction]] = {}
    for c, (i, w) in enumerate(cols):
        if vec[c]:
            per.setdefault(i, {})[w] = vec[c]
    return tuple((i, LieElement(q, coords)) for i, coords in sorted(per.items()))


def kernel_basis(q: int, k: int, m: int) -> BracketKernel:
    """Kernel of the bracket map on degrees k..m-1, as a degree-graded basis."""
    if not 1 <= k < m:
        raise ValueError("need 1 <= k < m")
    basis = []
    for j in range(k, m):
        vecs, cols = _diagonal_kernel(q, j)
        for vec in vecs:
            basis.append((j, _vec_to_strand_data(vec, cols, q)))
    return BracketKernel(q, k, m, tuple(basis), f"q{q}k{k}m{m}-lex")


@dataclass(frozen=True)
class MilnorResidue:
    """The residue sum_l x_l (x) lambda_l in graded Lyndon coordinates.

    ``strands`` holds the raw peeled longitude data; ``resolved`` regrades the
    residue into the kernel of the degree-wise bracket map (so bracket_map of
    each resolved degree vanishes exactly); ``coords`` expresses the residue
    over kernel_basis(q, k, m).
    """

    q: int
    k: int
    m: int
    strands: tuple[tuple[int, tuple[tuple[int, LieElement], ...]], ...]
    resolved: tuple[tuple[int, tuple[tuple[int, LieElement], ...]], ...]
    coords: tuple[Fraction, ...]
    basis_id: str

    def strand_data(self) -> StrandData:
        return {ell: {j: e for j, e in graded} for ell, graded in self.strands}

    def resolved_data(self) -> dict[int, dict[int, LieElement]]:
        return {j: dict(pairs) for j, pairs in self.resolved}

    def resolved_degree(self, j: int) -> dict[int, LieElement]:
        return self.resolved_data().get(j, {})

    def is_zero(self) -> bool:
        return not any(self.coords)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "m": self.m,
            "basis_id": self.basis_id,
            "coords": [str(c) for c in self.coords],
            "longitudes": {
                str(ell): {str(j): e.to_json() for j, e in graded}
                for ell, graded in self.strands
            },
        }


# cached bracket-matrix data per (q, k, m)
_GROUP_DATA: dict[tuple[int, int, int], dict] = {}


def _group_data(q: int, k: int, m: int) -> dict:
    """Domain/target indexing, bracket-matrix columns, and kernel lifts."""
    key = (q, k, m)
    if key in _GROUP_DATA:
        return _GROUP_DATA[key]
    domain = [
        (j, i, w)
        for j in range(k, m)
        for i in range(1, q + 1)
        for w in lyndon_words(q, j)
    ]
    target = [(j, w) for j in range(k + 1, m + 1) for w in lyndon_words(q, j)]
    t_index = {tw: r for r, tw in enumerate(target)}
    columns: list[list[Fraction]] = []
    for (j, i, w) in domain:
        word = commutator(Word.generator(q, i), commutator_word(w, q))
        graded = u_coordinates(word, k + 1, m + 1)
        col = [Fraction(0)] * len(target)
        for j2, elem in graded.items():
            for w2, c in elem.coords.items():
                col[t_index[(j2, w2)]] = c
        columns.append(col)
    # kernel lift for each diagonal-kernel basis vector: kappa = d + higher,
    # with B kappa = 0; corrections use only columns of degree > j.
    d_index = {dom: c for c, dom in enumerate(domain)}
    lifts: list[tuple[int, list[Fraction]]] = []
    for j in range(k, m):
        vecs, cols_j = _diagonal_kernel(q, j)
        higher = [c for c, (jj, _, _) in enumerate(domain) if jj > j]
        mat = [[columns[c][r] for c in higher] for r in range(len(target))]
        for vec in vecs:
            flat = [Fraction(0)] * len(domain)
            rhs = [Fraction(0)] * len(target)
            for cj, (i, w) in enumerate(cols_j):
                if vec[cj]:
                    flat[d_index[(j, i, w)]] = vec[cj]
                    for r in range(len(target)):
                        rhs[r] -= vec[cj] * columns[d_index[(j, i, w)]][r]
            corr = _solve(mat, rhs)
            if corr is None:
                raise AssertionError(f"no kernel lift at q={q} k={k} m={m} degree {j}")
            for t, c in enumerate(higher):
                flat[c] += corr[t]
            lifts.append((j, flat))
    _GROUP_DATA[key] = {
        "domain": domain,
        "d_index": d_index,
        "target": target,
        "columns": columns,
        "lifts": lifts,
    }
    return _GROUP_DATA[key]


def check_degree(longs: list[Word], k: int, cap: int | None = None) -> None:
    """Verify every longitude lies in F_k, else raise naming the first failure."""
    for ell, lam in enumerate(longs, start=1):
        d = lcs_degree(lam, k if cap is None else cap)
        if d is not None and d < k:
            raise DegreeAssumptionError(ell, d, k)


def milnor_residue(longs: list[Word], k: int, m: int) -> MilnorResidue:
    """Residue of a longitude tuple in degrees k..m-1, resolved into the kernel.

    Requires m <= 2k (the range where the graded coordinates are additive)
    and every longitude in F_k.
    """
    if not 1 <= k < m <= 2 * k:
        raise ValueError("need 1 <= k < m <= 2k")
    q = longs[0].rank
    if len(longs) != q:
        raise ValueError("need one longitude per strand")
    check_degree(longs, k)

    raw: StrandData = {}
    for ell, lam in enumerate(longs, start=1):
        try:
            raw[ell] = u_coordinates(lam, k, m)
        except DegreeAssumptionError as exc:
            raise DegreeAssumptionError(ell, exc.degree, k) from None

    data = _group_data(q, k, m)
    domain, d_index = data["domain"], data["d_index"]
    g = [Fraction(0)] * len(domain)
    for ell, graded in raw.items():
        for j, elem in graded.items():
            for w, c in elem.coords.items():
                g[d_index[(j, ell, w)]] = c

    coords: list[Fraction] = []
    resolved: dict[int, list[Fraction]] = {}
    for j in range(k, m):
        vecs, cols_j = _diagonal_kernel(q, j)
        block_idx = [d_index[(j, i, w)] for (i, w) in cols_j]
        block = [g[c] for c in block_idx]
        mat = [[vec[r] for vec in vecs] for r in range(len(cols_j))]
        sol = _solve(mat, block) if vecs else ([] if not any(block) else None)
        if sol is None:
            raise ResidueConsistencyError(
                f"degree-{j} residue block is outside the bracket kernel"
            )
        lifts_j = [flat for (jj, flat) in data["lifts"] if jj == j]
        res_block = [Fraction(0)] * len(cols_j)
        for t, c in enumerate(sol):
            coords.append(c)
            if c:
                for r in range(len(cols_j)):
                    res_block[r] += c * vecs[t][r]
                for pos in range(len(domain)):
                    g[pos] -= c * lifts_j[t][pos]
        resolved[j] = res_block
    if any(g):
        raise ResidueConsistencyError("residue does not lie in the bracket kernel")

    strands = tuple(
        (ell, tuple(sorted((j, e) for j, e in graded.items())))
        for ell, graded in sorted(raw.items())
        if graded
    )
    resolved_out = []
    for j in range(k, m):
        _, cols_j = _diagonal_kernel(q, j)
        pairs = _vec_to_strand_data(resolved[j], cols_j, q)
        if pairs:
            resolved_out.append((j, pairs))
    return MilnorResidue(
        q, k, m, strands, tuple(resolved_out), tuple(coords), f"q{q}k{k}m{m}-lex"
    )


def orr_coordinates(longs: list[Word], k: int) -> MilnorResidue:
    """The Orr datum: the residue modulo F_2k with its kernel coordinates."""
    return milnor_residue(longs, k, 2 * k)


def orr_ranks(q: int, k: int) -> tuple[int, int]:
    """Ranks (pi3, h3) = (sum_{h=k}^{2k-1}, sum_{h=k}^{2k-2}) of q N_h - N_{h+1}."""
    if k < 1:
        raise ValueError("k must be positive")
    pi3 = sum(q * witt_rank(q, h) - witt_rank(q, h + 1) for h in range(k, 2 * k))
    h3 = sum(q * witt_rank(q, h) - witt_rank(q, h + 1) for h in range(k, 2 * k - 1))
    return pi3, h3
