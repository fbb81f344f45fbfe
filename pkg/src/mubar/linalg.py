"""Exact linear algebra over the rationals for small dense systems.

Matrices are lists of rows of Fractions.  Pivoting is deterministic
(first nonzero entry in column order) so downstream bases are reproducible.
"""

from __future__ import annotations

from fractions import Fraction

Matrix = list[list[Fraction]]


def rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    m = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Matrix) -> int:
    return len(rref(rows)[1])


def kernel_basis(rows: Matrix, ncols: int) -> list[list[Fraction]]:
    """Basis of the right kernel (column-vector solutions of A x = 0).

    One basis vector per free column, with a 1 in that column; ordering
    follows the column order.
    """
    if not rows:
        return [
            [Fraction(1) if j == free else Fraction(0) for j in range(ncols)]
            for free in range(ncols)
        ]
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][free]
        basis.append(vec)
    return basis


def solve(rows: Matrix, rhs: list[Fraction], reverse_columns: bool = False) -> list[Fraction] | None:
    """One exact solution of A x = b (free variables set to 0), or None.

    With reverse_columns the elimination prefers the last columns as pivots,
    giving an independent second solution for cross-checking.
    """
    ncols = len(rows[0]) if rows else 0
    if not rows:
        return [Fraction(0)] * ncols if not any(rhs) else None
    order = list(range(ncols - 1, -1, -1)) if reverse_columns else list(range(ncols))
    aug = [[row[c] for c in order] + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    sol_perm = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        sol_perm[pc] = red[r][ncols]
    for i in range(len(red)):
        if all(x == 0 for x in red[i][:ncols]) and red[i][ncols]:
            return None
    sol = [Fraction(0)] * ncols
    for k, c in enumerate(order):
        sol[c] = sol_perm[k]
    return sol
