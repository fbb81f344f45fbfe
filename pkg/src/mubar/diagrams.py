"""Fission of trees into 3-chains, the Morita-Milnor class, and tree data.

morita_milnor builds the 2-form sum_j sum_l X_l ^ lambda_l^(j) from the
resolved residue, bounds it by an exact linear solve in the Koszul complex
truncated at 2k-1, restricts the solution to the truncation at k (where it
becomes a 3-cycle), and returns homology coordinates.  tree_kontsevich
returns the eta-preimage of the resolved residue as a tree combination;
pushing its fission through the same reduction must give the same class
(the central cross-check, exposed as morita_milnor_via_trees).
"""

from __future__ import annotations

from fractions import Fraction

from .koszul import (
    Chain,
    H3Basis,
    H3Class,
    boundary,
    chain_add,
    h3_basis,
    restrict_chain,
    solve_boundary,
    wedge_of_elements,
)
from .lyndon import LieElement
from .nilpotent import MilnorResidue, milnor_residue
from .trees import Rooted, TreeCombination, UnrootedTree, comm, eta_inverse
from .words import Word


def fission(t: UnrootedTree, trunc: int, q: int) -> Chain:
    """Sum over trivalent vertices of the wedge of the three rooted-subtree
    bracket values, in the cyclic order of the vertex (so that the boundary
    of the fission chain is the wedge form of eta), degrees < trunc.
    Cyclic rotations of the order give the same chain."""
    out: Chain = {}

    def visit(node: Rooted, up: Rooted) -> None:
        if isinstance(node, int):
            return
        left, right = node
        parts = [comm(up, q), comm(left, q), comm(right, q)]
        for wedge, coeff in wedge_of_elements(parts, trunc).items():
            chain_add(out, wedge, coeff)
        visit(left, (right, up))
        visit(right, (up, left))

    visit(t.rest, t.hang_label)
    return out


def fission_combination(comb: TreeCombination, trunc: int, q: int) -> Chain:
    out: Chain = {}
    for tree, coeff in comb.items():
        for wedge, c in fission(tree, trunc, q).items():
            chain_add(out, wedge, coeff * c)
    return out


def sigma_form(residue: MilnorResidue) -> Chain:
    """The 2-form sum_j sum_l X_l ^ lambda_l^(j) from the resolved residue."""
    trunc = residue.m
    q = residue.q
    out: Chain = {}
    for j, pairs in residue.resolved:
        for ell, elem in pairs:
            for wedge, c in wedge_of_elements(
                [LieElement.basis(q, (ell,)), elem], trunc
            ).items():
                chain_add(out, wedge, c)
    return out


def morita_milnor(longs: list[Word], k: int) -> H3Class:
    """Homology 3-class of the bounding chain of the residue 2-form.

    Solved twice with different pivoting; the two classes must agree
    (independence of the choice of bounding chain).
    """
    q = longs[0].rank
    residue = milnor_residue(longs, k, 2 * k - 1) if k >= 2 else None
    if residue is None:
        raise ValueError("k must be at least 2")
    basis = h3_basis(q, k)
    sigma = sigma_form(residue)
    trunc = 2 * k - 1
    first = None
    for reverse in (False, True):
        t_chain = solve_boundary(sigma, trunc, q, reverse_columns=reverse)
        reduced = restrict_chain(t_chain, k)
        if boundary(reduced, k, q):
            raise AssertionError("restricted bounding chain is not a cycle")
        cls = H3Class(k, basis.reduce_cycle(reduced), basis.basis_id)
        if first is None:
            first = cls
        elif first.coords != cls.coords:
            raise AssertionError("Morita-Milnor class depends on the bounding chain")
    return first


def tree_kontsevich(longs: list[Word], k: int) -> dict[int, TreeCombination]:
    """Tree combination per degree j = k..2k-1 with eta(trees_j) = residue_j.

    This reconstructs the tree-reduced low-degree quantum datum of the string
    link from its longitudes; the underlying integral is never computed.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    q = longs[0].rank
    residue = milnor_residue(longs, k, 2 * k)
    out: dict[int, TreeCombination] = {}
    for j in range(k, 2 * k):
        block = residue.resolved_degree(j)
        if block:
            out[j] = eta_inverse(block, j, q)
    return out


def morita_milnor_via_trees(longs: list[Word], k: int) -> H3Class:
    """The same class through eta-inverse and fission (the cross-check route)."""
    q = longs[0].rank
    residue = milnor_residue(longs, k, 2 * k - 1)
    basis = h3_basis(q, k)
    total: Chain = {}
    for j in range(k, 2 * k - 1):
        block = residue.resolved_degree(j)
        if not block:
            continue
        comb = eta_inverse(block, j, q)
        for wedge, c in fission_combination(comb, 2 * k - 1, q).items():
            chain_add(total, wedge, c)
    reduced = restrict_chain(total, k)
    if boundary(reduced, k, q):
        raise AssertionError("fission route chain is not a cycle after restriction")
    return H3Class(k, basis.reduce_cycle(reduced), basis.basis_id)


def trees_to_json(comb: dict[int, TreeCombination]) -> dict:
    return {
        str(j): {str(tree): str(coeff) for tree, coeff in sorted(
            trees.items(), key=lambda kv: str(kv[0])
        )}
        for j, trees in sorted(comb.items())
    }
