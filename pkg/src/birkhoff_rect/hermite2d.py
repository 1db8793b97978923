"""Explicit fundamental polynomials for lower derivative sets on rectangular grids.

For a lower set ``A`` with exterior corners ``(a_k, b_1), ..., (a_1, b_k)``
(``a_1 < ... < a_k``, ``b_1 < ... < b_k``) the fundamental polynomial for the
derivative ``(u, v)`` at node ``(x_s, y_t)`` telescopes over the corners::

    sum_i Hx[a_i](x) * (Hy[b_{k-i+1}](y) - Hy[b_{k-i}](y)),   Hy[b_0] = 0

with ``Hx[a] = H_a^{u,s}`` on the x nodes and ``Hy[b] = H_b^{v,t}`` on the y nodes.
Its support lies in the blow-up ``A^{p,q}``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Mapping

from .lowerset import LowerSet, Point, exterior_corners, is_lower
from .polynomial import SparsePolynomial, UniPolynomial
from .scheme import NodeGrid, NodeIndex, SchemeError, collocation_rows, as_derivative_set, clear_denominators, to_rational
from .univariate import hermite_1d

Basis = Mapping[tuple[Point, NodeIndex], SparsePolynomial]


@lru_cache(maxsize=8192)
def _hermite(nodes: tuple[Fraction, ...], a: int, u: int, s: int) -> UniPolynomial:
    return hermite_1d(nodes, a, u, s)


def _as_lower(A) -> LowerSet:
    if isinstance(A, LowerSet):
        return A
    pts = as_derivative_set(A).points
    if not is_lower(pts):
        raise SchemeError(f"derivative set {sorted(pts)} is not lower")
    return LowerSet(pts)


def fundamental(A, grid: NodeGrid, deriv: Point, node: NodeIndex) -> SparsePolynomial:
    A = _as_lower(A)
    u, v = deriv
    s, t = node
    if (u, v) not in A:
        raise SchemeError(f"derivative {deriv} is not in A")
    if not (0 <= s <= grid.p and 0 <= t <= grid.q):
        raise SchemeError(f"node index {node} outside a ({grid.p}, {grid.q}) grid")
    corners = exterior_corners(A)
    k = len(corners)
    a = [corners[k - i][0] for i in range(1, k + 1)]  # a_1 < ... < a_k
    b = [corners[j - 1][1] for j in range(1, k + 1)]  # b_1 < ... < b_k
    total = SparsePolynomial()
    for i in range(1, k + 1):
        hx = _hermite(grid.xs, a[i - 1], u, s)
        if not hx:
            continue
        hy = _hermite(grid.ys, b[k - i], v, t)
        if i < k:
            hy = hy - _hermite(grid.ys, b[k - i - 1], v, t)
        if hy:
            total = total + SparsePolynomial.tensor(hx, hy)
    return total


def fundamentals(A, grid: NodeGrid) -> dict[tuple[Point, NodeIndex], SparsePolynomial]:
    A = _as_lower(A)
    return {
        (d, idx): fundamental(A, grid, d, idx)
        for idx, _ in grid.nodes() for d in A
    }


def delta_matrix(A, grid: NodeGrid, basis: Basis) -> list[list[Fraction]]:
    """Entry ``[r][c]``: derivative ``r`` at node ``r`` of the basis element for condition ``c``.

    Rows and columns are both ordered node-major, derivative-minor.
    """
    A = as_derivative_set(A.points if isinstance(A, LowerSet) else A)
    conds = [(d, idx) for idx, _ in grid.nodes() for d in A]
    support = sorted(set().union(*(basis[c].support() for c in conds)) or {(0, 0)})
    M = collocation_rows(grid, A, support)
    Mi, _ = clear_denominators(M)
    # column scales of M divide out of the coefficient side
    scales = [lcm(*(Fraction(row[c]).denominator for row in M)) for c in range(len(support))]
    out = [[Fraction(0)] * len(conds) for _ in conds]
    for col, c in enumerate(conds):
        terms = basis[c].terms
        vec = [terms.get(m, Fraction(0)) / sc for m, sc in zip(support, scales)]
        den = lcm(*(x.denominator for x in vec))
        ivec = [int(x * den) for x in vec]
        for r, row in enumerate(Mi):
            out[r][col] = Fraction(sum(m * x for m, x in zip(row, ivec) if x), den)
    return out


def check_delta(A, grid: NodeGrid, basis: Basis | None = None) -> bool:
    """Do the fundamentals satisfy every delta equation exactly?

    ``basis`` defaults to the constructed fundamentals; pass a modified mapping
    to check arbitrary candidates.
    """
    A = _as_lower(A)
    if basis is None:
        basis = fundamentals(A, grid)
    D = delta_matrix(A, grid, basis)
    n = len(D)
    return all(D[r][c] == (1 if r == c else 0) for r in range(n) for c in range(n))


def hermite_interpolant(A, grid: NodeGrid, data: Mapping[tuple[NodeIndex, Point], object]) -> SparsePolynomial:
    """``sum data[(node, deriv)] * fundamental(deriv, node)``; missing data count as zero."""
    A = _as_lower(A)
    total = SparsePolynomial()
    for (idx, d), value in data.items():
        value = to_rational(value)
        if value:
            total = total + fundamental(A, grid, tuple(d), tuple(idx)) * value
    return total
