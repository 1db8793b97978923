"""Univariate Birkhoff schemes: Polya test, exact determinants, Hermite bases."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Sequence

from .polynomial import UniPolynomial, falling
from .scheme import NotNormalError, SchemeError, bareiss_determinant, clear_denominators, to_rational


@dataclass(frozen=True)
class UnivariateScheme:
    """Nodes, derivative orders and the space of polynomials of degree <= ``degree_bound``."""

    nodes: tuple[Fraction, ...]
    orders: tuple[int, ...]
    degree_bound: int

    def __init__(self, nodes: Iterable, orders: Iterable[int], degree_bound: int):
        nodes = tuple(to_rational(v) for v in nodes)
        if len(set(nodes)) != len(nodes):
            raise SchemeError(f"nodes are not pairwise distinct: {nodes}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "orders", tuple(sorted(set(int(o) for o in orders))))
        object.__setattr__(self, "degree_bound", int(degree_bound))

    @property
    def is_normal(self) -> bool:
        return self.degree_bound + 1 == len(self.nodes) * len(self.orders)

    def matrix(self) -> list[list]:
        rows = []
        for x in self.nodes:
            for r in self.orders:
                rows.append([
                    falling(e, r) * x ** (e - r) if e >= r else 0
                    for e in range(self.degree_bound + 1)
                ])
        return rows


def polya_1d(orders: Iterable[int], n: int) -> bool:
    """``a_i <= n * i`` for the sorted orders ``a_0 < a_1 < ...``."""
    return all(a <= n * i for i, a in enumerate(sorted(set(orders))))


def det_1d(scheme: UnivariateScheme) -> Fraction:
    if not scheme.is_normal:
        raise NotNormalError(
            f"degree bound {scheme.degree_bound} needs {scheme.degree_bound + 1} conditions, "
            f"got {len(scheme.nodes)} x {len(scheme.orders)}"
        )
    ints, scale = clear_denominators(scheme.matrix())
    return Fraction(bareiss_determinant(ints), scale)


def is_regular_1d(scheme: UnivariateScheme) -> bool:
    return scheme.is_normal and det_1d(scheme) != 0


def _truncated_product(shifts: Sequence[Fraction], power: int, order: int) -> list[Fraction]:
    """Coefficients of ``prod_t (h + d_t)^power`` in ``h`` up to ``h^order``."""
    series = [Fraction(0)] * (order + 1)
    series[0] = Fraction(1)
    for d in shifts:
        for _ in range(power):
            # multiply by (h + d), truncating
            for k in range(order, 0, -1):
                series[k] = series[k] * d + series[k - 1]
            series[0] = series[0] * d
    return series


def _invert_series(c: Sequence[Fraction]) -> list[Fraction]:
    g = [Fraction(1) / c[0]]
    for m in range(1, len(c)):
        g.append(-g[0] * sum(c[k] * g[m - k] for k in range(1, m + 1)))
    return g


def hermite_1d(nodes: Sequence, a: int, u: int, s: int) -> UniPolynomial:
    """Univariate Hermite fundamental polynomial ``H_a^{u,s}``.

    Its ``u'``-th derivative at node ``s'`` is 1 when ``(u', s') == (u, s)`` and
    0 for every other ``u' <= a``.  The degree is at most ``len(nodes)(a+1) - 1``
    and the polynomial is zero when ``a < u``.
    """
    xs = [to_rational(v) for v in nodes]
    if len(set(xs)) != len(xs):
        raise SchemeError(f"nodes are not pairwise distinct: {xs}")
    if not 0 <= s < len(xs):
        raise SchemeError(f"node index {s} out of range")
    if u < 0:
        raise SchemeError("derivative order must be nonnegative")
    if a < u:
        return UniPolynomial()
    xs_s = xs[s]
    others = [x for t, x in enumerate(xs) if t != s]
    # 1/phi_s expanded around x_s: coefficient k is (1/phi_s)^{(k)}(x_s) / k!
    inv = _invert_series(_truncated_product([xs_s - x for x in others], a + 1, a - u))
    phi = UniPolynomial({0: 1})
    for x in others:
        phi = phi * UniPolynomial.linear_factor(x) ** (a + 1)
    shift = UniPolynomial.linear_factor(xs_s)
    acc = UniPolynomial()
    uf = factorial(u)
    for k in range(u, a + 1):
        acc = acc + shift ** k * (inv[k - u] / uf)
    return phi * acc


def a_max(axis_orders: Iterable[int], p: int) -> frozenset[int]:
    """``{0, p+1, 2(p+1), ..., (p+1)(k-1)}`` for ``k`` axis orders."""
    k = len(set(axis_orders))
    return frozenset((p + 1) * i for i in range(k))
