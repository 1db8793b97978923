"""Collocation matrices, exact determinants and interpolation for bivariate schemes.

A scheme is a triple ``(Z, A, S)``: a rectangular node grid ``Z``, a set ``A`` of
derivative orders and a lower set ``S`` spanning the interpolation space
``P_S = span{x^a y^b : (a, b) in S}``.  Everything here is exact: node
coordinates are :class:`fractions.Fraction` and determinants are computed by
fraction-free elimination over the integers.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Mapping, Sequence

from .lowerset import LowerSet, Point, is_lower
from .polynomial import SparsePolynomial, falling, monomial_derivative

Rational = Fraction
NodeIndex = tuple[int, int]


class SchemeError(ValueError):
    pass


class NotNormalError(SchemeError):
    """The collocation system is not square (``|S| != |Z| |A|``)."""


class NotRegularError(SchemeError):
    """The collocation matrix is singular."""


def to_rational(value) -> Fraction:
    """Parse an int, Fraction or ``"num/den"`` string exactly (floats are refused)."""
    if isinstance(value, float):
        raise SchemeError(f"refusing inexact float {value!r}; use an integer or 'num/den' string")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemeError(f"malformed rational {value!r}") from exc
    raise SchemeError(f"cannot interpret {value!r} as a rational")


@dataclass(frozen=True)
class NodeGrid:
    """The ``(p, q)``-rectangular node set ``{(x_i, y_j)}``."""

    xs: tuple[Fraction, ...]
    ys: tuple[Fraction, ...]

    def __init__(self, xs: Iterable, ys: Iterable):
        xs = tuple(to_rational(v) for v in xs)
        ys = tuple(to_rational(v) for v in ys)
        if not xs or not ys:
            raise SchemeError("a grid needs at least one x and one y coordinate")
        if len(set(xs)) != len(xs):
            raise SchemeError(f"x coordinates are not pairwise distinct: {xs}")
        if len(set(ys)) != len(ys):
            raise SchemeError(f"y coordinates are not pairwise distinct: {ys}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def p(self) -> int:
        return len(self.xs) - 1

    @property
    def q(self) -> int:
        return len(self.ys) - 1

    @property
    def size(self) -> int:
        return len(self.xs) * len(self.ys)

    def nodes(self) -> Iterator[tuple[NodeIndex, tuple[Fraction, Fraction]]]:
        for i, x in enumerate(self.xs):
            for j, y in enumerate(self.ys):
                yield (i, j), (x, y)

    def transpose(self) -> "NodeGrid":
        return NodeGrid(self.ys, self.xs)


class DerivativeSet:
    """A nonempty finite set of derivative orders ``(i, j)``, iterated lexicographically."""

    __slots__ = ("points", "_sorted")

    def __init__(self, points: Iterable[Point]):
        pts = frozenset((int(i), int(j)) for i, j in points)
        if not pts:
            raise SchemeError("the derivative set must be nonempty")
        if any(i < 0 or j < 0 for i, j in pts):
            raise SchemeError("derivative orders must be nonnegative")
        self.points = pts
        self._sorted = tuple(sorted(pts))

    def __iter__(self) -> Iterator[Point]:
        return iter(self._sorted)

    def __len__(self) -> int:
        return len(self._sorted)

    def __contains__(self, pt: object) -> bool:
        return pt in self.points

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DerivativeSet):
            return self.points == other.points
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"DerivativeSet({list(self._sorted)})"

    @property
    def x_axis(self) -> tuple[Point, ...]:
        """Elements on the x axis (second coordinate zero); includes the origin."""
        return tuple(pt for pt in self._sorted if pt[1] == 0)

    @property
    def y_axis(self) -> tuple[Point, ...]:
        return tuple(pt for pt in self._sorted if pt[0] == 0)

    @property
    def mixed(self) -> tuple[Point, ...]:
        return tuple(pt for pt in self._sorted if pt[0] > 0 and pt[1] > 0)

    def is_lower(self) -> bool:
        return is_lower(self.points)

    def as_lower(self) -> LowerSet:
        return LowerSet(self.points)

    def transpose(self) -> "DerivativeSet":
        return DerivativeSet((j, i) for i, j in self.points)


def as_derivative_set(A) -> DerivativeSet:
    return A if isinstance(A, DerivativeSet) else DerivativeSet(A)


@dataclass(frozen=True)
class Scheme:
    A: DerivativeSet
    S: LowerSet
    grid: NodeGrid | None = None
    p: int | None = None
    q: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "A", as_derivative_set(self.A))
        if self.grid is not None:
            if self.p is not None and self.p != self.grid.p:
                raise SchemeError(f"p={self.p} disagrees with a grid of {self.grid.p + 1} x-nodes")
            if self.q is not None and self.q != self.grid.q:
                raise SchemeError(f"q={self.q} disagrees with a grid of {self.grid.q + 1} y-nodes")
            object.__setattr__(self, "p", self.grid.p)
            object.__setattr__(self, "q", self.grid.q)

    @property
    def n_nodes(self) -> int:
        if self.p is None or self.q is None:
            raise SchemeError("node counts unknown: supply a grid or (p, q)")
        return (self.p + 1) * (self.q + 1)


def is_normal(A, S: LowerSet, p: int, q: int) -> bool:
    """``|S| == (p+1)(q+1)|A|``."""
    return len(S) == (p + 1) * (q + 1) * len(as_derivative_set(A))


def scheme_is_normal(scheme: Scheme) -> bool:
    return len(scheme.S) == scheme.n_nodes * len(scheme.A)


def derivative_of_monomial(exp: Point, order: Point, at: tuple) -> Fraction:
    return monomial_derivative(exp, order, at)


# ---------------------------------------------------------------------------
# matrices

def _plain(v: Fraction):
    return v.numerator if v.denominator == 1 else v


def collocation_rows(grid: NodeGrid, A: DerivativeSet, columns: Sequence[Point]) -> list[list]:
    # entries are ints whenever the node coordinates are integral
    max_a = max((a for a, _ in columns), default=0)
    max_b = max((b for _, b in columns), default=0)
    xpow = [[_plain(x) ** k for k in range(max_a + 1)] for x in grid.xs]
    ypow = [[_plain(y) ** k for k in range(max_b + 1)] for y in grid.ys]
    ders = list(A)
    fx = {(a, i): falling(a, i) for a in range(max_a + 1) for i, _ in ders}
    fy = {(b, j): falling(b, j) for b in range(max_b + 1) for _, j in ders}
    rows = []
    for i in range(len(grid.xs)):
        for j in range(len(grid.ys)):
            xp, yp = xpow[i], ypow[j]
            for di, dj in ders:
                rows.append([
                    fx[a, di] * fy[b, dj] * xp[a - di] * yp[b - dj] if a >= di and b >= dj else 0
                    for a, b in columns
                ])
    return rows


def build_matrix(grid: NodeGrid, A, S: LowerSet) -> list[list[Fraction]]:
    """Square collocation matrix of a normal scheme.

    Rows are ``(node, derivative)`` with nodes in lexicographic index order and
    derivatives lexicographic within a node; columns follow ``S``'s
    lexicographic point order.
    """
    A = as_derivative_set(A)
    if not is_normal(A, S, grid.p, grid.q):
        raise NotNormalError(
            f"|S| = {len(S)} but |Z||A| = {grid.size}*{len(A)} = {grid.size * len(A)}"
        )
    return [[Fraction(v) for v in row] for row in collocation_rows(grid, A, S.sorted_points)]


def collocation_matrix(grid: NodeGrid, A, S: LowerSet) -> list[list[Fraction]]:
    """Collocation matrix without the normality requirement (possibly rectangular)."""
    A = as_derivative_set(A)
    return [[Fraction(v) for v in row] for row in collocation_rows(grid, A, S.sorted_points)]


def clear_denominators(M: Sequence[Sequence]) -> tuple[list[list[int]], int]:
    """Scale every column to integers; returns the integer matrix and the product of scales."""
    if all(not isinstance(v, Fraction) or v.denominator == 1 for row in M for v in row):
        return [[int(v) for v in row] for row in M], 1
    ncols = len(M[0]) if M else 0
    scales = []
    for c in range(ncols):
        scales.append(lcm(*(Fraction(row[c]).denominator for row in M)) if M else 1)
    out = [[int(Fraction(v) * s) for v, s in zip(row, scales)] for row in M]
    total = 1
    for s in scales:
        total *= s
    return out, total


def bareiss_determinant(M: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    if any(len(row) != n for row in M):
        raise SchemeError("determinant of a non-square matrix")
    a = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][0]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        rowk = a[k]
        akk = rowk[0]
        if k == n - 1:
            return sign * akk
        tail = rowk[1:]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[0]
            if aik:
                a[i] = [(x * akk - aik * y) // prev for x, y in zip(ai[1:], tail)]
            else:
                a[i] = [(x * akk) // prev for x in ai[1:]]
        prev = akk
    raise AssertionError("unreachable")


def determinant(M: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a square rational matrix."""
    if any(len(row) != len(M) for row in M):
        raise SchemeError("determinant of a non-square matrix")
    ints, scale = clear_denominators(M)
    return Fraction(bareiss_determinant(ints), scale)


def rank(M: Sequence[Sequence]) -> int:
    """Exact rank by fraction-free row reduction (columns without a pivot are skipped)."""
    if not M:
        return 0
    a, _ = clear_denominators(M)
    a = [list(row) for row in a]
    nrows, ncols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            a[i] = [(x * pv - f * y) // prev for x, y in zip(ai, a[r])]
        prev = pv
        r += 1
        if r == nrows:
            break
    return r


def scheme_determinant(grid: NodeGrid, A, S: LowerSet) -> Fraction:
    """``D(Z, A, S)`` evaluated exactly at the grid."""
    A = as_derivative_set(A)
    if not is_normal(A, S, grid.p, grid.q):
        raise NotNormalError(
            f"|S| = {len(S)} but |Z||A| = {grid.size * len(A)}"
        )
    rows = collocation_rows(grid, A, S.sorted_points)
    ints, scale = clear_denominators(rows)
    return Fraction(bareiss_determinant(ints), scale)


def is_regular_at(grid: NodeGrid, A, S: LowerSet) -> bool:
    return scheme_determinant(grid, A, S) != 0


def is_solvable_at(grid: NodeGrid, A, S: LowerSet) -> bool:
    """Full row rank: every choice of data admits at least one interpolant in ``P_S``."""
    A = as_derivative_set(A)
    nrows = grid.size * len(A)
    if nrows > len(S):
        return False
    rows = collocation_rows(grid, A, S.sorted_points)
    return rank(rows) == nrows


# ---------------------------------------------------------------------------
# randomized almost-regularity probe

class ProbeOutcome(str, enum.Enum):
    ALMOST_REGULAR = "AlmostRegular"
    PROBABLY_NOT_ALMOST_REGULAR = "ProbablyNotAlmostRegular"


@dataclass(frozen=True)
class ProbeVerdict:
    outcome: ProbeOutcome
    witness: NodeGrid | None
    trials_run: int
    seed: int
    determinant: Fraction | None = field(default=None, compare=False)


def random_grid(rng: random.Random, p: int, q: int, value_range: int) -> NodeGrid:
    """Grid with distinct integer coordinates drawn uniformly from ``[-range, range]``."""
    values = range(-value_range, value_range + 1)
    if len(values) < max(p, q) + 1:
        raise SchemeError(
            f"range {value_range} cannot supply {max(p, q) + 1} distinct coordinates"
        )
    return NodeGrid(rng.sample(values, p + 1), rng.sample(values, q + 1))


def trial_rng(seed: int, trial: int) -> random.Random:
    # independent substream per trial index, stable across runs and processes
    return random.Random(f"probe:{seed}:{trial}")


def probe_almost_regular(A, S: LowerSet, p: int, q: int, trials: int = 20,
                         seed: int = 0, value_range: int = 1000) -> ProbeVerdict:
    """Search random integer grids for a nonzero determinant.

    A nonzero determinant proves almost regularity.  If every trial vanishes the
    verdict is only evidence, hence ``ProbablyNotAlmostRegular``.
    """
    A = as_derivative_set(A)
    if 2 * value_range + 1 < max(p, q) + 1:
        raise SchemeError(
            f"range {value_range} cannot supply {max(p, q) + 1} distinct coordinates"
        )
    if not is_normal(A, S, p, q):
        raise NotNormalError(f"|S| = {len(S)} but |Z||A| = {(p + 1) * (q + 1) * len(A)}")
    for t in range(trials):
        grid = random_grid(trial_rng(seed, t), p, q, value_range)
        d = scheme_determinant(grid, A, S)
        if d != 0:
            return ProbeVerdict(ProbeOutcome.ALMOST_REGULAR, grid, t + 1, seed, d)
    return ProbeVerdict(ProbeOutcome.PROBABLY_NOT_ALMOST_REGULAR, None, trials, seed)


# ---------------------------------------------------------------------------
# solving

def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(M)
    a = [list(row) + [b] for row, b in zip(M, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise NotRegularError("collocation matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n] for row in a]


def solve(grid: NodeGrid, A, S: LowerSet,
          data: Mapping[tuple[NodeIndex, Point], object]) -> SparsePolynomial:
    """The unique ``P`` in ``P_S`` with prescribed derivative values.

    ``data`` maps ``((s, t), (u, v))`` (node indices, derivative order) to a
    value; missing entries are zero.
    """
    A = as_derivative_set(A)
    M = build_matrix(grid, A, S)
    known = {(tuple(k[0]), tuple(k[1])) for k in data}
    valid = {(idx, d) for idx, _ in grid.nodes() for d in A}
    stray = known - valid
    if stray:
        raise SchemeError(f"data keys outside the scheme: {sorted(stray)}")
    rhs = [
        to_rational(data.get((idx, d), 0))
        for idx, _ in grid.nodes() for d in A
    ]
    coeffs = _solve_square(M, rhs)
    return SparsePolynomial(dict(zip(S.sorted_points, coeffs)))


def residuals(grid: NodeGrid, A, P: SparsePolynomial,
              data: Mapping[tuple[NodeIndex, Point], object]) -> dict:
    """Nonzero differences between ``P``'s derivatives at the nodes and the data."""
    A = as_derivative_set(A)
    out = {}
    for idx, (x, y) in grid.nodes():
        for d in A:
            r = P.derivative_at(d[0], d[1], x, y) - to_rational(data.get((idx, d), 0))
            if r:
                out[(idx, d)] = r
    return out
