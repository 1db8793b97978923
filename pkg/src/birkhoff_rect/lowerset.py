"""Lower sets in the nonnegative integer lattice (staircase shapes).

A lower set ``S`` is a finite set of pairs ``(x, y)`` with ``x, y >= 0`` that is
closed under componentwise decrease.  Points are plain ``(int, int)`` tuples.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

Point = tuple[int, int]

DEFAULT_ENUM_BOUND = 24


class Axis(str, enum.Enum):
    X = "x"
    Y = "y"


class LowerSetError(ValueError):
    """Raised for inputs that do not describe a lower set."""


class EnumerationBoundError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the configured size bound."""


def is_lower(points: Iterable[Point]) -> bool:
    pts = set(points)
    for x, y in pts:
        if x < 0 or y < 0:
            return False
        # checking the two lower neighbours is enough by induction
        if x > 0 and (x - 1, y) not in pts:
            return False
        if y > 0 and (x, y - 1) not in pts:
            return False
    return True


class LowerSet:
    """An immutable lower set.

    Equality and hashing are set equality.  Iteration is lexicographic by
    ``(x, y)``, which is the canonical column order used by collocation
    matrices.
    """

    __slots__ = ("points", "_sorted", "_heights", "__weakref__")

    def __init__(self, points: Iterable[Point] = ()):
        pts = frozenset((int(x), int(y)) for x, y in points)
        if not is_lower(pts):
            raise LowerSetError(f"not a lower set: {sorted(pts)}")
        self.points: frozenset[Point] = pts
        self._sorted: tuple[Point, ...] = tuple(sorted(pts))
        heights: list[int] = []
        for x, y in self._sorted:
            if x == len(heights):
                heights.append(y)
            else:
                heights[x] = y
        self._heights = tuple(heights)

    @classmethod
    def _trusted(cls, pts: frozenset[Point]) -> "LowerSet":
        # internal constructor for sets that are lower by construction
        obj = cls.__new__(cls)
        obj.points = pts
        obj._sorted = tuple(sorted(pts))
        heights: list[int] = []
        for x, y in obj._sorted:
            if x == len(heights):
                heights.append(y)
            else:
                heights[x] = y
        obj._heights = tuple(heights)
        return obj

    def __iter__(self) -> Iterator[Point]:
        return iter(self._sorted)

    def __len__(self) -> int:
        return len(self._sorted)

    def __contains__(self, pt: object) -> bool:
        return pt in self.points

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LowerSet):
            return self.points == other.points
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.points)

    def __le__(self, other: "LowerSet") -> bool:
        return self.points <= other.points

    def __lt__(self, other: "LowerSet") -> bool:
        return self.points < other.points

    def __repr__(self) -> str:
        if not self._heights:
            return "LowerSet()"
        return f"S_y{self._heights}"

    @property
    def sorted_points(self) -> tuple[Point, ...]:
        return self._sorted

    @property
    def heights(self) -> tuple[int, ...]:
        """Column heights ``(n_0, ..., n_s)``: column ``i`` is ``{0, ..., n_i}``."""
        return self._heights

    @property
    def width(self) -> int:
        return len(self._heights)

    @property
    def height(self) -> int:
        return self._heights[0] + 1 if self._heights else 0

    def transpose(self) -> "LowerSet":
        return LowerSet._trusted(frozenset((y, x) for x, y in self.points))

    def union(self, other: "LowerSet") -> "LowerSet":
        return LowerSet._trusted(self.points | other.points)

    def intersection(self, other: "LowerSet") -> "LowerSet":
        return LowerSet._trusted(self.points & other.points)

    @cached_property
    def index(self) -> dict[Point, int]:
        return {pt: k for k, pt in enumerate(self._sorted)}


# ---------------------------------------------------------------------------
# constructors

def rectangle(u: int, v: int) -> LowerSet:
    """``R(u, v) = {(i, j) : i <= u, j <= v}``."""
    if u < 0 or v < 0:
        return LowerSet()
    return LowerSet._trusted(frozenset((i, j) for i in range(u + 1) for j in range(v + 1)))


def triangle(n: int) -> LowerSet:
    """``T(n) = {(i, j) : i + j <= n}``."""
    return LowerSet._trusted(
        frozenset((i, j) for i in range(n + 1) for j in range(n + 1 - i))
    )


def make_lower_from_columns(heights: Sequence[int]) -> LowerSet:
    """Build ``S_y(n_0, ..., n_s)``; the heights must be non-increasing and >= 0."""
    hs = [int(h) for h in heights]
    for k, h in enumerate(hs):
        if h < 0:
            raise LowerSetError(f"column height {h} at index {k} is negative")
        if k and h > hs[k - 1]:
            raise LowerSetError(f"column heights {hs} are not non-increasing")
    return LowerSet._trusted(frozenset((i, j) for i, h in enumerate(hs) for j in range(h + 1)))


def from_rows(widths: Sequence[int]) -> LowerSet:
    """Build ``S_x(m_0, ..., m_t)``: row ``j`` is ``{0, ..., m_j}``."""
    return make_lower_from_columns(widths).transpose()


def from_corners(corners: Iterable[Point]) -> LowerSet:
    """Union of the rectangles ``R(u, v)`` over an antichain of corners."""
    cs = sorted((int(u), int(v)) for u, v in corners)
    for (u0, v0), (u1, v1) in zip(cs, cs[1:]):
        if u0 == u1 or v1 >= v0:
            raise LowerSetError(f"corners {cs} do not form an antichain")
    if any(u < 0 or v < 0 for u, v in cs):
        raise LowerSetError(f"corners {cs} leave the first quadrant")
    pts: set[Point] = set()
    for u, v in cs:
        pts.update((i, j) for i in range(u + 1) for j in range(v + 1))
    return LowerSet._trusted(frozenset(pts))


def lower_closure(points: Iterable[Point]) -> LowerSet:
    """Smallest lower set containing ``points``."""
    pts: set[Point] = set()
    for u, v in points:
        if u < 0 or v < 0:
            raise LowerSetError(f"point {(u, v)} leaves the first quadrant")
        pts.update((i, j) for i in range(u + 1) for j in range(v + 1))
    return LowerSet._trusted(frozenset(pts))


def largest_lower_subset(points: Iterable[Point]) -> LowerSet:
    """The union of all lower subsets of ``points`` (itself lower)."""
    pts = set(points)
    keep = {
        (u, v) for u, v in pts
        if all((i, j) in pts for i in range(u + 1) for j in range(v + 1))
    }
    return LowerSet._trusted(frozenset(keep))


# ---------------------------------------------------------------------------
# representations

def profiles(S: LowerSet, axis: Axis | str) -> tuple[int, ...]:
    """Y-profile ``(n_0..n_s)`` or X-profile ``(m_0..m_t)`` with ``m_j = max{i : n_i >= j}``."""
    axis = Axis(axis)
    ns = S.heights
    if axis is Axis.Y:
        return ns
    if not ns:
        return ()
    return tuple(max(i for i, n in enumerate(ns) if n >= j) for j in range(ns[0] + 1))


def slice(B: Iterable[Point], axis: Axis | str, index: int) -> frozenset[int]:  # noqa: A001
    """Fibre of ``B`` over ``index``.

    ``slice(B, Y, a)`` is ``{b : (a, b) in B}`` (a column) and
    ``slice(B, X, b)`` is ``{a : (a, b) in B}`` (a row).
    """
    axis = Axis(axis)
    if axis is Axis.Y:
        return frozenset(b for a, b in B if a == index)
    return frozenset(a for a, b in B if b == index)


@dataclass(frozen=True)
class BoundaryPartition:
    exterior: frozenset[Point]
    interior: frozenset[Point]
    xdir: frozenset[Point]
    ydir: frozenset[Point]

    @property
    def boundary(self) -> frozenset[Point]:
        return self.exterior | self.interior | self.xdir | self.ydir


def boundary_partition(S: LowerSet) -> BoundaryPartition:
    if not len(S):
        raise LowerSetError("the empty set has no boundary")
    ext, inte, xd, yd = set(), set(), set(), set()
    pts = S.points
    for u, v in S:
        if (u + 1, v + 1) in pts:
            continue
        up = (u, v + 1) in pts
        right = (u + 1, v) in pts
        if up and right:
            inte.add((u, v))
        elif right:
            xd.add((u, v))
        elif up:
            yd.add((u, v))
        else:
            ext.add((u, v))
    return BoundaryPartition(frozenset(ext), frozenset(inte), frozenset(xd), frozenset(yd))


def exterior_corners(S: LowerSet) -> list[Point]:
    """Exterior boundary points by decreasing x: ``(a_k, b_1), ..., (a_1, b_k)``."""
    if not len(S):
        raise LowerSetError("the empty set has no corners")
    hs = S.heights
    corners = [(i, h) for i, h in enumerate(hs) if i + 1 == len(hs) or hs[i + 1] < h]
    return corners[::-1]


# ---------------------------------------------------------------------------
# blow-up and collapse

def blow_up(S: LowerSet, p: int, q: int) -> LowerSet:
    """Replace every point of ``S`` by a ``(p+1) x (q+1)`` block.

    Pointwise: ``(a, b)`` belongs to the result iff ``(a // (p+1), b // (q+1))``
    belongs to ``S``.
    """
    if p < 0 or q < 0:
        raise ValueError("p and q must be nonnegative")
    w, h = p + 1, q + 1
    return LowerSet._trusted(frozenset(
        (w * i + di, h * j + dj)
        for i, j in S.points for di in range(w) for dj in range(h)
    ))


def blown_up_heights(heights: Sequence[int], p: int, q: int) -> tuple[int, ...]:
    """Column heights of a blow-up: each column repeated ``p+1`` times with height ``(q+1)(n+1)-1``."""
    return tuple((q + 1) * (n + 1) - 1 for n in heights for _ in range(p + 1))


def collapse(S: LowerSet, p: int, q: int) -> LowerSet:
    """``{(a, b) : ((p+1) a, (q+1) b) in S}``, the inverse of :func:`blow_up`."""
    w, h = p + 1, q + 1
    return LowerSet._trusted(frozenset(
        (x // w, y // h) for x, y in S.points if x % w == 0 and y % h == 0
    ))


def grid_points(S: Iterable[Point], p: int, q: int) -> list[Point]:
    """Points of ``S`` on the dilated lattice ``{((p+1) i, (q+1) j)}``, sorted."""
    return sorted((x, y) for x, y in S if x % (p + 1) == 0 and y % (q + 1) == 0)


def grid_count(L: Iterable[Point], p: int, q: int) -> int:
    return len(grid_points(L, p, q))


# ---------------------------------------------------------------------------
# enumeration

def enumerate_lower_subsets(S: LowerSet, bound: int = DEFAULT_ENUM_BOUND) -> Iterator[LowerSet]:
    """Yield every lower subset of ``S`` exactly once (including the empty set and ``S``)."""
    if len(S) > bound:
        raise EnumerationBoundError(
            f"|S| = {len(S)} exceeds the enumeration bound {bound}; "
            "use the matching-based grid check instead"
        )
    for hs in _height_vectors(S.heights):
        yield make_lower_from_columns(hs)


def _height_vectors(caps: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    def rec(i: int, prev: int, acc: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        yield acc
        if i == len(caps):
            return
        for h in range(min(prev, caps[i]) + 1):
            yield from rec(i + 1, h, acc + (h,))

    yield from rec(0, caps[0] if caps else -1, ())


@lru_cache(maxsize=4096)
def cached_lower_subsets(S: LowerSet, bound: int = DEFAULT_ENUM_BOUND) -> tuple[LowerSet, ...]:
    return tuple(enumerate_lower_subsets(S, bound))


def lower_sets_of_size(n: int) -> Iterator[LowerSet]:
    """All lower sets with exactly ``n`` points (partitions of ``n``)."""
    def parts(rem: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, cap), 0, -1):
            for rest in parts(rem - first, first):
                yield (first,) + rest

    for cols in parts(n, n):
        yield make_lower_from_columns([c - 1 for c in cols])
