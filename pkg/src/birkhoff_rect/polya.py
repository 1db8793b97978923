"""Necessary conditions for regularity and the shift machinery.

Counting conditions quantify over all lower subsets ``L`` of ``S``:

* classical:    ``n |L & A| >= |L|``
* rectangular:  ``n |A & L| >= |L| + pq|A & dL| + (p+q)|A & d_e L| + p|A & d_y L| + q|A & d_x L|``
* grid:         ``|L & A| >= n_{p,q}(L)`` (points of ``L`` on the dilated lattice)

The grid condition is decided without enumeration through a bipartite
matching between the dilated lattice points of ``S`` and the elements of ``A``
(Hall's theorem); the enumerating variant is kept as an independent oracle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .lowerset import (
    DEFAULT_ENUM_BOUND,
    Axis,
    LowerSet,
    Point,
    boundary_partition,
    blow_up,
    cached_lower_subsets,
    grid_points,
    largest_lower_subset,
    lower_closure,
    lower_sets_of_size,
    rectangle,
    slice,
)
from .matching import hall_violator, hopcroft_karp
from .scheme import as_derivative_set
from .univariate import polya_1d


@dataclass(frozen=True)
class Violation:
    condition: str
    witness: object
    detail: str = ""


@dataclass
class ConditionReport:
    """Outcome of one or more necessary-condition checks.

    ``conjectural`` marks reports whose necessity for regularity is only
    conjectured for the given ``(p, q)``; such a failure is evidence, not proof.
    """

    violations: list[Violation] = field(default_factory=list)
    conjectural: bool = False
    checked: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def merge(self, other: "ConditionReport") -> "ConditionReport":
        return ConditionReport(
            self.violations + other.violations,
            self.conjectural or other.conjectural,
            self.checked + other.checked,
        )


def _witness_key(v: Violation):
    w = v.witness
    if isinstance(w, LowerSet):
        return (0, len(w), w.sorted_points)
    return (1, 0, ())


def _report(name: str, violations: list[Violation], conjectural: bool = False) -> ConditionReport:
    return ConditionReport(sorted(violations, key=_witness_key), conjectural, [name])


def _count_in(A: frozenset, L: LowerSet) -> int:
    return len(A & L.points)


@lru_cache(maxsize=65536)
def _boundary_counts_key(L: LowerSet):
    return boundary_partition(L)


# ---------------------------------------------------------------------------
# counting conditions

def classical_polya(A, S: LowerSet, n: int, bound: int = DEFAULT_ENUM_BOUND) -> ConditionReport:
    """``n |L & A| >= |L|`` for every lower ``L`` inside ``S``."""
    Ap = as_derivative_set(A).points
    bad = []
    for L in cached_lower_subsets(S, bound):
        lhs = n * _count_in(Ap, L)
        if lhs < len(L):
            bad.append(Violation("classical_polya", L, f"{n}*|L&A| = {lhs} < |L| = {len(L)}"))
    return _report("classical_polya", bad)


def rectangular_rhs(A: frozenset, L: LowerSet, p: int, q: int) -> int:
    if not len(L):
        return 0
    bp = _boundary_counts_key(L)
    return (
        len(L)
        + p * q * len(A & bp.boundary)
        + (p + q) * len(A & bp.exterior)
        + p * len(A & bp.ydir)
        + q * len(A & bp.xdir)
    )


def rectangular_polya(A, S: LowerSet, p: int, q: int, bound: int = DEFAULT_ENUM_BOUND) -> ConditionReport:
    """Boundary-strengthened counting inequality for ``(p, q)``-rectangular nodes."""
    Ap = as_derivative_set(A).points
    n = (p + 1) * (q + 1)
    bad = []
    for L in cached_lower_subsets(S, bound):
        lhs = n * _count_in(Ap, L)
        rhs = rectangular_rhs(Ap, L, p, q)
        if lhs < rhs:
            bad.append(Violation("rectangular_polya", L, f"{lhs} < {rhs}"))
    return _report("rectangular_polya", bad)


@lru_cache(maxsize=65536)
def _lattice_points(S: LowerSet, p: int, q: int) -> tuple[Point, ...]:
    return tuple(grid_points(S, p, q))


def _grid_graph(A, S: LowerSet, p: int, q: int) -> dict[Point, list[Point]]:
    Asorted = list(as_derivative_set(A))
    return {
        g: [a for a in Asorted if a[0] <= g[0] and a[1] <= g[1]]
        for g in _lattice_points(S, p, q)
    }


def grid_matching(A, S: LowerSet, p: int, q: int) -> tuple[dict[Point, list[Point]], dict[Point, Point]]:
    adj = _grid_graph(A, S, p, q)
    return adj, hopcroft_karp(adj)


def grid_polya(A, S: LowerSet, p: int, q: int) -> ConditionReport:
    """``|L & A| >= n_{p,q}(L)`` for all lower ``L`` in ``S``, via matching.

    On failure the witness is the lower closure of a Hall violator.
    """
    A = as_derivative_set(A)
    adj, match = grid_matching(A, S, p, q)
    conj = not (p == 1 and q == 1)
    if len(match) == len(adj):
        return _report("grid_polya", [], conj)
    X = hall_violator(adj, match)
    L = lower_closure(X)
    detail = f"|L&A| = {_count_in(A.points, L)} < n_pq(L) = {len(grid_points(L, p, q))}"
    return _report("grid_polya", [Violation("grid_polya", L, detail)], conj)


def grid_polya_bruteforce(A, S: LowerSet, p: int, q: int, bound: int = DEFAULT_ENUM_BOUND) -> ConditionReport:
    Ap = as_derivative_set(A).points
    bad = []
    for L, Lp, ng in _lower_subsets_with_grid_counts(S, p, q, bound):
        have = len(Ap & Lp)
        if have < ng:
            bad.append(Violation("grid_polya", L, f"|L&A| = {have} < n_pq(L) = {ng}"))
    return _report("grid_polya_bruteforce", bad, not (p == 1 and q == 1))


@lru_cache(maxsize=4096)
def _lower_subsets_with_grid_counts(S: LowerSet, p: int, q: int, bound: int):
    return tuple((L, L.points, len(grid_points(L, p, q))) for L in cached_lower_subsets(S, bound))


# ---------------------------------------------------------------------------
# shifts

class Direction(str, enum.Enum):
    UP = "up"
    RIGHT = "right"


@dataclass(frozen=True)
class ShiftMove:
    source: Point
    target: Point
    direction: Direction


@dataclass(frozen=True)
class ShiftPlan:
    moves: tuple[ShiftMove, ...] = ()

    def __len__(self) -> int:
        return len(self.moves)


class ShiftError(ValueError):
    pass


def _path(a: Point, g: Point) -> list[Point]:
    """Monotone path from ``a`` to ``g``: all right steps, then all up steps."""
    pts = [(x, a[1]) for x in range(a[0], g[0] + 1)]
    pts += [(g[0], y) for y in range(a[1] + 1, g[1] + 1)]
    return pts


def _steps(path: list[Point]) -> list[ShiftMove]:
    out = []
    for s, t in zip(path, path[1:]):
        out.append(ShiftMove(s, t, Direction.RIGHT if t[0] == s[0] + 1 else Direction.UP))
    return out


def find_shift_to_grid(A, S: LowerSet, p: int, q: int) -> ShiftPlan | None:
    """A collision-free sequence of unit up/right moves inside ``S`` carrying ``A`` onto the dilated lattice points of ``S``.

    Returns ``None`` when the grid condition fails (no such shift exists).
    """
    A = as_derivative_set(A)
    targets = _lattice_points(S, p, q)
    if len(A) != len(targets):
        raise ShiftError(f"|A| = {len(A)} differs from the {len(targets)} lattice points of S")
    if not A.points <= S.points:
        raise ShiftError("A is not contained in S")
    adj, match = grid_matching(A, S, p, q)
    if len(match) != len(adj):
        return None
    occupied = set(A.points)
    pending = {g: a for g, a in match.items() if g != a}
    moves: list[ShiftMove] = []
    while pending:
        g = max(t for t in pending if t not in occupied)
        a = pending.pop(g)
        path = _path(a, g)
        # tokens already on the path hand the move on to the next one
        stops = [k for k, pt in enumerate(path) if pt in occupied]
        stops.append(len(path) - 1)
        for lo, hi in reversed(list(zip(stops, stops[1:]))):
            moves.extend(_steps(path[lo:hi + 1]))
        occupied.discard(a)
        occupied.add(g)
    return ShiftPlan(tuple(moves))


def verify_shift(A, S: LowerSet, plan: ShiftPlan, p: int | None = None, q: int | None = None) -> bool:
    """Replay ``plan``; with ``p, q`` given also require the final set to be the lattice points of ``S``."""
    occ = set(as_derivative_set(A).points)
    if not occ <= S.points:
        return False
    for mv in plan.moves:
        s, t = mv.source, mv.target
        if s not in occ or t in occ or t not in S:
            return False
        step = (t[0] - s[0], t[1] - s[1])
        expected = (1, 0) if mv.direction == Direction.RIGHT else (0, 1)
        if step != expected:
            return False
        occ.remove(s)
        occ.add(t)
    if p is not None and q is not None:
        return occ == set(_lattice_points(S, p, q))
    return True


def _dominated_perfect_matching(A: Iterable[Point], R: LowerSet) -> bool:
    adj = {a: [r for r in R if r[0] <= a[0] and r[1] <= a[1]] for a in A}
    return len(hopcroft_karp(adj)) == len(adj)


def inverse_shift_candidates(A, p: int, q: int, bound: int = 12) -> list[tuple[LowerSet, LowerSet]]:
    """Lower sets ``R`` reachable from ``A`` by inverse shifts, paired with ``R^{p,q}``.

    An inverse shift moves one element a unit step down or left onto a free
    lattice point.  ``R`` is reachable exactly when ``A`` matches onto ``R``
    with every element sent to a point below-left of it.  Candidates only.
    """
    A = as_derivative_set(A)
    if len(A) > bound:
        raise ShiftError(f"|A| = {len(A)} exceeds the search bound {bound}")
    down = lower_closure(A)
    out = []
    for R in lower_sets_of_size(len(A)):
        if R.points <= down.points and _dominated_perfect_matching(A, R):
            out.append((R, blow_up(R, p, q)))
    out.sort(key=lambda pair: pair[0].sorted_points)
    return out


# ---------------------------------------------------------------------------
# structural conditions

def _mixed_bound_ok(total: int, mixed: int) -> bool:
    # sqrt(mixed) <= sqrt(total) - 1  <=>  total - mixed - 1 >= 2 sqrt(mixed)
    slack = total - mixed - 1
    return slack >= 0 and slack * slack >= 4 * mixed


def structural_necessary(A, S: LowerSet, p: int, q: int) -> ConditionReport:
    """Theorem-backed structural conditions on ``(A, S)`` for ``(p, q)``-rectangular nodes.

    * ``axis_product``: ``|A| <= |A_x| |A_y|``; on equality ``S`` is ``R(p', q')``
    * ``mixed_bound``: ``sqrt(mix(A)) <= sqrt(|A|) - 1``
    * ``axes_slices``: rows ``0..q`` are ``{0..p'}``, columns ``0..p`` are ``{0..q'}``
    * ``lower_containment``: the blow-up of the largest lower subset of ``A`` lies in ``S``
    * ``axis_polya``: the axis orders satisfy the univariate Polya condition

    with ``p' = (p+1)|A_x| - 1`` and ``q' = (q+1)|A_y| - 1``.
    """
    A = as_derivative_set(A)
    nx, ny, nm = len(A.x_axis), len(A.y_axis), len(A.mixed)
    pp = (p + 1) * nx - 1
    qq = (q + 1) * ny - 1
    bad: list[Violation] = []
    if len(A) > nx * ny:
        bad.append(Violation("axis_product", {"|A|": len(A), "|A_x|": nx, "|A_y|": ny},
                             f"|A| = {len(A)} > |A_x||A_y| = {nx * ny}"))
    elif len(A) == nx * ny and S != rectangle(pp, qq):
        bad.append(Violation("axis_product", {"required": [pp, qq]},
                             f"|A| = |A_x||A_y| forces S = R({pp}, {qq})"))
    if not _mixed_bound_ok(len(A), nm):
        bad.append(Violation("mixed_bound", {"mix": nm, "|A|": len(A)},
                             f"sqrt({nm}) > sqrt({len(A)}) - 1"))
    row = frozenset(range(pp + 1))
    col = frozenset(range(qq + 1))
    for j in range(q + 1):
        if slice(S, Axis.X, j) != row:
            bad.append(Violation("axes_slices", {"row": j, "expected_max": pp},
                                 f"row {j} of S is not {{0..{pp}}}"))
    for i in range(p + 1):
        if slice(S, Axis.Y, i) != col:
            bad.append(Violation("axes_slices", {"column": i, "expected_max": qq},
                                 f"column {i} of S is not {{0..{qq}}}"))
    core = largest_lower_subset(A.points)
    missing = blow_up(core, p, q).points - S.points
    if missing:
        bad.append(Violation("lower_containment", {"lower_part": sorted(core), "missing": sorted(missing)},
                             f"S misses {len(missing)} points of the blow-up of A's lower part"))
    if not polya_1d([a for a, _ in A.x_axis], p + 1):
        bad.append(Violation("axis_polya", {"axis": "x", "orders": [a for a, _ in A.x_axis]},
                             f"x-axis orders fail a_i <= {p + 1} i"))
    if not polya_1d([b for _, b in A.y_axis], q + 1):
        bad.append(Violation("axis_polya", {"axis": "y", "orders": [b for _, b in A.y_axis]},
                             f"y-axis orders fail b_j <= {q + 1} j"))
    return ConditionReport(bad, False, ["structural_necessary"])


def mixed_count_bound(total: int) -> int:
    """Largest mixed count allowed for ``|A| = total``."""
    allowed = [m for m in range(total + 1) if _mixed_bound_ok(total, m)]
    return max(allowed) if allowed else -1
