"""Node shapes, reductions to univariate schemes, and the decision pipeline.

``decide`` answers the question "is ``(A, S)`` (almost) regular for
``(p, q)``-rectangular nodes?" by trying exact criteria first and falling back
to a randomized determinant probe.  Every step it takes is recorded in a
``ReductionTrace`` whose entries carry the name of the result they rely on.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .lowerset import (
    DEFAULT_ENUM_BOUND,
    Axis,
    LowerSet,
    LowerSetError,
    Point,
    blow_up,
    is_lower,
    make_lower_from_columns,
    from_rows,
    rectangle,
    slice,
)
from .polya import (
    ConditionReport,
    classical_polya,
    grid_polya,
    rectangular_polya,
    structural_necessary,
)
from .scheme import (
    DerivativeSet,
    NodeGrid,
    NotNormalError,
    SchemeError,
    as_derivative_set,
    is_normal,
    is_regular_at,
    probe_almost_regular,
    scheme_determinant,
    to_rational,
)
from .univariate import UnivariateScheme, a_max, det_1d, polya_1d

# Each rule the pipeline can apply, with the published result it rests on.
RULES: dict[str, str] = {
    "normality": "normality |S| = |Z||A|",
    "structural": "Proposition 3.1, Theorem 3.3, Theorem 3.5, Theorem 3.6 (i)",
    "classical_polya": "classical Polya inequality",
    "rectangular_polya": "strengthened Polya inequality for rectangular nodes",
    "grid_polya": "Theorem 3.14",
    "grid_polya_conjectural": "Conjecture 3.12",
    "lower_derivatives": "Theorem 3.4",
    "no_mixed": "Corollary 3.7",
    "one_mixed": "Corollary 3.8",
    "rectangular_reduction": "Theorem 3.2",
    "move_axis": "Theorem 3.6 (ii)",
    "strip_removal": "Theorem 3.6 (iii)",
    "canonical_grid": "Theorem 3.14",
    "probe": "randomized determinant probe",
    "grid_check": "exact determinant at the supplied grid",
}


class NotApplicableError(SchemeError):
    """A reduction was asked for on a scheme outside its hypotheses."""


class RefusedError(SchemeError):
    """A reduction's side conditions do not hold, so it cannot be applied."""


# ---------------------------------------------------------------------------
# node sets and shapes

@dataclass(frozen=True)
class NodeSet:
    points: frozenset[tuple[Fraction, Fraction]]

    def __init__(self, points: Iterable):
        pts = [(to_rational(x), to_rational(y)) for x, y in points]
        if len(set(pts)) != len(pts):
            raise SchemeError("nodes are not pairwise distinct")
        object.__setattr__(self, "points", frozenset(pts))

    @classmethod
    def from_grid(cls, grid: NodeGrid) -> "NodeSet":
        return cls(pt for _, pt in grid.nodes())

    def __len__(self) -> int:
        return len(self.points)


def node_shape(zset: NodeSet | Iterable, axis: Axis | str) -> LowerSet:
    """``S_y(Z)`` (axis Y: group by x) or ``S_x(Z)`` (axis X: group by y).

    Both are returned in the same orientation, columns indexed by x.
    """
    pts = zset.points if isinstance(zset, NodeSet) else list(zset)
    if not pts:
        raise SchemeError("node shape of an empty set")
    axis = Axis(axis)
    key = 0 if axis is Axis.Y else 1
    sizes = sorted(Counter(pt[key] for pt in pts).values(), reverse=True)
    heights = [c - 1 for c in sizes]
    return make_lower_from_columns(heights) if axis is Axis.Y else from_rows(heights)


def is_cartesian(zset: NodeSet | Iterable) -> bool:
    return node_shape(zset, Axis.X) == node_shape(zset, Axis.Y)


def _rectangular_shape(A: DerivativeSet) -> tuple[int, int] | None:
    """``(s, t)`` when ``S_y(A) = R(s, t)``, else ``None``."""
    shape = node_shape(A.points, Axis.Y)
    hs = shape.heights
    if len(set(hs)) == 1:
        return len(hs) - 1, hs[0]
    return None


def _projection(A: DerivativeSet) -> list[int]:
    return sorted({a for a, _ in A})


def _column(A: DerivativeSet, alpha: int) -> list[int]:
    return sorted(slice(A.points, Axis.Y, alpha))


def _row0(S: LowerSet) -> int:
    """Number of points of ``S`` on the x axis."""
    return len(slice(S.points, Axis.X, 0))


def _describe(A, S: LowerSet) -> str:
    return f"A={list(as_derivative_set(A))} S={S!r}"


# ---------------------------------------------------------------------------
# rectangular reduction

@dataclass(frozen=True)
class RectangularReduction:
    required_shape: LowerSet
    shape_ok: bool
    x_scheme: UnivariateScheme
    y_schemes: tuple[tuple[int, UnivariateScheme], ...]

    @property
    def univariate_schemes(self) -> list[UnivariateScheme]:
        return [self.x_scheme] + [s for _, s in self.y_schemes]

    def is_regular(self) -> bool:
        return self.shape_ok and all(det_1d(u) != 0 for u in self.univariate_schemes)


def _require_rectangular(A: DerivativeSet) -> tuple[int, int]:
    st = _rectangular_shape(A)
    if st is None:
        raise NotApplicableError(f"S_y(A) = {node_shape(A.points, Axis.Y)!r} is not a rectangle")
    return st


def reduce_rectangular(grid: NodeGrid, A, S: LowerSet) -> RectangularReduction:
    """Split a scheme whose ``S_y(A)`` is a rectangle ``R(s, t)`` into univariate schemes.

    The x scheme uses the distinct first coordinates of ``A``; one y scheme is
    built per such coordinate ``alpha`` from the column of ``A`` above it.  The
    scheme is regular at ``grid`` exactly when ``S`` equals the required
    rectangle and every univariate scheme is regular at the grid's axis nodes.
    """
    A = as_derivative_set(A)
    s, t = _require_rectangular(A)
    p, q = grid.p, grid.q
    pp, qq = (s + 1) * (p + 1) - 1, (t + 1) * (q + 1) - 1
    required = rectangle(pp, qq)
    xs = UnivariateScheme(grid.xs, _projection(A), pp)
    ys = tuple((al, UnivariateScheme(grid.ys, _column(A, al), qq)) for al in _projection(A))
    return RectangularReduction(required, S == required, xs, ys)


# ---------------------------------------------------------------------------
# axis moves and strip removal

def _axis_orders(A: DerivativeSet, axis: Axis) -> list[int]:
    return [a for a, _ in A.x_axis] if axis is Axis.X else [b for _, b in A.y_axis]


def _replace_axis(A: DerivativeSet, axis: Axis, positions: Iterable[int]) -> DerivativeSet:
    if axis is Axis.X:
        keep = [pt for pt in A if pt[1] != 0]
        return DerivativeSet(keep + [(a, 0) for a in positions])
    keep = [pt for pt in A if pt[0] != 0]
    return DerivativeSet(keep + [(0, b) for b in positions])


def _axis_nodes_and_n(axis: Axis, grid: NodeGrid | None, p: int, q: int):
    if axis is Axis.X:
        return (grid.xs if grid else None), p + 1
    return (grid.ys if grid else None), q + 1


def _axis_length(S: LowerSet, axis: Axis) -> int:
    return _row0(S) if axis is Axis.X else len(slice(S.points, Axis.Y, 0))


def _univariate_ok(orders: Sequence[int], nodes, n: int, length: int) -> bool:
    """Regular at ``nodes`` when given, otherwise almost regular (univariate Polya)."""
    if len(orders) * n != length:
        return False
    if nodes is None:
        return polya_1d(orders, n)
    return det_1d(UnivariateScheme(nodes, orders, length - 1)) != 0


def move_axis(A, axis: Axis | str, new_positions: Iterable[int], grid: NodeGrid | None,
              S: LowerSet, p: int | None = None, q: int | None = None,
              trace: "ReductionTrace | None" = None) -> DerivativeSet:
    """Replace the elements of ``A`` on one axis by ``new_positions``.

    Refused unless the univariate scheme with the new positions is regular at
    the grid's axis nodes (or satisfies the univariate Polya condition when no
    grid is given).  The origin lies on both axes, so the new positions must
    contain 0.
    """
    A = as_derivative_set(A)
    axis = Axis(axis)
    if grid is not None:
        p, q = grid.p, grid.q
    if p is None or q is None:
        raise SchemeError("move_axis needs a grid or explicit (p, q)")
    new = sorted(set(int(v) for v in new_positions))
    old = _axis_orders(A, axis)
    if len(new) != len(old):
        raise RefusedError(f"{len(new)} new positions for {len(old)} axis elements")
    if (0 in old) != (0 in new):
        raise RefusedError("the origin lies on both axes and cannot be moved")
    nodes, n = _axis_nodes_and_n(axis, grid, p, q)
    if not _univariate_ok(new, nodes, n, _axis_length(S, axis)):
        raise RefusedError(f"univariate scheme with orders {new} is not regular")
    out = _replace_axis(A, axis, new)
    if trace is not None:
        trace.add("move_axis", _describe(A, S), _describe(out, S),
                  f"{axis.value}-axis orders {old} -> {new}")
    return out


def strip_removal(A, S: LowerSet, axis: Axis | str, p: int, q: int,
                  grid: NodeGrid | None = None, element: int | None = None) -> tuple[DerivativeSet, LowerSet]:
    """Remove one axis element of ``A`` together with the last ``(p, q)``-block strip of ``S``.

    For the X axis the last ``p+1`` points of each row ``0..q`` are dropped
    (columns for the Y axis).  ``element`` defaults to the largest axis order.
    Refused unless the new ``S`` is lower and both univariate axis schemes are
    regular (at the grid when one is given, almost regular otherwise).
    """
    A = as_derivative_set(A)
    axis = Axis(axis)
    if axis is Axis.Y:
        At, St = strip_removal(A.transpose(), S.transpose(), Axis.X, q, p,
                               grid.transpose() if grid else None, element)
        return At.transpose(), St.transpose()
    orders = _axis_orders(A, Axis.X)
    if element is None:
        element = orders[-1]
    if element not in orders:
        raise RefusedError(f"{element} is not an x-axis order of A")
    if element == 0 or len(A) == 1:
        raise RefusedError("the origin cannot be removed")
    removed = set()
    for j in range(q + 1):
        row = sorted(slice(S.points, Axis.X, j))
        removed.update((a, j) for a in row[-(p + 1):])
    Sp = S.points - removed
    if not is_lower(Sp):
        raise RefusedError("removing the strip leaves a set that is not lower")
    Sp = LowerSet(Sp)
    new_orders = [a for a in orders if a != element]
    nodes = grid.xs if grid else None
    if not _univariate_ok(orders, nodes, p + 1, _row0(S)):
        raise RefusedError(f"univariate scheme with orders {orders} is not regular")
    if not _univariate_ok(new_orders, nodes, p + 1, _row0(Sp)):
        raise RefusedError(f"univariate scheme with orders {new_orders} is not regular")
    Ap = DerivativeSet(pt for pt in A if pt != (element, 0))
    return Ap, Sp


# ---------------------------------------------------------------------------
# classifiers

def _triangle_like(nx: int, ny: int) -> LowerSet:
    pts = {(i, 0) for i in range(nx)} | {(0, j) for j in range(ny)}
    return LowerSet(pts)


def classify_no_mixed(A, p: int, q: int) -> LowerSet | None:
    """The only ``S`` making a mixed-free ``A`` almost regular, or ``None`` if there is none."""
    A = as_derivative_set(A)
    if A.mixed:
        raise NotApplicableError("A has mixed derivatives")
    xo, yo = _axis_orders(A, Axis.X), _axis_orders(A, Axis.Y)
    if not (polya_1d(xo, p + 1) and polya_1d(yo, q + 1)):
        return None
    return blow_up(_triangle_like(len(xo), len(yo)), p, q)


def classify_one_mixed(A, p: int, q: int) -> LowerSet | None:
    """The only ``S`` making ``A`` with exactly one mixed derivative almost regular, or ``None``."""
    A = as_derivative_set(A)
    if len(A.mixed) != 1:
        raise NotApplicableError(f"A has {len(A.mixed)} mixed derivatives, not one")
    (alpha, beta), = A.mixed
    xo, yo = _axis_orders(A, Axis.X), _axis_orders(A, Axis.Y)
    if len(xo) < 2 or len(yo) < 2:
        return None
    if not (polya_1d(xo, p + 1) and polya_1d(yo, q + 1)):
        return None
    # looser bounds of 2p+1 / 2q+1 would admit e.g. p = q = 1 with mixed (3, 3),
    # which fails the rectangular counting inequality on L = R(2, 2); the bounds
    # p+1 / q+1 agree with the probe for all p, q <= 2
    if alpha > p + 1 or beta > q + 1:
        return None
    T = _triangle_like(len(xo), len(yo)).union(rectangle(1, 1))
    return blow_up(T, p, q)


# ---------------------------------------------------------------------------
# verdicts and traces

class Status(str, enum.Enum):
    REGULAR = "Regular"
    NOT_REGULAR = "NotRegular"
    ALMOST_REGULAR = "AlmostRegular"
    NOT_ALMOST_REGULAR = "NotAlmostRegular"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TraceStep:
    rule: str
    before: str
    after: str | list[str]
    detail: str = ""

    @property
    def citation(self) -> str:
        return RULES.get(self.rule, self.rule)

    def render(self) -> str:
        after = "; ".join(self.after) if isinstance(self.after, list) else self.after
        text = f"[{self.citation}] {self.rule}: {self.before}"
        if after:
            text += f" -> {after}"
        if self.detail:
            text += f" ({self.detail})"
        return text


@dataclass
class ReductionTrace:
    steps: list[TraceStep] = field(default_factory=list)

    def add(self, rule: str, before: str, after: str | list[str] = "", detail: str = "") -> None:
        if rule not in RULES:
            raise KeyError(f"unknown rule {rule!r}")
        self.steps.append(TraceStep(rule, before, after, detail))

    def render(self) -> str:
        return "\n".join(f"{k + 1:>2}. {s.render()}" for k, s in enumerate(self.steps))


@dataclass
class DecisionVerdict:
    status: Status
    certificate: object
    trace: ReductionTrace
    conjectural_flags: list[str] = field(default_factory=list)
    witness: NodeGrid | None = None
    grid_regular: bool | None = None

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "certificate": to_jsonable(self.certificate),
            "trace": [s.render() for s in self.trace.steps],
            "witness": to_jsonable(self.witness),
            "conjectural_flags": list(self.conjectural_flags),
            "grid_regular": self.grid_regular,
        }


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, LowerSet):
        return {"columns": list(obj.heights)}
    if isinstance(obj, DerivativeSet):
        return [list(pt) for pt in obj]
    if isinstance(obj, NodeGrid):
        return {"x": [str(v) for v in obj.xs], "y": [str(v) for v in obj.ys]}
    if isinstance(obj, ConditionReport):
        return {
            "passed": obj.passed,
            "conjectural": obj.conjectural,
            "checked": list(obj.checked),
            "violations": [
                {"condition": v.condition, "witness": to_jsonable(v.witness), "detail": v.detail}
                for v in obj.violations
            ],
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    return str(obj)


@dataclass(frozen=True)
class DecideOptions:
    trials: int = 20
    seed: int = 0
    value_range: int = 1000
    max_enum: int = DEFAULT_ENUM_BOUND
    max_depth: int = 16


# ---------------------------------------------------------------------------
# decision pipeline

def _always_regular_1d(orders: Sequence[int], n: int) -> bool:
    """Univariate uniform schemes regular for every choice of ``n`` distinct nodes."""
    orders = sorted(orders)
    if not polya_1d(orders, n):
        return False
    k = len(orders)
    return n <= 2 or orders == list(range(k)) or orders == [n * i for i in range(k)]


@dataclass
class _Outcome:
    status: Status
    certificate: object = None
    witness: NodeGrid | None = None


class _Pipeline:
    def __init__(self, opts: DecideOptions):
        self.opts = opts
        self.trace = ReductionTrace()
        self.flags: list[str] = []

    # -- step 1 ------------------------------------------------------------
    def necessary(self, A: DerivativeSet, S: LowerSet, p: int, q: int) -> _Outcome | None:
        desc = _describe(A, S)
        report = structural_necessary(A, S, p, q)
        if len(S) <= self.opts.max_enum:
            report = report.merge(classical_polya(A, S, (p + 1) * (q + 1), self.opts.max_enum))
            report = report.merge(rectangular_polya(A, S, p, q, self.opts.max_enum))
        else:
            self.trace.add("classical_polya", desc, "", f"skipped: |S| = {len(S)} exceeds max-enum")
        if not report.passed:
            v = report.violations[0]
            rule = v.condition if v.condition in RULES else "structural"
            self.trace.add(rule, desc, "NotAlmostRegular", v.detail)
            return _Outcome(Status.NOT_ALMOST_REGULAR, report)
        self.trace.add("structural", desc, "", "necessary conditions hold")
        gp = grid_polya(A, S, p, q)
        if not gp.passed:
            if p <= 1 and q <= 1:
                self.trace.add("grid_polya", desc, "NotAlmostRegular", gp.violations[0].detail)
                return _Outcome(Status.NOT_ALMOST_REGULAR, gp)
            flag = f"grid-Polya condition fails for {desc} ({gp.violations[0].detail}); its necessity is conjectural"
            self.flags.append(flag)
            self.trace.add("grid_polya_conjectural", desc, "", "violated; treated as evidence only")
        return None

    # -- step 2 ------------------------------------------------------------
    def lower(self, A: DerivativeSet, S: LowerSet, p: int, q: int) -> _Outcome | None:
        if not A.is_lower():
            return None
        target = blow_up(A.as_lower(), p, q)
        desc = _describe(A, S)
        if S == target:
            self.trace.add("lower_derivatives", desc, "Regular", "S is the blow-up of A")
            return _Outcome(Status.REGULAR, {"rule": RULES["lower_derivatives"], "required_S": target})
        self.trace.add("lower_derivatives", desc, "NotAlmostRegular", f"S differs from the blow-up {target!r}")
        return _Outcome(Status.NOT_ALMOST_REGULAR, {"rule": RULES["lower_derivatives"], "required_S": target})

    # -- step 3 ------------------------------------------------------------
    def few_mixed(self, A: DerivativeSet, S: LowerSet, p: int, q: int) -> _Outcome | None:
        mix = len(A.mixed)
        if mix > 1:
            return None
        rule = "no_mixed" if mix == 0 else "one_mixed"
        T = classify_no_mixed(A, p, q) if mix == 0 else classify_one_mixed(A, p, q)
        desc = _describe(A, S)
        cert = {"rule": RULES[rule], "required_S": T}
        if T is None or S != T:
            why = "no admissible S" if T is None else f"the only admissible S is {T!r}"
            self.trace.add(rule, desc, "NotAlmostRegular", why)
            return _Outcome(Status.NOT_ALMOST_REGULAR, cert)
        xo, yo = _axis_orders(A, Axis.X), _axis_orders(A, Axis.Y)
        if mix == 0 and _always_regular_1d(xo, p + 1) and _always_regular_1d(yo, q + 1):
            self.trace.add(rule, desc, "Regular", "axis schemes are regular for all nodes")
            return _Outcome(Status.REGULAR, cert)
        self.trace.add(rule, desc, "AlmostRegular", "S has the required shape")
        return _Outcome(Status.ALMOST_REGULAR, cert)

    # -- step 4 ------------------------------------------------------------
    def rectangular(self, A: DerivativeSet, S: LowerSet, p: int, q: int) -> _Outcome | None:
        for transpose in (False, True):
            At, St, pt, qt = (A.transpose(), S.transpose(), q, p) if transpose else (A, S, p, q)
            for move_x, move_y in ((False, False), (True, False), (False, True), (True, True)):
                B = At
                if move_x:
                    B = _replace_axis(B, Axis.X, a_max(_axis_orders(B, Axis.X), pt))
                if move_y:
                    B = _replace_axis(B, Axis.Y, a_max(_axis_orders(B, Axis.Y), qt))
                if (move_x or move_y) and B == At:
                    continue
                if len(B) != len(At) or _rectangular_shape(B) is None:
                    continue
                return self._apply_rectangular(At, St, B, pt, qt, move_x, move_y, transpose)
        return None

    def _apply_rectangular(self, A, S, B, p, q, move_x, move_y, transposed) -> _Outcome:
        desc = _describe(A, S)
        if transposed:
            desc += " (axes interchanged)"
        if move_x or move_y:
            self.trace.add("move_axis", desc, _describe(B, S), "axis orders replaced by maximal ones")
        s, t = _rectangular_shape(B)
        pp, qq = (s + 1) * (p + 1) - 1, (t + 1) * (q + 1) - 1
        required = rectangle(pp, qq)
        cert = {"rule": RULES["rectangular_reduction"], "required_S": required if not transposed else required.transpose()}
        if S != required:
            self.trace.add("rectangular_reduction", _describe(B, S), "NotAlmostRegular",
                           f"S must be R({pp}, {qq})")
            return _Outcome(Status.NOT_ALMOST_REGULAR, cert)
        schemes = [("x", _projection(B), p + 1)] + [
            (f"y[{al}]", _column(B, al), q + 1) for al in _projection(B)
        ]
        # orders of the original axes must be fine too, since the moves are equivalences only then
        if move_x:
            schemes.append(("x-axis of A", _axis_orders(A, Axis.X), p + 1))
        if move_y:
            schemes.append(("y-axis of A", _axis_orders(A, Axis.Y), q + 1))
        listing = [f"{name}: orders {orders}, {n} nodes" for name, orders, n in schemes]
        bad = [name for name, orders, n in schemes if not polya_1d(orders, n)]
        if bad:
            self.trace.add("rectangular_reduction", _describe(B, S), listing,
                           f"univariate Polya fails for {bad}")
            return _Outcome(Status.NOT_ALMOST_REGULAR, dict(cert, failing=bad))
        if all(_always_regular_1d(orders, n) for _, orders, n in schemes):
            self.trace.add("rectangular_reduction", _describe(B, S), listing, "all univariate schemes regular for all nodes")
            return _Outcome(Status.REGULAR, cert)
        self.trace.add("rectangular_reduction", _describe(B, S), listing, "all univariate schemes almost regular")
        return _Outcome(Status.ALMOST_REGULAR, cert)

    # -- step 5 ------------------------------------------------------------
    def strip(self, A: DerivativeSet, S: LowerSet, p: int, q: int, depth: int) -> _Outcome | None:
        if depth >= self.opts.max_depth:
            return None
        for axis in (Axis.X, Axis.Y):
            orders = _axis_orders(A, axis)
            if len(orders) < 2:
                continue
            n = p + 1 if axis is Axis.X else q + 1
            try:
                B = _replace_axis(A, axis, a_max(orders, p if axis is Axis.X else q))
                Ap, Sp = strip_removal(B, S, axis, p, q)
            except (RefusedError, LowerSetError):
                continue
            self.trace.add("strip_removal", _describe(A, S), _describe(Ap, Sp),
                           f"{axis.value}-axis orders replaced by maximal ones, last one removed")
            sub = self.run(Ap, Sp, p, q, depth + 1)
            if sub.status is Status.INCONCLUSIVE:
                return None
            if sub.status is Status.NOT_ALMOST_REGULAR:
                return _Outcome(Status.NOT_ALMOST_REGULAR, {"rule": RULES["strip_removal"], "reduced": sub.certificate})
            status = sub.status
            if status is Status.REGULAR and not _always_regular_1d(orders, n):
                status = Status.ALMOST_REGULAR
            return _Outcome(status, {"rule": RULES["strip_removal"], "reduced": sub.certificate})
        return None

    # -- step 6 ------------------------------------------------------------
    def canonical(self, A: DerivativeSet, S: LowerSet, p: int, q: int) -> _Outcome | None:
        if p > 1 or q > 1:
            return None
        grid = canonical_grid(p, q)
        d = scheme_determinant(grid, A, S)
        desc = _describe(A, S)
        if d != 0:
            self.trace.add("canonical_grid", desc, "Regular", f"determinant {d} at {_grid_text(grid)}")
            return _Outcome(Status.REGULAR, {"rule": RULES["canonical_grid"], "determinant": d}, grid)
        self.trace.add("canonical_grid", desc, "NotAlmostRegular", f"determinant vanishes at {_grid_text(grid)}")
        return _Outcome(Status.NOT_ALMOST_REGULAR, {"rule": RULES["canonical_grid"], "determinant": d}, grid)

    # -- step 7 ------------------------------------------------------------
    def probe(self, A: DerivativeSet, S: LowerSet, p: int, q: int) -> _Outcome:
        o = self.opts
        pv = probe_almost_regular(A, S, p, q, o.trials, o.seed, o.value_range)
        desc = _describe(A, S)
        if pv.witness is not None:
            self.trace.add("probe", desc, "AlmostRegular",
                           f"nonzero determinant {pv.determinant} at {_grid_text(pv.witness)} (trial {pv.trials_run})")
            return _Outcome(Status.ALMOST_REGULAR, {"rule": RULES["probe"], "determinant": pv.determinant}, pv.witness)
        self.trace.add("probe", desc, "Inconclusive", f"determinant vanished at all {pv.trials_run} grids")
        return _Outcome(Status.INCONCLUSIVE, {"rule": RULES["probe"], "trials": pv.trials_run, "seed": pv.seed})

    def run(self, A: DerivativeSet, S: LowerSet, p: int, q: int, depth: int = 0) -> _Outcome:
        for step in (self.necessary, self.lower, self.few_mixed, self.rectangular):
            out = step(A, S, p, q)
            if out is not None:
                return out
        out = self.strip(A, S, p, q, depth)
        if out is not None:
            return out
        out = self.canonical(A, S, p, q)
        if out is not None:
            return out
        return self.probe(A, S, p, q)


def canonical_grid(p: int, q: int) -> NodeGrid:
    """``{-1, 1}`` on an axis with two nodes, ``{0}`` on an axis with one."""
    if p > 1 or q > 1:
        raise SchemeError("the canonical grid exists only for p, q <= 1")
    pick = {0: [0], 1: [-1, 1]}
    return NodeGrid(pick[p], pick[q])


def _grid_text(grid: NodeGrid) -> str:
    return "x=" + ",".join(str(v) for v in grid.xs) + " y=" + ",".join(str(v) for v in grid.ys)


def decide(A, S: LowerSet, p: int | None = None, q: int | None = None, grid: NodeGrid | None = None,
           options: DecideOptions | None = None) -> DecisionVerdict:
    """Classify ``(A, S)`` for ``(p, q)``-rectangular nodes.

    Statuses: ``Regular`` (regular at every rectangular grid, or at the supplied
    grid), ``AlmostRegular`` (regular at some grid; the witness is one such
    grid), ``NotAlmostRegular`` (singular at every grid, always backed by a
    proven criterion), ``NotRegular`` (singular at the supplied grid although
    regular elsewhere) and ``Inconclusive`` (only probe evidence).
    """
    A = as_derivative_set(A)
    if grid is not None:
        if (p is not None and p != grid.p) or (q is not None and q != grid.q):
            raise SchemeError(f"(p, q) = ({p}, {q}) disagrees with the grid")
        p, q = grid.p, grid.q
    if p is None or q is None:
        raise SchemeError("decide needs (p, q) or a grid")
    if not is_normal(A, S, p, q):
        raise NotNormalError(f"|S| = {len(S)} but |Z||A| = {(p + 1) * (q + 1) * len(A)}")
    pipe = _Pipeline(options or DecideOptions())
    pipe.trace.add("normality", _describe(A, S), "", f"p={p}, q={q}")
    out = pipe.run(A, S, p, q)
    if out.status is Status.ALMOST_REGULAR and p <= 1 and q <= 1:
        # with at most two nodes per axis, regular somewhere means regular everywhere
        pipe.trace.add("canonical_grid", _describe(A, S), "Regular", "almost regular with p, q <= 1")
        out.status = Status.REGULAR
    status, witness, grid_regular = out.status, out.witness, None
    if grid is not None and status is not Status.NOT_ALMOST_REGULAR:
        grid_regular = is_regular_at(grid, A, S)
        if status is not Status.REGULAR:
            status = Status.REGULAR if grid_regular else Status.NOT_REGULAR
        pipe.trace.add("grid_check", _describe(A, S), status.value,
                       f"determinant {'non' if grid_regular else ''}zero at {_grid_text(grid)}")
    elif grid is not None:
        grid_regular = False
    return DecisionVerdict(status, out.certificate, pipe.trace, pipe.flags, witness, grid_regular)
