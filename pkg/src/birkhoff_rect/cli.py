"""Command-line front end.

Scheme files are JSON objects::

    {"p": 1, "q": 1,
     "A": [[0, 0], [0, 1]],
     "S": {"columns": [3, 3]},            # or {"points": [...]} or {"corners": [...]}
     "nodes": {"x": [0, 1], "y": ["-1/2", 3]},
     "data": [{"node": [0, 0], "derivative": [0, 1], "value": "2/3"}]}

``nodes`` and ``data`` are optional; ``p`` and ``q`` may be omitted when
``nodes`` is given.  Exit codes: 0 regular or pass, 1 not regular or fail,
2 inconclusive, 64 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from .hermite2d import fundamental
from .lowerset import (
    DEFAULT_ENUM_BOUND,
    EnumerationBoundError,
    LowerSet,
    LowerSetError,
    Point,
    blow_up,
    collapse,
    from_corners,
    grid_points,
    is_lower,
    make_lower_from_columns,
)
from .polya import (
    ConditionReport,
    ShiftError,
    classical_polya,
    find_shift_to_grid,
    grid_polya,
    grid_polya_bruteforce,
    rectangular_polya,
    structural_necessary,
)
from .reduction import DecideOptions, Status, to_jsonable, decide
from .scheme import NodeGrid, NotRegularError, Scheme, SchemeError, scheme_determinant, solve, to_rational

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 64

_STATUS_EXIT = {
    Status.REGULAR: EXIT_OK,
    Status.ALMOST_REGULAR: EXIT_OK,
    Status.NOT_REGULAR: EXIT_FAIL,
    Status.NOT_ALMOST_REGULAR: EXIT_FAIL,
    Status.INCONCLUSIVE: EXIT_INCONCLUSIVE,
}


class InputError(Exception):
    """Malformed input; reported with exit code 64."""


@dataclass
class SchemeFile:
    scheme: Scheme
    data: dict[tuple[Point, Point], Fraction] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# parsing

def _pair(value: Any, where: str) -> tuple[int, int]:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
        raise InputError(f"{where}: expected a pair of integers, got {value!r}")
    return int(value[0]), int(value[1])


def _rational(value: Any, where: str) -> Fraction:
    try:
        return to_rational(value)
    except (SchemeError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _parse_S(raw: Any) -> LowerSet:
    if not isinstance(raw, dict) or len(raw) != 1:
        raise InputError("field 'S': expected an object with exactly one of 'points', 'columns', 'corners'")
    (kind, body), = raw.items()
    if not isinstance(body, list):
        raise InputError(f"field 'S.{kind}': expected a list")
    try:
        if kind == "points":
            pts = [_pair(v, f"field 'S.points[{k}]'") for k, v in enumerate(body)]
            if not is_lower(pts):
                raise InputError("field 'S.points': not a lower set")
            return LowerSet(pts)
        if kind == "columns":
            if not all(isinstance(h, int) and not isinstance(h, bool) for h in body):
                raise InputError("field 'S.columns': heights must be integers")
            return make_lower_from_columns(body)
        if kind == "corners":
            return from_corners(_pair(v, f"field 'S.corners[{k}]'") for k, v in enumerate(body))
    except LowerSetError as exc:
        raise InputError(f"field 'S.{kind}': {exc}") from None
    raise InputError(f"field 'S': unknown encoding {kind!r}")


def _parse_nodes(raw: Any) -> NodeGrid:
    if not isinstance(raw, dict) or set(raw) != {"x", "y"}:
        raise InputError("field 'nodes': expected an object with keys 'x' and 'y'")
    xs = [_rational(v, f"field 'nodes.x[{k}]'") for k, v in enumerate(raw["x"])]
    ys = [_rational(v, f"field 'nodes.y[{k}]'") for k, v in enumerate(raw["y"])]
    try:
        return NodeGrid(xs, ys)
    except SchemeError as exc:
        raise InputError(f"field 'nodes': {exc}") from None


def parse_data(raw: Any, where: str = "data") -> dict[tuple[Point, Point], Fraction]:
    if not isinstance(raw, list):
        raise InputError(f"field '{where}': expected a list of {{node, derivative, value}} objects")
    out = {}
    for k, item in enumerate(raw):
        loc = f"field '{where}[{k}]'"
        if not isinstance(item, dict) or set(item) != {"node", "derivative", "value"}:
            raise InputError(f"{loc}: expected keys node, derivative, value")
        key = (_pair(item["node"], loc + ".node"), _pair(item["derivative"], loc + ".derivative"))
        if key in out:
            raise InputError(f"{loc}: duplicate condition {key}")
        out[key] = _rational(item["value"], loc + ".value")
    return out


def scheme_from_json(doc: Any) -> SchemeFile:
    if not isinstance(doc, dict):
        raise InputError("top level: expected a JSON object")
    unknown = set(doc) - {"p", "q", "A", "S", "nodes", "data"}
    if unknown:
        raise InputError(f"top level: unknown fields {sorted(unknown)}")
    for key in ("A", "S"):
        if key not in doc:
            raise InputError(f"field '{key}': missing")
    if not isinstance(doc["A"], list) or not doc["A"]:
        raise InputError("field 'A': expected a nonempty list of pairs")
    A = [_pair(v, f"field 'A[{k}]'") for k, v in enumerate(doc["A"])]
    if len(set(A)) != len(A):
        raise InputError("field 'A': repeated derivative")
    S = _parse_S(doc["S"])
    grid = _parse_nodes(doc["nodes"]) if "nodes" in doc else None
    pq = {}
    for key in ("p", "q"):
        if key in doc:
            v = doc[key]
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise InputError(f"field '{key}': expected a nonnegative integer")
            pq[key] = v
        elif grid is None:
            raise InputError(f"field '{key}': missing (and no nodes given)")
    try:
        scheme = Scheme(A, S, grid, pq.get("p"), pq.get("q"))
    except SchemeError as exc:
        raise InputError(f"field 'nodes': {exc}") from None
    data = parse_data(doc["data"]) if "data" in doc else {}
    return SchemeFile(scheme, data)


def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_scheme_file(path: str) -> SchemeFile:
    try:
        return scheme_from_json(_read_json(path))
    except InputError as exc:
        msg = str(exc)
        raise InputError(msg if msg.startswith(path) else f"{path}: {msg}") from None


def parse_scheme(path: str) -> Scheme:
    return load_scheme_file(path).scheme


def scheme_to_json(sf: SchemeFile | Scheme) -> dict:
    """Normalized JSON form; ``scheme_from_json`` inverts it exactly."""
    if isinstance(sf, Scheme):
        sf = SchemeFile(sf)
    sc = sf.scheme
    doc: dict[str, Any] = {"p": sc.p, "q": sc.q, "A": [list(pt) for pt in sc.A],
                           "S": {"columns": list(sc.S.heights)}}
    if sc.grid is not None:
        doc["nodes"] = {"x": [_num(v) for v in sc.grid.xs], "y": [_num(v) for v in sc.grid.ys]}
    if sf.data:
        doc["data"] = [
            {"node": list(node), "derivative": list(d), "value": _num(v)}
            for (node, d), v in sorted(sf.data.items())
        ]
    return doc


def _num(v: Fraction):
    return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# ---------------------------------------------------------------------------
# rendering

def render(A: Sequence[Point], S: LowerSet, p: int | None = None, q: int | None = None) -> str:
    """ASCII staircase, top row first: ``.`` for ``S``, ``+`` for lattice points of ``S``, ``*`` for ``A``."""
    cells: dict[Point, str] = {pt: "." for pt in S}
    if p is not None and q is not None:
        cells.update((g, "+") for g in grid_points(S, p, q))
    cells.update((a, "*") for a in A)
    if not cells:
        return ""
    top = max(y for _, y in cells)
    lines = []
    for y in range(top, -1, -1):
        row = [x for x, yy in cells if yy == y]
        width = max(row) + 1 if row else 0
        lines.append("".join(cells.get((x, y), " ") for x in range(width)))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands

def _emit(obj: Any) -> None:
    print(json.dumps(obj, indent=2))


def _pq(args, sc: Scheme) -> tuple[int, int]:
    p = args.p if args.p is not None else sc.p
    q = args.q if args.q is not None else sc.q
    if p is None or q is None:
        raise InputError("p and q are required")
    if sc.grid is not None and (p, q) != (sc.grid.p, sc.grid.q):
        raise InputError(f"--p/--q ({p}, {q}) disagree with the nodes in the file")
    return p, q


def _options(args) -> DecideOptions:
    return DecideOptions(trials=args.trials, seed=args.seed, value_range=args.range, max_enum=args.max_enum)


def _report_exit(report: ConditionReport) -> int:
    _emit(to_jsonable(report))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_check(args, sf: SchemeFile) -> int:
    sc = sf.scheme
    p, q = _pq(args, sc)
    verdict = decide(sc.A, sc.S, p, q, sc.grid, _options(args))
    _emit(verdict.to_dict())
    print(verdict.trace.render(), file=sys.stderr)
    return _STATUS_EXIT[verdict.status]


def cmd_polya(args, sf: SchemeFile) -> int:
    sc = sf.scheme
    p, q = _pq(args, sc)
    variant = args.variant
    if variant == "classical":
        rep = classical_polya(sc.A, sc.S, (p + 1) * (q + 1), args.max_enum)
    elif variant == "rectangular":
        rep = rectangular_polya(sc.A, sc.S, p, q, args.max_enum)
    elif variant == "grid":
        rep = grid_polya(sc.A, sc.S, p, q)
    elif variant == "grid-bruteforce":
        rep = grid_polya_bruteforce(sc.A, sc.S, p, q, args.max_enum)
    else:
        rep = structural_necessary(sc.A, sc.S, p, q)
    return _report_exit(rep)


def _shape_json(S: LowerSet) -> dict:
    return {"columns": list(S.heights), "size": len(S)}


def cmd_blowup(args, sf: SchemeFile) -> int:
    p, q = _pq(args, sf.scheme)
    _emit(_shape_json(blow_up(sf.scheme.S, p, q)))
    return EXIT_OK


def cmd_collapse(args, sf: SchemeFile) -> int:
    p, q = _pq(args, sf.scheme)
    _emit(_shape_json(collapse(sf.scheme.S, p, q)))
    return EXIT_OK


def cmd_shift(args, sf: SchemeFile) -> int:
    sc = sf.scheme
    p, q = _pq(args, sc)
    try:
        plan = find_shift_to_grid(sc.A, sc.S, p, q)
    except ShiftError as exc:
        raise InputError(str(exc)) from None
    if plan is None:
        print("none")
        return EXIT_FAIL
    _emit([{"from": list(m.source), "to": list(m.target), "direction": m.direction.value}
           for m in plan.moves])
    return EXIT_OK


def _require_grid(sc: Scheme) -> NodeGrid:
    if sc.grid is None:
        raise InputError("field 'nodes': required by this command")
    return sc.grid


def _terms_json(poly) -> list:
    return [[a, b, c] for a, b, c in poly.to_terms()]


def cmd_hermite(args, sf: SchemeFile) -> int:
    sc = sf.scheme
    grid = _require_grid(sc)
    deriv = _int_pair(args.derivative, "--derivative")
    node = _int_pair(args.node, "--node")
    poly = fundamental(sc.A, grid, deriv, node)
    _emit({"derivative": list(deriv), "node": list(node), "terms": _terms_json(poly)})
    return EXIT_OK


def cmd_det(args, sf: SchemeFile) -> int:
    sc = sf.scheme
    d = scheme_determinant(_require_grid(sc), sc.A, sc.S)
    print(f"{d.numerator}/{d.denominator}")
    return EXIT_OK if d else EXIT_FAIL


def cmd_solve(args, sf: SchemeFile) -> int:
    sc = sf.scheme
    grid = _require_grid(sc)
    data = sf.data
    if args.data:
        data = parse_data(_read_json(args.data), "data file")
    P = solve(grid, sc.A, sc.S, data)
    _emit({"terms": _terms_json(P)})
    return EXIT_OK


def cmd_render(args, sf: SchemeFile) -> int:
    sc = sf.scheme
    p = args.p if args.p is not None else sc.p
    q = args.q if args.q is not None else sc.q
    if args.emit_json:
        _emit(scheme_to_json(sf))
    else:
        print(render(list(sc.A), sc.S, p, q))
    return EXIT_OK


def _int_pair(text: str, flag: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise InputError(f"{flag}: expected 'i,j', got {text!r}") from None
    return a, b


COMMANDS = {
    "check": (cmd_check, "decide (almost) regularity and print a verdict with its trace"),
    "polya": (cmd_polya, "run one family of necessary conditions"),
    "blowup": (cmd_blowup, "blow up S by (p, q)"),
    "collapse": (cmd_collapse, "collapse S by (p, q)"),
    "shift": (cmd_shift, "find a shift of A onto the lattice points of S"),
    "hermite": (cmd_hermite, "fundamental polynomial for a lower A"),
    "det": (cmd_det, "exact determinant at the given nodes"),
    "solve": (cmd_solve, "solve the interpolation problem for given data"),
    "render": (cmd_render, "draw S and A as an ASCII staircase"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, which means "inconclusive" here
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="birkhoff-rect", description="Uniform Birkhoff schemes on rectangular node grids.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("scheme", help="scheme file (JSON)")
        sp.add_argument("--p", type=int, default=None, help="override p from the file")
        sp.add_argument("--q", type=int, default=None, help="override q from the file")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--range", type=int, default=1000, help="coordinate range of probe grids")
        sp.add_argument("--max-enum", type=int, default=DEFAULT_ENUM_BOUND,
                        help="largest |S| for which lower subsets are enumerated")
        if name == "polya":
            sp.add_argument("--variant", default="classical",
                            choices=["classical", "rectangular", "grid", "grid-bruteforce", "structural"])
        if name == "hermite":
            sp.add_argument("--derivative", required=True, help="u,v")
            sp.add_argument("--node", required=True, help="s,t")
        if name == "solve":
            sp.add_argument("--data", help="JSON list of {node, derivative, value}")
        if name == "render":
            sp.add_argument("--emit-json", action="store_true", help="print the normalized scheme file instead")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler, _ = COMMANDS[args.command]
    try:
        sf = load_scheme_file(args.scheme)
        return handler(args, sf)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotRegularError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SchemeError, LowerSetError, EnumerationBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
