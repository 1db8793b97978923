import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from birkhoff_rect.cli import (
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_OK,
    InputError,
    load_scheme_file,
    main,
    parse_scheme,
    render,
    scheme_from_json,
    scheme_to_json,
)
from birkhoff_rect.lowerset import make_lower_from_columns, rectangle
from birkhoff_rect.scheme import scheme_determinant, solve

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_exit_code_values():
    assert (EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT) == (0, 1, 2, 64)


def test_parse_encodings():
    assert parse_scheme(FIX / "lower_pair.json").S == rectangle(1, 3)
    assert parse_scheme(FIX / "staircase.json").S == make_lower_from_columns([3, 3, 1, 1])
    sc = parse_scheme(FIX / "triangle_nodes.json")
    assert (sc.p, sc.q) == (1, 1)
    assert sc.grid.xs == (0, Fraction(1, 2))


@pytest.mark.parametrize("doc,needle", [
    ({"p": 0, "q": 0, "A": [[0, 0]], "S": {"points": [[0, 0], [1, 1]]}}, "not a lower set"),
    ({"A": [[0, 0]], "S": {"columns": [0, 0]}, "nodes": {"x": [1, "2/2"], "y": [0]}}, "nodes"),
    ({"A": [[0, 0]], "S": {"columns": [0]}, "nodes": {"x": ["1/0"], "y": [0]}}, "nodes.x[0]"),
    ({"p": 0, "q": 0, "A": [[0, 0]], "S": {"columns": [0]}, "colour": 1}, "unknown"),
    ({"p": 0, "A": [[0, 0]], "S": {"columns": [0]}}, "'q'"),
    ({"p": 0, "q": 0, "A": [[0, 0]], "S": {"columns": [0]}, "nodes": {"x": [0.5], "y": [0]}}, "nodes.x[0]"),
])
def test_parse_errors_name_the_field(doc, needle):
    with pytest.raises(InputError) as info:
        scheme_from_json(doc)
    assert needle in str(info.value)


def test_round_trip_through_emit_json(capsys, tmp_path):
    for name in ["lower_pair", "diagonal_pair", "staircase", "triangle_nodes"]:
        code, out, _ = run(capsys, "render", FIX / f"{name}.json", "--emit-json")
        assert code == EXIT_OK
        again = tmp_path / f"{name}.json"
        again.write_text(out)
        a, b = load_scheme_file(str(FIX / f"{name}.json")), load_scheme_file(str(again))
        assert a == b
        assert scheme_to_json(b) == json.loads(out)


def test_check_examples(capsys):
    code, out, err = run(capsys, "check", FIX / "lower_pair.json")
    assert code == EXIT_OK
    assert json.loads(out)["status"] == "Regular"
    assert "Theorem 3.4" in err
    code, out, _ = run(capsys, "check", FIX / "diagonal_pair.json")
    assert code == EXIT_FAIL
    verdict = json.loads(out)
    assert verdict["status"] == "NotAlmostRegular"
    assert verdict["conjectural_flags"] == []


def test_check_is_byte_identical_under_fixed_seed(capsys):
    outs = {run(capsys, "check", FIX / "staircase.json", "--seed", 9) for _ in range(3)}
    assert len(outs) == 1


def test_polya_grid_witness(capsys):
    code, out, _ = run(capsys, "polya", FIX / "diagonal_pair.json", "--variant", "grid")
    assert code == EXIT_FAIL
    assert json.loads(out)["violations"][0]["witness"] == {"columns": [0, 0, 0]}
    for variant in ["classical", "rectangular", "grid-bruteforce", "structural"]:
        code, _, _ = run(capsys, "polya", FIX / "lower_pair.json", "--variant", variant)
        assert code == EXIT_OK


def test_blowup_and_collapse(capsys):
    code, out, _ = run(capsys, "blowup", FIX / "lower_pair.json")
    assert code == EXIT_OK and json.loads(out) == {"columns": [7, 7, 7, 7], "size": 32}
    code, out, _ = run(capsys, "collapse", FIX / "lower_pair.json")
    assert json.loads(out) == {"columns": [1], "size": 2}


def test_shift(capsys):
    code, out, _ = run(capsys, "shift", FIX / "lower_pair.json")
    assert code == EXIT_OK
    assert json.loads(out) == [{"from": [0, 1], "to": [0, 2], "direction": "up"}]
    code, out, _ = run(capsys, "shift", FIX / "diagonal_pair.json")
    assert (code, out.strip()) == (EXIT_FAIL, "none")


def test_hermite_det_and_solve(capsys):
    code, out, _ = run(capsys, "hermite", FIX / "triangle_nodes.json", "--derivative", "1,0", "--node", "1,1")
    assert code == EXIT_OK and json.loads(out)["terms"]
    code, out, _ = run(capsys, "det", FIX / "triangle_nodes.json")
    sc = parse_scheme(FIX / "triangle_nodes.json")
    d = scheme_determinant(sc.grid, sc.A, sc.S)
    assert (code, out.strip()) == (EXIT_OK, f"{d.numerator}/{d.denominator}")
    code, out, _ = run(capsys, "solve", FIX / "triangle_nodes.json")
    sf = load_scheme_file(str(FIX / "triangle_nodes.json"))
    P = solve(sc.grid, sc.A, sc.S, sf.data)
    assert code == EXIT_OK
    assert json.loads(out)["terms"] == [list(t) for t in P.to_terms()]


def test_commands_needing_nodes_report_input_error(capsys):
    code, _, err = run(capsys, "det", FIX / "lower_pair.json")
    assert code == EXIT_INPUT and "nodes" in err


def test_render_staircase_widths():
    text = render([], make_lower_from_columns([3, 3, 1, 1]))
    assert [len(line) for line in text.splitlines()] == [2, 2, 4, 4]


def test_render_overlays(capsys):
    code, out, _ = run(capsys, "render", FIX / "staircase.json")
    assert code == EXIT_OK
    assert out.splitlines() == ["..", "+.", "*...", "*.*."]


def test_input_errors(capsys):
    code, _, err = run(capsys, "check", FIX / "not_lower.json")
    assert code == EXIT_INPUT and "not a lower set" in err
    with pytest.raises(SystemExit) as info:
        main(["check", str(FIX / "lower_pair.json"), "--bogus"])
    assert info.value.code == EXIT_INPUT
    code, _, err = run(capsys, "check", FIX / "missing.json")
    assert code == EXIT_INPUT


def test_malformed_json_reports_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 1,\n "q": }')
    code, _, err = run(capsys, "check", bad)
    assert code == EXIT_INPUT and "line 2" in err


def test_module_entry_point_exit_codes():
    for name, expected in [("lower_pair", 0), ("diagonal_pair", 1), ("not_lower", 64)]:
        proc = subprocess.run([sys.executable, "-m", "birkhoff_rect", "check", str(FIX / f"{name}.json")],
                              capture_output=True, text=True)
        assert proc.returncode == expected, proc.stderr
