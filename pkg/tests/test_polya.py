import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from birkhoff_rect.lowerset import (
    LowerSet,
    blow_up,
    grid_count,
    lower_sets_of_size,
    make_lower_from_columns,
    rectangle,
    triangle,
)
from birkhoff_rect.polya import (
    Direction,
    ShiftError,
    ShiftMove,
    ShiftPlan,
    classical_polya,
    find_shift_to_grid,
    grid_polya,
    grid_polya_bruteforce,
    inverse_shift_candidates,
    mixed_count_bound,
    rectangular_polya,
    rectangular_rhs,
    structural_necessary,
    verify_shift,
)
from birkhoff_rect.scheme import NodeGrid, is_normal, is_regular_at
from oracles import grid_polya_definition, inverse_shift_bfs, random_heights, random_rational_axis


def S_y(*hs):
    return make_lower_from_columns(hs)


# -- counting conditions ----------------------------------------------------

def test_classical_examples():
    assert classical_polya([(0, 0)], rectangle(1, 1), 4).passed
    r = classical_polya([(1, 0)], rectangle(1, 0), 2)
    assert not r.passed
    assert r.violations[0].witness == LowerSet([(0, 0)])
    assert classical_polya([(0, 0), (0, 1)], rectangle(3, 1), 4).passed


def test_rectangular_examples():
    A = frozenset({(0, 0)})
    assert rectangular_rhs(A, LowerSet([(0, 0)]), 1, 1) == 4
    assert rectangular_rhs(A, rectangle(1, 1), 1, 1) == 4
    assert rectangular_polya(A, rectangle(1, 1), 1, 1).passed
    A = frozenset({(0, 0), (2, 0), (0, 2), (4, 3)})
    assert rectangular_rhs(A, rectangle(2, 2), 1, 1) == 13


def test_rectangular_reports_smallest_witness_first():
    A = {(0, 0), (2, 0), (0, 2), (3, 3)}
    r = rectangular_polya(A, rectangle(3, 3), 1, 1)
    assert not r.passed
    sizes = [len(v.witness) for v in r.violations]
    assert sizes == sorted(sizes)
    assert rectangle(2, 2) in [v.witness for v in r.violations]


def test_rectangular_implies_classical():
    rng = random.Random(3)
    for _ in range(150):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        S = make_lower_from_columns(random_heights(rng, 12))
        k = grid_count(S, p, q)
        A = rng.sample(sorted(S), min(k, len(S)))
        if rectangular_polya(A, S, p, q).passed:
            assert classical_polya(A, S, (p + 1) * (q + 1)).passed


def test_grid_examples():
    r = grid_polya([(0, 0), (1, 1)], rectangle(3, 1), 1, 1)
    assert not r.passed
    assert r.violations[0].witness == rectangle(2, 0)
    assert r.conjectural is False
    assert grid_polya([(0, 0), (0, 1)], rectangle(1, 3), 1, 1).passed
    for p, q in [(0, 0), (2, 1), (3, 3)]:
        r = grid_polya([(0, 0)], rectangle(p, q), p, q)
        assert r.passed
        assert r.conjectural is not (p == q == 1)


def test_grid_bruteforce_examples():
    assert not grid_polya_bruteforce([(0, 0), (1, 1)], rectangle(3, 1), 1, 1).passed
    assert grid_polya_bruteforce([(0, 0), (0, 1)], rectangle(1, 3), 1, 1).passed
    assert grid_polya_bruteforce([(0, 0)], rectangle(2, 1), 2, 1).passed


@pytest.mark.parametrize("R", [LowerSet([(0, 0)]), triangle(1), S_y(2, 0), rectangle(1, 1), S_y(1, 1, 0)])
@pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (0, 2)])
def test_blown_up_lower_sets_pass_grid_condition(R, p, q):
    S = blow_up(R, p, q)
    assert grid_polya(R.points, S, p, q).passed
    assert grid_polya_bruteforce(R.points, S, p, q, bound=40).passed


def test_grid_witness_is_a_genuine_violation():
    rng = random.Random(21)
    for _ in range(300):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        S = make_lower_from_columns(random_heights(rng, 12))
        A = rng.sample(sorted(S), grid_count(S, p, q))
        r = grid_polya(A, S, p, q)
        assert r.passed == grid_polya_definition(A, S.points, p, q)
        for v in r.violations:
            L = v.witness
            assert L.points <= S.points
            assert len(set(A) & L.points) < grid_count(L, p, q)


# -- shifts -----------------------------------------------------------------

def test_shift_examples():
    plan = find_shift_to_grid([(0, 0), (0, 1)], rectangle(1, 3), 1, 1)
    assert plan == ShiftPlan((ShiftMove((0, 1), (0, 2), Direction.UP),))
    assert verify_shift([(0, 0), (0, 1)], rectangle(1, 3), plan, 1, 1)
    assert find_shift_to_grid([(0, 0)], rectangle(2, 3), 2, 3) == ShiftPlan()
    assert find_shift_to_grid([(0, 0), (3, 0)], rectangle(3, 1), 1, 1) is None


def test_shift_precondition():
    with pytest.raises(ShiftError):
        find_shift_to_grid([(0, 0)], rectangle(3, 1), 1, 1)
    with pytest.raises(ShiftError):
        find_shift_to_grid([(0, 0), (5, 0)], rectangle(3, 1), 1, 1)


def test_verify_rejects_bad_plans():
    A = [(0, 0), (0, 1)]
    S = rectangle(1, 3)
    left = ShiftPlan((ShiftMove((0, 1), (-1, 1), Direction.RIGHT),))
    assert not verify_shift(A, S, left)
    onto = ShiftPlan((ShiftMove((0, 0), (0, 1), Direction.UP),))
    assert not verify_shift(A, S, onto)
    outside = ShiftPlan((ShiftMove((0, 1), (0, 2), Direction.UP), ShiftMove((0, 2), (0, 3), Direction.UP),
                         ShiftMove((0, 3), (0, 4), Direction.UP)))
    assert not verify_shift(A, S, outside)
    wrong_dir = ShiftPlan((ShiftMove((0, 1), (0, 2), Direction.RIGHT),))
    assert not verify_shift(A, S, wrong_dir)
    assert verify_shift(A, S, ShiftPlan())
    assert not verify_shift(A, S, ShiftPlan(), 1, 1)


def test_shift_hands_off_through_occupied_points():
    # (0,0) must reach (2,2) but (1,0) and (2,1) sit on its path
    S = rectangle(3, 3)
    A = [(1, 0), (2, 1), (0, 0), (0, 1)]
    plan = find_shift_to_grid(A, S, 1, 1)
    assert plan is not None
    assert verify_shift(A, S, plan, 1, 1)


def test_triple_equivalence_sampled():
    rng = random.Random(12)
    for _ in range(400):
        p, q = rng.randint(1, 2), rng.randint(1, 2)
        S = make_lower_from_columns(random_heights(rng, 12))
        A = rng.sample(sorted(S), grid_count(S, p, q))
        brute = grid_polya_bruteforce(A, S, p, q).passed
        fast = grid_polya(A, S, p, q).passed
        plan = find_shift_to_grid(A, S, p, q)
        assert brute == fast == (plan is not None)
        if plan is not None:
            assert verify_shift(A, S, plan, p, q)


def test_inverse_shift_examples():
    T = triangle(1)
    cands = inverse_shift_candidates(T.points, 1, 1)
    assert (T, blow_up(T, 1, 1)) in cands
    assert [R for R, _ in inverse_shift_candidates([(0, 0), (2, 0)], 1, 1)] == [rectangle(1, 0)]
    Rs = [R for R, _ in inverse_shift_candidates([(0, 0), (1, 1)], 1, 1)]
    assert sorted(Rs, key=lambda R: R.sorted_points) == sorted([rectangle(0, 1), rectangle(1, 0)], key=lambda R: R.sorted_points)
    with pytest.raises(ShiftError):
        inverse_shift_candidates([(i, 0) for i in range(13)], 0, 0)


@settings(max_examples=120, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=5))
def test_inverse_shifts_match_bfs(A):
    mine = {R.points for R, _ in inverse_shift_candidates(A, 1, 2)}
    assert mine == inverse_shift_bfs(A)
    for R, S in inverse_shift_candidates(A, 1, 2):
        assert S == blow_up(R, 1, 2)


# -- structural conditions --------------------------------------------------

def test_structural_examples():
    r = structural_necessary([(0, 0), (1, 1)], rectangle(3, 1), 1, 1)
    assert "axis_product" in {v.condition for v in r.violations}
    assert structural_necessary([(0, 0), (2, 0), (0, 1)], S_y(3, 3, 1, 1), 1, 1).passed
    A = [(0, 0), (0, 1), (1, 0), (2, 0)]
    S = S_y(1, 1, 1, 1, 1, 1, 1, 1)
    assert is_normal(A, S, 1, 1)
    names = {v.condition for v in structural_necessary(A, S, 1, 1).violations}
    assert "lower_containment" in names


def test_structural_equality_case_forces_rectangle():
    A = [(0, 0), (1, 0), (0, 1), (1, 1)]
    assert structural_necessary(A, rectangle(3, 3), 1, 1).passed
    bad = structural_necessary(A, S_y(5, 5, 1, 1, 1, 1), 1, 1)
    assert "axis_product" in {v.condition for v in bad.violations}


def test_structural_axis_checks():
    # |A| = 2, p = 1: rows 0..1 must be {0..3}
    A = [(0, 0), (1, 0)]
    bad = structural_necessary(A, S_y(3, 3), 1, 1)
    assert {v.condition for v in bad.violations} >= {"axes_slices"}
    bad = structural_necessary([(0, 0), (3, 0)], rectangle(3, 1), 1, 1)
    assert "axis_polya" in {v.condition for v in bad.violations}


@pytest.mark.parametrize("total,expected", [(1, 0), (3, 0), (4, 1), (9, 4), (10, 4), (16, 9)])
def test_mixed_count_bound(total, expected):
    assert mixed_count_bound(total) == expected


def test_necessary_conditions_hold_for_regular_schemes():
    rng = random.Random(31)
    found = 0
    for _ in range(400):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        k = rng.randint(1, 3)
        n = (p + 1) * (q + 1)
        S = rng.choice(list(lower_sets_of_size(n * k)))
        A = rng.sample(sorted(S), k)
        g = NodeGrid(random_rational_axis(rng, p + 1), random_rational_axis(rng, q + 1))
        if not is_regular_at(g, A, S):
            continue
        found += 1
        assert classical_polya(A, S, n).passed
        assert rectangular_polya(A, S, p, q).passed
        assert structural_necessary(A, S, p, q).passed
        if p == q == 1:
            assert grid_polya(A, S, p, q).passed
    assert found > 20


def test_grid_condition_equals_definition_exhaustively_small():
    for S in lower_sets_of_size(6):
        for p, q in [(1, 1), (2, 1)]:
            k = grid_count(S, p, q)
            pts = sorted(S)
            for i in range(len(pts)):
                A = pts[i:i + k]
                if len(A) != k:
                    continue
                assert grid_polya(A, S, p, q).passed == grid_polya_definition(A, S.points, p, q)
