import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from birkhoff_rect.hermite2d import fundamental
from birkhoff_rect.lowerset import LowerSet, blow_up, lower_sets_of_size, rectangle
from birkhoff_rect.scheme import (
    DerivativeSet,
    NodeGrid,
    NotNormalError,
    NotRegularError,
    ProbeOutcome,
    Scheme,
    SchemeError,
    bareiss_determinant,
    build_matrix,
    collocation_matrix,
    derivative_of_monomial,
    determinant,
    is_normal,
    is_regular_at,
    is_solvable_at,
    probe_almost_regular,
    rank,
    residuals,
    scheme_determinant,
    scheme_is_normal,
    solve,
    to_rational,
)
from oracles import cofactor_det, collocation_naive, gauss_det, random_rational_axis

ORIGIN = LowerSet([(0, 0)])


def test_to_rational():
    assert to_rational("3/6") == Fraction(1, 2)
    assert to_rational(-4) == -4
    assert to_rational(Fraction(2, 3)) == Fraction(2, 3)
    with pytest.raises(SchemeError):
        to_rational(0.5)


def test_grid_requires_distinct_coordinates():
    with pytest.raises(SchemeError):
        NodeGrid([0, 1, 0], [0])
    g = NodeGrid([0, "1/2"], [3])
    assert (g.p, g.q, g.size) == (1, 0, 2)


def test_derivative_set_parts():
    A = DerivativeSet([(0, 0), (2, 0), (0, 1), (1, 1)])
    assert A.x_axis == ((0, 0), (2, 0))
    assert A.y_axis == ((0, 0), (0, 1))
    assert A.mixed == ((1, 1),)
    with pytest.raises(SchemeError):
        DerivativeSet([])


def test_normality_examples():
    assert is_normal([(0, 0)], rectangle(1, 1), 1, 1)
    assert is_normal([(0, 0), (0, 1)], rectangle(3, 1), 1, 1)
    assert not is_normal([(0, 0)], rectangle(1, 0), 1, 1)
    assert scheme_is_normal(Scheme([(0, 0)], rectangle(1, 1), NodeGrid([0, 1], [0, 1])))


def test_derivative_of_monomial_examples():
    assert derivative_of_monomial((3, 2), (1, 0), (2, 1)) == 12
    assert derivative_of_monomial((1, 4), (2, 0), (5, 5)) == 0
    assert derivative_of_monomial((1, 1), (1, 1), (Fraction(7, 3), -2)) == 1


def test_build_matrix_examples():
    assert build_matrix(NodeGrid([0], [0]), [(0, 0)], ORIGIN) == [[1]]
    assert build_matrix(NodeGrid([0, 1], [0]), [(0, 0)], rectangle(1, 0)) == [[1, 0], [1, 1]]
    M = build_matrix(NodeGrid([Fraction(3, 2)], [-5]), rectangle(1, 1).points, rectangle(1, 1))
    assert determinant(M) == 1
    with pytest.raises(NotNormalError):
        build_matrix(NodeGrid([0, 1], [0, 1]), [(0, 0)], rectangle(1, 0))


def test_build_matrix_matches_naive_collocation():
    rng = random.Random(5)
    for _ in range(20):
        xs, ys = random_rational_axis(rng, 2), random_rational_axis(rng, 3)
        A = [(0, 0), (1, 0), (0, 2)]
        S = blow_up(LowerSet([(0, 0), (1, 0), (0, 1)]), 1, 2)
        M = build_matrix(NodeGrid(xs, ys), A, S)
        assert M == collocation_naive(xs, ys, A, S.points)
        assert determinant(M) == gauss_det(M)


def test_determinant_examples():
    assert determinant([[1, 0], [1, 1]]) == 1
    assert determinant([[1, 0, 0], [1, 1, 1], [1, 2, 4]]) == 2
    assert determinant([[1, 2, 3], [4, 5, 6], [1, 2, 3]]) == 0
    assert determinant([[Fraction(1, 2), 1], [Fraction(1, 3), 1]]) == Fraction(1, 6)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_cofactor(M):
    assert bareiss_determinant(M) == cofactor_det(M)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6),
                                min_size=n, max_size=n), min_size=n, max_size=n)))
def test_rational_determinant_and_rank(M):
    d = determinant(M)
    assert d == cofactor_det(M)
    assert (rank(M) == len(M)) == (d != 0)


def test_rank_of_rectangular_matrices():
    assert rank([[1, 2, 3], [2, 4, 6]]) == 1
    assert rank([[0, 1], [1, 0], [1, 1]]) == 2
    assert rank([[0, 0]]) == 0


def test_regularity_examples():
    assert is_regular_at(NodeGrid([4], [-1]), rectangle(1, 1).points, rectangle(1, 1))
    rng = random.Random(2)
    for _ in range(10):
        g = NodeGrid(random_rational_axis(rng, 2), random_rational_axis(rng, 2))
        assert not is_regular_at(g, [(0, 0), (1, 1)], rectangle(3, 1))
    assert is_regular_at(NodeGrid([7], [7]), [(0, 0)], ORIGIN)


def test_solvability_examples():
    g = NodeGrid([1], [2])
    assert not is_solvable_at(g, [(1, 0)], ORIGIN)
    assert is_solvable_at(g, [(0, 0)], rectangle(1, 0))
    assert is_solvable_at(NodeGrid([0, 1], [0, 3]), [(0, 0), (0, 1)], rectangle(1, 3))


def test_regular_implies_solvable():
    rng = random.Random(8)
    A = [(0, 0), (1, 0)]
    for S in lower_sets_of_size(4):
        g = NodeGrid(random_rational_axis(rng, 2), [0])
        if is_regular_at(g, A, S):
            assert is_solvable_at(g, A, S)


def test_permutations_change_determinant_by_sign_only():
    rng = random.Random(4)
    g = NodeGrid(random_rational_axis(rng, 2), random_rational_axis(rng, 2))
    A = [(0, 0), (1, 0), (0, 1)]
    S = blow_up(LowerSet(A), 1, 1)
    M = build_matrix(g, A, S)
    d = determinant(M)
    assert d != 0
    for _ in range(10):
        rows = M[:]
        rng.shuffle(rows)
        cols = list(range(len(M)))
        rng.shuffle(cols)
        P = [[row[c] for c in cols] for row in rows]
        assert determinant(P) in (d, -d)


def test_probe_examples():
    v = probe_almost_regular([(0, 0), (0, 1)], rectangle(1, 3), 1, 1)
    assert v.outcome is ProbeOutcome.ALMOST_REGULAR
    assert scheme_determinant(v.witness, [(0, 0), (0, 1)], rectangle(1, 3)) != 0
    # the mirrored pair, as the shape is usually quoted with x and y swapped
    assert probe_almost_regular([(0, 0), (1, 0)], rectangle(3, 1), 1, 1).outcome is ProbeOutcome.ALMOST_REGULAR
    assert probe_almost_regular([(0, 0), (0, 1)], rectangle(3, 1), 1, 1).outcome is ProbeOutcome.PROBABLY_NOT_ALMOST_REGULAR
    v = probe_almost_regular([(0, 0), (1, 1)], rectangle(3, 1), 1, 1, trials=20)
    assert v.outcome is ProbeOutcome.PROBABLY_NOT_ALMOST_REGULAR and v.trials_run == 20
    v = probe_almost_regular([(0, 0)], ORIGIN, 0, 0, trials=0)
    assert v.outcome is ProbeOutcome.PROBABLY_NOT_ALMOST_REGULAR and v.trials_run == 0


def test_probe_is_reproducible_and_validates_range():
    args = ([(0, 0), (2, 0), (0, 1)], LowerSet(blow_up(LowerSet([(0, 0), (1, 0), (0, 1)]), 1, 1)), 1, 1)
    a = probe_almost_regular(*args, seed=17)
    b = probe_almost_regular(*args, seed=17)
    assert a == b
    with pytest.raises(SchemeError):
        probe_almost_regular([(0, 0)], rectangle(3, 0), 3, 0, value_range=1)
    with pytest.raises(NotNormalError):
        probe_almost_regular([(0, 0)], rectangle(1, 0), 1, 1)


def test_solve_examples():
    g = NodeGrid([5], [6])
    assert solve(g, [(0, 0)], ORIGIN, {((0, 0), (0, 0)): "3/4"}).terms == {(0, 0): Fraction(3, 4)}
    g = NodeGrid([0, 2], [-1, 3])
    A = [(0, 0), (0, 1)]
    S = rectangle(1, 3)
    assert not solve(g, A, S, {})
    with pytest.raises(NotRegularError):
        solve(g, [(0, 0), (1, 1)], rectangle(3, 1), {})
    with pytest.raises(SchemeError):
        solve(g, A, S, {((5, 5), (0, 0)): 1})


def test_solve_reproduces_data_and_matches_fundamentals():
    rng = random.Random(9)
    A = LowerSet([(0, 0), (1, 0), (0, 1)])
    S = blow_up(A, 1, 1)
    g = NodeGrid(random_rational_axis(rng, 2), random_rational_axis(rng, 2))
    data = {((s, t), d): Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            for s in range(2) for t in range(2) for d in A}
    P = solve(g, A.points, S, data)
    assert residuals(g, A.points, P, data) == {}
    assert P.support() <= S.points
    delta = {((1, 0), (0, 1)): 1}
    assert solve(g, A.points, S, delta) == fundamental(A, g, (0, 1), (1, 0))


def test_collocation_matrix_allows_non_normal():
    M = collocation_matrix(NodeGrid([1], [2]), [(0, 0)], rectangle(1, 0))
    assert M == [[1, 1]]
