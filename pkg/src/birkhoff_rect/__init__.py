"""Uniform bivariate Birkhoff interpolation with rectangular node grids.

Exact rational arithmetic throughout: lower-set combinatorics, collocation
determinants, necessary conditions (Polya-type counts, shifts), explicit
Hermite fundamental polynomials, reductions to univariate schemes, and a
decision pipeline that ties them together.
"""

from .lowerset import (
    Axis,
    BoundaryPartition,
    EnumerationBoundError,
    LowerSet,
    LowerSetError,
    blow_up,
    boundary_partition,
    collapse,
    enumerate_lower_subsets,
    exterior_corners,
    from_corners,
    grid_count,
    lower_closure,
    make_lower_from_columns,
    profiles,
    rectangle,
    slice,
    triangle,
)
from .polynomial import SparsePolynomial, UniPolynomial
from .scheme import (
    DerivativeSet,
    NodeGrid,
    NotNormalError,
    NotRegularError,
    Scheme,
    SchemeError,
    build_matrix,
    determinant,
    is_normal,
    is_regular_at,
    is_solvable_at,
    probe_almost_regular,
    scheme_determinant,
    solve,
)
from .univariate import UnivariateScheme, a_max, det_1d, hermite_1d, polya_1d
from .hermite2d import check_delta, fundamental, fundamentals, hermite_interpolant
from .polya import (
    ConditionReport,
    ShiftMove,
    ShiftPlan,
    classical_polya,
    find_shift_to_grid,
    grid_polya,
    grid_polya_bruteforce,
    inverse_shift_candidates,
    rectangular_polya,
    structural_necessary,
    verify_shift,
)
from .reduction import (
    DecideOptions,
    DecisionVerdict,
    NodeSet,
    Status,
    classify_no_mixed,
    classify_one_mixed,
    decide,
    is_cartesian,
    move_axis,
    node_shape,
    reduce_rectangular,
    strip_removal,
)

__all__ = [name for name in dir() if not name.startswith("_")]
