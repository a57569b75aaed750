"""Periodic points of Lattès maps over finite fields.

Densities are computed twice: from a closed form in q, the Frobenius
trace and d, and by brute force on the functional graph of L_d acting on
P¹(GF(q)). Everything is exact rational arithmetic.
"""

from .curve import (
    CurveError,
    CurvePoint,
    SingularCurveError,
    TraceData,
    WeierstrassCurve,
    add,
    base_change,
    count_points,
    eigenspace_split,
    group_order,
    iter_curves,
    lift_x,
    make_curve,
    negate,
    parse_curve,
    quadratic_twist,
    scalar_mul,
    trace,
    trace_sequence,
)
from .density import (
    DensityError,
    DensityReport,
    SupersingularReport,
    TowerReport,
    check_valuation_lemma,
    delta_formula,
    delta_supersingular,
    delta_tower,
    gap_bound_holds,
    pi_pm,
    tower_limit,
)
from .ffield import (
    FieldElement,
    FieldError,
    FieldSpec,
    embed,
    enumerate_field,
    format_element,
    format_field,
    make_field,
    parse_element,
    parse_field,
    quadratic_ext,
    solve_quadratic,
)
from .lattes import (
    INF,
    FunctionalGraph,
    LattesError,
    LattesMap,
    is_permutation,
    lattes_eval,
    lattes_table,
    oracle_density,
    periodic_set,
    periodic_via_order,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
