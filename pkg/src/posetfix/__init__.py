"""Fixed points of monotone maps on finite posets, and monotone iteration
for Urysohn-type integral equations."""
from .errors import CONDITIONS, DomainError, InvariantError, PosetError
from .poset import (
    Closed,
    FinitePoset,
    UpSet,
    enumerate_posets,
    has_fip,
    interval_members,
    intersect_family,
    is_directed,
    load_poset,
    maximal_elements,
    supremum,
    supremum_via_lemma1,
    upper_bounds,
)
from .fixpoint import (
    FixedPointReport,
    MapFamily,
    MonotoneMap,
    check_commuting,
    check_monotone,
    common_fixed_point,
    enumerate_monotone_maps,
    family_closure,
    fixed_point_set,
    orbit_fixed_point,
    verify_theorems,
)
from .urysohn import (
    Grid,
    KernelSpec,
    SolveReport,
    UrysohnProblem,
    apply_operator,
    ball_radius,
    check_growth_bound,
    check_kernel_monotone,
    linear_oracle,
    residual,
    sign_condition,
    solve_branch,
)

__version__ = "0.1.0"
