from confball.bounds.combinatorics import (
    log_binomial,
    log_subset_count_bound,
    subset_count_bound,
)
from confball.bounds.upper import (
    BoundConstants,
    upper_bound_from_logs,
    upper_bound_rho,
)
from confball.bounds.lower import (
    DIMENSION_BRANCH_LIMIT,
    RESIDUAL_BRANCH_LIMIT,
    global_lower_bound,
    lower_bound_radius,
)
