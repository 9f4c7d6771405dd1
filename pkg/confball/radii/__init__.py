from confball.radii.variance import Interval, Known, RadiusInputs, VarianceSpec
from confball.radii.solver import (
    RadiusSolver,
    default_solver,
    psi,
    radius_table,
    rho_sq_interval,
    rho_sq_known,
    search_cap,
    trivial_radius_sq,
    z_bar,
)
