from confball.models.linear import (
    LinearModel,
    full_model,
    orthonormalize,
    project,
    zero_model,
)
from confball.models.family import (
    ModelFamily,
    allocate_dimensional,
    allocate_uniform,
    uniform_family,
)
from confball.models.fourier import (
    design_points,
    fourier_design,
    fourier_family,
    fourier_model,
)
