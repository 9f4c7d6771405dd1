from confball.varselect.design import (
    ENUMERATION_CAP,
    DesignMatrix,
    enumerate_models,
    enumeration_count,
    per_size_counts,
    subset_id,
)
from confball.varselect.selection import (
    Selection,
    VariableSelector,
    select_variables,
    selection_radius_bound,
)
