from confball.sim.functions import (
    FUNCTIONS,
    figure_data,
    gen_data,
    test_function,
)
from confball.sim.study import (
    ReplicateRecord,
    SimulationConfig,
    Table1Report,
    alpha_sensitivity,
    coverage_mc,
    run_table1,
    smallest_accepted,
)
