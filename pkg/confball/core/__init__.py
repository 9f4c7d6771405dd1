from confball.core.procedure import (
    BallBuilder,
    ConfidenceBall,
    ModelRecord,
    TestOutcome,
    acceptance_probability,
    build_ball,
    in_intersection,
    radius_guarantee_check,
    run_tests,
)
from confball.core.builder import build_family
from confball.core import callback
