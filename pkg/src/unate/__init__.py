"""Unateness testing toolkit for functions on hypergrids [n]^d.

Randomized 1-sided testers with query accounting, exact small-instance
distance oracles, hard-instance generators, and a reproducible trial
harness with a CLI front end.
"""

from .core import (
    CapacityError,
    Direction,
    Domain,
    FunctionOracle,
    Orientation,
    Point,
    RandomSource,
    TruthTable,
    Value,
    concat,
    hamming_tail_probability,
    restrict,
)
from .exact import (
    RestrictionStats,
    ViolationGraph,
    axis_pair_stats,
    distance_to_monotone_directed,
    distance_to_unate,
    empirical_find_probability,
    is_monotone_directed,
    is_unate,
    plurality_function,
    restriction_stats,
    surprise_statistic,
    unate_orientation,
    violation_graph,
)
from .harness import (
    ExperimentConfig,
    TrialReport,
    exact_report,
    run_trials,
    sweep,
    wilson_interval,
)
from .instances import (
    InstanceDescriptor,
    gen_anti_unate,
    gen_boolean_hard_fi,
    gen_padded,
    gen_parity_sum_h,
    gen_random_unate,
    gen_truncated_hprime,
    materialize,
    parse_descriptor,
)
from .testers import (
    DimensionFinding,
    TesterVerdict,
    ViolationWitness,
    direction_of_pair,
    find_influential_dimension,
    monotonicity_tester_directed,
    query_budget,
    unateness_tester,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
