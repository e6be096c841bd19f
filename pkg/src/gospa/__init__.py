"""GOSPA-family metrics between finite sets of targets, their
localization/missed/false decomposition, and Monte Carlo estimators of
their expectations over random finite sets."""

from .assignment import AssignmentSet, brute_force_assignment, solve_full_assignment
from .metrics import (
    GospaBreakdown,
    GospaParams,
    as_state_array,
    cutoff_distance,
    gospa,
    gospa_permutation_form,
    ospa,
    unnormalized_ospa_closed_form,
)
from .rfs import (
    BernoulliComponent,
    CustomJointSampler,
    EstimatorConfig,
    IndependentPairSampler,
    MetricEstimate,
    MultiBernoulli,
    Table1Cell,
    Table1Result,
    derive_sample_seed,
    estimate_metric,
    run_table1,
    sample_multi_bernoulli,
    table1_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentSet",
    "BernoulliComponent",
    "CustomJointSampler",
    "EstimatorConfig",
    "GospaBreakdown",
    "GospaParams",
    "IndependentPairSampler",
    "MetricEstimate",
    "MultiBernoulli",
    "Table1Cell",
    "Table1Result",
    "as_state_array",
    "brute_force_assignment",
    "cutoff_distance",
    "derive_sample_seed",
    "estimate_metric",
    "gospa",
    "gospa_permutation_form",
    "ospa",
    "run_table1",
    "sample_multi_bernoulli",
    "solve_full_assignment",
    "table1_scenario",
    "unnormalized_ospa_closed_form",
]
