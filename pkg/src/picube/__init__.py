"""Positive-interior cubature rules on cubes, simplices and their products.

The package builds tensor-product and Duffy-collapsed seed rules and
then removes nodes one at a time with a null-space predictor and a
penalized least-squares Newton corrector, keeping every intermediate
rule exact to the requested degree with positive weights and strictly
interior nodes.
"""

from .basis import Basis, basis_for, monomial_moment
from .corrector import CorrectorConfig, CorrectorOutcome, CorrectorStatus, correct
from .domains import (
    BoundaryContact,
    DomainSpec,
    Factor,
    LinearConstraints,
    barrier_gradient,
    boundary_margin,
    constraints_of,
    parse_domain,
)
from .eliminator import (
    EliminationReport,
    EliminationStep,
    PredictorCandidate,
    StopReason,
    eliminate,
    predictors,
)
from .experiment import (
    ExperimentConfig,
    ExperimentRow,
    NoConvergence,
    integrand_values,
    read_csv,
    reference_value,
    run_experiment,
    sample_directions,
    write_csv,
)
from .figures import render_error_figures
from .gauss1d import ConvergenceFailure, Rule1D, gauss_rule_01, recurrence_01
from .lines import LineFamily, Unbounded, build_family, minmax_t
from .moments import (
    LQFactors,
    MomentSystem,
    RankDeficient,
    factor_economy,
    factor_full,
    newton_components,
)
from .rules import (
    CubatureRule,
    DimensionMismatch,
    VerifyReport,
    apply_rule,
    efficiency,
    optimal_node_count,
    pack,
    rule_margin,
    unpack,
    verify,
)
from .ruleio import RuleFileError, read_rule, write_rule
from .seeds import (
    SeedPlan,
    WeightExponentMismatch,
    build_seed,
    duffy_lift,
    interval_rule,
    naive_node_count,
    plan_seed,
    tensor_product,
)

__all__ = [
    "Basis",
    "BoundaryContact",
    "ConvergenceFailure",
    "CorrectorConfig",
    "CorrectorOutcome",
    "CorrectorStatus",
    "CubatureRule",
    "DimensionMismatch",
    "DomainSpec",
    "EliminationReport",
    "EliminationStep",
    "ExperimentConfig",
    "ExperimentRow",
    "Factor",
    "LQFactors",
    "LineFamily",
    "LinearConstraints",
    "MomentSystem",
    "NoConvergence",
    "PredictorCandidate",
    "RankDeficient",
    "Rule1D",
    "RuleFileError",
    "SeedPlan",
    "StopReason",
    "Unbounded",
    "VerifyReport",
    "WeightExponentMismatch",
    "apply_rule",
    "barrier_gradient",
    "basis_for",
    "boundary_margin",
    "build_family",
    "build_seed",
    "constraints_of",
    "correct",
    "duffy_lift",
    "efficiency",
    "eliminate",
    "factor_economy",
    "factor_full",
    "gauss_rule_01",
    "integrand_values",
    "interval_rule",
    "minmax_t",
    "monomial_moment",
    "naive_node_count",
    "newton_components",
    "optimal_node_count",
    "pack",
    "parse_domain",
    "plan_seed",
    "predictors",
    "read_csv",
    "read_rule",
    "recurrence_01",
    "reference_value",
    "render_error_figures",
    "rule_margin",
    "run_experiment",
    "sample_directions",
    "tensor_product",
    "unpack",
    "verify",
    "write_csv",
    "write_rule",
]

__version__ = "0.1.0"
