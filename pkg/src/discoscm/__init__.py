"""Exact counterfactual inference for distribution-consistency causal models.

The package builds finite-domain causal models whose structural
functions are indexed by a unit selection variable, evaluates factual,
interventional and cross-world probabilities exactly under configurable
noise couplings, derives probability-of-causation values and bounds,
scores units for selection through the benefit function, and ships a
seeded Monte Carlo companion for the continuous-noise correlation
experiments.
"""

from .bounds import (
    PoCReport,
    UnitStats,
    exact_poc,
    mediator_pns_upper,
    pn_bounds,
    pns_bounds,
    pns_point_icn,
    poc_worlds,
    population_bounds,
    stats_from_rct,
    unit_stats,
)
from .engine import (
    Posterior,
    Theorem1Report,
    abduct,
    conditional,
    evaluate_unit_world,
    layer1,
    layer2,
    layer3,
    population_query,
    verify_theorem1,
)
from .errors import DiscoError
from .model import (
    DiscoModel,
    NoiseDef,
    StructuralFn,
    UnitPrior,
    ValidationReport,
    VariableDef,
    build_model,
    to_spec,
    topological_order,
    validate_model,
)
from .modelfile import (
    DatasetDocument,
    ModelSpecDocument,
    fixture_path,
    format_model,
    load_dataset,
    load_model,
    parse_dataset_csv,
    parse_model_file,
)
from .selection import (
    BenefitReport,
    BenefitSpec,
    benefit_bounds,
    benefit_decompose,
    benefit_exact,
    evaluate_benefit,
    rank_by_benefit,
)
from .simulate import (
    CrossWorldSample,
    Example2Params,
    GaussianCouplingSpec,
    RctTable,
    estimate_correlation,
    gen_example2,
    rct_table,
    sample_cross_world,
)
from .worlds import (
    Coupling,
    CrossWorldEvent,
    Intervention,
    World,
    copy_mixture_joint,
    coupling_marginals_ok,
    do,
    factual_world,
    make_coupling,
    make_world,
    noise_joint,
)

__version__ = "0.1.0"

__all__ = [
    "BenefitReport",
    "BenefitSpec",
    "Coupling",
    "CrossWorldEvent",
    "CrossWorldSample",
    "DatasetDocument",
    "DiscoError",
    "DiscoModel",
    "Example2Params",
    "GaussianCouplingSpec",
    "Intervention",
    "ModelSpecDocument",
    "NoiseDef",
    "PoCReport",
    "Posterior",
    "RctTable",
    "StructuralFn",
    "Theorem1Report",
    "UnitPrior",
    "UnitStats",
    "ValidationReport",
    "VariableDef",
    "World",
    "abduct",
    "benefit_bounds",
    "benefit_decompose",
    "benefit_exact",
    "build_model",
    "conditional",
    "copy_mixture_joint",
    "coupling_marginals_ok",
    "do",
    "estimate_correlation",
    "evaluate_benefit",
    "evaluate_unit_world",
    "exact_poc",
    "factual_world",
    "fixture_path",
    "format_model",
    "gen_example2",
    "layer1",
    "layer2",
    "layer3",
    "load_dataset",
    "load_model",
    "make_coupling",
    "make_world",
    "mediator_pns_upper",
    "noise_joint",
    "parse_dataset_csv",
    "parse_model_file",
    "pn_bounds",
    "pns_bounds",
    "pns_point_icn",
    "poc_worlds",
    "population_bounds",
    "population_query",
    "rank_by_benefit",
    "rct_table",
    "sample_cross_world",
    "stats_from_rct",
    "to_spec",
    "topological_order",
    "unit_stats",
    "validate_model",
    "verify_theorem1",
]
