"""Trade-offs between measurement dependence, hiddenness, and CHSH values
for separable hidden-variable models in the CHSH scenario."""

__version__ = "0.1.0"

from ._kernels import active_backend
from .bounds import (
    POLYHEDRON_VERTICES,
    RegionSpec,
    TradeoffPoint,
    check_cardinality_bound,
    check_hiddenness_floor,
    check_relaxed_bound,
    check_tradeoff_point,
    region,
    region_boundary_samples,
    region_contains,
)
from .construct import (
    ConstructionParams,
    InfeasiblePointError,
    ReductionError,
    SelfCheckError,
    construction_params,
    optimal_output,
    realize,
    reduce_input,
)
from .fuzz import run_fuzz
from .measures import (
    MeasureReport,
    chsh_value,
    correlator,
    f_functional,
    hiddenness,
    legacy_hiddenness,
    measure_report,
    measurement_dependence,
    optimal_chsh,
    support_size,
)
from .model import (
    Behavior,
    HiddenInput,
    InvalidModelError,
    ModelError,
    ModelMismatchError,
    SeparableOutput,
    compose,
    context_index,
    context_pair,
    load_model,
    save_model,
    truncate,
    validate_input,
)
from .oracle import (
    BruteForceResult,
    VertexEnumeration,
    brute_force_sopt,
    enumerate_vertices,
    sample_input,
    sample_measurement_independent_input,
)

__all__ = [
    "__version__",
    "active_backend",
    # model
    "Behavior",
    "HiddenInput",
    "InvalidModelError",
    "ModelError",
    "ModelMismatchError",
    "SeparableOutput",
    "compose",
    "context_index",
    "context_pair",
    "load_model",
    "save_model",
    "truncate",
    "validate_input",
    # measures
    "MeasureReport",
    "chsh_value",
    "correlator",
    "f_functional",
    "hiddenness",
    "legacy_hiddenness",
    "measure_report",
    "measurement_dependence",
    "optimal_chsh",
    "support_size",
    # bounds
    "POLYHEDRON_VERTICES",
    "RegionSpec",
    "TradeoffPoint",
    "check_cardinality_bound",
    "check_hiddenness_floor",
    "check_relaxed_bound",
    "check_tradeoff_point",
    "region",
    "region_boundary_samples",
    "region_contains",
    # construct
    "ConstructionParams",
    "InfeasiblePointError",
    "ReductionError",
    "SelfCheckError",
    "construction_params",
    "optimal_output",
    "realize",
    "reduce_input",
    # oracle
    "BruteForceResult",
    "VertexEnumeration",
    "brute_force_sopt",
    "enumerate_vertices",
    "sample_input",
    "sample_measurement_independent_input",
    # fuzz
    "run_fuzz",
]
