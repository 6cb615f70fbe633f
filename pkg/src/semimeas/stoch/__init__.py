"""Processes indexed by a grid with the pointwise order, and their predictable measures."""
from .decomp import (
    StoppingTime, chain_limit, doob_meyer, interleave, premeyer, riesz, stopped_value,
    stopping_diagnostics,
)
from .demo import experiment_demo
from .extension import (
    UnsupportedGridError, additivity_residuals, adaptedness, check_strong_additivity, doleans_dade,
    extend_filtration, extend_process, phi_o, phi_p, region_ring,
)
from .model import (
    FiniteProbSpace, GridFiltration, GridModel, ModelError, Partition, build_model, fixture_b,
    validate_model,
)
from .quasi import (
    DPartition, canonical_maximal, context, isometry_check, mu_alpha, pd_operator, quasinorm,
    variation,
)

__all__ = [
    "FiniteProbSpace", "GridFiltration", "GridModel", "ModelError", "Partition", "build_model",
    "fixture_b", "validate_model", "phi_p", "phi_o", "extend_process", "extend_filtration",
    "doleans_dade", "additivity_residuals", "adaptedness", "check_strong_additivity", "region_ring",
    "UnsupportedGridError", "DPartition", "canonical_maximal", "context", "isometry_check",
    "mu_alpha", "pd_operator", "quasinorm", "variation", "doob_meyer", "riesz", "stopping_diagnostics",
    "StoppingTime", "stopped_value", "premeyer", "chain_limit", "interleave", "experiment_demo",
]
