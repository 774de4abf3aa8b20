"""Geometry of binary-association effect measures.

Risk-table parameterizations, homogeneity-feasibility checks, Monte Carlo
compatibility probabilities under coordinate box priors, and a power
simulator for Wald interaction tests.
"""

from .coords import (
    SYSTEMS,
    LogisticCoords,
    PoissonCoords,
    RrEtaCoords,
    RrOpCoords,
    StratumSolutionSet,
    eta_attainable,
    eta_infimum,
    from_logistic,
    from_poisson,
    from_rr_eta,
    from_rr_op,
    solve_stratum_from_rr_eta,
    solve_stratum_from_rr_op,
    to_logistic,
    to_poisson,
    to_rr_eta,
    to_rr_op,
)
from .errors import (
    DegenerateCountsError,
    DomainError,
    EffectGeomError,
    OutOfDomainError,
    UnsupportedSystemError,
    UnsupportedTargetError,
)
from .homogeneity import (
    CompatibilityQuery,
    HomogeneityQuery,
    check_compatibility,
    complete_table,
    is_feasible,
)
from .power import (
    SCALES,
    CellCounts,
    PowerResult,
    ScalePower,
    StudyDesign,
    simulate_dataset,
    simulate_power,
    wald_interaction,
    wald_interaction_pvalue,
)
from .table import (
    DEFAULT_EPS,
    MEASURES,
    RiskTable,
    StratumPair,
    eta,
    measure_range,
    odds_product,
    odds_ratio,
    relative_risk,
    risk_difference,
    stratum,
)
from .volume import (
    DEFAULT_BOUNDS,
    PriorSpec,
    VolumeEstimate,
    analytic_cube_probability,
    estimate,
    is_unit_cube,
)

__version__ = "0.1.0"

__all__ = [
    "CellCounts",
    "CompatibilityQuery",
    "DEFAULT_BOUNDS",
    "DEFAULT_EPS",
    "DegenerateCountsError",
    "DomainError",
    "EffectGeomError",
    "HomogeneityQuery",
    "LogisticCoords",
    "MEASURES",
    "OutOfDomainError",
    "PoissonCoords",
    "PowerResult",
    "PriorSpec",
    "RiskTable",
    "RrEtaCoords",
    "RrOpCoords",
    "SCALES",
    "SYSTEMS",
    "ScalePower",
    "StratumPair",
    "StratumSolutionSet",
    "StudyDesign",
    "UnsupportedSystemError",
    "UnsupportedTargetError",
    "VolumeEstimate",
    "analytic_cube_probability",
    "check_compatibility",
    "complete_table",
    "estimate",
    "eta",
    "eta_attainable",
    "eta_infimum",
    "from_logistic",
    "from_poisson",
    "from_rr_eta",
    "from_rr_op",
    "is_feasible",
    "is_unit_cube",
    "measure_range",
    "odds_product",
    "odds_ratio",
    "relative_risk",
    "risk_difference",
    "simulate_dataset",
    "simulate_power",
    "solve_stratum_from_rr_eta",
    "solve_stratum_from_rr_op",
    "stratum",
    "to_logistic",
    "to_poisson",
    "to_rr_eta",
    "to_rr_op",
    "wald_interaction",
    "wald_interaction_pvalue",
]
