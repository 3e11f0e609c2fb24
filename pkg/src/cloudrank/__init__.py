"""QoS-aware ranking of cloud infrastructure service combinations.

The package turns a provider catalog (compute, storage, network offers with
tiered prices), measured network quality (latency, download, upload per
vantage point), and a user's monthly usage estimate into an ordered list of
offer combinations.  Criteria weights come from pairwise comparisons; each
combination is scored by its cost-to-benefit ratio, lower being better.
"""

from .ahp import (
    ComparisonMatrix,
    JudgmentError,
    WeightVector,
    build_matrix,
    compute_weights,
    convergence_gap,
    weights_from_judgments,
)
from .catalog import (
    Catalog,
    CatalogError,
    CatalogStore,
    ComputeOffer,
    Location,
    NetworkOffer,
    PriceTier,
    Provider,
    StorageOffer,
    parse_catalog,
)
from .config import ConfigError, ServiceConfig, load_config
from .datastore import DataStore
from .money import MoneyError, to_money
from .pricing import CostBreakdown, UsageEstimate, UsageExceedsTiers, tiered_cost, total_cost
from .qos import (
    ImportReport,
    QosAverage,
    QosSample,
    SampleStore,
    compute_averages,
    estimate_average,
    great_circle_km,
    parse_samples_csv,
    samples_to_csv,
)
from .ranking import (
    RankRequest,
    RequestError,
    ScoredCombination,
    ScoreUndefined,
    default_benefit_weights,
    default_cost_weights,
    effective_qos,
    ordered_solutions,
    rank_by_cost_only,
    score,
    score_breakdown,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ComparisonMatrix",
    "JudgmentError",
    "WeightVector",
    "build_matrix",
    "compute_weights",
    "convergence_gap",
    "weights_from_judgments",
    "Catalog",
    "CatalogError",
    "CatalogStore",
    "ComputeOffer",
    "Location",
    "NetworkOffer",
    "PriceTier",
    "Provider",
    "StorageOffer",
    "parse_catalog",
    "ConfigError",
    "ServiceConfig",
    "load_config",
    "DataStore",
    "MoneyError",
    "to_money",
    "CostBreakdown",
    "UsageEstimate",
    "UsageExceedsTiers",
    "tiered_cost",
    "total_cost",
    "ImportReport",
    "QosAverage",
    "QosSample",
    "SampleStore",
    "compute_averages",
    "estimate_average",
    "great_circle_km",
    "parse_samples_csv",
    "samples_to_csv",
    "RankRequest",
    "RequestError",
    "ScoredCombination",
    "ScoreUndefined",
    "default_benefit_weights",
    "default_cost_weights",
    "effective_qos",
    "ordered_solutions",
    "rank_by_cost_only",
    "score",
    "score_breakdown",
]
