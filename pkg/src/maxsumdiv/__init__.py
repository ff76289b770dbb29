"""Max-sum diversification: pick ``S`` maximizing ``f(S) + lam * sum of pairwise distances``."""
from .errors import (
    DegenerateVectorError,
    DiversificationError,
    InternalInvariantError,
    InvalidInputError,
    LetorParseError,
    MetricViolationError,
    TooLargeError,
    UnsupportedQualityError,
)
from .kernels import BACKEND
from .matroids import (
    PartitionMatroid,
    TransversalMatroid,
    UniformMatroid,
    exchange_bijection,
    extend_to_basis,
    is_independent,
    rank,
)
from .model import (
    CoverageQuality,
    Instance,
    ModularQuality,
    QualityFunction,
    Solution,
    cross_distance,
    lemma_rrt_gap,
    marginal_phi,
    marginal_phi_prime,
    objective,
    set_distance,
    update_gain_cache,
    validate_metric,
)
from .solvers import (
    SolverConfig,
    appendix_fixture,
    brute_force_opt,
    greedy_edge_modular,
    greedy_vertex,
    local_search_matroid,
)

__version__ = "0.1.0"
