"""rainbowham: near-rainbow Hamilton cycles in dense properly coloured graphs."""

from .absorber import (
    AbsorberCertificate,
    ReservoirSet,
    absorb,
    build_absorber,
    build_reservoir,
    neighbourhood_matching,
    verify_reservoir,
)
from .adversary import (
    CounterexampleCertificate,
    CounterexampleParams,
    VerificationReport,
    build_counterexample,
    build_counterexample_scaled,
    corollary_parameters,
    proposition_parameters,
    random_matchings_graph,
    verify_counterexample,
)
from .errors import (
    AbsorptionError,
    BudgetExceededError,
    CertificationError,
    GraphFormatError,
    JunctionError,
    PreconditionError,
    StageFailure,
)
from .forest import (
    MatchingResult,
    PartitionPlan,
    SlabGraph,
    build_path_forest,
    certify_partition,
    check_near_regular,
    partition_colours,
    partition_vertices,
    rainbow_forest,
    rainbow_forest_dense,
    rainbow_matching,
)
from .graph import (
    ColouredGraph,
    ColouringReport,
    PathForest,
    canonicalize_colours,
    distinct_colours_of,
    dump,
    dumps,
    load,
    loads,
    split_colours,
    validate,
)
from .instances import InstanceSpec, generate_instance, random_dirac_host
from .oracle import (
    OracleBudget,
    is_hamilton_cycle,
    max_colour_hamilton_bruteforce,
    max_rainbow_matching_exact,
)
from .pipeline import (
    HamiltonResult,
    PipelineParams,
    connect_through_reservoir,
    near_rainbow_hamilton,
    proper_colouring_hamilton,
)
from .regularize import regular_spanning_subgraph, target_r
from .seeding import derive_seed, rng_for

__version__ = "0.1.0"

__all__ = [
    "AbsorberCertificate",
    "AbsorptionError",
    "BudgetExceededError",
    "CertificationError",
    "ColouredGraph",
    "ColouringReport",
    "CounterexampleCertificate",
    "CounterexampleParams",
    "GraphFormatError",
    "HamiltonResult",
    "InstanceSpec",
    "JunctionError",
    "MatchingResult",
    "OracleBudget",
    "PartitionPlan",
    "PathForest",
    "PipelineParams",
    "PreconditionError",
    "ReservoirSet",
    "SlabGraph",
    "StageFailure",
    "VerificationReport",
    "absorb",
    "build_absorber",
    "build_counterexample",
    "build_counterexample_scaled",
    "build_path_forest",
    "build_reservoir",
    "canonicalize_colours",
    "certify_partition",
    "check_near_regular",
    "connect_through_reservoir",
    "corollary_parameters",
    "derive_seed",
    "distinct_colours_of",
    "dump",
    "dumps",
    "generate_instance",
    "is_hamilton_cycle",
    "load",
    "loads",
    "max_colour_hamilton_bruteforce",
    "max_rainbow_matching_exact",
    "near_rainbow_hamilton",
    "neighbourhood_matching",
    "partition_colours",
    "partition_vertices",
    "proper_colouring_hamilton",
    "proposition_parameters",
    "rainbow_forest",
    "rainbow_forest_dense",
    "rainbow_matching",
    "random_dirac_host",
    "random_matchings_graph",
    "regular_spanning_subgraph",
    "rng_for",
    "split_colours",
    "target_r",
    "validate",
    "verify_counterexample",
    "verify_reservoir",
]
