"""Exact construction, sampling and verification of Gibbs fragmentation processes."""
from .coupling import (
    CoverGraph,
    MonotoneCoupling,
    ViolationCertificate,
    build_cover_graph,
    chain_couplings,
    extreme_coupling,
    sample_next,
    strassen_feasible,
)
from .crp import (
    FragmentationPath,
    PartitionTriangle,
    SeatingChoices,
    crp_partition,
    crp_permutation,
    sample_fragmentation_crp,
    sample_fragmentation_recursive,
    sample_record_chain,
    split_check,
)
from .exceptions import GuardExceeded, InfeasibleError, MonotonicityError, ZeroProbabilityError
from .lattice import (
    SetPartition,
    enumerate_partitions,
    gibbs_partition_law,
    partition_strassen_explore,
    record_law_oracle,
    record_set,
)
from .records import (
    LayerDistribution,
    RecordVector,
    conditional_bernoulli,
    efron_check,
    harmonic_probs,
    p_record_last,
    poisson_binomial_pmf,
    record_law,
    threshold_law,
)
from .weights import (
    NEG_INF,
    StirlingTable,
    WeightSystem,
    bell_polynomial,
    block_count_distribution,
    gamma_coeff,
    rising_factorial,
    stirling_table,
    v_array,
    verify_v_recursion,
)

__version__ = "0.1.0"
