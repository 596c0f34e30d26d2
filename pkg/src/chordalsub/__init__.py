"""Chordal subgraphs of random graphs: constructions, certificates, oracles."""

from .certify import CertificationError, ConstructionResult, certify_construction
from .chordal import (
    ChordalWitness,
    CorruptCodeError,
    PeoCode,
    decode_chordal,
    encode_chordal,
    h_family_member,
    is_chordal,
    is_peo,
    mcs_order,
    peo_tree,
    random_connected_chordal,
    read_peocode,
    write_peocode,
)
from .cliques import CliqueResult, find_clique_of_size, max_clique
from .dense import (
    CliquePartition,
    clique_partition,
    clique_union_baseline,
    dense_lower_construct,
    path_power_construct,
)
from .graph import (
    EdgeListError,
    EdgeSubgraph,
    Graph,
    RngSeed,
    blocks,
    connected_components,
    derive_rng,
    gen_gnp,
    mix64,
    read_edge_list,
    spanning_forest,
    write_edge_list,
)
from .oracle import (
    OracleResult,
    all_graphs_chordality_census,
    induced_cycle_exists,
    max_chordal_exact,
    max_clique_exact,
    sandwich_bounds,
)
from .sparse import (
    DensitySequence,
    Gadget,
    build_Fj,
    greedy_tiling,
    is_strictly_1_balanced,
    max_one_density,
    one_density,
    power_path_gadget,
    sparse_construct,
    square_path_gadget,
    x_sequence,
)
from .theory import (
    BoundaryAlphaError,
    DenseParams,
    GammaCResult,
    GammaSolution,
    SparsePrediction,
    binom_log_pmf,
    dense_params,
    g_eval,
    g_prime,
    gamma_c,
    gamma_solve,
    k_alpha,
    k_minus,
    k_plus,
    log_recip,
    sparse_prediction,
    theorem2_limit,
)
from .experiment import (
    ExperimentConfig,
    TrialRecord,
    run_experiment,
    run_single_trial,
    verify_suite,
)

__version__ = "0.1.0"
