"""Exact workbench for non-crossing partition combinatorics, free cumulants
and operator-coefficient Haagerup-type norm bounds."""

from .partitions import (
    Partition,
    collapse_pairs,
    count_adjacent_pairs,
    discrete,
    enumerate_nc,
    format_partition,
    full,
    interval_pairing,
    is_noncrossing,
    is_refinement,
    parse_partition,
    restrict,
    shifted_pairing,
)
from .symmetry import (
    GridShape,
    TerminalKind,
    absorption_probabilities,
    apply_symmetry,
    check_collapse_martingale,
    collapse_block_count,
    glued_level_terminal,
    level_exponents,
    level_terminal,
    symmetrize,
    symmetrize_terminal,
    terminal_partitions,
)
from .families import (
    ChainOfPartitions,
    catalan,
    chain_count_by_ranks,
    chebyshev_pair_count,
    enumerate_interval_pairings,
    enumerate_ncdm,
    enumerate_ncstar,
    enumerate_ncstar2,
    fiber_size_chain,
    fuss_catalan,
    is_interval_avoiding,
    is_ncstar,
    map_chain,
    pair_split,
    pair_split_fiber_size,
)
from .cumulants import (
    CumulantSpec,
    cumulant_domination_bound,
    determining_sequence_from_moments,
    kappa_pi,
    moment_from_cumulants,
)
from .matrices import (
    BlockMatrixView,
    CoefficientFamily,
    StarCoefficientFamily,
    build_Ml,
    build_Ml_star,
    flip,
    holo_norm_2m,
    holo_rhs_bound,
    load_family,
    nonholo_norm_2m,
    nonholo_rhs_bound,
    prime_family,
    save_family,
    schatten_norm,
    schatten_pow,
    trace_sum,
    trace_sum_star,
)
from .oracles import brute_moment, fock_moment, free_group_moment

__version__ = "0.1.0"
