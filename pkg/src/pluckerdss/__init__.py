"""Distributed storage over equidistant subspace codes built from the Plücker embedding."""

__version__ = "0.1.0"

from .field import GF, FieldElement, FieldSpec, fadd, finv, fmul, fneg, parse_field
from .linalg import gauss_solve, rank, replay
from .plucker import (
    CodewordBasis,
    NodeVector,
    basis_omit,
    codeword_basis,
    intersection_vector,
    missing_payload_element,
    pair_index,
    plucker_embed,
)
from .codec import (
    NodeState,
    RepairPlan,
    SystemConfig,
    apply_modification,
    encode_store,
    helper_pair_share,
    local_repair,
    min_bw_repair,
    min_bw_repair_assemble,
    parallel_repair,
    plan_min_bw_repair,
    reconstruct_full,
    reconstruct_min,
)
from .goodmatrix import GoodMatrix, build_good_matrix, validate_good_matrix
from .assignment import (
    Assignment,
    find_local_repair_set,
    from_generator_matrix,
    full_assignment,
    is_t_resilient,
    locality_partition_assignment,
    min_distance_bruteforce,
)
from .ledger import BandwidthLedger
from .simnet import Cluster, inject_failures, resilience_sweep, run_scenario

__all__ = [name for name in dir() if not name.startswith("_")]
