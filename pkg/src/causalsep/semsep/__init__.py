from .backward import extract_d_connected_path, join_at_common_ancestor, splice
from .forward import RolePartition, build_g_path, build_partition, build_witness_sequence
from .search import (
    SearchResult,
    Witness,
    function_space_size,
    random_witness,
    semantic_separation_search,
)
from .witness import (
    Condition,
    WitnessSequence,
    WitnessVerdict,
    changed_conditioned_nodes,
    check_witness,
)

__all__ = [
    "Condition",
    "RolePartition",
    "SearchResult",
    "Witness",
    "WitnessSequence",
    "WitnessVerdict",
    "build_g_path",
    "build_partition",
    "build_witness_sequence",
    "changed_conditioned_nodes",
    "check_witness",
    "extract_d_connected_path",
    "function_space_size",
    "join_at_common_ancestor",
    "random_witness",
    "semantic_separation_search",
    "splice",
]
