"""Deterministic causal separation: d-separation, a functional semantics for
causal DAGs, perturb-and-repair semantic separation, the constructions linking
the two, and experiment oracles."""

from .dsep import (
    CleanConnection,
    d_separated,
    d_separated_by_paths,
    find_clean_connection,
    find_d_connected_path,
    is_blocked,
    is_d_connected,
    validate_clean_connection,
)
from .errors import *  # noqa: F401,F403
from .graph import (
    Graph,
    Path,
    ancestors,
    build_graph,
    children,
    descendants,
    enumerate_paths,
    is_acyclic,
    parents,
    topological_sort,
    unblocked_ancestors,
)
from .oracle import (
    FalsificationVerdict,
    Outcome,
    SimulatedWorld,
    World,
    falsify_single_condition,
    falsify_unconditional,
)
from .roles import Direction, NodeRole, classify_interior, dir_after, is_directed_path
from .semantics import (
    BOOL,
    Constant,
    CopyParent,
    CopyUnobserved,
    EquateParents,
    GraphFunction,
    NodeFunction,
    Rule,
    TruthTable,
    ValueDomain,
    evaluate,
    node_value,
    properly_conditions,
)
from .semsep import *  # noqa: F401,F403

__version__ = "0.1.0"
