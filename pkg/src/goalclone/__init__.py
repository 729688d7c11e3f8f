"""Goal clone detection for Rocq proof traces.

Parses notation-free Gallina goals, reconstructs proof trees from theorem
traces, generalizes each goal over its local context, and reports pairs of
alpha-equivalent goals whose proofs meet a size threshold.
"""

from .binding import alpha_eq, free_vars, fresh_name, prod_body, substitute
from .generalize import Context, CycleError, Hypothesis, dependency_order, generalize
from .pipeline import (
    ClonePair,
    GoalRecord,
    MissingDirError,
    RunOptions,
    dedupe,
    find_clones,
    flatten,
    load_traces,
    run,
)
from .proof_tree import (
    EmptyTraceError,
    GoalState,
    ProofTree,
    TheoremTrace,
    TraceStep,
    UnknownNodeError,
    build_tree,
    get_nodes,
    get_proof,
)
from .terms import ParseError, Term, parse_term, print_term

__version__ = "0.1.0"
