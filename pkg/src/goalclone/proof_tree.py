"""Proof tree reconstruction from theorem traces via goal-set diffing."""

from __future__ import annotations

from dataclasses import dataclass, field

from .generalize import Context, Hypothesis
from .terms import ParseError, Term, parse_term, print_term

__all__ = [
    "GoalState",
    "TraceStep",
    "TheoremTrace",
    "ProofNode",
    "ProofTree",
    "EmptyTraceError",
    "UnknownNodeError",
    "build_tree",
    "get_nodes",
    "get_proof",
]

GoalKey = tuple[str, str]


class EmptyTraceError(Exception):
    """A trace with no steps cannot yield a proof tree."""


class UnknownNodeError(Exception):
    """Node id not present in the tree."""


@dataclass(frozen=True)
class GoalState:
    """One prover goal: hypotheses plus a conclusion.

    Unparseable goals are kept opaque (context/conclusion None) and compared
    by their raw printed text.
    """

    raw_hypotheses: tuple[tuple[str, str], ...]  # (name, printed type)
    raw_conclusion: str
    context: Context | None
    conclusion: Term | None
    parse_error: str | None = None

    @property
    def parsed(self) -> bool:
        return self.parse_error is None

    @property
    def key(self) -> GoalKey:
        if self.parsed:
            ctx = "; ".join(
                f"{h.name} : {print_term(h.type_term)}" for h in self.context
            )
            return (ctx, print_term(self.conclusion))
        ctx = "; ".join(f"{n} : {t.strip()}" for n, t in self.raw_hypotheses)
        return (ctx, self.raw_conclusion.strip())


def make_goal_state(
    hypotheses: tuple[tuple[str, str], ...], conclusion: str
) -> GoalState:
    """Parse the printed goal; fall back to an opaque state on failure."""
    try:
        hyps = tuple(Hypothesis(n, parse_term(t)) for n, t in hypotheses)
        ctx = Context(hyps)
        concl = parse_term(conclusion)
    except (ParseError, ValueError) as exc:
        return GoalState(hypotheses, conclusion, None, None, parse_error=str(exc))
    return GoalState(hypotheses, conclusion, ctx, concl)


@dataclass(frozen=True)
class TraceStep:
    tactic_text: str
    goals_after: tuple[GoalState, ...]


@dataclass(frozen=True)
class TheoremTrace:
    file: str
    theorem: str
    initial_goals: tuple[GoalState, ...]
    steps: tuple[TraceStep, ...]


@dataclass
class ProofNode:
    id: int
    goal: GoalState
    tactic: str
    step_index: int
    child_keys: tuple[GoalKey, ...]
    children: list[int] = field(default_factory=list)


@dataclass
class ProofTree:
    nodes: list[ProofNode]
    roots: list[int]
    diagnostics: list[str]

    def node(self, node_id: int) -> ProofNode:
        if not 0 <= node_id < len(self.nodes):
            raise UnknownNodeError(f"no node with id {node_id}")
        return self.nodes[node_id]


def build_tree(trace: TheoremTrace) -> ProofTree:
    """Replay the trace, diffing goal sets step by step.

    A goal is identified by its (canonical context, canonical conclusion)
    key, so simultaneous identical goals collapse. When one step eliminates
    several goals, every eliminated goal receives all newly created goals as
    children (flagged in diagnostics).
    """
    if not trace.steps:
        raise EmptyTraceError(f"{trace.file}:{trace.theorem}: trace has no steps")

    diagnostics: list[str] = []
    where = f"{trace.file}:{trace.theorem}"

    def keyed(goals: tuple[GoalState, ...]) -> dict[GoalKey, GoalState]:
        out: dict[GoalKey, GoalState] = {}
        for g in goals:
            out.setdefault(g.key, g)
        return out

    prev = keyed(trace.initial_goals)
    initial_keys = set(prev)
    nodes: list[ProofNode] = []
    for step_index, step in enumerate(trace.steps):
        curr = keyed(step.goals_after)
        gone = [k for k in prev if k not in curr]
        new = tuple(k for k in curr if k not in prev)
        if len(gone) > 1 and new:
            diagnostics.append(
                f"{where}: step {step_index} ({step.tactic_text!r}) eliminated "
                f"{len(gone)} goals while creating {len(new)}; child attribution "
                "is ambiguous"
            )
        for k in gone:
            nodes.append(
                ProofNode(len(nodes), prev[k], step.tactic_text, step_index, new)
            )
        prev = curr
    if prev:
        diagnostics.append(
            f"{where}: proof ends with {len(prev)} open goal(s); trace incomplete"
        )

    # A parent's child link binds to the earliest node created at a later
    # step with the child's goal key.
    by_key: dict[GoalKey, list[ProofNode]] = {}
    for node in nodes:
        by_key.setdefault(node.goal.key, []).append(node)
    for node in nodes:
        for ck in node.child_keys:
            child = next(
                (c for c in by_key.get(ck, []) if c.step_index > node.step_index),
                None,
            )
            if child is None:
                diagnostics.append(
                    f"{where}: goal created at step {node.step_index} was never "
                    f"eliminated; dropping child link from node {node.id}"
                )
            else:
                node.children.append(child.id)

    roots = [n.id for n in nodes if n.goal.key in initial_keys]
    return ProofTree(nodes, roots, diagnostics)


def get_nodes(tree: ProofTree) -> list[ProofNode]:
    """All nodes in creation order."""
    return list(tree.nodes)


def get_proof(tree: ProofTree, node_id: int) -> list[str]:
    """Preorder DFS tactic accumulation rooted at node_id.

    On DAGs a shared child is visited once per incoming path; a per-path
    ancestor set guards against cycles (defensive only).
    """
    tree.node(node_id)
    out: list[str] = []

    def dfs(nid: int, path: frozenset[int]) -> None:
        node = tree.nodes[nid]
        out.append(node.tactic)
        for child in node.children:
            if child not in path:
                dfs(child, path | {nid})

    dfs(node_id, frozenset())
    return out
