"""Universally quantify a goal over its local context, dependency-ordered."""

from __future__ import annotations

from dataclasses import dataclass, field

from .binding import free_vars
from .terms import Forall, Term

__all__ = ["Hypothesis", "Context", "CycleError", "dependency_order", "generalize"]


class CycleError(Exception):
    """The hypothesis dependency graph is cyclic (corrupt trace)."""


@dataclass(frozen=True, slots=True)
class Hypothesis:
    name: str
    type_term: Term


@dataclass(frozen=True)
class Context:
    """Ordered local context; hypothesis names are unique."""

    hyps: tuple[Hypothesis, ...]
    _by_name: dict[str, Hypothesis] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_name = {}
        for h in self.hyps:
            if h.name in by_name:
                raise ValueError(f"duplicate hypothesis name {h.name!r}")
            by_name[h.name] = h
        object.__setattr__(self, "_by_name", by_name)

    def __iter__(self):
        return iter(self.hyps)

    def __len__(self):
        return len(self.hyps)

    def names(self) -> frozenset[str]:
        return frozenset(self._by_name)

    def lookup(self, name: str) -> Hypothesis | None:
        return self._by_name.get(name)


def dependency_order(ctx: Context, fvs: frozenset[str] | set[str]) -> list[str]:
    """Order the variables in fvs (closed under type dependencies within ctx)
    so that every variable follows the variables its type mentions.

    Ties between independent variables break by original context order.
    """
    names = ctx.names()
    unknown = set(fvs) - names
    if unknown:
        raise ValueError(f"variables not in context: {sorted(unknown)}")

    # Close fvs under dependencies: quantifying `a : A` needs A in scope
    # even when A is not free in the goal itself.
    needed: set[str] = set()
    work = list(fvs)
    while work:
        v = work.pop()
        if v in needed:
            continue
        needed.add(v)
        hyp = ctx.lookup(v)
        assert hyp is not None
        for w in free_vars(hyp.type_term) & names:
            if w not in needed:
                work.append(w)

    deps = {
        v: (free_vars(ctx.lookup(v).type_term) & needed) - {v} for v in needed
    }
    remaining = [h.name for h in ctx if h.name in needed]
    order: list[str] = []
    emitted: set[str] = set()
    while remaining:
        for k, v in enumerate(remaining):
            if deps[v] <= emitted:
                order.append(v)
                emitted.add(v)
                del remaining[k]
                break
        else:
            raise CycleError(f"cyclic context dependencies among {sorted(remaining)}")
    return order


def generalize(ctx: Context, goal: Term) -> Term:
    """Prepend `forall (v : T)` for each context variable free in the goal,
    dependencies first, so the result is closed over the context."""
    fvs = free_vars(goal) & ctx.names()
    order = dependency_order(ctx, fvs)
    for v in reversed(order):
        goal = Forall(v, ctx.lookup(v).type_term, goal)
    return goal
