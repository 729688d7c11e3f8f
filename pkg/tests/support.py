"""Shared test support: independent oracles and random term generators.

Everything here is deliberately implemented without reusing the traversal
logic under test (binding.alpha_eq / binding.substitute); the oracles give
a second, independent route to the same answers.
"""

from __future__ import annotations

import itertools
import random

from goalclone.terms import (
    App,
    Clause,
    Fix,
    Forall,
    Fun,
    Let,
    Match,
    Sort,
    Term,
    Var,
)

# ---------------------------------------------------------------------------
# Oracle 1: bound-variable canonicalization (De-Bruijn-style).
# Two terms are alpha-equivalent iff their canonical strings are equal.


def canon(t: Term, env: dict[str, str] | None = None, depth: int = 0) -> str:
    env = env or {}

    def bind(names: list[str]) -> dict[str, str]:
        e = dict(env)
        for k, n in enumerate(names):
            e[n] = f"#{depth + k}"
        return e

    if isinstance(t, Sort):
        return f"(sort {t.kind})"
    if isinstance(t, Var):
        return env.get(t.name, f"(free {t.name})")
    if isinstance(t, App):
        return f"(app {canon(t.fn, env, depth)} {canon(t.arg, env, depth)})"
    if isinstance(t, (Forall, Fun)):
        tag = "forall" if isinstance(t, Forall) else "fun"
        ty = canon(t.binder_type, env, depth)
        body = canon(t.body, bind([t.binder]), depth + 1)
        return f"({tag} {ty} {body})"
    if isinstance(t, Let):
        ty = canon(t.binder_type, env, depth)
        bound = canon(t.bound, env, depth)
        body = canon(t.body, bind([t.binder]), depth + 1)
        return f"(let {ty} {bound} {body})"
    if isinstance(t, Fix):
        ty = canon(t.binder_type, env, depth)
        rty = canon(t.return_type, env, depth)
        body = canon(t.body, bind([t.fn_name, t.binder]), depth + 2)
        return f"(fix {ty} {rty} {body})"
    if isinstance(t, Match):
        scrut = canon(t.scrutinee, env, depth)
        rty = canon(t.return_type, env, depth)
        clauses = []
        for c in t.clauses:
            body = canon(c.body, bind(list(c.atoms)), depth + len(c.atoms))
            clauses.append(f"(clause {len(c.atoms)} {body})")
        return f"(match {scrut} {rty} {' '.join(clauses)})"
    raise TypeError(t)


def alpha_eq_oracle(t1: Term, t2: Term) -> bool:
    return canon(t1) == canon(t2)


# ---------------------------------------------------------------------------
# Oracle 2: substitution by global pre-freshening + naive replacement.
# Renaming every binder to a globally unique name first makes naive
# (capture-oblivious) substitution safe.

_fresh_counter = itertools.count()


def freshen_all_binders(t: Term, env: dict[str, str] | None = None) -> Term:
    env = env or {}

    def fresh() -> str:
        return f"fv{next(_fresh_counter)}"

    if isinstance(t, Sort):
        return t
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, App):
        return App(freshen_all_binders(t.fn, env), freshen_all_binders(t.arg, env))
    if isinstance(t, (Forall, Fun)):
        new = fresh()
        return type(t)(
            new,
            freshen_all_binders(t.binder_type, env),
            freshen_all_binders(t.body, env | {t.binder: new}),
        )
    if isinstance(t, Let):
        new = fresh()
        return Let(
            new,
            freshen_all_binders(t.binder_type, env),
            freshen_all_binders(t.bound, env),
            freshen_all_binders(t.body, env | {t.binder: new}),
        )
    if isinstance(t, Fix):
        new_f, new_x = fresh(), fresh()
        return Fix(
            new_f,
            new_x,
            freshen_all_binders(t.binder_type, env),
            freshen_all_binders(t.return_type, env),
            freshen_all_binders(t.body, env | {t.fn_name: new_f, t.binder: new_x}),
        )
    if isinstance(t, Match):
        clauses = []
        for c in t.clauses:
            news = [fresh() for _ in c.atoms]
            cenv = env | dict(zip(c.atoms, news))
            clauses.append(Clause(tuple(news), freshen_all_binders(c.body, cenv)))
        return Match(
            freshen_all_binders(t.scrutinee, env),
            freshen_all_binders(t.return_type, env),
            tuple(clauses),
        )
    raise TypeError(t)


def naive_subst(t: Term, x: str, u: Term) -> Term:
    if isinstance(t, Sort):
        return t
    if isinstance(t, Var):
        return u if t.name == x else t
    if isinstance(t, App):
        return App(naive_subst(t.fn, x, u), naive_subst(t.arg, x, u))
    if isinstance(t, (Forall, Fun)):
        body = t.body if t.binder == x else naive_subst(t.body, x, u)
        return type(t)(t.binder, naive_subst(t.binder_type, x, u), body)
    if isinstance(t, Let):
        body = t.body if t.binder == x else naive_subst(t.body, x, u)
        return Let(
            t.binder, naive_subst(t.binder_type, x, u), naive_subst(t.bound, x, u), body
        )
    if isinstance(t, Fix):
        body = t.body if x in (t.fn_name, t.binder) else naive_subst(t.body, x, u)
        return Fix(
            t.fn_name,
            t.binder,
            naive_subst(t.binder_type, x, u),
            naive_subst(t.return_type, x, u),
            body,
        )
    if isinstance(t, Match):
        clauses = [
            c if x in c.atoms else Clause(c.atoms, naive_subst(c.body, x, u))
            for c in t.clauses
        ]
        return Match(
            naive_subst(t.scrutinee, x, u),
            naive_subst(t.return_type, x, u),
            tuple(clauses),
        )
    raise TypeError(t)


def subst_oracle(t: Term, x: str, u: Term) -> Term:
    """Reference capture-avoiding substitution (up to alpha)."""
    return naive_subst(freshen_all_binders(t), x, u)


# ---------------------------------------------------------------------------
# Occurrence-scope audit: walk a term tracking enclosing binders and report
# the bound-name set at every occurrence of `name`.


def occurrence_scopes(t: Term, name: str, bound: frozenset[str] = frozenset()):
    if isinstance(t, Sort):
        return
    if isinstance(t, Var):
        if t.name == name:
            yield bound
        return
    if isinstance(t, App):
        yield from occurrence_scopes(t.fn, name, bound)
        yield from occurrence_scopes(t.arg, name, bound)
        return
    if isinstance(t, (Forall, Fun)):
        yield from occurrence_scopes(t.binder_type, name, bound)
        yield from occurrence_scopes(t.body, name, bound | {t.binder})
        return
    if isinstance(t, Let):
        yield from occurrence_scopes(t.binder_type, name, bound)
        yield from occurrence_scopes(t.bound, name, bound)
        yield from occurrence_scopes(t.body, name, bound | {t.binder})
        return
    if isinstance(t, Fix):
        yield from occurrence_scopes(t.binder_type, name, bound)
        yield from occurrence_scopes(t.return_type, name, bound)
        yield from occurrence_scopes(t.body, name, bound | {t.fn_name, t.binder})
        return
    if isinstance(t, Match):
        yield from occurrence_scopes(t.scrutinee, name, bound)
        yield from occurrence_scopes(t.return_type, name, bound)
        for c in t.clauses:
            yield from occurrence_scopes(c.body, name, bound | set(c.atoms))
        return
    raise TypeError(t)


# ---------------------------------------------------------------------------
# Random term generation (seeded `random.Random`, used by the acceptance
# suite where exact population sizes matter).

DEFAULT_NAMES = ("a", "b", "c", "d", "e", "f")
DEFAULT_SORTS = ("Set", "Prop", "Type")


def random_term(
    rng: random.Random,
    max_depth: int,
    names: tuple[str, ...] = DEFAULT_NAMES,
    sorts: tuple[str, ...] = DEFAULT_SORTS,
) -> Term:
    if max_depth <= 1:
        if rng.random() < 0.4:
            return Sort(rng.choice(sorts))
        return Var(rng.choice(names))

    def sub(d: int = 1) -> Term:
        return random_term(rng, max_depth - d, names, sorts)

    k = rng.randrange(12)
    if k < 2:
        return random_term(rng, 1, names, sorts)
    if k < 5:
        return App(sub(), sub())
    if k < 7:
        return Forall(rng.choice(names), sub(), sub())
    if k < 9:
        return Fun(rng.choice(names), sub(), sub())
    if k == 9:
        return Let(rng.choice(names), sub(), sub(), sub())
    if k == 10:
        return Fix(rng.choice(names), rng.choice(names), sub(), sub(), sub())
    clauses = tuple(
        Clause(
            tuple(rng.choice(names) for _ in range(rng.randint(1, 3))),
            sub(),
        )
        for _ in range(rng.randint(0, 2))
    )
    return Match(sub(), sub(), clauses)


_rename_counter = itertools.count()


def rename_bound(t: Term, env: dict[str, str] | None = None) -> Term:
    """Systematically rename every binder to a globally fresh name from a
    namespace disjoint from the generator alphabet; the result is
    alpha-equivalent to the input by construction."""
    env = env or {}

    def fresh() -> str:
        return f"rb{next(_rename_counter)}"

    if isinstance(t, Sort):
        return t
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, App):
        return App(rename_bound(t.fn, env), rename_bound(t.arg, env))
    if isinstance(t, (Forall, Fun)):
        new = fresh()
        return type(t)(
            new,
            rename_bound(t.binder_type, env),
            rename_bound(t.body, env | {t.binder: new}),
        )
    if isinstance(t, Let):
        new = fresh()
        return Let(
            new,
            rename_bound(t.binder_type, env),
            rename_bound(t.bound, env),
            rename_bound(t.body, env | {t.binder: new}),
        )
    if isinstance(t, Fix):
        new_f, new_x = fresh(), fresh()
        return Fix(
            new_f,
            new_x,
            rename_bound(t.binder_type, env),
            rename_bound(t.return_type, env),
            rename_bound(t.body, env | {t.fn_name: new_f, t.binder: new_x}),
        )
    if isinstance(t, Match):
        clauses = []
        for c in t.clauses:
            news = [fresh() for _ in c.atoms]
            cenv = env | dict(zip(c.atoms, news))
            clauses.append(Clause(tuple(news), rename_bound(c.body, cenv)))
        return Match(
            rename_bound(t.scrutinee, env),
            rename_bound(t.return_type, env),
            tuple(clauses),
        )
    raise TypeError(t)
