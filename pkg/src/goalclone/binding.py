"""Free variables, capture-avoiding substitution, alpha-equivalence, prod_body."""

from __future__ import annotations

from .terms import App, Fix, Forall, Fun, Let, Match, Clause, Sort, Term, Var

__all__ = ["free_vars", "substitute", "alpha_eq", "prod_body", "fresh_name"]


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Sort):
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, (Forall, Fun)):
        return free_vars(t.binder_type) | (free_vars(t.body) - {t.binder})
    if isinstance(t, Let):
        return (
            free_vars(t.binder_type)
            | free_vars(t.bound)
            | (free_vars(t.body) - {t.binder})
        )
    if isinstance(t, Fix):
        return (
            free_vars(t.binder_type)
            | free_vars(t.return_type)
            | (free_vars(t.body) - {t.binder, t.fn_name})
        )
    if isinstance(t, Match):
        fv = free_vars(t.scrutinee) | free_vars(t.return_type)
        for clause in t.clauses:
            fv |= free_vars(clause.body) - set(clause.atoms)
        return fv
    raise TypeError(f"not a Term: {t!r}")


def fresh_name(base: str, avoid: frozenset[str] | set[str]) -> str:
    """base, or the first of base', base'', ... not in avoid."""
    name = base
    while name in avoid:
        name += "'"
    return name


def substitute(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding substitution of u for free occurrences of x in t.

    Binders that would capture a free variable of u are renamed to a fresh
    name first, so substitution is total; shadowing binders stop substitution
    in their body.
    """
    fvu = free_vars(u)

    def freshen(
        binder: str, body: Term, siblings: frozenset[str] | set[str] = frozenset()
    ) -> tuple[str, Term]:
        if binder not in fvu:
            return binder, body
        new = fresh_name(binder, fvu | free_vars(body) | {x} | set(siblings))
        return new, substitute(body, binder, Var(new))

    def go(t: Term) -> Term:
        if isinstance(t, Sort):
            return t
        if isinstance(t, Var):
            return u if t.name == x else t
        if isinstance(t, App):
            return App(go(t.fn), go(t.arg))
        if isinstance(t, (Forall, Fun)):
            ty = go(t.binder_type)
            if t.binder == x:
                return type(t)(t.binder, ty, t.body)
            binder, body = freshen(t.binder, t.body)
            return type(t)(binder, ty, go(body))
        if isinstance(t, Let):
            ty = go(t.binder_type)
            bound = go(t.bound)
            if t.binder == x:
                return Let(t.binder, ty, bound, t.body)
            binder, body = freshen(t.binder, t.body)
            return Let(binder, ty, bound, go(body))
        if isinstance(t, Fix):
            ty = go(t.binder_type)
            rty = go(t.return_type)
            if x in (t.fn_name, t.binder):
                return Fix(t.fn_name, t.binder, ty, rty, t.body)
            fn_name, body = freshen(t.fn_name, t.body, {t.binder})
            binder, body = freshen(t.binder, body, {fn_name})
            return Fix(fn_name, binder, ty, rty, go(body))
        if isinstance(t, Match):
            clauses = []
            for clause in t.clauses:
                if x in clause.atoms:
                    clauses.append(clause)
                    continue
                atoms = list(clause.atoms)
                body = clause.body
                # right to left: with duplicate atom names the later binding
                # shadows, so its occurrences must be renamed first
                for k in range(len(atoms) - 1, -1, -1):
                    others = set(atoms[:k]) | set(atoms[k + 1:])
                    atoms[k], body = freshen(atoms[k], body, others)
                clauses.append(Clause(tuple(atoms), go(body)))
            return Match(go(t.scrutinee), go(t.return_type), tuple(clauses))
        raise TypeError(f"not a Term: {t!r}")

    return go(t)


def alpha_eq(t1: Term, t2: Term) -> bool:
    """Decide alpha-equivalence by simultaneous traversal.

    Bound occurrences are matched through binding depth; free variables must
    agree by exact name. Match clause atoms (constructor name included) enter
    the correspondence uniformly.
    """
    return _alpha(t1, t2, {}, {}, 0)


def _alpha(a: Term, b: Term, env1: dict[str, int], env2: dict[str, int], d: int) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Sort):
        return a.kind == b.kind
    if isinstance(a, Var):
        l1 = env1.get(a.name)
        l2 = env2.get(b.name)
        if l1 is None and l2 is None:
            return a.name == b.name
        return l1 == l2
    if isinstance(a, App):
        return _alpha(a.fn, b.fn, env1, env2, d) and _alpha(a.arg, b.arg, env1, env2, d)
    if isinstance(a, (Forall, Fun)):
        if not _alpha(a.binder_type, b.binder_type, env1, env2, d):
            return False
        return _alpha(a.body, b.body, env1 | {a.binder: d}, env2 | {b.binder: d}, d + 1)
    if isinstance(a, Let):
        if not _alpha(a.binder_type, b.binder_type, env1, env2, d):
            return False
        if not _alpha(a.bound, b.bound, env1, env2, d):
            return False
        return _alpha(a.body, b.body, env1 | {a.binder: d}, env2 | {b.binder: d}, d + 1)
    if isinstance(a, Fix):
        if not _alpha(a.binder_type, b.binder_type, env1, env2, d):
            return False
        if not _alpha(a.return_type, b.return_type, env1, env2, d):
            return False
        e1 = env1 | {a.fn_name: d, a.binder: d + 1}
        e2 = env2 | {b.fn_name: d, b.binder: d + 1}
        return _alpha(a.body, b.body, e1, e2, d + 2)
    if isinstance(a, Match):
        if not _alpha(a.scrutinee, b.scrutinee, env1, env2, d):
            return False
        if not _alpha(a.return_type, b.return_type, env1, env2, d):
            return False
        if len(a.clauses) != len(b.clauses):
            return False
        for c1, c2 in zip(a.clauses, b.clauses):
            if len(c1.atoms) != len(c2.atoms):
                return False
            e1 = env1 | {atom: d + k for k, atom in enumerate(c1.atoms)}
            e2 = env2 | {atom: d + k for k, atom in enumerate(c2.atoms)}
            if not _alpha(c1.body, c2.body, e1, e2, d + len(c1.atoms)):
                return False
        return True
    raise TypeError(f"not a Term: {a!r}")


def prod_body(t: Term, t2: Term) -> bool:
    """True iff t is a universally quantified term and t2 is one of its
    quantifier-stripped bodies (strict structural equality, at least one peel).
    """
    while isinstance(t, Forall):
        t = t.body
        if t == t2:
            return True
    return False
