"""Syntactic unification with occurs check, and one-way matching."""

from __future__ import annotations

from ..fole.syntax import Const, Func, Var


def walk(t, subst: dict):
    while isinstance(t, Var) and t.name in subst:
        t = subst[t.name]
    return t


def occurs(name: str, t, subst: dict) -> bool:
    t = walk(t, subst)
    if isinstance(t, Var):
        return t.name == name
    if isinstance(t, Func):
        return any(occurs(name, a, subst) for a in t.args)
    return False


def unify(a, b, subst: dict | None = None) -> dict | None:
    """Extend ``subst`` (triangular form) so that ``a`` and ``b`` become equal."""
    subst = dict(subst) if subst else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = walk(x, subst), walk(y, subst)
        if x == y:
            continue
        if isinstance(x, Var):
            if occurs(x.name, y, subst):
                return None
            subst[x.name] = y
        elif isinstance(y, Var):
            if occurs(y.name, x, subst):
                return None
            subst[y.name] = x
        elif isinstance(x, Func) and isinstance(y, Func):
            if x.name != y.name or len(x.args) != len(y.args):
                return None
            stack.extend(zip(x.args, y.args))
        else:
            return None
    return subst


def unify_args(xs, ys, subst: dict | None = None) -> dict | None:
    if len(xs) != len(ys):
        return None
    subst = dict(subst) if subst else {}
    for x, y in zip(xs, ys):
        subst = unify(x, y, subst)
        if subst is None:
            return None
    return subst


def resolve_term(t, subst: dict):
    """Apply a triangular substitution fully."""
    t = walk(t, subst)
    if isinstance(t, Func):
        return Func(t.name, tuple(resolve_term(a, subst) for a in t.args))
    return t


def solved(subst: dict) -> dict:
    """Idempotent form of a triangular substitution."""
    return {k: resolve_term(Var(k), subst) for k in subst}


def match(pattern, target, subst: dict) -> dict | None:
    """One-way matching: bind variables of ``pattern`` only."""
    stack = [(pattern, target)]
    subst = dict(subst)
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = subst.get(p.name)
            if bound is None:
                subst[p.name] = t
            elif bound != t:
                return None
        elif isinstance(p, Const):
            if p != t:
                return None
        else:
            if not isinstance(t, Func) or t.name != p.name or len(t.args) != len(p.args):
                return None
            stack.extend(zip(p.args, t.args))
    return subst
