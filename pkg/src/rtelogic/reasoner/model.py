"""Tarskian evaluation of formulas in a finite model."""

from __future__ import annotations

import itertools

from ..fole.syntax import And, Atom, Const, Equal, Exists, Forall, Func, Iff, Imp, Not, Or, Var
from .results import FiniteModel


class EvaluationError(KeyError):
    pass


def eval_term(model: FiniteModel, t, env: dict) -> int:
    if isinstance(t, Var):
        if t.name not in env:
            raise EvaluationError(f"unbound variable {t.name}")
        return env[t.name]
    if isinstance(t, Const):
        if t.name in model.constant_map:
            return model.constant_map[t.name]
        raise EvaluationError(f"unmapped constant {t.name}")
    if isinstance(t, Func):
        table = model.function_tables.get(t.name)
        if table is None:
            raise EvaluationError(f"uninterpreted function {t.name}")
        return table[tuple(eval_term(model, a, env) for a in t.args)]
    raise TypeError(f"not a term: {t!r}")


def evaluate(model: FiniteModel, f, env: dict | None = None) -> bool:
    """Truth value of ``f`` in ``model``; quantifiers range over the domain."""
    env = env or {}
    if isinstance(f, Atom):
        row = tuple(eval_term(model, a, env) for a in f.args)
        return row in model.predicate_tables.get(f.pred, ())
    if isinstance(f, Equal):
        return eval_term(model, f.left, env) == eval_term(model, f.right, env)
    if isinstance(f, Not):
        return not evaluate(model, f.body, env)
    if isinstance(f, And):
        return evaluate(model, f.left, env) and evaluate(model, f.right, env)
    if isinstance(f, Or):
        return evaluate(model, f.left, env) or evaluate(model, f.right, env)
    if isinstance(f, Imp):
        return (not evaluate(model, f.left, env)) or evaluate(model, f.right, env)
    if isinstance(f, Iff):
        return evaluate(model, f.left, env) == evaluate(model, f.right, env)
    if isinstance(f, (Exists, Forall)):
        test = any if isinstance(f, Exists) else all
        return test(evaluate(model, f.body, {**env, f.var: d}) for d in range(model.domain_size))
    raise TypeError(f"not a formula: {f!r}")


def satisfies_clause(model: FiniteModel, clause) -> bool:
    """Check a clause with its variables read universally."""
    names = sorted(clause.vars())
    for values in itertools.product(range(model.domain_size), repeat=len(names)):
        env = dict(zip(names, values))
        ok = False
        for lit in clause.literals:
            args = tuple(eval_term(model, a, env) for a in lit.args)
            if lit.pred == "=":
                truth = args[0] == args[1]
            else:
                truth = args in model.predicate_tables.get(lit.pred, ())
            if truth == lit.positive:
                ok = True
                break
        if not ok:
            return False
    return True
