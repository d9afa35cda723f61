"""Clause normal form: NNF, standardize apart, skolemize, distribute."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .syntax import (
    SKOLEM_PREFIX,
    And,
    Atom,
    Const,
    Equal,
    Exists,
    Forall,
    Func,
    Iff,
    Imp,
    Not,
    Or,
    Var,
    free_vars,
    subst_term,
    term_vars,
)
from .parser import render_term

EQ = "="


@dataclass(frozen=True, order=True)
class Literal:
    """A signed atom.  Equality atoms use the predicate name ``=``."""

    positive: bool
    pred: str
    args: tuple

    def negate(self) -> "Literal":
        return Literal(not self.positive, self.pred, self.args)

    def vars(self) -> set[str]:
        out = set()
        for a in self.args:
            out |= term_vars(a)
        return out

    def substitute(self, mapping: dict) -> "Literal":
        return Literal(self.positive, self.pred, tuple(subst_term(a, mapping) for a in self.args))

    def __str__(self):
        if self.pred == EQ:
            body = f"{render_term(self.args[0])} = {render_term(self.args[1])}"
            return body if self.positive else f"-({body})"
        body = f"{self.pred}({','.join(render_term(a) for a in self.args)})"
        return body if self.positive else f"-{body}"


def _shape(t):
    # variable-blind sort key
    if isinstance(t, Var):
        return ("V",)
    if isinstance(t, Const):
        return ("C", t.name)
    return ("F", t.name, tuple(_shape(a) for a in t.args))


def _var_order(t, out):
    if isinstance(t, Var):
        if t.name not in out:
            out.append(t.name)
    elif isinstance(t, Func):
        for a in t.args:
            _var_order(a, out)


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals; variables are implicitly universal."""

    literals: frozenset

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.sorted_literals())

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def sorted_literals(self) -> list[Literal]:
        return sorted(self.literals, key=lambda lit: (lit.pred, not lit.positive, tuple(map(_shape, lit.args)), str(lit)))

    def vars(self) -> set[str]:
        out = set()
        for lit in self.literals:
            out |= lit.vars()
        return out

    def substitute(self, mapping: dict) -> "Clause":
        return Clause(frozenset(lit.substitute(mapping) for lit in self.literals))

    def is_tautology(self) -> bool:
        for lit in self.literals:
            if lit.negate() in self.literals:
                return True
            if lit.pred == EQ and lit.positive and lit.args[0] == lit.args[1]:
                return True
        return False

    def normalized(self) -> "Clause":
        """Rename variables to X1, X2, ... in a deterministic order."""
        order: list[str] = []
        for lit in self.sorted_literals():
            for a in lit.args:
                _var_order(a, order)
        mapping = {v: Var(f"X{i}") for i, v in enumerate(order, 1)}
        if all(mapping[v].name == v for v in order):
            return self
        # substitution is simultaneous, so X2->X1, X1->X2 cannot collide
        return self.substitute(mapping)

    def __str__(self):
        if not self.literals:
            return "$F"
        return " | ".join(str(lit) for lit in self.sorted_literals())


def clause(*literals: Literal) -> Clause:
    return Clause(frozenset(literals))


# ------------------------------------------------------------------ NNF


def nnf(f, negate: bool = False):
    """Negation normal form over And/Or/Exists/Forall and literals."""
    if isinstance(f, (Atom, Equal)):
        return Not(f) if negate else f
    if isinstance(f, Not):
        return nnf(f.body, not negate)
    if isinstance(f, And):
        cls = Or if negate else And
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, Or):
        cls = And if negate else Or
        return cls(nnf(f.left, negate), nnf(f.right, negate))
    if isinstance(f, Imp):
        if negate:
            return And(nnf(f.left), nnf(f.right, True))
        return Or(nnf(f.left, True), nnf(f.right))
    if isinstance(f, Iff):
        if negate:
            return Or(And(nnf(f.left), nnf(f.right, True)), And(nnf(f.left, True), nnf(f.right)))
        return And(Or(nnf(f.left, True), nnf(f.right)), Or(nnf(f.left), nnf(f.right, True)))
    if isinstance(f, Exists):
        cls = Forall if negate else Exists
        return cls(f.var, nnf(f.body, negate))
    if isinstance(f, Forall):
        cls = Exists if negate else Forall
        return cls(f.var, nnf(f.body, negate))
    raise TypeError(f"not a formula: {f!r}")


class SkolemNamer:
    """Hands out fresh ``sk_N`` symbols; share one across a problem."""

    def __init__(self, start: int = 1):
        self._counter = itertools.count(start)

    def fresh(self) -> str:
        return f"{SKOLEM_PREFIX}{next(self._counter)}"


def standardize_apart(f, env: dict, counter):
    """Give every quantifier a fresh ``_V<n>`` variable (NNF input)."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, env) for a in f.args))
    if isinstance(f, Equal):
        return Equal(subst_term(f.left, env), subst_term(f.right, env))
    if isinstance(f, Not):
        return Not(standardize_apart(f.body, env, counter))
    if isinstance(f, (And, Or)):
        return type(f)(standardize_apart(f.left, env, counter), standardize_apart(f.right, env, counter))
    if isinstance(f, (Exists, Forall)):
        new = f"_V{next(counter)}"
        inner = dict(env)
        inner[f.var] = Var(new)
        return type(f)(new, standardize_apart(f.body, inner, counter))
    raise TypeError(f"unexpected node after NNF: {f!r}")


def _skolemize(f, universals: tuple, namer: SkolemNamer, env: dict):
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, env) for a in f.args))
    if isinstance(f, Equal):
        return Equal(subst_term(f.left, env), subst_term(f.right, env))
    if isinstance(f, Not):
        return Not(_skolemize(f.body, universals, namer, env))
    if isinstance(f, (And, Or)):
        return type(f)(_skolemize(f.left, universals, namer, env), _skolemize(f.right, universals, namer, env))
    if isinstance(f, Forall):
        return Forall(f.var, _skolemize(f.body, universals + (f.var,), namer, env))
    if isinstance(f, Exists):
        # depend only on the universals actually free in the body
        needed = free_vars(f.body)
        deps = tuple(Var(u) for u in universals if u in needed)
        name = namer.fresh()
        witness = Func(name, deps) if deps else Const(name)
        inner = dict(env)
        inner[f.var] = witness
        return _skolemize(f.body, universals, namer, inner)
    raise TypeError(f"unexpected node after NNF: {f!r}")


def _drop_universals(f):
    while isinstance(f, Forall):
        f = f.body
    if isinstance(f, (And, Or)):
        return type(f)(_drop_universals(f.left), _drop_universals(f.right))
    return f


def _to_literal(f) -> Literal:
    positive = True
    if isinstance(f, Not):
        positive, f = False, f.body
    if isinstance(f, Atom):
        return Literal(positive, f.pred, f.args)
    if isinstance(f, Equal):
        return Literal(positive, EQ, (f.left, f.right))
    raise TypeError(f"not a literal: {f!r}")


def _distribute(f) -> list[frozenset]:
    if isinstance(f, And):
        return _distribute(f.left) + _distribute(f.right)
    if isinstance(f, Or):
        left, right = _distribute(f.left), _distribute(f.right)
        return [a | b for a in left for b in right]
    return [frozenset([_to_literal(f)])]


def to_clauses(f, namer: SkolemNamer | None = None) -> list[Clause]:
    """Equisatisfiable clause set for the closed formula ``f``.

    Returns a duplicate-free list in a deterministic order; tautologies are
    dropped.  Pass the same ``namer`` for every formula of one problem so
    that Skolem symbols stay distinct.
    """
    namer = namer or SkolemNamer()
    g = nnf(f)
    g = standardize_apart(g, {}, itertools.count(1))
    g = _skolemize(g, (), namer, {})
    g = _drop_universals(g)
    out: list[Clause] = []
    seen = set()
    for lits in _distribute(g):
        c = Clause(lits).normalized()
        if c.is_tautology() or c in seen:
            continue
        seen.add(c)
        out.append(c)
    return out


def clausify(formulas, namer: SkolemNamer | None = None) -> list[Clause]:
    """Clause form of a conjunction of closed formulas, duplicates removed."""
    namer = namer or SkolemNamer()
    out: list[Clause] = []
    seen = set()
    for f in formulas:
        for c in to_clauses(f, namer):
            if c not in seen:
                seen.add(c)
                out.append(c)
    return out
