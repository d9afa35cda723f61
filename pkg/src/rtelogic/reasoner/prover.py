"""Given-clause binary resolution with factoring and subsumption."""

from __future__ import annotations

import heapq
import itertools
import time

from ..fole.cnf import EQ, Clause, Literal
from ..fole.syntax import Func, Var
from .results import PROVER, ProofStep, ReasonerConfig, Refutation, Unknown, Unsatisfiable
from .unify import match, solved, unify_args


def equality_axioms(clauses) -> list[Clause]:
    """Reflexivity, symmetry, transitivity and congruence for ``=``."""
    preds: dict[str, int] = {}
    funcs: dict[str, int] = {}

    def scan_term(t):
        if isinstance(t, Func):
            funcs[t.name] = len(t.args)
            for a in t.args:
                scan_term(a)

    for c in clauses:
        for lit in c.literals:
            if lit.pred != EQ:
                preds[lit.pred] = len(lit.args)
            for a in lit.args:
                scan_term(a)

    X, Y, Z = Var("X1"), Var("X2"), Var("X3")
    out = [
        Clause(frozenset([Literal(True, EQ, (X, X))])),
        Clause(frozenset([Literal(False, EQ, (X, Y)), Literal(True, EQ, (Y, X))])),
        Clause(frozenset([Literal(False, EQ, (X, Y)), Literal(False, EQ, (Y, Z)), Literal(True, EQ, (X, Z))])),
    ]
    for name, arity in sorted(preds.items()):
        for i in range(arity):
            args = [Var(f"A{j}") for j in range(arity)]
            left = tuple(args[:i] + [X] + args[i + 1:])
            right = tuple(args[:i] + [Y] + args[i + 1:])
            out.append(Clause(frozenset([
                Literal(False, EQ, (X, Y)), Literal(False, name, left), Literal(True, name, right)])))
    for name, arity in sorted(funcs.items()):
        for i in range(arity):
            args = [Var(f"A{j}") for j in range(arity)]
            left = Func(name, tuple(args[:i] + [X] + args[i + 1:]))
            right = Func(name, tuple(args[:i] + [Y] + args[i + 1:]))
            out.append(Clause(frozenset([Literal(False, EQ, (X, Y)), Literal(True, EQ, (left, right))])))
    return [c.normalized() for c in out]


def _signature(c: Clause) -> frozenset:
    return frozenset((lit.positive, lit.pred) for lit in c.literals)


def subsumes(c: Clause, d: Clause) -> bool:
    """True if some substitution maps every literal of ``c`` into ``d``."""
    if len(c) > len(d) or not _signature(c) <= _signature(d):
        return False
    lits = sorted(c.literals, key=lambda lit: -len(lit.args))
    targets = list(d.literals)

    def search(i, subst):
        if i == len(lits):
            return True
        lit = lits[i]
        for t in targets:
            if t.positive != lit.positive or t.pred != lit.pred:
                continue
            s = subst
            for pa, ta in zip(lit.args, t.args):
                s = match(pa, ta, s)
                if s is None:
                    break
            if s is not None and search(i + 1, s):
                return True
        return False

    return search(0, {})


def _rename_apart(c: Clause) -> tuple[Clause, dict]:
    mapping = {v: Var(f"R{v}") for v in sorted(c.vars())}
    return c.substitute(mapping), mapping


def _apply(lits, sigma) -> Clause:
    return Clause(frozenset(lit.substitute(sigma) for lit in lits))


class Prover:
    """Binary resolution with negative literal selection.

    In a clause with negative literals only one of them (the selected one)
    takes part in inferences; clauses without negative literals resolve
    and factor on every literal.  The selected literal is the one whose
    predicate occurs positively in the fewest input clauses, which makes
    taxonomy axioms fire forward from facts.
    """

    def __init__(self, clauses, cfg: ReasonerConfig, cancel=None):
        self.cfg = cfg
        self.cancel = cancel
        self.steps: list[ProofStep] = []
        self.passive: list = []
        self.active: list[int] = []
        self.dead: set[int] = set()
        self.index: dict[tuple, list[int]] = {}
        self.seen: set[Clause] = set()
        self.deadline = time.monotonic() + cfg.max_seconds
        self.clauses = list(clauses)
        self.sigs: dict[int, frozenset] = {}
        self.pos_count: dict[str, int] = {}
        for c in self.clauses:
            for pred in {lit.pred for lit in c.literals if lit.positive}:
                self.pos_count[pred] = self.pos_count.get(pred, 0) + 1

    def eligible(self, c: Clause) -> list[Literal]:
        lits = c.sorted_literals()
        neg = [lit for lit in lits if not lit.positive]
        if not neg:
            return lits

        def key(lit):
            ground = sum(1 for a in lit.args if not isinstance(a, Var))
            return (self.pos_count.get(lit.pred, 0), -ground, str(lit))

        return [min(neg, key=key)]

    # -- bookkeeping

    def _add(self, clause: Clause, rule: str, **info) -> ProofStep | None:
        clause = clause.normalized()
        if clause.is_tautology() or clause in self.seen:
            return None
        self.seen.add(clause)
        step = ProofStep(len(self.steps), clause, rule, **info)
        self.steps.append(step)
        self.sigs[step.id] = _signature(clause)
        heapq.heappush(self.passive, (len(clause), step.id))
        return step

    def _check_limits(self):
        if self.cancel is not None and self.cancel.is_set():
            return "cancelled"
        if len(self.steps) > self.cfg.max_clauses:
            return f"clause limit {self.cfg.max_clauses} reached"
        if time.monotonic() > self.deadline:
            return f"time limit {self.cfg.max_seconds}s reached"
        return None

    def _extract(self, last: ProofStep) -> Refutation:
        keep = set()
        stack = [last.id]
        while stack:
            i = stack.pop()
            if i in keep:
                continue
            keep.add(i)
            stack.extend(self.steps[i].parents)
        return Refutation(tuple(self.steps[i] for i in sorted(keep)), generated=len(self.steps))

    # -- inferences

    def _factors(self, given: ProofStep):
        lits = given.clause.sorted_literals()
        if any(not lit.positive for lit in lits):
            return
        for i, j in itertools.combinations(range(len(lits)), 2):
            a, b = lits[i], lits[j]
            if a.pred != b.pred:
                continue
            s = unify_args(a.args, b.args)
            if s is None:
                continue
            sigma = solved(s)
            yield _apply(lits, sigma), dict(parents=(given.id,), literals=(a, b), unifier=tuple(sorted(sigma.items())))

    def _resolvents(self, given: ProofStep, other: ProofStep):
        renamed, mapping = _rename_apart(other.clause)
        glits = given.clause.sorted_literals()
        olits = sorted(renamed.literals, key=str)
        g_ok = self.eligible(given.clause)
        o_ok = [lit.substitute(mapping) for lit in self.eligible(other.clause)]
        for lg in g_ok:
            for lo in o_ok:
                if lg.positive == lo.positive or lg.pred != lo.pred:
                    continue
                s = unify_args(lg.args, lo.args)
                if s is None:
                    continue
                sigma = solved(s)
                rest = [x for x in glits if x != lg] + [x for x in olits if x != lo]
                yield _apply(rest, sigma), dict(
                    parents=(given.id, other.id),
                    literals=(lg, lo),
                    renaming=tuple(sorted((k, v) for k, v in mapping.items())),
                    unifier=tuple(sorted(sigma.items())),
                )

    def _forward_subsumed(self, c: Clause) -> bool:
        sig = _signature(c)
        return any(
            i not in self.dead and self.sigs[i] <= sig and subsumes(self.steps[i].clause, c)
            for i in self.active
        )

    def _backward_delete(self, c: Clause):
        sig = _signature(c)
        for i in self.active:
            if i not in self.dead and sig <= self.sigs[i] and subsumes(c, self.steps[i].clause):
                self.dead.add(i)

    # -- main loop

    def run(self):
        if not self.clauses:
            return Unknown("no clauses: the prover cannot certify satisfiability", PROVER)
        inputs = list(self.clauses)
        if any(lit.pred == EQ for c in inputs for lit in c.literals):
            for c in equality_axioms(inputs):
                self._add(c, "equality")
        for c in inputs:
            step = self._add(c, "input")
            if step is not None and step.clause.is_empty:
                return Unsatisfiable(self._extract(step))

        while self.passive:
            reason = self._check_limits()
            if reason:
                return Unknown(reason, PROVER)
            _, gid = heapq.heappop(self.passive)
            given = self.steps[gid]
            if given.clause.is_empty:
                return Unsatisfiable(self._extract(given))
            if self._forward_subsumed(given.clause):
                continue
            self._backward_delete(given.clause)
            self.active.append(gid)
            for lit in self.eligible(given.clause):
                self.index.setdefault((lit.positive, lit.pred), []).append(gid)

            produced = list(self._factors(given))
            partners = set()
            for lit in self.eligible(given.clause):
                partners.update(self.index.get((not lit.positive, lit.pred), ()))
            for oid in sorted(partners):
                if oid in self.dead:
                    continue
                produced.extend(self._resolvents(given, self.steps[oid]))
            for clause, info in produced:
                rule = "factor" if len(info["parents"]) == 1 else "resolve"
                step = self._add(clause, rule, **info)
                if step is not None and step.clause.is_empty:
                    return Unsatisfiable(self._extract(step))
        return Unknown("saturated without refutation", PROVER)


def prove_unsat(clauses, cfg: ReasonerConfig | None = None, cancel=None):
    """Try to refute ``clauses``.

    Returns Unsatisfiable with a replayable trace, or Unknown.  The prover
    never claims satisfiability, even after saturation.
    """
    return Prover(clauses, cfg or ReasonerConfig(), cancel).run()
