"""Iterative-deepening finite model builder.

For k = 1, 2, ... the input is clausified, flattened, grounded over the
domain {0..k-1} and handed to the CDCL solver.  Clausification here is not
the prover's: quantifiers are first pushed inward and non-literal
disjuncts are named by fresh definition predicates, so that every clause
mentions only a few variables and the ground problem stays small.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from ..fole.cnf import SkolemNamer, nnf, standardize_apart
from ..fole.syntax import And, Atom, Const, Equal, Exists, Forall, Func, Not, Or, Var, predicates, subst_term, term_vars
from .model import evaluate
from .sat import solve
from .results import MODEL_BUILDER, Cancelled, FiniteModel, ReasonerConfig, Satisfiable, Unknown

DEF_PREFIX = "def$"


# ------------------------------------------------------------ clausifying


def _flat(f, cls):
    if isinstance(f, cls):
        return _flat(f.left, cls) + _flat(f.right, cls)
    return [f]


def _fv(f) -> frozenset:
    if isinstance(f, Atom):
        return frozenset().union(*(term_vars(a) for a in f.args)) if f.args else frozenset()
    if isinstance(f, Equal):
        return frozenset(term_vars(f.left) | term_vars(f.right))
    if isinstance(f, Not):
        return _fv(f.body)
    if isinstance(f, (And, Or)):
        return _fv(f.left) | _fv(f.right)
    return _fv(f.body) - {f.var}


def _build(parts, cls):
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = cls(p, out)
    return out


def miniscope(f):
    """Push quantifiers of an NNF formula as far inward as possible."""
    if isinstance(f, (And, Or)):
        cls = type(f)
        return _build([miniscope(p) for p in _flat(f, cls)], cls)
    if isinstance(f, (Exists, Forall)):
        body = miniscope(f.body)
        if f.var not in _fv(body):
            return body
        # forall distributes over and, exists over or
        spread = And if isinstance(f, Forall) else Or
        keep = Or if isinstance(f, Forall) else And
        if isinstance(body, spread):
            return _build([miniscope(type(f)(f.var, p)) for p in _flat(body, spread)], spread)
        if isinstance(body, keep):
            parts = _flat(body, keep)
            inside = [p for p in parts if f.var in _fv(p)]
            outside = [p for p in parts if f.var not in _fv(p)]
            if outside:
                return _build(outside + [type(f)(f.var, _build(inside, keep))], keep)
        return type(f)(f.var, body)
    return f


def _skolemize(f, namer: SkolemNamer, env: dict):
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, env) for a in f.args))
    if isinstance(f, Equal):
        return Equal(subst_term(f.left, env), subst_term(f.right, env))
    if isinstance(f, Not):
        return Not(_skolemize(f.body, namer, env))
    if isinstance(f, (And, Or)):
        return type(f)(_skolemize(f.left, namer, env), _skolemize(f.right, namer, env))
    if isinstance(f, Forall):
        return Forall(f.var, _skolemize(f.body, namer, env))
    # Exists: depend on the free variables of this subformula only
    names = set()
    for v in _fv(f):
        names |= term_vars(subst_term(Var(v), env))
    deps = tuple(Var(v) for v in sorted(names))
    name = namer.fresh()
    witness = Func(name, deps) if deps else Const(name)
    return _skolemize(f.body, namer, {**env, f.var: witness})


class _Definer:
    def __init__(self):
        self.count = itertools.count(1)
        self.clauses: list[list] = []

    def clauses_of(self, f) -> list[list]:
        if isinstance(f, Forall):
            return self.clauses_of(f.body)
        if isinstance(f, And):
            return [c for p in _flat(f, And) for c in self.clauses_of(p)]
        if isinstance(f, Or):
            lits = []
            for p in _flat(f, Or):
                if isinstance(p, (Atom, Equal, Not)):
                    lits.append(p)
                else:
                    lits.append(self.define(p))
            return [lits]
        return [[f]]

    def define(self, f):
        args = tuple(Var(v) for v in sorted(_fv(f)))
        head = Atom(f"{DEF_PREFIX}{next(self.count)}", args)
        for c in self.clauses_of(f):
            self.clauses.append([Not(head)] + c)
        return head


def ground_ready_clauses(formulas, namer: SkolemNamer | None = None) -> list[list]:
    """Clause lists (of literal formulas) with few variables per clause."""
    namer = namer or SkolemNamer()
    definer = _Definer()
    out = []
    counter = itertools.count(1)
    for f in formulas:
        g = standardize_apart(nnf(f), {}, counter)
        g = _skolemize(miniscope(g), namer, {})
        out.extend(definer.clauses_of(g))
    return out + definer.clauses


# ------------------------------------------------------------ flattening


@dataclass(frozen=True)
class _FlatClause:
    vars: tuple
    preds: tuple  # (positive, pred, argvars)
    eqs: tuple  # (positive, v1, v2)
    funcs: tuple  # (fname, argvars, resultvar), read as f(args) != result


def _flatten(lits) -> _FlatClause:
    preds, eqs, funcs = [], [], []
    cache: dict = {}
    fresh = itertools.count(1)

    def name_of(t):
        if isinstance(t, Var):
            return t.name
        if t in cache:
            return cache[t]
        sub = tuple(name_of(a) for a in t.args) if isinstance(t, Func) else ()
        y = f"$Y{next(fresh)}"
        cache[t] = y
        funcs.append((t.name, sub, y))
        return y

    for lit in lits:
        positive = not isinstance(lit, Not)
        core = lit.body if isinstance(lit, Not) else lit
        if isinstance(core, Equal):
            eqs.append((positive, name_of(core.left), name_of(core.right)))
        else:
            preds.append((positive, core.pred, tuple(name_of(a) for a in core.args)))
    names = []
    for _, _, args in preds:
        names.extend(args)
    for _, a, b in eqs:
        names += [a, b]
    for _, args, y in funcs:
        names.extend(args)
        names.append(y)
    return _FlatClause(tuple(dict.fromkeys(names)), tuple(preds), tuple(eqs), tuple(funcs))


def _symbols(clauses):
    preds, funcs, const_order = {}, {}, []

    def scan(t):
        if isinstance(t, Func):
            funcs[t.name] = len(t.args)
            for a in t.args:
                scan(a)
        elif isinstance(t, Const):
            funcs[t.name] = 0
            if t.name not in const_order:
                const_order.append(t.name)

    for c in clauses:
        for lit in c:
            core = lit.body if isinstance(lit, Not) else lit
            if isinstance(core, Equal):
                scan(core.left)
                scan(core.right)
            else:
                preds[core.pred] = len(core.args)
                for a in core.args:
                    scan(a)
    return preds, funcs, const_order


# ------------------------------------------------------------ grounding


class _Grounder:
    def __init__(self, k: int, funcs: dict, const_order: list, check):
        self.k = k
        self.ids: dict = {}
        self.clauses: list[list[int]] = []
        self.check = check
        self.impossible = set()
        # the j-th constant only takes values 0..j; sound, since any model
        # can be permuted so constants appear in order of first use
        for j, c in enumerate(const_order):
            for v in range(min(j, k - 1) + 1, k):
                self.impossible.add(("F", c, (), v))
        for name, arity in sorted(funcs.items()):
            for args in itertools.product(range(k), repeat=arity):
                vals = [v for v in range(k) if ("F", name, args, v) not in self.impossible]
                self.clauses.append([self.var(("F", name, args, v)) for v in vals])
                for a, b in itertools.combinations(vals, 2):
                    self.clauses.append([-self.var(("F", name, args, a)), -self.var(("F", name, args, b))])

    def var(self, key) -> int:
        i = self.ids.get(key)
        if i is None:
            i = self.ids[key] = len(self.ids) + 1
        return i

    def add(self, fc: _FlatClause):
        k = self.k
        n = 0
        for values in itertools.product(range(k), repeat=len(fc.vars)):
            n += 1
            if n % 4096 == 0:
                self.check()
            env = dict(zip(fc.vars, values))
            if any((env[a] == env[b]) == pos for pos, a, b in fc.eqs):
                continue
            out = []
            sat = False
            for name, args, y in fc.funcs:
                key = ("F", name, tuple(env[a] for a in args), env[y])
                if key in self.impossible:
                    sat = True
                    break
                out.append(-self.var(key))
            if sat:
                continue
            for pos, pred, args in fc.preds:
                i = self.var(("P", pred, tuple(env[a] for a in args)))
                out.append(i if pos else -i)
            self.clauses.append(out)


def find_model(formulas, cfg: ReasonerConfig | None = None, cancel=None):
    """Search for a finite model of the conjunction of closed ``formulas``.

    Returns Satisfiable with a model that has been re-checked by the
    evaluator, or Unknown when no model exists up to ``max_domain_size``
    or a limit was hit.
    """
    cfg = cfg or ReasonerConfig()
    formulas = list(formulas)
    deadline = time.monotonic() + cfg.max_seconds

    def check():
        if cancel is not None and cancel.is_set():
            raise Cancelled()
        if time.monotonic() > deadline:
            raise TimeoutError()

    clauses = ground_ready_clauses(formulas)
    flat = [_flatten(c) for c in clauses]
    preds, funcs, const_order = _symbols(clauses)
    user_preds = {}
    for f in formulas:
        user_preds.update(predicates(f))
    try:
        for k in range(1, cfg.max_domain_size + 1):
            check()
            g = _Grounder(k, funcs, const_order, check)
            for fc in flat:
                g.add(fc)
            assignment = solve(len(g.ids), g.clauses, cancel)
            if assignment is None:
                continue
            model = _rebuild(k, g.ids, assignment, user_preds, funcs)
            for f in formulas:
                if not evaluate(model, f):
                    raise AssertionError("model builder produced a model that fails evaluation")
            return Satisfiable(model, MODEL_BUILDER)
    except Cancelled:
        return Unknown("cancelled", MODEL_BUILDER)
    except TimeoutError:
        return Unknown(f"time limit {cfg.max_seconds}s reached", MODEL_BUILDER)
    return Unknown(f"no model with domain size <= {cfg.max_domain_size}", MODEL_BUILDER)


def _rebuild(k, ids, assignment, user_preds, funcs) -> FiniteModel:
    tables = {p: set() for p in user_preds}
    fvals: dict = {}
    for key, i in ids.items():
        if not assignment[i]:
            continue
        if key[0] == "P" and key[1] in tables:
            tables[key[1]].add(key[2])
        elif key[0] == "F":
            fvals[(key[1], key[2])] = key[3]
    constant_map = {}
    function_tables: dict = {}
    for (name, args), v in sorted(fvals.items()):
        if funcs[name] == 0:
            constant_map[name] = v
        else:
            function_tables.setdefault(name, {})[args] = v
    return FiniteModel(
        k,
        constant_map,
        {p: frozenset(rows) for p, rows in tables.items()},
        function_tables,
    )
