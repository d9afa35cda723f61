"""Independent brute-force oracles.

Nothing here calls the package's evaluator, clausifier or engines; only
the AST classes are shared.  Interpretations over a fixed domain size are
enumerated all at once: every subformula evaluates to a bitmask over the
2**(#preds * d) predicate assignments, so a whole domain size costs one
pass over the formula.
"""

from __future__ import annotations

import functools
import itertools

from rtelogic.fole.syntax import And, Atom, Const, Exists, Forall, Func, Iff, Imp, Not, Or, Var


@functools.lru_cache(maxsize=None)
def _atom_masks(n_atoms: int) -> tuple:
    n = 1 << n_atoms
    masks = []
    for i in range(n_atoms):
        m = 0
        for a in range(n):
            if a >> i & 1:
                m |= 1 << a
        masks.append(m)
    return tuple(masks), (1 << n) - 1


class BitEval:
    """Evaluate monadic (plus Skolem-term) formulas over all predicate tables."""

    def __init__(self, preds, d: int, consts: dict, funcs: dict | None = None):
        self.preds = list(preds)
        self.d = d
        self.consts = consts
        self.funcs = funcs or {}
        self.masks, self.full = _atom_masks(len(self.preds) * d)
        self.index = {p: i for i, p in enumerate(self.preds)}

    def term(self, t, env):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return self.consts[t.name]
        if isinstance(t, Func):
            return self.funcs[t.name][tuple(self.term(a, env) for a in t.args)]
        raise TypeError(t)

    def atom_mask(self, pred, e):
        return self.masks[self.index[pred] * self.d + e]

    def ev(self, f, env=None) -> int:
        env = env or {}
        if isinstance(f, Atom):
            (arg,) = f.args
            return self.atom_mask(f.pred, self.term(arg, env))
        if isinstance(f, Not):
            return self.full ^ self.ev(f.body, env)
        if isinstance(f, And):
            return self.ev(f.left, env) & self.ev(f.right, env)
        if isinstance(f, Or):
            return self.ev(f.left, env) | self.ev(f.right, env)
        if isinstance(f, Imp):
            return (self.full ^ self.ev(f.left, env)) | self.ev(f.right, env)
        if isinstance(f, Iff):
            return self.full ^ (self.ev(f.left, env) ^ self.ev(f.right, env))
        if isinstance(f, Exists):
            out = 0
            for e in range(self.d):
                out |= self.ev(f.body, {**env, f.var: e})
            return out
        if isinstance(f, Forall):
            out = self.full
            for e in range(self.d):
                out &= self.ev(f.body, {**env, f.var: e})
            return out
        raise TypeError(f"oracle cannot evaluate {f!r}")


def formula_sat_at(formulas, d: int, preds, consts) -> bool:
    """Some interpretation of size ``d`` satisfies every formula."""
    consts = sorted(consts)
    for vals in itertools.product(range(d), repeat=len(consts)):
        ev = BitEval(preds, d, dict(zip(consts, vals)))
        m = ev.full
        for f in formulas:
            m &= ev.ev(f)
            if not m:
                break
        if m:
            return True
    return False


def formula_sat(formulas, preds, consts, max_d: int = 3) -> bool:
    return any(formula_sat_at(formulas, d, preds, consts) for d in range(1, max_d + 1))


def _function_tables(d, arity):
    keys = list(itertools.product(range(d), repeat=arity))
    for vals in itertools.product(range(d), repeat=len(keys)):
        yield dict(zip(keys, vals))


def clauses_sat_at(clauses, d: int, preds, budget: int = 20000) -> bool | None:
    """Satisfiability of a clause set (Literal objects) over domain size d.

    Skolem constants and functions are enumerated; None if that would take
    more than ``budget`` combinations.
    """
    consts, funcs = set(), {}

    def scan(t):
        if isinstance(t, Const):
            consts.add(t.name)
        elif isinstance(t, Func):
            funcs[t.name] = len(t.args)
            for a in t.args:
                scan(a)

    for c in clauses:
        for lit in c.literals:
            for a in lit.args:
                scan(a)
    consts = sorted(consts)
    fnames = sorted(funcs)
    combos = d ** len(consts)
    for fn in fnames:
        combos *= d ** (d ** funcs[fn])
    if combos > budget:
        return None
    for cvals in itertools.product(range(d), repeat=len(consts)):
        for tables in itertools.product(*(list(_function_tables(d, funcs[fn])) for fn in fnames)):
            ev = BitEval(preds, d, dict(zip(consts, cvals)), dict(zip(fnames, tables)))
            m = ev.full
            for c in clauses:
                names = sorted(c.vars())
                for vals in itertools.product(range(d), repeat=len(names)):
                    env = dict(zip(names, vals))
                    cm = 0
                    for lit in c.literals:
                        am = ev.atom_mask(lit.pred, ev.term(lit.args[0], env))
                        cm |= am if lit.positive else ev.full ^ am
                    m &= cm
                    if not m:
                        break
                if not m:
                    break
            if m:
                return True
    return False


# ------------------------------------------------------------ type collapse


def _tv(f, types, env, consts, preds):
    """Plain recursive evaluator over a structure whose elements are types."""
    if isinstance(f, Atom):
        t = f.args[0]
        e = env[t.name] if isinstance(t, Var) else consts[t.name]
        return bool(types[e] >> preds.index(f.pred) & 1)
    if isinstance(f, Not):
        return not _tv(f.body, types, env, consts, preds)
    if isinstance(f, And):
        return _tv(f.left, types, env, consts, preds) and _tv(f.right, types, env, consts, preds)
    if isinstance(f, Or):
        return _tv(f.left, types, env, consts, preds) or _tv(f.right, types, env, consts, preds)
    if isinstance(f, Imp):
        return (not _tv(f.left, types, env, consts, preds)) or _tv(f.right, types, env, consts, preds)
    if isinstance(f, Iff):
        return _tv(f.left, types, env, consts, preds) == _tv(f.right, types, env, consts, preds)
    test = any if isinstance(f, Exists) else all
    return test(_tv(f.body, types, {**env, f.var: e}, consts, preds) for e in range(len(types)))


def type_structures(preds, consts):
    """Every (realized type set, constant placement): one element per type."""
    n_types = 1 << len(preds)
    consts = sorted(consts)
    for r in range(1, n_types + 1):
        for realized in itertools.combinations(range(n_types), r):
            for place in itertools.product(range(r), repeat=len(consts)):
                yield realized, dict(zip(consts, place))


def type_collapse_sat(formulas, preds, consts) -> bool:
    """Exact satisfiability for monadic formulas without equality.

    Elements of equal type are indistinguishable, so every model collapses
    to one element per realized type.
    """
    preds = list(preds)
    for realized, cmap in type_structures(preds, consts):
        if all(_tv(f, realized, {}, cmap, preds) for f in formulas):
            return True
    return False


def type_vector(f, preds, consts) -> int:
    """Bitmask over type_structures: where ``f`` holds."""
    preds = list(preds)
    out = 0
    for i, (realized, cmap) in enumerate(type_structures(preds, consts)):
        if _tv(f, realized, {}, cmap, preds):
            out |= 1 << i
    return out


def brute_vector(f, preds, consts, max_d: int = 3) -> list[tuple[int, int]]:
    """Per domain size and constant placement: (mask where ``f`` holds, full mask)."""
    out = []
    consts = sorted(consts)
    for d in range(1, max_d + 1):
        for vals in itertools.product(range(d), repeat=len(consts)):
            ev = BitEval(preds, d, dict(zip(consts, vals)))
            out.append((ev.ev(f), ev.full))
    return out


def brute_sat_combo(pos, neg=()) -> bool:
    """Some enumerated interpretation makes every ``pos`` true and every ``neg`` false."""
    vectors = list(pos) + list(neg)
    for parts in zip(*vectors):
        full = parts[0][1]
        m = full
        for i, (mask, _) in enumerate(parts):
            m &= mask if i < len(pos) else full ^ mask
        if m:
            return True
    return False
