"""Independent replay of refutation traces.

Deliberately shares no code with the prover's substitution or clause
normalization: terms are applied and compared with local helpers so a bug
in one does not hide a bug in the other.
"""

from __future__ import annotations

from ..fole.syntax import Func, Var
from .prover import equality_axioms


class ProofCheckError(AssertionError):
    pass


def _apply_term(t, sigma: dict):
    # unifiers in traces are idempotent, one pass suffices
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, Func):
        return Func(t.name, tuple(_apply_term(a, sigma) for a in t.args))
    return t


def _apply_lit(lit, sigma):
    return (lit.positive, lit.pred, tuple(_apply_term(a, sigma) for a in lit.args))


def _key(lit):
    return (lit.positive, lit.pred, lit.args)


def _match_term(p, t, m: dict) -> bool:
    # injective variable renaming only
    if isinstance(p, Var):
        if not isinstance(t, Var):
            return False
        if p.name in m:
            return m[p.name] == t.name
        if t.name in m.values():
            return False
        m[p.name] = t.name
        return True
    if isinstance(p, Func):
        return (isinstance(t, Func) and p.name == t.name and len(p.args) == len(t.args)
                and all(_match_term(a, b, m) for a, b in zip(p.args, t.args)))
    return p == t


def is_variant(a: set, b: set) -> bool:
    """True if the literal sets ``a`` and ``b`` differ only by a variable renaming."""
    a, b = list(a), list(b)
    if len(a) != len(b):
        return False

    def search(i, used, m):
        if i == len(a):
            return True
        pa = a[i]
        for j, tb in enumerate(b):
            if j in used or pa[0] != tb[0] or pa[1] != tb[1] or len(pa[2]) != len(tb[2]):
                continue
            m2 = dict(m)
            if all(_match_term(x, y, m2) for x, y in zip(pa[2], tb[2])):
                if search(i + 1, used | {j}, m2):
                    return True
        return False

    return search(0, frozenset(), {})


def check_refutation(refutation, inputs) -> int:
    """Validate every step; return the number of checked inferences.

    ``inputs`` is the clause set handed to the prover.  Raises
    ProofCheckError on the first invalid step.
    """
    steps = {s.id: s for s in refutation.steps}
    allowed_inputs = [set(map(_key, c.literals)) for c in inputs]
    if any(lit.pred == "=" for c in inputs for lit in c.literals):
        allowed_axioms = [set(map(_key, c.literals)) for c in equality_axioms(inputs)]
    else:
        allowed_axioms = []
    checked = 0
    for s in refutation.steps:
        mine = set(map(_key, s.clause.literals))
        if s.rule in ("input", "equality"):
            pool = allowed_inputs if s.rule == "input" else allowed_axioms
            if not any(is_variant(mine, c) for c in pool):
                raise ProofCheckError(f"step {s.id}: {s.rule} clause not found")
            continue
        sigma = dict(s.unifier)
        for p in s.parents:
            if p not in steps or p >= s.id:
                raise ProofCheckError(f"step {s.id}: bad parent {p}")
        if s.rule == "factor":
            (pid,) = s.parents
            parent = steps[pid].clause.literals
            a, b = s.literals
            if a not in parent or b not in parent:
                raise ProofCheckError(f"step {s.id}: factored literals not in parent")
            if _apply_lit(a, sigma) != _apply_lit(b, sigma):
                raise ProofCheckError(f"step {s.id}: unifier does not merge literals")
            expected = {_apply_lit(x, sigma) for x in parent}
        elif s.rule == "resolve":
            p1, p2 = (steps[p].clause for p in s.parents)
            ren = dict(s.renaming)
            if len(set(ren.values())) != len(ren) or set(ren) != p2.vars():
                raise ProofCheckError(f"step {s.id}: renaming is not a bijection on parent variables")
            if set(v.name for v in ren.values()) & p1.vars():
                raise ProofCheckError(f"step {s.id}: parents not renamed apart")
            p2r = {lit.substitute(ren) for lit in p2.literals}
            l1, l2 = s.literals
            if l1 not in p1.literals or l2 not in p2r:
                raise ProofCheckError(f"step {s.id}: clashing literals not in parents")
            g1, g2 = _apply_lit(l1, sigma), _apply_lit(l2, sigma)
            if g1[0] == g2[0] or g1[1:] != g2[1:]:
                raise ProofCheckError(f"step {s.id}: literals are not complementary under the unifier")
            expected = {_apply_lit(x, sigma) for x in p1.literals if x != l1}
            expected |= {_apply_lit(x, sigma) for x in p2r if x != l2}
        else:
            raise ProofCheckError(f"step {s.id}: unknown rule {s.rule!r}")
        if not is_variant(expected, mine):
            raise ProofCheckError(f"step {s.id}: conclusion does not match inference")
        checked += 1
    if not refutation.steps or refutation.steps[-1].clause.literals:
        raise ProofCheckError("trace does not end in the empty clause")
    return checked
