"""Presupposition axioms by beta-reduction of abstract lambda axioms.

An abstract axiom is a lambda term such as::

    lam(P, lam(R, all(X, imp(app(P, X), app(R, X)))))

A store maps trigger predicates (fused noun phrases) to an abstract axiom
and the list of arguments it is applied to.  Whenever the text contains a
trigger, the arguments are applied and the result, a closed first-order
formula, becomes a PRESUPPOSITION background axiom.

Store file::

    trigger price_explosion_n_1 axiom nn_to_vp category np
    arg lambda X explosion_n_1(X)
    arg lambda X price_n_1(X)
    arg lambda X explode_v_1(X)

Abstract axiom file: ``axiom <id>`` followed by one lambda term ending
with ``.``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .fole.parser import FoleSyntaxError, Parser, parse_fole, render_term
from .fole.problem import Axiom, AxiomKind
from .fole.syntax import (
    BINARY,
    QUANTIFIERS,
    Atom,
    Const,
    Equal,
    Func,
    Not,
    Var,
    atoms,
    free_vars,
    fresh_name,
    subst_term,
    term_vars,
)


@dataclass(frozen=True)
class Lam:
    var: str
    body: object

    def render(self, go, sep):
        return f"lam({self.var}{sep}{go(self.body)})"


@dataclass(frozen=True)
class App:
    fun: object  # Var naming a hole, or a Lam
    arg: object  # Term or Lam

    def render(self, go, sep):
        fun = self.fun.name if isinstance(self.fun, Var) else go(self.fun)
        arg = go(self.arg) if isinstance(self.arg, (Lam, App)) else render_term(self.arg)
        return f"app({fun}{sep}{arg})"


class LambdaError(ValueError):
    pass


class LambdaParser(Parser):
    """FOLE plus ``lam(V, body)`` and ``app(P, arg)``."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.connectives["lam"] = self._lam
        self.connectives["app"] = self._app

    def _lam(self, tok):
        var = self.variable()
        self.expect("COMMA", "',' after the lambda variable")
        body = self.formula()
        self.expect("RPAREN", "to close lam")
        return Lam(var, body)

    def _app(self, tok):
        if self.peek.kind == "IDENT" and self.peek.text == "lam":
            fun = self.formula()
        else:
            fun = Var(self.variable())
        self.expect("COMMA", "an argument for app")
        if self.peek.kind == "IDENT" and self.peek.text in ("lam", "app"):
            arg = self.formula()
        else:
            arg = self.term(tok)
        self.expect("RPAREN", "to close app")
        return App(fun, arg)


def parse_lambda(text: str, **kw):
    return parse_fole(text, close=False, parser_class=LambdaParser, **kw)


# ------------------------------------------------------------ reduction


def lfree(t) -> set[str]:
    """Free variable and hole names of a lambda term."""
    if isinstance(t, (Var, Const, Func)):
        return term_vars(t)
    if isinstance(t, Atom):
        return set().union(*(term_vars(a) for a in t.args))
    if isinstance(t, Equal):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Not):
        return lfree(t.body)
    if isinstance(t, BINARY):
        return lfree(t.left) | lfree(t.right)
    if isinstance(t, QUANTIFIERS) or isinstance(t, Lam):
        return lfree(t.body) - {t.var}
    if isinstance(t, App):
        return lfree(t.fun) | lfree(t.arg)
    raise TypeError(f"not a lambda term: {t!r}")


def _bound_names(t) -> set[str]:
    out = set()
    stack = [t]
    while stack:
        g = stack.pop()
        if isinstance(g, (Lam,) + QUANTIFIERS):
            out.add(g.var)
            stack.append(g.body)
        elif isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, BINARY):
            stack += [g.left, g.right]
        elif isinstance(g, App):
            stack += [g.fun, g.arg]
    return out


def lsubst(t, name: str, value):
    """Capture-avoiding substitution of ``value`` for free ``name`` in ``t``."""
    if isinstance(t, (Var, Const, Func)):
        if isinstance(value, (Lam, App)):
            if name in term_vars(t):
                raise LambdaError(f"hole {name} used as an individual term")
            return t
        return subst_term(t, {name: value})
    if isinstance(t, Atom):
        return Atom(t.pred, tuple(lsubst(a, name, value) for a in t.args))
    if isinstance(t, Equal):
        return Equal(lsubst(t.left, name, value), lsubst(t.right, name, value))
    if isinstance(t, Not):
        return Not(lsubst(t.body, name, value))
    if isinstance(t, BINARY):
        return type(t)(lsubst(t.left, name, value), lsubst(t.right, name, value))
    if isinstance(t, App):
        if isinstance(t.fun, Var) and t.fun.name == name:
            fun = value
        else:
            fun = lsubst(t.fun, name, value)
        return App(fun, lsubst(t.arg, name, value))
    if isinstance(t, QUANTIFIERS) or isinstance(t, Lam):
        if t.var == name or name not in lfree(t.body):
            return t
        incoming = lfree(value)
        var, body = t.var, t.body
        if var in incoming:
            new = fresh_name(var, incoming | lfree(body) | _bound_names(body) | {name})
            body = lsubst(body, var, Var(new))
            var = new
        return type(t)(var, lsubst(body, name, value))
    raise TypeError(f"not a lambda term: {t!r}")


def _children(t):
    if isinstance(t, Not):
        return [t.body]
    if isinstance(t, BINARY):
        return [t.left, t.right]
    if isinstance(t, QUANTIFIERS) or isinstance(t, Lam):
        return [t.body]
    if isinstance(t, App):
        return [t.fun, t.arg]
    return []


def _rebuild(t, kids):
    if isinstance(t, Not):
        return Not(kids[0])
    if isinstance(t, BINARY):
        return type(t)(kids[0], kids[1])
    if isinstance(t, QUANTIFIERS) or isinstance(t, Lam):
        return type(t)(t.var, kids[0])
    if isinstance(t, App):
        return App(kids[0], kids[1])
    return t


def _is_redex(t) -> bool:
    return isinstance(t, App) and isinstance(t.fun, Lam)


def _contract(t):
    return lsubst(t.fun.body, t.fun.var, t.arg)


def step_outermost(t):
    """One leftmost-outermost beta step, or None if ``t`` is normal."""
    if _is_redex(t):
        return _contract(t)
    kids = _children(t)
    for i, k in enumerate(kids):
        r = step_outermost(k)
        if r is not None:
            return _rebuild(t, kids[:i] + [r] + kids[i + 1:])
    return None


def step_innermost(t):
    """One leftmost-innermost beta step, or None if ``t`` is normal."""
    kids = _children(t)
    for i, k in enumerate(kids):
        r = step_innermost(k)
        if r is not None:
            return _rebuild(t, kids[:i] + [r] + kids[i + 1:])
    if _is_redex(t):
        return _contract(t)
    return None


def normalize(t, strategy: str = "outermost", max_steps: int = 10_000):
    step = step_outermost if strategy == "outermost" else step_innermost
    for _ in range(max_steps):
        r = step(t)
        if r is None:
            return t
        t = r
    raise LambdaError(f"no normal form within {max_steps} steps")


def has_lambda(t) -> bool:
    stack = [t]
    while stack:
        g = stack.pop()
        if isinstance(g, (Lam, App)):
            return True
        stack.extend(_children(g))
    return False


def abstraction_depth(t) -> int:
    n = 0
    while isinstance(t, Lam):
        n += 1
        t = t.body
    return n


def instantiate(abstract, args, strategy: str = "outermost"):
    """Apply ``abstract`` to ``args`` and beta-reduce to a closed formula."""
    depth = abstraction_depth(abstract)
    if depth != len(args):
        raise LambdaError(f"abstract axiom takes {depth} argument(s), got {len(args)}")
    t = abstract
    for a in args:
        t = App(t, a)
    f = normalize(t, strategy)
    if has_lambda(f):
        raise LambdaError("residual hole after reduction")
    fv = free_vars(f)
    if fv:
        raise LambdaError(f"instantiated axiom is not closed: free {sorted(fv)}")
    return f


# ------------------------------------------------------------ store


@dataclass(frozen=True)
class StoreEntry:
    trigger: str
    axiom_id: str
    args: tuple
    category: str = "np"


@dataclass
class ArgumentStore:
    entries: dict = field(default_factory=dict)
    abstracts: dict = field(default_factory=dict)

    def __post_init__(self):
        for e in self.entries.values():
            if e.axiom_id not in self.abstracts:
                raise LambdaError(f"trigger {e.trigger}: unknown abstract axiom {e.axiom_id}")
            depth = abstraction_depth(self.abstracts[e.axiom_id])
            if depth != len(e.args):
                raise LambdaError(
                    f"trigger {e.trigger}: {len(e.args)} argument(s) for a depth-{depth} abstract axiom"
                )

    def __contains__(self, pred) -> bool:
        return str(pred) in self.entries


def parse_abstracts(text: str) -> dict:
    out = {}
    current, buf, start = None, [], 1

    def flush():
        if current is None:
            return
        body = "\n".join(buf)
        if not body.strip():
            raise LambdaError(f"abstract axiom {current} has no body")
        out[current] = parse_lambda(body, line=start)

    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if stripped.startswith("%") or not stripped:
            buf.append("")
            continue
        if stripped.startswith("axiom ") and len(stripped.split()) == 2:
            flush()
            current, buf, start = stripped.split()[1], [], lineno + 1
            continue
        if current is None:
            raise LambdaError(f"line {lineno}: lambda term outside of an axiom block")
        buf.append(raw)
    flush()
    return out


def parse_argument_store(text: str, abstracts: dict) -> ArgumentStore:
    entries = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "trigger":
            if len(parts) not in (4, 6) or parts[2] != "axiom" or (len(parts) == 6 and parts[4] != "category"):
                raise LambdaError(f"line {lineno}: expected 'trigger <pred> axiom <id> [category <c>]'")
            category = parts[5] if len(parts) == 6 else "np"
            current = {"trigger": parts[1], "axiom": parts[3], "category": category, "args": []}
            if parts[1] in entries:
                raise LambdaError(f"line {lineno}: duplicate trigger {parts[1]}")
            entries[parts[1]] = current
        elif parts[0] == "arg" and len(parts) >= 4 and parts[1] == "lambda":
            if current is None:
                raise LambdaError(f"line {lineno}: arg before any trigger")
            var = parts[2]
            body = line.split(None, 3)[3]
            try:
                current["args"].append(Lam(var, parse_lambda(body, line=lineno)))
            except FoleSyntaxError as exc:
                raise LambdaError(f"line {lineno}: {exc}") from None
        else:
            raise LambdaError(f"line {lineno}: cannot parse {raw!r}")
    built = {
        k: StoreEntry(v["trigger"], v["axiom"], tuple(v["args"]), v["category"]) for k, v in entries.items()
    }
    return ArgumentStore(built, dict(abstracts))


def load_argument_store(store_path, abstracts_path) -> ArgumentStore:
    abstracts = parse_abstracts(Path(abstracts_path).read_text(encoding="latin-1"))
    return parse_argument_store(Path(store_path).read_text(encoding="latin-1"), abstracts)


# ------------------------------------------------------------ triggers


@dataclass(frozen=True)
class TriggerMatch:
    pred: str
    atom: Atom
    entry: StoreEntry


def scan_triggers(f, store: ArgumentStore) -> list[TriggerMatch]:
    """Unary noun atoms of ``f`` whose predicate is a store key, in order."""
    out = []
    for a in atoms(f):
        if len(a.args) == 1 and a.symbol.category == "noun" and a.pred in store.entries:
            out.append(TriggerMatch(a.pred, a, store.entries[a.pred]))
    return out


def generate_presup_axioms(p, store: ArgumentStore) -> list[Axiom]:
    """One PRESUPPOSITION axiom per distinct trigger found in the text."""
    out, seen = [], set()
    for m in scan_triggers(p.text, store):
        f = instantiate(store.abstracts[m.entry.axiom_id], m.entry.args)
        if f in seen:
            continue
        seen.add(f)
        out.append(Axiom(AxiomKind.PRESUPPOSITION, f, f"trigger:{m.pred}:{m.entry.axiom_id}", "presup"))
    return out


__all__ = [
    "App",
    "ArgumentStore",
    "Lam",
    "LambdaError",
    "LambdaParser",
    "StoreEntry",
    "TriggerMatch",
    "generate_presup_axioms",
    "instantiate",
    "load_argument_store",
    "normalize",
    "parse_abstracts",
    "parse_argument_store",
    "parse_lambda",
    "scan_triggers",
]
