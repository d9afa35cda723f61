"""Abstract syntax of first-order formulas with equality (FOLE).

All nodes are frozen dataclasses, so structural equality is plain ``==``
and formulas can be used as dict keys or set members.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Union

CATEGORY_BY_CODE = {
    "n": "noun",
    "v": "verb",
    "p": "preposition",
    "r": "relation",
    "ne": "named-entity",
    "loc": "location",
    "per": "person",
}
CODE_BY_CATEGORY = {v: k for k, v in CATEGORY_BY_CODE.items()}

SKOLEM_PREFIX = "sk_"

_SYMBOL_RE = re.compile(r"^(?P<lemma>[a-z0-9][a-z0-9_]*?)_(?P<code>[a-z]+)_(?P<sense>[0-9]+)$")


@dataclass(frozen=True, order=True)
class PredicateSymbol:
    """A predicate name such as ``work_n_2``.

    The token itself is stored, so rendering is always the original text.
    Lemma, category and sense are read off the ``lemma_code_sense`` suffix
    convention; tokens without it fall into category ``other``, sense 1.
    """

    name: str

    @classmethod
    def of(cls, lemma: str, category: str, sense: int = 1) -> "PredicateSymbol":
        if sense < 1:
            raise ValueError(f"sense must be >= 1, got {sense}")
        code = CODE_BY_CATEGORY.get(category)
        if code is None:
            raise ValueError(f"no suffix code for category {category!r}")
        return cls(f"{lemma}_{code}_{sense}")

    @property
    def _parts(self):
        m = _SYMBOL_RE.match(self.name)
        if m is None or int(m.group("sense")) < 1:
            return self.name, None, 1
        return m.group("lemma"), m.group("code"), int(m.group("sense"))

    @property
    def lemma(self) -> str:
        return self._parts[0]

    @property
    def code(self) -> str | None:
        return self._parts[1]

    @property
    def category(self) -> str:
        return CATEGORY_BY_CODE.get(self._parts[1], "other")

    @property
    def sense(self) -> int:
        return self._parts[2]

    def with_lemma(self, lemma: str) -> "PredicateSymbol":
        """Same category code and sense, different lemma."""
        code = self.code
        if code is None:
            return PredicateSymbol(lemma)
        return PredicateSymbol(f"{lemma}_{code}_{self.sense}")

    def __str__(self) -> str:
        return self.name


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Func:
    """Function application. Only produced internally by skolemization."""

    name: str
    args: tuple

    def __str__(self):
        return f"{self.name}({','.join(map(str, self.args))})"


Term = Union[Var, Const, Func]


# ------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple

    @property
    def symbol(self) -> PredicateSymbol:
        return PredicateSymbol(self.pred)


@dataclass(frozen=True)
class Equal:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


Formula = Union[Atom, Equal, Not, And, Or, Imp, Iff, Exists, Forall]

BINARY = (And, Or, Imp, Iff)
QUANTIFIERS = (Exists, Forall)


def atom(pred: str, *args: str) -> Atom:
    """Shorthand: uppercase-initial argument names become variables."""
    return Atom(pred, tuple(Var(a) if a[:1].isupper() else Const(a) for a in args))


def conjoin(formulas) -> Formula:
    """Right-nested conjunction of a non-empty sequence."""
    formulas = list(formulas)
    if not formulas:
        raise ValueError("cannot conjoin an empty sequence")
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = And(f, out)
    return out


def disjoin(formulas) -> Formula:
    formulas = list(formulas)
    if not formulas:
        raise ValueError("cannot disjoin an empty sequence")
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = Or(f, out)
    return out


# ------------------------------------------------------------ traversal


def term_vars(t) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Func):
        out = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


def free_vars(f) -> set[str]:
    """Variables with an occurrence outside the scope of any binder."""
    if isinstance(f, Atom):
        out = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Equal):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, BINARY):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    raise TypeError(f"not a formula: {f!r}")


def is_closed(f) -> bool:
    return not free_vars(f)


def subformulas(f) -> Iterator:
    """Pre-order walk over every subformula, including ``f`` itself."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.body)
        elif isinstance(g, BINARY):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, QUANTIFIERS):
            stack.append(g.body)


def atoms(f) -> Iterator[Atom]:
    for g in subformulas(f):
        if isinstance(g, Atom):
            yield g


def _term_constants(t, out):
    if isinstance(t, Const):
        out.add(t.name)
    elif isinstance(t, Func):
        for a in t.args:
            _term_constants(a, out)


def constants(f) -> set[str]:
    out: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            for a in g.args:
                _term_constants(a, out)
        elif isinstance(g, Equal):
            _term_constants(g.left, out)
            _term_constants(g.right, out)
    return out


def predicates(f) -> dict[str, int]:
    """Predicate name to arity for every atom in ``f``."""
    return {a.pred: len(a.args) for a in atoms(f)}


def has_equality(f) -> bool:
    return any(isinstance(g, Equal) for g in subformulas(f))


# --------------------------------------------------------- substitution


def subst_term(t, mapping: dict):
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Func):
        return Func(t.name, tuple(subst_term(a, mapping) for a in t.args))
    return t


def fresh_name(base: str, avoid: set[str]) -> str:
    stem = base.rstrip("0123456789_") or "V"
    for i in itertools.count(1):
        cand = f"{stem}_{i}"
        if cand not in avoid:
            return cand
    raise AssertionError("unreachable")


def substitute(f, mapping: dict):
    """Capture-avoiding substitution of terms for free variables."""
    if not mapping:
        return f
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, mapping) for a in f.args))
    if isinstance(f, Equal):
        return Equal(subst_term(f.left, mapping), subst_term(f.right, mapping))
    if isinstance(f, Not):
        return Not(substitute(f.body, mapping))
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, mapping), substitute(f.right, mapping))
    if isinstance(f, QUANTIFIERS):
        inner = {k: v for k, v in mapping.items() if k != f.var}
        if not inner:
            return f
        incoming = set()
        for v in inner.values():
            incoming |= term_vars(v)
        if f.var in incoming:
            avoid = incoming | free_vars(f.body) | set(inner)
            new = fresh_name(f.var, avoid)
            body = substitute(f.body, {f.var: Var(new)})
            return type(f)(new, substitute(body, inner))
        return type(f)(f.var, substitute(f.body, inner))
    raise TypeError(f"not a formula: {f!r}")


# ------------------------------------------------------ alpha-equivalence


def canonical(f, _env=None, _counter=None):
    """Rename bound variables to ``_B0, _B1, ...`` in binding order.

    Two formulas are alpha-equivalent iff their canonical forms are equal.
    """
    if _env is None:
        _env, _counter = {}, itertools.count()
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, _env) for a in f.args))
    if isinstance(f, Equal):
        return Equal(subst_term(f.left, _env), subst_term(f.right, _env))
    if isinstance(f, Not):
        return Not(canonical(f.body, _env, _counter))
    if isinstance(f, BINARY):
        left = canonical(f.left, _env, _counter)
        return type(f)(left, canonical(f.right, _env, _counter))
    if isinstance(f, QUANTIFIERS):
        new = f"_B{next(_counter)}"
        env = dict(_env)
        env[f.var] = Var(new)
        return type(f)(new, canonical(f.body, env, _counter))
    raise TypeError(f"not a formula: {f!r}")


def alpha_equivalent(f, g) -> bool:
    return canonical(f) == canonical(g)


# --------------------------------------------------------- alias injection


def inject_aliases(f, entity, aliases):
    """Replace each unary ``entity(t)`` by ``entity(t) | alias1(t) | ...``.

    ``entity`` and ``aliases`` may be PredicateSymbol objects or plain names.
    """
    name = str(entity)
    alias_names = [str(a) for a in aliases]
    if not any(a.pred == name and len(a.args) == 1 for a in atoms(f)):
        raise ValueError(f"{name} does not occur as a unary atom")
    if not alias_names:
        return f

    def walk(g):
        if isinstance(g, Atom):
            if g.pred == name and len(g.args) == 1:
                return disjoin([g] + [Atom(a, g.args) for a in alias_names])
            return g
        if isinstance(g, Equal):
            return g
        if isinstance(g, Not):
            return Not(walk(g.body))
        if isinstance(g, BINARY):
            return type(g)(walk(g.left), walk(g.right))
        if isinstance(g, QUANTIFIERS):
            return type(g)(g.var, walk(g.body))
        raise TypeError(f"not a formula: {g!r}")

    return walk(f)
