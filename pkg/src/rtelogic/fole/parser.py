"""Prolog-style FOLE notation: ``some(X,and(bird_n_1(X),...))``.

Grammar (whitespace, newlines and ``%`` comments are insignificant)::

    formula := some(VAR, formula) | all(VAR, formula)
             | and(formula, formula, ...) | or(formula, formula, ...)
             | imp(formula, formula) | iff(formula, formula)
             | not(formula) | eq(term, term)
             | pred(term [, term [, term]])
    term    := VAR | const

Identifiers starting with an uppercase letter or ``_`` are variables.
A trailing ``.`` is optional.
"""

from __future__ import annotations

import logging
import re
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
)

log = logging.getLogger(__name__)

MAX_ARITY = 3


class FoleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.message}"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>%[^\n]*)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*|[0-9]+)"
    r"|(?P<punct>[(),.])"
)
_PUNCT = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA", ".": "DOT"}


def tokenize(text: str, line: int = 1, column: int = 1) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FoleSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        chunk = m.group()
        if m.lastgroup == "ident":
            tokens.append(Token("IDENT", chunk, line, column))
        elif m.lastgroup == "punct":
            tokens.append(Token(_PUNCT[chunk], chunk, line, column))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            column = len(chunk) - chunk.rfind("\n")
        else:
            column += len(chunk)
        pos = m.end()
    tokens.append(Token("EOF", "", line, column))
    return tokens


def is_variable_name(name: str) -> bool:
    return name[:1].isupper() or name[:1] == "_"


class Parser:
    """Recursive-descent parser; subclasses may register extra connectives."""

    def __init__(self, text: str, arities: dict | None = None, line: int = 1, column: int = 1):
        self.tokens = tokenize(text, line, column)
        self.pos = 0
        self.arities = arities if arities is not None else {}
        self.var_positions: dict[str, tuple[int, int]] = {}
        self.connectives = {
            "some": self._quantifier,
            "all": self._quantifier,
            "and": self._nary,
            "or": self._nary,
            "imp": self._binary,
            "iff": self._binary,
            "not": self._negation,
            "eq": self._equality,
        }

    # -- token helpers

    @property
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.peek
        raise FoleSyntaxError(message, tok.line, tok.column)

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek
        if tok.kind != kind:
            found = "end of input" if tok.kind == "EOF" else repr(tok.text)
            if kind == "RPAREN":
                self.error(f"unbalanced parentheses: expected ')' {what}, found {found}")
            self.error(f"expected {what}, found {found}")
        return self.advance()

    # -- entry points

    def parse(self):
        f = self.formula()
        if self.peek.kind == "DOT":
            self.advance()
        tok = self.peek
        if tok.kind == "RPAREN":
            self.error("unbalanced parentheses: unexpected ')'")
        if tok.kind != "EOF":
            self.error(f"unexpected {tok.text!r} after formula")
        return f

    def formula(self):
        tok = self.expect("IDENT", "a formula")
        name = tok.text
        if is_variable_name(name):
            self.error(f"expected a formula, found variable {name}", tok)
        if self.peek.kind != "LPAREN":
            self.error(f"expected '(' after {name!r}")
        self.advance()
        handler = self.connectives.get(name)
        if handler is not None:
            return handler(tok)
        return self._atom(tok)

    def variable(self) -> str:
        tok = self.expect("IDENT", "a variable")
        if not is_variable_name(tok.text):
            self.error(f"expected a variable, found constant {tok.text}", tok)
        self.var_positions.setdefault(tok.text, (tok.line, tok.column))
        return tok.text

    def term(self, owner: Token):
        tok = self.expect("IDENT", "a term")
        if self.peek.kind == "LPAREN":
            self.error(f"unknown connective {owner.text!r} (function terms are not allowed)", owner)
        if is_variable_name(tok.text):
            self.var_positions.setdefault(tok.text, (tok.line, tok.column))
            return Var(tok.text)
        self._check_reserved(tok)
        return Const(tok.text)

    def _check_reserved(self, tok: Token):
        if tok.text.startswith(SKOLEM_PREFIX):
            self.error(f"identifier {tok.text!r} uses the reserved prefix {SKOLEM_PREFIX!r}", tok)

    # -- productions

    def _quantifier(self, tok):
        var = self.variable()
        self.expect("COMMA", f"',' after the variable of {tok.text}")
        body = self.formula()
        self.expect("RPAREN", f"to close {tok.text}")
        return (Exists if tok.text == "some" else Forall)(var, body)

    def _nary(self, tok):
        parts = [self.formula()]
        while self.peek.kind == "COMMA":
            self.advance()
            parts.append(self.formula())
        self.expect("RPAREN", f"to close {tok.text}")
        if len(parts) < 2:
            self.error(f"{tok.text} needs at least two arguments", tok)
        cls = And if tok.text == "and" else Or
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = cls(p, out)
        return out

    def _binary(self, tok):
        left = self.formula()
        self.expect("COMMA", f"a second argument for {tok.text}")
        right = self.formula()
        self.expect("RPAREN", f"to close {tok.text}")
        return (Imp if tok.text == "imp" else Iff)(left, right)

    def _negation(self, tok):
        body = self.formula()
        self.expect("RPAREN", "to close not")
        return Not(body)

    def _equality(self, tok):
        left = self.term(tok)
        self.expect("COMMA", "a second argument for eq")
        right = self.term(tok)
        self.expect("RPAREN", "to close eq")
        return Equal(left, right)

    def _atom(self, tok):
        self._check_reserved(tok)
        args = [self.term(tok)]
        while self.peek.kind == "COMMA":
            self.advance()
            args.append(self.term(tok))
        self.expect("RPAREN", f"to close {tok.text}")
        if len(args) > MAX_ARITY:
            self.error(f"predicate {tok.text} has arity {len(args)}; at most {MAX_ARITY} allowed", tok)
        known = self.arities.get(tok.text)
        if known is not None and known != len(args):
            self.error(f"arity clash: {tok.text} used with {len(args)} argument(s), previously {known}", tok)
        self.arities[tok.text] = len(args)
        return Atom(tok.text, tuple(args))


def close_existentially(f, parser: Parser, diagnostics: list | None):
    """Existentially close free variables, recording one diagnostic each."""
    free = sorted(free_vars(f), key=lambda n: parser.var_positions.get(n, (0, 0)))
    for v in free:
        line, col = parser.var_positions.get(v, (0, 0))
        diag = Diagnostic(line, col, f"unbound variable {v}; closed existentially")
        log.warning("%s", diag)
        if diagnostics is not None:
            diagnostics.append(diag)
    for v in reversed(free):
        f = Exists(v, f)
    return f


def parse_fole(
    text: str,
    *,
    arities: dict | None = None,
    close: bool = True,
    diagnostics: list | None = None,
    line: int = 1,
    column: int = 1,
    parser_class=Parser,
):
    """Parse one FOLE formula.

    ``arities`` is shared across calls to detect arity clashes within one
    problem.  Unbound variables are not an error: they are reported in
    ``diagnostics`` and, when ``close`` is set, bound by outermost
    existential quantifiers.
    """
    parser = parser_class(text, arities, line, column)
    f = parser.parse()
    if close:
        f = close_existentially(f, parser, diagnostics)
    return f


# ------------------------------------------------------------- rendering


def render_term(t) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    if isinstance(t, Func):
        return f"{t.name}({','.join(render_term(a) for a in t.args)})"
    raise TypeError(f"not a term: {t!r}")


_NAMES = {And: "and", Or: "or", Imp: "imp", Iff: "iff"}


def render_fole(f, spaced: bool = False) -> str:
    """Canonical text for ``f``.

    ``spaced`` puts a blank after commas between formula arguments (the
    listing style ``all(X, imp(a_n_1(X), b_n_1(X)))``); atom argument lists
    stay compact either way.
    """
    sep = ", " if spaced else ","

    def go(g) -> str:
        if isinstance(g, Atom):
            return f"{g.pred}({','.join(render_term(a) for a in g.args)})"
        if isinstance(g, Equal):
            return f"eq({render_term(g.left)},{render_term(g.right)})"
        if isinstance(g, Not):
            return f"not({go(g.body)})"
        if isinstance(g, (And, Or, Imp, Iff)):
            return f"{_NAMES[type(g)]}({go(g.left)}{sep}{go(g.right)})"
        if isinstance(g, Exists):
            return f"some({g.var}{sep}{go(g.body)})"
        if isinstance(g, Forall):
            return f"all({g.var}{sep}{go(g.body)})"
        render = getattr(g, "render", None)
        if render is not None:
            return render(go, sep)
        raise TypeError(f"not a formula: {g!r}")

    return go(f)
