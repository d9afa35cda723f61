"""FOLE syntax, notation and clause normal form."""

from .cnf import EQ, Clause, Literal, SkolemNamer, clause, clausify, nnf, to_clauses
from .parser import Diagnostic, FoleSyntaxError, parse_fole, render_fole, render_term
from .problem import (
    Axiom,
    AxiomKind,
    Problem,
    ProblemFormatError,
    format_axioms,
    format_problem,
    load_problem,
    parse_problem,
)
from .syntax import (
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
    PredicateSymbol,
    Var,
    alpha_equivalent,
    atom,
    atoms,
    canonical,
    conjoin,
    constants,
    disjoin,
    free_vars,
    inject_aliases,
    is_closed,
    predicates,
    substitute,
)

__all__ = [name for name in dir() if not name.startswith("_")]
