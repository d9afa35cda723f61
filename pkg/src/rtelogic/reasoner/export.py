"""Clause export in the LADR/Prover9 clause syntax, for cross-checking."""

from __future__ import annotations

from ..fole.cnf import EQ
from ..fole.parser import render_term


def _literal(lit) -> str:
    if lit.pred == EQ:
        body = f"{render_term(lit.args[0])} = {render_term(lit.args[1])}"
        return body if lit.positive else f"{render_term(lit.args[0])} != {render_term(lit.args[1])}"
    body = f"{lit.pred}({','.join(render_term(a) for a in lit.args)})"
    return body if lit.positive else f"-{body}"


def export_clauses(clauses) -> str:
    """One clause per line, ``|`` between literals, ``-`` for negation."""
    lines = ["set(prolog_style_variables).", "formulas(sos)."]
    for c in clauses:
        lits = c.sorted_literals()
        lines.append((" | ".join(_literal(x) for x in lits) if lits else "$F") + ".")
    lines.append("end_of_list.")
    return "\n".join(lines) + "\n"
