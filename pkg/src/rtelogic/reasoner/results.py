"""Reasoner configuration and result types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..fole.cnf import Clause, Literal
from ..fole.parser import render_term

PROVER = "prover"
MODEL_BUILDER = "model-builder"
ENGINES = frozenset({PROVER, MODEL_BUILDER})


@dataclass(frozen=True)
class ReasonerConfig:
    max_domain_size: int = 8
    max_clauses: int = 200_000
    max_seconds: float = 30.0
    engines: frozenset = ENGINES

    def __post_init__(self):
        if self.max_domain_size < 1 or self.max_clauses < 1 or self.max_seconds <= 0:
            raise ValueError("reasoner limits must be positive")
        engines = frozenset(self.engines)
        if not engines or not engines <= ENGINES:
            raise ValueError(f"engines must be a non-empty subset of {sorted(ENGINES)}")
        object.__setattr__(self, "engines", engines)


@dataclass(frozen=True)
class ProofStep:
    """One line of a refutation.

    For ``resolve`` the second parent is first renamed apart by ``renaming``;
    ``literals`` holds the clashing literal of each (renamed) parent and
    ``unifier`` the idempotent substitution applied to both.  For ``factor``
    ``literals`` holds the two merged literals of the single parent.
    """

    id: int
    clause: Clause
    rule: str
    parents: tuple = ()
    literals: tuple = ()
    renaming: tuple = ()
    unifier: tuple = ()

    def __str__(self):
        head = f"{self.id:>4}  {self.clause}"
        if self.rule in ("input", "equality"):
            return f"{head}  [{self.rule}]"
        sigma = ", ".join(f"{v}:={render_term(t)}" for v, t in self.unifier)
        return f"{head}  [{self.rule} {','.join(map(str, self.parents))}{' {' + sigma + '}' if sigma else ''}]"


@dataclass(frozen=True)
class Refutation:
    steps: tuple
    generated: int = 0

    @property
    def empty_clause(self) -> ProofStep:
        return self.steps[-1]

    def __str__(self):
        return "\n".join(str(s) for s in self.steps)


@dataclass(frozen=True)
class FiniteModel:
    domain_size: int
    constant_map: dict
    predicate_tables: dict
    function_tables: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("domain_size must be positive")
        for c, d in self.constant_map.items():
            if not 0 <= d < self.domain_size:
                raise ValueError(f"constant {c} mapped outside the domain")

    def format(self) -> str:
        lines = [f"domain: 0..{self.domain_size - 1}"]
        for c in sorted(self.constant_map):
            lines.append(f"  {c} = {self.constant_map[c]}")
        for p in sorted(self.predicate_tables):
            rows = sorted(self.predicate_tables[p])
            cells = " ".join("(" + ",".join(map(str, r)) + ")" for r in rows)
            lines.append(f"  {p}: {cells if rows else '{}'}")
        for fn in sorted(self.function_tables):
            table = self.function_tables[fn]
            cells = " ".join(f"({','.join(map(str, k))})->{v}" for k, v in sorted(table.items()))
            lines.append(f"  {fn}: {cells}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Satisfiable:
    model: FiniteModel
    engine: str = MODEL_BUILDER
    status = "satisfiable"


@dataclass(frozen=True)
class Unsatisfiable:
    proof: Refutation
    engine: str = PROVER
    status = "unsatisfiable"


@dataclass(frozen=True)
class Unknown:
    reason: str
    engine: str = ""
    status = "unknown"


SatResult = Union[Satisfiable, Unsatisfiable, Unknown]


class Cancelled(Exception):
    """Raised inside an engine when its cancel event is set."""


class EngineDisagreement(RuntimeError):
    """Prover and model builder returned conflicting definitive answers."""

    def __init__(self, unsat: Unsatisfiable, sat: Satisfiable):
        super().__init__(
            "internal soundness error: prover refuted a set the model builder satisfied\n"
            f"refutation:\n{unsat.proof}\nmodel:\n{sat.model.format()}"
        )
        self.unsat = unsat
        self.sat = sat


__all__ = [
    "Cancelled",
    "Clause",
    "EngineDisagreement",
    "FiniteModel",
    "Literal",
    "MODEL_BUILDER",
    "PROVER",
    "ProofStep",
    "ReasonerConfig",
    "Refutation",
    "SatResult",
    "Satisfiable",
    "Unknown",
    "Unsatisfiable",
]
