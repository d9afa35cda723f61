"""Satisfiability checking: resolution prover, finite model builder, race."""

from .export import export_clauses
from .model import EvaluationError, evaluate
from .modelfinder import find_model
from .proofcheck import ProofCheckError, check_refutation
from .prover import prove_unsat
from .race import check_sat
from .results import (
    MODEL_BUILDER,
    PROVER,
    EngineDisagreement,
    FiniteModel,
    ProofStep,
    ReasonerConfig,
    Refutation,
    Satisfiable,
    SatResult,
    Unknown,
    Unsatisfiable,
)

__all__ = [name for name in dir() if not name.startswith("_")]
