"""Logic-based recognition of textual entailment over FOLE problems.

Subpackages: ``fole`` (syntax, notation, clause form) and ``reasoner``
(prover, model builder, race).  Modules: ``rte`` (verdicts), ``kgraph``
(knowledge graphs and axiom rules), ``ontology`` (taxonomy pipeline),
``presup`` (presupposition axioms) and ``cli``.
"""

from .fole import Axiom, AxiomKind, Problem, load_problem, parse_fole, parse_problem, render_fole
from .ontology import PipelineConfig, load_store, load_yago_dir, run_pipeline
from .presup import generate_presup_axioms, load_argument_store
from .reasoner import ReasonerConfig, check_sat
from .rte import Verdict, VerdictKind, classify

__version__ = "0.1.0"

__all__ = [
    "Axiom",
    "AxiomKind",
    "PipelineConfig",
    "Problem",
    "ReasonerConfig",
    "Verdict",
    "VerdictKind",
    "check_sat",
    "classify",
    "generate_presup_axioms",
    "load_argument_store",
    "load_problem",
    "load_store",
    "load_yago_dir",
    "parse_fole",
    "parse_problem",
    "render_fole",
    "run_pipeline",
]
