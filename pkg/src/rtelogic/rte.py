"""Entailment / contradiction / informative classification of RTE problems.

Two satisfiability tests decide the verdict.  Test 1 checks T & BK & H for
consistency; a refutation means contradiction.  Test 2 checks T & BK & -H;
a refutation there (with test 1 satisfiable) means H follows from T & BK,
a model means H adds information.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .fole.syntax import Not
from .reasoner import ReasonerConfig, Satisfiable, Unknown, Unsatisfiable, check_sat


class VerdictKind(enum.Enum):
    ENTAILMENT = "Entailment"
    INFORMATIVE = "Informative"
    CONTRADICTION = "Contradiction"
    UNKNOWN = "Unknown"


EXIT_CODES = {
    VerdictKind.ENTAILMENT: 0,
    VerdictKind.INFORMATIVE: 1,
    VerdictKind.CONTRADICTION: 2,
    VerdictKind.UNKNOWN: 3,
}


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    consistency: object  # SatResult of test 1
    informativity: object = None  # SatResult of test 2, None if skipped
    detail: str = ""

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.kind]

    def __str__(self):
        return self.kind.value


def conjuncts(problem, negate_hypothesis: bool) -> list:
    h = Not(problem.hypothesis) if negate_hypothesis else problem.hypothesis
    return [problem.text] + [ax.formula for ax in problem.background] + [h]


def classify(problem, cfg: ReasonerConfig | None = None) -> Verdict:
    cfg = cfg or ReasonerConfig()
    first = check_sat(conjuncts(problem, False), cfg)
    if isinstance(first, Unsatisfiable):
        return Verdict(VerdictKind.CONTRADICTION, first)
    if isinstance(first, Unknown):
        return Verdict(VerdictKind.UNKNOWN, first, detail=f"test 1 (consistency) indefinite: {first.reason}")
    second = check_sat(conjuncts(problem, True), cfg)
    if isinstance(second, Unsatisfiable):
        return Verdict(VerdictKind.ENTAILMENT, first, second)
    if isinstance(second, Satisfiable):
        return Verdict(VerdictKind.INFORMATIVE, first, second)
    return Verdict(VerdictKind.UNKNOWN, first, second, detail=f"test 2 (informativity) indefinite: {second.reason}")
