from dataclasses import replace
from pathlib import Path

import pytest

from rtelogic import Problem, classify, load_problem, parse_fole, run_pipeline
from rtelogic.fole import Axiom, AxiomKind
from rtelogic.ontology import PipelineConfig, load_store, load_yago_dir
from rtelogic.kgraph import ManualPolicy
from rtelogic.reasoner import MODEL_BUILDER, PROVER, ReasonerConfig, Satisfiable, Unknown, Unsatisfiable
from rtelogic.rte import EXIT_CODES, VerdictKind

FIX = Path(__file__).resolve().parent.parent / "fixtures"


def problem(t, h, *axioms):
    bk = tuple(Axiom(AxiomKind.GENERIC, parse_fole(a), "test") for a in axioms)
    return Problem(parse_fole(t), parse_fole(h), bk)


@pytest.mark.parametrize("name, kind", [
    ("entailment", VerdictKind.ENTAILMENT),
    ("informative", VerdictKind.INFORMATIVE),
    ("contradiction", VerdictKind.CONTRADICTION),
    ("empty", VerdictKind.ENTAILMENT),
])
def test_trivial_fixtures(name, kind):
    v = classify(load_problem(FIX / "trivial" / f"{name}.fole"))
    assert v.kind == kind
    assert v.exit_code == EXIT_CODES[kind]


def test_evidence_shapes():
    v = classify(problem("some(X, p_n_1(X))", "all(X, not(p_n_1(X)))"))
    assert isinstance(v.consistency, Unsatisfiable) and v.informativity is None
    v = classify(problem("some(X, p_n_1(X))", "some(X, q_n_1(X))"))
    assert isinstance(v.consistency, Satisfiable) and isinstance(v.informativity, Satisfiable)
    v = classify(problem("some(X, bird_n_1(X))", "some(X, bird_n_1(X))"))
    assert isinstance(v.informativity, Unsatisfiable)


def test_background_enables_entailment():
    t, h = "some(X, falcon_n_1(X))", "some(X, bird_n_1(X))"
    assert classify(problem(t, h)).kind == VerdictKind.INFORMATIVE
    assert classify(problem(t, h, "all(X, imp(falcon_n_1(X), bird_n_1(X)))")).kind == VerdictKind.ENTAILMENT


def test_unknown_names_the_test():
    # infinite-model axioms: no finite model, no refutation
    inf = "and(all(X, some(Y, lt_r_1(X, Y))), and(all(X, not(lt_r_1(X, X))), " \
          "all(X, all(Y, all(Z, imp(and(lt_r_1(X, Y), lt_r_1(Y, Z)), lt_r_1(X, Z)))))))"
    v = classify(problem(inf, "some(X, p_n_1(X))"), ReasonerConfig(max_domain_size=3, max_seconds=2))
    assert v.kind == VerdictKind.UNKNOWN
    assert "test 1" in v.detail
    assert isinstance(v.consistency, Unknown)


def test_test2_unknown_is_reported():
    # the prover alone cannot certify satisfiability, the builder cannot refute
    cfg = ReasonerConfig(engines={PROVER})
    v = classify(problem("some(X, p_n_1(X))", "some(X, q_n_1(X))"), cfg)
    assert v.kind == VerdictKind.UNKNOWN and "test 1" in v.detail
    v = classify(problem("some(X, p_n_1(X))", "all(X, not(p_n_1(X)))"), cfg)
    assert v.kind == VerdictKind.CONTRADICTION
    cfg = ReasonerConfig(engines={MODEL_BUILDER})
    v = classify(problem("some(X, p_n_1(X))", "some(X, p_n_1(X))"), cfg)
    assert v.kind == VerdictKind.UNKNOWN and "test 2" in v.detail


def test_single_engine_verdicts_are_stable():
    p = load_problem(FIX / "trivial" / "informative.fole")
    cfg = ReasonerConfig(engines={MODEL_BUILDER})
    runs = {str(classify(p, cfg).informativity.model) for _ in range(3)}
    assert len(runs) == 1


def test_tower_bridge_needs_taxonomy():
    p = load_problem(FIX / "towerbridge" / "problem.fole")
    assert classify(p).kind == VerdictKind.INFORMATIVE
    full = run_pipeline(p, load_store(FIX / "towerbridge" / "wordnet.txt"))
    v = classify(full)
    assert v.kind == VerdictKind.ENTAILMENT
    assert isinstance(v.consistency, Satisfiable)


def test_tower_bridge_with_hand_axiom():
    p = load_problem(FIX / "towerbridge" / "problem.fole")
    falcon = Axiom(AxiomKind.IS_A, parse_fole("all(X, imp(falcon_n_1(X), bird_n_1(X)))"), "curated:falcon-bird")
    assert classify(p.with_background([falcon])).kind == VerdictKind.ENTAILMENT


# test 1 needs eleven pairwise distinct individuals
LEIBNIZ_CFG = ReasonerConfig(max_domain_size=16, max_seconds=60)


def leibniz(with_yago=True):
    p = load_problem(FIX / "leibniz" / "problem.fole")
    store = load_store(FIX / "leibniz" / "wordnet.txt")
    yago = load_yago_dir(FIX / "leibniz" / "yago") if with_yago else {}
    policy = ManualPolicy.parse((FIX / "leibniz" / "keep.txt").read_text())
    return run_pipeline(p, store, yago, PipelineConfig(policy=policy))


def test_leibniz_entailment_and_flip():
    v = classify(leibniz(), LEIBNIZ_CFG)
    assert v.kind == VerdictKind.ENTAILMENT
    assert v.consistency.model.domain_size > 8
    assert classify(leibniz(with_yago=False), LEIBNIZ_CFG).kind == VerdictKind.INFORMATIVE


def test_verdicts_are_mutually_exclusive_across_engines():
    p = leibniz()
    engine_sets = ({PROVER, MODEL_BUILDER}, {PROVER}, {MODEL_BUILDER})
    kinds = {classify(p, replace(LEIBNIZ_CFG, engines=e)).kind for e in engine_sets}
    assert len(kinds - {VerdictKind.UNKNOWN}) == 1
