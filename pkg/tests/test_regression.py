"""Curated regression corpus: verdicts and pipeline-level properties."""

from dataclasses import replace
from pathlib import Path

import pytest

from rtelogic import classify, load_problem
from rtelogic.kgraph import LowestSensePolicy, ManualPolicy
from rtelogic.ontology import PipelineConfig, build_knowledge, load_store, load_yago_dir, run_pipeline
from rtelogic.presup import generate_presup_axioms, parse_abstracts, parse_argument_store
from rtelogic.reasoner import ReasonerConfig, Satisfiable, Unsatisfiable, check_sat
from rtelogic.rte import VerdictKind, conjuncts

FIX = Path(__file__).resolve().parent.parent / "fixtures"
REG = FIX / "regression"
REG_STORE = load_store(REG / "wordnet.txt")
BIG = ReasonerConfig(max_domain_size=16, max_seconds=60)


def _expected():
    out = {}
    for line in (REG / "expected.txt").read_text().splitlines():
        if line.strip() and not line.startswith("#"):
            name, verdict = line.split()
            out[name] = VerdictKind(verdict)
    return out


EXPECTED = _expected()


def _bundle(name):
    """(problem, store, yago, policy, reasoner config) for a corpus entry."""
    if name == "leibniz":
        keep = ManualPolicy.parse((FIX / "leibniz" / "keep.txt").read_text())
        return (load_problem(FIX / "leibniz" / "problem.fole"), load_store(FIX / "leibniz" / "wordnet.txt"),
                load_yago_dir(FIX / "leibniz" / "yago"), keep, BIG)
    if name == "towerbridge":
        return (load_problem(FIX / "towerbridge" / "problem.fole"), load_store(FIX / "towerbridge" / "wordnet.txt"),
                {}, LowestSensePolicy(), ReasonerConfig())
    return load_problem(REG / f"{name}.fole"), REG_STORE, {}, LowestSensePolicy(), ReasonerConfig()


CORPUS = sorted(EXPECTED) + ["towerbridge", "leibniz"]
VERDICT = {**EXPECTED, "towerbridge": VerdictKind.ENTAILMENT, "leibniz": VerdictKind.ENTAILMENT}


def test_corpus_spans_all_verdicts():
    assert len(EXPECTED) >= 12
    assert set(EXPECTED.values()) == {VerdictKind.ENTAILMENT, VerdictKind.INFORMATIVE, VerdictKind.CONTRADICTION}


@pytest.mark.parametrize("name", CORPUS)
def test_verdict(name):
    p, store, yago, policy, cfg = _bundle(name)
    assert classify(run_pipeline(p, store, yago, PipelineConfig(policy=policy)), cfg).kind == VERDICT[name]


@pytest.mark.parametrize("name", CORPUS)
def test_optimization_is_conservative(name):
    p, store, yago, policy, cfg = _bundle(name)
    on = run_pipeline(p, store, yago, PipelineConfig(policy=policy, optimize=True))
    off = run_pipeline(p, store, yago, PipelineConfig(policy=policy, optimize=False))
    assert len(off.background) >= len(on.background)
    assert classify(on, cfg).kind == classify(off, cfg).kind == VERDICT[name]


@pytest.mark.parametrize("name", CORPUS)
def test_strategy1_axioms_never_lose_an_entailment(name):
    p, store, yago, policy, cfg = _bundle(name)
    base = classify(p, cfg).kind
    s1 = run_pipeline(p, store, yago, PipelineConfig(strategy=1, policy=policy))
    after = classify(s1, cfg).kind
    if base == VerdictKind.ENTAILMENT:
        assert after == VerdictKind.ENTAILMENT
    # positive axioms cannot create a model that was not there
    if base == VerdictKind.CONTRADICTION:
        assert after == VerdictKind.CONTRADICTION


def test_strategy1_is_weaker_than_strategy2():
    flipped = []
    for name in sorted(EXPECTED):
        p, store, yago, policy, cfg = _bundle(name)
        s1 = classify(run_pipeline(p, store, yago, PipelineConfig(strategy=1, policy=policy)), cfg).kind
        if s1 != EXPECTED[name]:
            flipped.append((name, s1))
    # exclusions are what make these contradictions
    assert {n for n, _ in flipped} == {"r03_dog_cat", "r07_car_is_bicycle", "r13_cat_person", "r14_person_dog"}
    assert {k for _, k in flipped} == {VerdictKind.INFORMATIVE}


SYNTHETIC_ABSTRACTS = parse_abstracts("""
axiom compound_head
lam(P, lam(R, all(X, imp(app(P, X), app(R, X))))).
axiom nn_event_agent
lam(P, lam(R, lam(S,
  all(X1, all(X2, imp(and(app(P, X1), app(R, X2), nn_r_1(X1, X2)),
    some(X3, and(app(R, X3), some(X4, and(app(S, X4), event_n_1(X4), agent_r_1(X4, X3))))))))))).
""")

# synthetic entries keyed on corpus nouns
SYNTHETIC_STORE = parse_argument_store("""
trigger falcon_n_1 axiom compound_head
arg lambda X falcon_n_1(X)
arg lambda X hunter_n_1(X)
trigger dog_n_1 axiom nn_event_agent
arg lambda X dog_n_1(X)
arg lambda X owner_n_1(X)
arg lambda X walk_v_1(X)
trigger car_n_1 axiom compound_head
arg lambda X car_n_1(X)
arg lambda X vehicle_n_1(X)
trigger sparrow_n_1 axiom nn_event_agent
arg lambda X sparrow_n_1(X)
arg lambda X nest_n_1(X)
arg lambda X build_v_1(X)
""", SYNTHETIC_ABSTRACTS)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_presuppositions_never_break_consistency(name):
    p, store, yago, policy, cfg = _bundle(name)
    full = run_pipeline(p, store, yago, PipelineConfig(policy=policy))
    before = check_sat(conjuncts(full, False), cfg)
    extra = generate_presup_axioms(full, SYNTHETIC_STORE)
    after = check_sat(conjuncts(full.with_background(extra), False), cfg)
    if isinstance(before, Satisfiable):
        assert not isinstance(after, Unsatisfiable)


def test_presup_corpus_has_triggers():
    hits = [n for n in EXPECTED if generate_presup_axioms(load_problem(REG / f"{n}.fole"), SYNTHETIC_STORE)]
    assert len(hits) >= 4


def test_knowledge_is_deterministic():
    for name in ("r10_dog_barks", "leibniz"):
        p, store, yago, policy, _ = _bundle(name)
        a = build_knowledge(p, store, yago, PipelineConfig(policy=policy))
        b = build_knowledge(p, store, yago, PipelineConfig(policy=policy))
        assert [x.formula for x in a.axioms] == [x.formula for x in b.axioms]
        assert a.tree.serialize() == b.tree.serialize()


def test_single_engine_determinism_on_corpus():
    for name in sorted(EXPECTED)[:6]:
        p, store, yago, policy, cfg = _bundle(name)
        full = run_pipeline(p, store, yago, PipelineConfig(policy=policy))
        for engine in ("prover", "model-builder"):
            c = replace(cfg, engines={engine})
            a, b = classify(full, c), classify(full, c)
            assert (a.kind, repr(a.consistency), repr(a.informativity)) == \
                (b.kind, repr(b.consistency), repr(b.informativity))
