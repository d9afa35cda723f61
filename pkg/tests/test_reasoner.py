import itertools
import random
import threading
from dataclasses import replace
from pathlib import Path

import pytest
from hypothesis import given, settings

from rtelogic.fole import Const, Func, Var, clausify, parse_fole, parse_problem, to_clauses
from rtelogic.fole.cnf import Literal, clause
from rtelogic.fole.syntax import And, Not
from rtelogic.reasoner import (
    MODEL_BUILDER,
    PROVER,
    EngineDisagreement,
    EvaluationError,
    FiniteModel,
    ProofCheckError,
    ReasonerConfig,
    Satisfiable,
    Unknown,
    Unsatisfiable,
    check_refutation,
    check_sat,
    evaluate,
    export_clauses,
    find_model,
    prove_unsat,
)
from rtelogic.reasoner import race
from rtelogic.reasoner.prover import subsumes
from rtelogic.reasoner.sat import solve
from rtelogic.reasoner.unify import resolve_term, unify

from oracles import type_collapse_sat
from strategies import MONADIC, monadic_closed

FIX = Path(__file__).resolve().parent.parent / "fixtures"

PROP1 = [
    parse_fole("all(X, imp(ci_n_1(X), not(cj_n_1(X))))"),
    parse_fole("all(X, imp(ck_n_1(X), ci_n_1(X)))"),
    parse_fole("all(X, imp(ck_n_1(X), cj_n_1(X)))"),
    parse_fole("some(X, ck_n_1(X))"),
]


def lit(pred, *args, positive=True):
    return Literal(positive, pred, tuple(Var(a) if a[0].isupper() else Const(a) for a in args))


# ------------------------------------------------------------ unification


def test_unify_binds_and_occurs_check():
    s = unify(Var("X"), Func("f", (Var("Y"),)))
    assert resolve_term(Var("X"), s) == Func("f", (Var("Y"),))
    assert unify(Var("X"), Func("f", (Var("X"),))) is None
    assert unify(Const("a"), Const("b")) is None
    s = unify(Func("g", (Var("X"), Const("b"))), Func("g", (Const("a"), Var("Y"))))
    assert resolve_term(Var("X"), s) == Const("a") and resolve_term(Var("Y"), s) == Const("b")


def test_subsumption():
    general = clause(lit("p", "X"))
    specific = clause(lit("p", "a"), lit("q", "b"))
    assert subsumes(general, specific)
    assert not subsumes(specific, general)
    # one literal may not absorb two
    assert not subsumes(clause(lit("p", "X"), lit("p", "Y", positive=False)), clause(lit("p", "a")))


# ------------------------------------------------------------ prover


def test_prop1_refutation_checks():
    clauses = clausify(PROP1)
    res = prove_unsat(clauses)
    assert isinstance(res, Unsatisfiable) and res.engine == PROVER
    assert res.proof.empty_clause.clause.is_empty
    assert check_refutation(res.proof, clauses) >= 3


def test_empty_input_is_unknown():
    assert isinstance(prove_unsat([]), Unknown)


def test_saturation_is_unknown_not_sat():
    res = prove_unsat(clausify([parse_fole("some(X, p_n_1(X))")]))
    assert isinstance(res, Unknown)


def test_proof_contains_only_ancestors():
    noise = [parse_fole(f"all(X, imp(n{i}_n_1(X), n{i + 1}_n_1(X)))") for i in range(5)]
    res = prove_unsat(clausify(PROP1 + noise))
    used = {str(s.clause) for s in res.proof.steps}
    assert not any("n0_n_1" in c for c in used)


def test_tampered_proof_is_rejected():
    clauses = clausify(PROP1)
    proof = prove_unsat(clauses).proof
    steps = list(proof.steps)
    i = next(k for k, s in enumerate(steps) if s.rule == "resolve" and not s.clause.is_empty)
    steps[i] = replace(steps[i], clause=clause(lit("ci_n_1", "zz")))
    with pytest.raises(ProofCheckError):
        check_refutation(replace(proof, steps=tuple(steps)), clauses)
    with pytest.raises(ProofCheckError):
        check_refutation(replace(proof, steps=proof.steps[:-1]), clauses)
    with pytest.raises(ProofCheckError):
        check_refutation(proof, clauses[1:])


def test_equality_by_axioms():
    f = parse_fole("and(eq(a, b), and(p_n_1(a), not(p_n_1(b))))")
    clauses = clausify([f])
    res = prove_unsat(clauses)
    assert isinstance(res, Unsatisfiable)
    check_refutation(res.proof, clauses)


def test_clause_limit_gives_unknown():
    f = parse_fole("all(X, all(Y, all(Z, imp(and(r_r_1(X, Y), r_r_1(Y, Z)), r_r_1(X, Z)))))")
    g = parse_fole("and(r_r_1(a, b), and(r_r_1(b, c), not(r_r_1(a, c))))")
    res = prove_unsat(clausify([f, g]), ReasonerConfig(max_clauses=2))
    assert isinstance(res, Unknown) and "clause" in res.reason


def test_cancel_gives_unknown():
    ev = threading.Event()
    ev.set()
    assert isinstance(prove_unsat(clausify(PROP1), cancel=ev), Unknown)
    assert isinstance(find_model([parse_fole("some(X, p_n_1(X))")], cancel=ev), Unknown)


@settings(max_examples=50, deadline=None)
@given(monadic_closed())
def test_formula_and_negation_is_refuted(f):
    clauses = clausify([f, Not(f)])
    res = prove_unsat(clauses)
    assert isinstance(res, Unsatisfiable)
    check_refutation(res.proof, clauses)


def test_prover_is_deterministic():
    clauses = clausify(PROP1)
    a = prove_unsat(clauses, ReasonerConfig(engines={PROVER}))
    b = prove_unsat(clauses, ReasonerConfig(engines={PROVER}))
    assert str(a.proof) == str(b.proof)


# ------------------------------------------------------------ CDCL


def _brute(n, clauses):
    for bits in itertools.product([False, True], repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def test_cdcl_matches_brute_force():
    rng = random.Random(7)
    for _ in range(400):
        n = rng.randint(1, 10)
        m = rng.randint(1, 5 * n)
        clauses = []
        for _ in range(m):
            k = rng.randint(1, 3)
            clauses.append([rng.choice([-1, 1]) * rng.randint(1, n) for _ in range(k)])
        model = solve(n, clauses)
        assert (model is not None) == _brute(n, clauses)
        if model is not None:
            assert all(any(model[abs(l)] == (l > 0) for l in c) for c in clauses)


def test_cdcl_pigeonhole_unsat():
    # 4 pigeons, 3 holes
    var = lambda p, h: p * 3 + h + 1  # noqa: E731
    clauses = [[var(p, h) for h in range(3)] for p in range(4)]
    for h in range(3):
        for p, q in itertools.combinations(range(4), 2):
            clauses.append([-var(p, h), -var(q, h)])
    assert solve(12, clauses) is None


def test_cdcl_empty_clause():
    assert solve(2, [[1], []]) is None


# ------------------------------------------------------------ model builder


def test_single_witness_model():
    res = find_model([parse_fole("some(X, bird_n_1(X))")])
    assert isinstance(res, Satisfiable) and res.engine == MODEL_BUILDER
    assert res.model.domain_size == 1
    assert res.model.predicate_tables["bird_n_1"] == frozenset({(0,)})


def test_prop1_has_no_model_up_to_8():
    for k in range(1, 9):
        res = find_model(PROP1, ReasonerConfig(max_domain_size=k))
        assert isinstance(res, Unknown)


def test_needs_two_elements():
    res = find_model([parse_fole("and(some(X, p_n_1(X)), some(X, not(p_n_1(X))))")])
    assert res.model.domain_size == 2


def test_skolem_functions_in_models():
    f = parse_fole("and(all(X, some(Y, r_r_1(X, Y))), all(X, not(r_r_1(X, X))))")
    res = find_model([f])
    assert res.model.domain_size == 2
    assert evaluate(res.model, f)


def test_equality_in_models():
    f = parse_fole("and(not(eq(a, b)), and(not(eq(b, c)), not(eq(a, c))))")
    assert find_model([f]).model.domain_size == 3
    assert isinstance(find_model([parse_fole("and(eq(a, b), not(eq(b, a)))")]), Unknown)


def _independent_eval(model, f, env=None):
    """Second evaluator: walks the AST with explicit tables only."""
    env = env or {}
    from rtelogic.fole.syntax import Atom, Equal, Exists, Iff, Imp, Or

    def term(t):
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return model.constant_map[t.name]
        return model.function_tables[t.name][tuple(term(a) for a in t.args)]

    if isinstance(f, Atom):
        return tuple(term(a) for a in f.args) in model.predicate_tables.get(f.pred, frozenset())
    if isinstance(f, Equal):
        return term(f.left) == term(f.right)
    if isinstance(f, Not):
        return not _independent_eval(model, f.body, env)
    if isinstance(f, (And, Or, Imp, Iff)):
        a = _independent_eval(model, f.left, env)
        b = _independent_eval(model, f.right, env)
        return {And: a and b, Or: a or b, Imp: (not a) or b, Iff: a == b}[type(f)]
    results = [_independent_eval(model, f.body, {**env, f.var: d}) for d in range(model.domain_size)]
    return any(results) if isinstance(f, Exists) else all(results)


def test_tower_bridge_consistency_model():
    p = parse_problem((FIX / "towerbridge" / "problem.fole").read_text())
    formulas = [p.text, p.hypothesis] + [a.formula for a in p.background]
    res = find_model(formulas)
    assert isinstance(res, Satisfiable)
    for f in formulas:
        assert _independent_eval(res.model, f)
    # minimality of the iterative search
    k = res.model.domain_size
    if k > 1:
        assert isinstance(find_model(formulas, ReasonerConfig(max_domain_size=k - 1)), Unknown)


@settings(max_examples=150, deadline=None)
@given(monadic_closed(), monadic_closed())
def test_monadic_completeness_and_self_check(f, g):
    formulas = [f, g]
    res = find_model(formulas, ReasonerConfig(max_domain_size=8))
    if type_collapse_sat(formulas, MONADIC, {"a"}):
        assert isinstance(res, Satisfiable)
        assert all(evaluate(res.model, h) for h in formulas)
        assert all(_independent_eval(res.model, h) for h in formulas)
    else:
        assert isinstance(res, Unknown)


def test_eight_types_need_eight_elements():
    cells = []
    for signs in itertools.product([True, False], repeat=3):
        parts = [p if s else f"not({p})" for p, s in zip(("p_n_1(X)", "q_n_1(X)", "r_n_1(X)"), signs)]
        cells.append(f"some(X, and({parts[0]}, and({parts[1]}, {parts[2]})))")
    f = parse_fole("and(" + ", ".join(cells) + ")")
    res = find_model([f], ReasonerConfig(max_domain_size=8))
    assert res.model.domain_size == 8


# ------------------------------------------------------------ evaluator


def test_evaluate_examples():
    m = FiniteModel(1, {}, {"bird_n_1": frozenset({(0,)})})
    assert evaluate(m, parse_fole("some(X, bird_n_1(X))"))
    m2 = FiniteModel(2, {}, {"bird_n_1": frozenset({(0,)})})
    assert not evaluate(m2, parse_fole("all(X, bird_n_1(X))"))
    with pytest.raises(EvaluationError):
        evaluate(m, parse_fole("bird_n_1(tweety)"))


def test_model_rejects_out_of_range_constant():
    with pytest.raises(ValueError):
        FiniteModel(1, {"a": 1}, {})


# ------------------------------------------------------------ race


def test_check_sat_examples():
    res = check_sat(PROP1)
    assert isinstance(res, Unsatisfiable) and res.engine == PROVER
    res = check_sat([parse_fole("some(X, p_n_1(X))"), parse_fole("all(X, not(p_n_1(X)))")])
    assert isinstance(res, Unsatisfiable)
    res = check_sat([parse_fole("some(X, p_n_1(X))")])
    assert isinstance(res, Satisfiable)


def test_single_engine_modes():
    prover_only = ReasonerConfig(engines={PROVER})
    builder_only = ReasonerConfig(engines={MODEL_BUILDER})
    assert isinstance(check_sat(PROP1, prover_only), Unsatisfiable)
    assert isinstance(check_sat(PROP1, builder_only), Unknown)
    sat = [parse_fole("some(X, p_n_1(X))")]
    assert isinstance(check_sat(sat, prover_only), Unknown)
    assert isinstance(check_sat(sat, builder_only), Satisfiable)


def test_both_unknown_names_both_engines():
    f = parse_fole("and(all(X, some(Y, lt_r_1(X, Y))), and(all(X, not(lt_r_1(X, X))),"
                   " all(X, all(Y, all(Z, imp(and(lt_r_1(X, Y), lt_r_1(Y, Z)), lt_r_1(X, Z)))))))")
    res = check_sat([f], ReasonerConfig(max_domain_size=3, max_seconds=2))
    assert isinstance(res, Unknown)
    assert PROVER in res.reason and MODEL_BUILDER in res.reason


def test_disagreement_is_fatal(monkeypatch):
    bogus = Satisfiable(FiniteModel(1, {}, {}), MODEL_BUILDER)

    def slow_prover(clauses, cfg, cancel):
        return prove_unsat(clauses, cfg, None)

    monkeypatch.setattr(race, "find_model", lambda formulas, cfg, cancel: bogus)
    monkeypatch.setattr(race, "prove_unsat", slow_prover)
    with pytest.raises(EngineDisagreement) as info:
        check_sat(PROP1)
    assert "refutation" in str(info.value) and "model" in str(info.value)


def test_config_validation():
    with pytest.raises(ValueError):
        ReasonerConfig(max_domain_size=0)
    with pytest.raises(ValueError):
        ReasonerConfig(engines=frozenset())
    with pytest.raises(ValueError):
        ReasonerConfig(engines={"vampire"})


# ------------------------------------------------------------ export


def test_export_format():
    text = export_clauses(to_clauses(parse_fole("all(X, imp(ck_n_1(X), and(ci_n_1(X), eq(X, a))))")))
    lines = text.splitlines()
    assert lines[0] == "set(prolog_style_variables)."
    assert lines[1] == "formulas(sos)."
    assert "ci_n_1(X1) | -ck_n_1(X1)." in lines
    assert "X1 = a | -ck_n_1(X1)." in lines or "-ck_n_1(X1) | X1 = a." in lines
    assert lines[-1] == "end_of_list."


def test_clause_helper_roundtrip():
    c = to_clauses(parse_fole("some(X, and(p_n_1(X), q_n_1(X)))"))
    assert [str(x) for x in c] == ["p_n_1(sk_1)", "q_n_1(sk_1)"]
