"""Run the prover and the model builder side by side."""

from __future__ import annotations

import queue
import threading

from ..fole.cnf import clausify
from .modelfinder import find_model
from .prover import prove_unsat
from .results import (
    MODEL_BUILDER,
    PROVER,
    EngineDisagreement,
    ReasonerConfig,
    Satisfiable,
    Unknown,
    Unsatisfiable,
)


def check_sat(formulas, cfg: ReasonerConfig | None = None):
    """Decide the conjunction of closed ``formulas``.

    The first definitive answer wins and the other engine is cancelled.
    With a single engine configured, that engine runs in the caller's
    thread.  Raises EngineDisagreement if both engines finish with
    conflicting answers.
    """
    cfg = cfg or ReasonerConfig()
    formulas = list(formulas)
    jobs = {}
    if PROVER in cfg.engines:
        jobs[PROVER] = lambda cancel: prove_unsat(clausify(formulas), cfg, cancel)
    if MODEL_BUILDER in cfg.engines:
        jobs[MODEL_BUILDER] = lambda cancel: find_model(formulas, cfg, cancel)
    if len(jobs) == 1:
        (job,) = jobs.values()
        return job(None)

    cancel = threading.Event()
    results: queue.Queue = queue.Queue()

    def run(name, job):
        try:
            results.put((name, job(cancel), None))
        except BaseException as exc:  # surfaced in the caller
            results.put((name, None, exc))

    threads = [threading.Thread(target=run, args=item, daemon=True, name=item[0]) for item in jobs.items()]
    for t in threads:
        t.start()
    got = {}
    winner = None
    try:
        for _ in threads:
            name, res, exc = results.get()
            if exc is not None:
                raise exc
            got[name] = res
            if winner is None and not isinstance(res, Unknown):
                winner = res
                cancel.set()
    finally:
        cancel.set()
        for t in threads:
            t.join()

    unsat = [r for r in got.values() if isinstance(r, Unsatisfiable)]
    sat = [r for r in got.values() if isinstance(r, Satisfiable)]
    if unsat and sat:
        raise EngineDisagreement(unsat[0], sat[0])
    if winner is not None:
        return winner
    reasons = "; ".join(f"{name}: {got[name].reason}" for name in sorted(got))
    return Unknown(reasons, "both")
