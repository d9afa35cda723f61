"""A small CDCL solver for the ground problems of the model builder.

Clauses are lists of non-zero ints in DIMACS convention.  Two watched
literals, first-UIP learning, activity-based branching with decay, and
restarts on a Luby schedule.  Not meant to compete; meant to be correct
and deterministic.
"""

from __future__ import annotations

from .results import Cancelled


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class Solver:
    def __init__(self, num_vars: int, cancel=None):
        self.n = num_vars
        self.cancel = cancel
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.value = [0] * (num_vars + 1)
        self.level = [0] * (num_vars + 1)
        self.reason: list = [None] * (num_vars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity = [0.0] * (num_vars + 1)
        self.inc = 1.0
        self.ok = True
        self.units: list[int] = []

    def _val(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, lits) -> None:
        lits = sorted(set(lits), key=lambda x: (abs(x), x))
        for i in range(len(lits) - 1):
            if lits[i] == -lits[i + 1]:
                return
        if not lits:
            self.ok = False
            return
        if len(lits) == 1:
            self.units.append(lits[0])
            return
        idx = len(self.clauses)
        self.clauses.append(lits)
        self.watches.setdefault(lits[0], []).append(idx)
        self.watches.setdefault(lits[1], []).append(idx)

    def _assign(self, lit: int, reason) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            ws = self.watches.get(false_lit, [])
            keep = []
            i = 0
            while i < len(ws):
                ci = ws[i]
                i += 1
                c = self.clauses[ci]
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._val(c[0]) == 1:
                    keep.append(ci)
                    continue
                for k in range(2, len(c)):
                    if self._val(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        self.watches.setdefault(c[1], []).append(ci)
                        break
                else:
                    keep.append(ci)
                    if self._val(c[0]) == -1:
                        keep.extend(ws[i:])
                        self.watches[false_lit] = keep
                        return ci
                    self._assign(c[0], ci)
            self.watches[false_lit] = keep
        return None

    def _bump(self, v: int):
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.inc *= 1e-100

    def _analyze(self, confl: int):
        learnt = [0]
        seen = [False] * (self.n + 1)
        counter = 0
        p = None
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        while True:
            for q in self.clauses[confl]:
                if p is not None and q == p:
                    continue
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            confl = self.reason[abs(p)]
            seen[abs(p)] = False
            counter -= 1
            if counter == 0:
                break
        learnt[0] = -p
        if len(learnt) == 1:
            back = 0
        else:
            j = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
            learnt[1], learnt[j] = learnt[j], learnt[1]
            back = self.level[abs(learnt[1])]
        return learnt, back

    def _cancel_until(self, lvl: int):
        if len(self.trail_lim) > lvl:
            start = self.trail_lim[lvl]
            for lit in self.trail[start:]:
                self.value[abs(lit)] = 0
                self.reason[abs(lit)] = None
            del self.trail[start:]
            del self.trail_lim[lvl:]
            self.qhead = len(self.trail)

    def _pick(self) -> int:
        best, best_act = 0, -1.0
        for v in range(1, self.n + 1):
            if self.value[v] == 0 and self.activity[v] > best_act:
                best, best_act = v, self.activity[v]
        return best

    def solve(self):
        """Return a model (list indexed by var, True/False) or None if unsat."""
        if not self.ok:
            return None
        for u in self.units:
            val = self._val(u)
            if val == -1:
                return None
            if val == 0:
                self._assign(u, None)
        if self._propagate() is not None:
            return None
        conflicts = 0
        restart = 1
        budget = 100 * _luby(restart)
        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                if conflicts % 64 == 0 and self.cancel is not None and self.cancel.is_set():
                    raise Cancelled()
                if not self.trail_lim:
                    return None
                learnt, back = self._analyze(confl)
                self._cancel_until(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    idx = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches.setdefault(learnt[0], []).append(idx)
                    self.watches.setdefault(learnt[1], []).append(idx)
                    self._assign(learnt[0], idx)
                self.inc /= 0.95
                budget -= 1
                continue
            if budget <= 0:
                restart += 1
                budget = 100 * _luby(restart)
                self._cancel_until(0)
                if self.cancel is not None and self.cancel.is_set():
                    raise Cancelled()
                continue
            v = self._pick()
            if v == 0:
                return [False] + [self.value[i] == 1 for i in range(1, self.n + 1)]
            self.trail_lim.append(len(self.trail))
            self._assign(-v, None)


def solve(num_vars: int, clauses, cancel=None):
    s = Solver(num_vars, cancel)
    for c in clauses:
        s.add_clause(c)
    return s.solve()
