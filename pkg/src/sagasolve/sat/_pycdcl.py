"""Pure-Python conflict-driven clause learning solver.

Same algorithm and interface as the compiled ``_cdcl`` module: two watched
literals, first-UIP learning with local minimization, VSIDS branching with
phase saving, Luby restarts and activity-based deletion of learnt clauses.

Literals use the DIMACS convention at the interface (``v`` / ``-v``) and
``2*v + sign`` internally.
"""

from __future__ import annotations

import heapq

SAT, UNSAT, UNKNOWN = 1, 0, -1

_RESTART, _BUDGET = 2, 3


def luby(y: float, x: int) -> float:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


class CdclSolver:
    backend = "python"

    def __init__(self) -> None:
        self.nvars = 0
        self.clauses: list[list[int] | None] = []
        self.learnt: list[bool] = []
        self.cla_act: list[float] = []
        self.watches: list[list[int]] = [[], []]
        self.val = [0, 0]
        self.level = [0]
        self.reason = [-1]
        self.activity = [0.0]
        self.polarity = [False]
        self.seen = [0]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.heap: list[tuple[float, int]] = []
        self.model: list[bool] = []
        self.num_learnts = 0
        self.num_original = 0
        self.max_learnts = 0.0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # -- construction -----------------------------------------------------

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.watches += [[], []]
        self.val += [0, 0]
        self.level.append(0)
        self.reason.append(-1)
        self.activity.append(0.0)
        self.polarity.append(False)
        self.seen.append(0)
        heapq.heappush(self.heap, (0.0, v))
        return v

    def ensure_vars(self, n: int) -> None:
        while self.nvars < n:
            self.new_var()

    def add_clause(self, lits) -> bool:
        """Add a clause of DIMACS literals; returns False once the formula is UNSAT."""
        if not self.ok:
            return False
        self._cancel(0)
        val = self.val
        clause = []
        present = set()
        for x in lits:
            if x == 0:
                raise ValueError("literal 0 is not allowed")
            self.ensure_vars(abs(x))
            p = 2 * abs(x) + (x < 0)
            if p ^ 1 in present or val[p] == 1:
                return True
            if p in present or val[p] == -1:
                continue
            present.add(p)
            clause.append(p)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return self.ok
        self._attach(clause, False)
        self.num_original += 1
        return True

    def _attach(self, clause: list[int], learnt: bool) -> int:
        cref = len(self.clauses)
        self.clauses.append(clause)
        self.learnt.append(learnt)
        self.cla_act.append(0.0)
        self.watches[clause[0]].append(cref)
        self.watches[clause[1]].append(cref)
        return cref

    # -- core -------------------------------------------------------------

    def _enqueue(self, p: int, reason: int) -> None:
        v = p >> 1
        self.val[p] = 1
        self.val[p ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(p)

    def _propagate(self) -> int:
        val = self.val
        clauses = self.clauses
        watches = self.watches
        trail = self.trail
        confl = -1
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            kept = []
            i, n = 0, len(ws)
            while i < n:
                cref = ws[i]
                i += 1
                c = clauses[cref]
                if c is None:
                    continue
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    kept.append(cref)
                    continue
                for k in range(2, len(c)):
                    lit = c[k]
                    if val[lit] != -1:
                        c[1] = lit
                        c[k] = false_lit
                        watches[lit].append(cref)
                        break
                else:
                    kept.append(cref)
                    if val[first] == -1:
                        confl = cref
                        kept.extend(ws[i:])
                        break
                    self._enqueue(first, cref)
            watches[false_lit] = kept
            if confl != -1:
                self.qhead = len(trail)
                break
        return confl

    def _cancel(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        val, reason, polarity, trail = self.val, self.reason, self.polarity, self.trail
        heap, activity = self.heap, self.activity
        stop = self.trail_lim[lvl]
        for c in range(len(trail) - 1, stop - 1, -1):
            x = trail[c]
            v = x >> 1
            val[x] = val[x ^ 1] = 0
            reason[v] = -1
            polarity[v] = not (x & 1)
            heapq.heappush(heap, (-activity[v], v))
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = stop

    def _bump_var(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for i in range(1, self.nvars + 1):
                act[i] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-act[i], i) for i in range(1, self.nvars + 1) if self.val[2 * i] == 0]
            heapq.heapify(self.heap)
        elif self.val[2 * v] == 0:
            heapq.heappush(self.heap, (-act[v], v))

    def _bump_clause(self, cref: int) -> None:
        self.cla_act[cref] += self.cla_inc
        if self.cla_act[cref] > 1e20:
            for i, learnt in enumerate(self.learnt):
                if learnt:
                    self.cla_act[i] *= 1e-20
            self.cla_inc *= 1e-20

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        seen, level, reason, trail = self.seen, self.level, self.reason, self.trail
        dl = len(self.trail_lim)
        learnt = [0]
        to_clear = []
        path_c = 0
        p = -1
        index = len(trail) - 1
        while True:
            if self.learnt[confl]:
                self._bump_clause(confl)
            c = self.clauses[confl]
            for q in (c if p == -1 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    self._bump_var(v)
                    seen[v] = 1
                    to_clear.append(v)
                    if level[v] >= dl:
                        path_c += 1
                    else:
                        learnt.append(q)
            while not seen[trail[index] >> 1]:
                index -= 1
            p = trail[index]
            index -= 1
            confl = reason[p >> 1]
            seen[p >> 1] = 0
            path_c -= 1
            if path_c == 0:
                break
        learnt[0] = p ^ 1

        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r == -1:
                kept.append(q)
                continue
            for x in self.clauses[r][1:]:
                if not seen[x >> 1] and level[x >> 1] > 0:
                    kept.append(q)
                    break
        for v in to_clear:
            seen[v] = 0

        if len(kept) == 1:
            return kept, 0
        best = 1
        for i in range(2, len(kept)):
            if level[kept[i] >> 1] > level[kept[best] >> 1]:
                best = i
        kept[1], kept[best] = kept[best], kept[1]
        return kept, level[kept[1] >> 1]

    def _pick_branch(self) -> int:
        heap, val, act = self.heap, self.val, self.activity
        while heap:
            a, v = heapq.heappop(heap)
            if val[2 * v] == 0 and -a == act[v]:
                return 2 * v + (0 if self.polarity[v] else 1)
        for v in range(1, self.nvars + 1):
            if val[2 * v] == 0:
                return 2 * v + (0 if self.polarity[v] else 1)
        return -1

    def _locked(self, cref: int) -> bool:
        c = self.clauses[cref]
        return self.val[c[0]] == 1 and self.reason[c[0] >> 1] == cref

    def _reduce_db(self) -> None:
        cands = [i for i, c in enumerate(self.clauses)
                 if c is not None and self.learnt[i] and len(c) > 2 and not self._locked(i)]
        cands.sort(key=lambda i: self.cla_act[i])
        for i in cands[:len(cands) // 2]:
            self.clauses[i] = None
            self.num_learnts -= 1

    def _search(self, nof_conflicts: int, assumps: list[int], limit: int) -> int:
        conflict_c = 0
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                conflict_c += 1
                if not self.trail_lim:
                    self.ok = False
                    return UNSAT
                learnt, bt = self._analyze(confl)
                self._cancel(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    cref = self._attach(learnt, True)
                    self.num_learnts += 1
                    self._bump_clause(cref)
                    self._enqueue(learnt[0], cref)
                self.var_inc /= 0.95
                self.cla_inc /= 0.999
                if 0 <= limit <= self.conflicts:
                    self._cancel(0)
                    return _BUDGET
                continue
            if conflict_c >= nof_conflicts:
                self._cancel(0)
                return _RESTART
            if self.num_learnts - len(self.trail) >= self.max_learnts:
                self._reduce_db()
            nxt = -1
            while len(self.trail_lim) < len(assumps):
                p = assumps[len(self.trail_lim)]
                if self.val[p] == 1:
                    self.trail_lim.append(len(self.trail))
                elif self.val[p] == -1:
                    return UNSAT
                else:
                    nxt = p
                    break
            if nxt == -1:
                self.decisions += 1
                nxt = self._pick_branch()
                if nxt == -1:
                    return SAT
            self.trail_lim.append(len(self.trail))
            self._enqueue(nxt, -1)

    def solve(self, assumptions=(), conflict_budget: int = -1) -> int:
        """Returns SAT (1), UNSAT (0) or UNKNOWN (-1) when the budget runs out."""
        self.model = []
        if not self.ok:
            return UNSAT
        self._cancel(0)
        assumps = []
        for x in assumptions:
            self.ensure_vars(abs(x))
            assumps.append(2 * abs(x) + (x < 0))
        if self._propagate() != -1:
            self.ok = False
            return UNSAT
        self.max_learnts = max(self.num_original / 3.0, 2000.0)
        limit = self.conflicts + conflict_budget if conflict_budget >= 0 else -1
        restarts = 0
        while True:
            status = self._search(int(luby(2.0, restarts) * 100), assumps, limit)
            if status == _RESTART:
                restarts += 1
                self.max_learnts *= 1.1
                continue
            break
        if status == SAT:
            self.model = [False] + [self.val[2 * v] == 1 for v in range(1, self.nvars + 1)]
        self._cancel(0)
        return UNKNOWN if status == _BUDGET else status

    def get_model(self) -> list[bool]:
        return self.model

    def stats(self) -> dict[str, int]:
        return {"conflicts": self.conflicts, "decisions": self.decisions,
                "propagations": self.propagations}
