# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
# distutils: language = c++
"""Compiled conflict-driven clause learning solver.

Mirrors ``_pycdcl`` step for step; clauses live in one flat literal arena
and the branching order is kept in an indexed binary heap.
"""

from libcpp.vector cimport vector
from libcpp.pair cimport pair
from libcpp.algorithm cimport sort

cdef enum:
    RESTART = 2
    BUDGET = 3

SAT, UNSAT, UNKNOWN = 1, 0, -1


cdef double luby(double y, int x):
    cdef int size = 1, seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


cdef class CdclSolver:
    backend = "cython"

    cdef public int nvars
    cdef vector[int] arena
    cdef vector[int] cstart
    cdef vector[int] csize
    cdef vector[char] clearnt
    cdef vector[char] cdead
    cdef vector[double] cact
    cdef vector[vector[int]] watches
    cdef vector[signed char] val
    cdef vector[int] level
    cdef vector[int] reason
    cdef vector[double] activity
    cdef vector[char] polarity
    cdef vector[char] seen
    cdef vector[int] trail
    cdef vector[int] trail_lim
    cdef vector[int] heap
    cdef vector[int] heap_idx
    cdef int qhead
    cdef bint ok
    cdef double var_inc
    cdef double cla_inc
    cdef long num_learnts
    cdef long num_original
    cdef long dead_lits
    cdef double max_learnts
    cdef public long conflicts
    cdef public long decisions
    cdef public long propagations
    cdef list model

    def __cinit__(self):
        self.nvars = 0
        self.watches.resize(2)
        self.val.resize(2, 0)
        self.level.push_back(0)
        self.reason.push_back(-1)
        self.activity.push_back(0.0)
        self.polarity.push_back(0)
        self.seen.push_back(0)
        self.heap_idx.push_back(-1)
        self.qhead = 0
        self.ok = True
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.num_learnts = 0
        self.num_original = 0
        self.dead_lits = 0
        self.max_learnts = 0.0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0
        self.model = []

    # -- heap ---------------------------------------------------------------

    cdef inline bint _better(self, int a, int b):
        return self.activity[a] > self.activity[b]

    cdef void _heap_up(self, int pos):
        cdef int v = self.heap[pos]
        cdef int parent
        while pos > 0:
            parent = (pos - 1) >> 1
            if not self._better(v, self.heap[parent]):
                break
            self.heap[pos] = self.heap[parent]
            self.heap_idx[self.heap[pos]] = pos
            pos = parent
        self.heap[pos] = v
        self.heap_idx[v] = pos

    cdef void _heap_down(self, int pos):
        cdef int v = self.heap[pos]
        cdef int n = self.heap.size()
        cdef int child
        while 2 * pos + 1 < n:
            child = 2 * pos + 1
            if child + 1 < n and self._better(self.heap[child + 1], self.heap[child]):
                child += 1
            if not self._better(self.heap[child], v):
                break
            self.heap[pos] = self.heap[child]
            self.heap_idx[self.heap[pos]] = pos
            pos = child
        self.heap[pos] = v
        self.heap_idx[v] = pos

    cdef void _heap_insert(self, int v):
        if self.heap_idx[v] >= 0:
            return
        self.heap.push_back(v)
        self.heap_idx[v] = self.heap.size() - 1
        self._heap_up(self.heap.size() - 1)

    cdef int _heap_pop(self):
        cdef int top = self.heap[0]
        cdef int last = self.heap.back()
        self.heap.pop_back()
        self.heap_idx[top] = -1
        if self.heap.size() > 0:
            self.heap[0] = last
            self.heap_idx[last] = 0
            self._heap_down(0)
        return top

    # -- construction -------------------------------------------------------

    cpdef int new_var(self):
        self.nvars += 1
        cdef int v = self.nvars
        self.watches.resize(2 * v + 2)
        self.val.push_back(0)
        self.val.push_back(0)
        self.level.push_back(0)
        self.reason.push_back(-1)
        self.activity.push_back(0.0)
        self.polarity.push_back(0)
        self.seen.push_back(0)
        self.heap_idx.push_back(-1)
        self._heap_insert(v)
        return v

    def ensure_vars(self, int n):
        while self.nvars < n:
            self.new_var()

    def add_clause(self, lits):
        """Add a clause of DIMACS literals; returns False once the formula is UNSAT."""
        if not self.ok:
            return False
        self._cancel(0)
        cdef vector[int] clause
        cdef int x, p, q
        cdef bint dup
        for x in lits:
            if x == 0:
                raise ValueError("literal 0 is not allowed")
            if abs(x) > self.nvars:
                self.ensure_vars(abs(x))
            p = 2 * abs(x) + (1 if x < 0 else 0)
            if self.val[p] == 1:
                return True
            if self.val[p] == -1:
                continue
            dup = False
            for q in clause:
                if q == (p ^ 1):
                    return True
                if q == p:
                    dup = True
            if not dup:
                clause.push_back(p)
        if clause.size() == 0:
            self.ok = False
            return False
        if clause.size() == 1:
            self._enqueue(clause[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return self.ok
        self._attach(clause, False)
        self.num_original += 1
        return True

    cdef int _attach(self, vector[int]& clause, bint learnt):
        cdef int cref = self.cstart.size()
        cdef int p
        self.cstart.push_back(self.arena.size())
        self.csize.push_back(clause.size())
        self.clearnt.push_back(learnt)
        self.cdead.push_back(0)
        self.cact.push_back(0.0)
        for p in clause:
            self.arena.push_back(p)
        self.watches[clause[0]].push_back(cref)
        self.watches[clause[1]].push_back(cref)
        return cref

    # -- core ---------------------------------------------------------------

    cdef inline void _enqueue(self, int p, int r):
        cdef int v = p >> 1
        self.val[p] = 1
        self.val[p ^ 1] = -1
        self.level[v] = self.trail_lim.size()
        self.reason[v] = r
        self.trail.push_back(p)

    cdef int _propagate(self):
        cdef int confl = -1
        cdef int p, false_lit, cref, first, lit, k, size, base
        cdef size_t i, j, n
        while self.qhead < <int>self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            i = 0
            j = 0
            n = self.watches[false_lit].size()
            while i < n:
                cref = self.watches[false_lit][i]
                i += 1
                if self.cdead[cref]:
                    continue
                base = self.cstart[cref]
                if self.arena[base] == false_lit:
                    self.arena[base] = self.arena[base + 1]
                    self.arena[base + 1] = false_lit
                first = self.arena[base]
                if self.val[first] == 1:
                    self.watches[false_lit][j] = cref
                    j += 1
                    continue
                size = self.csize[cref]
                for k in range(2, size):
                    lit = self.arena[base + k]
                    if self.val[lit] != -1:
                        self.arena[base + 1] = lit
                        self.arena[base + k] = false_lit
                        self.watches[lit].push_back(cref)
                        break
                else:
                    self.watches[false_lit][j] = cref
                    j += 1
                    if self.val[first] == -1:
                        confl = cref
                        while i < n:
                            self.watches[false_lit][j] = self.watches[false_lit][i]
                            j += 1
                            i += 1
                        break
                    self._enqueue(first, cref)
            self.watches[false_lit].resize(j)
            if confl != -1:
                self.qhead = self.trail.size()
                break
        return confl

    cdef void _cancel(self, int lvl):
        if <int>self.trail_lim.size() <= lvl:
            return
        cdef int stop = self.trail_lim[lvl]
        cdef int c, x, v
        for c in range(<int>self.trail.size() - 1, stop - 1, -1):
            x = self.trail[c]
            v = x >> 1
            self.val[x] = 0
            self.val[x ^ 1] = 0
            self.reason[v] = -1
            self.polarity[v] = not (x & 1)
            self._heap_insert(v)
        self.trail.resize(stop)
        self.trail_lim.resize(lvl)
        self.qhead = stop

    cdef void _bump_var(self, int v):
        cdef int i
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(1, self.nvars + 1):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_idx[v] >= 0:
            self._heap_up(self.heap_idx[v])

    cdef void _bump_clause(self, int cref):
        cdef size_t i
        self.cact[cref] += self.cla_inc
        if self.cact[cref] > 1e20:
            for i in range(self.cact.size()):
                if self.clearnt[i]:
                    self.cact[i] *= 1e-20
            self.cla_inc *= 1e-20

    cdef int _analyze(self, int confl, vector[int]& out):
        cdef int dl = self.trail_lim.size()
        cdef vector[int] learnt
        cdef vector[int] to_clear
        cdef int path_c = 0, p = -1, index = <int>self.trail.size() - 1
        cdef int base, size, k, q, v, r, best, i
        cdef bint keep
        learnt.push_back(0)
        while True:
            if self.clearnt[confl]:
                self._bump_clause(confl)
            base = self.cstart[confl]
            size = self.csize[confl]
            for k in range(0 if p == -1 else 1, size):
                q = self.arena[base + k]
                v = q >> 1
                if not self.seen[v] and self.level[v] > 0:
                    self._bump_var(v)
                    self.seen[v] = 1
                    to_clear.push_back(v)
                    if self.level[v] >= dl:
                        path_c += 1
                    else:
                        learnt.push_back(q)
            while not self.seen[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            index -= 1
            confl = self.reason[p >> 1]
            self.seen[p >> 1] = 0
            path_c -= 1
            if path_c == 0:
                break
        learnt[0] = p ^ 1

        out.clear()
        out.push_back(learnt[0])
        for i in range(1, learnt.size()):
            q = learnt[i]
            r = self.reason[q >> 1]
            if r == -1:
                out.push_back(q)
                continue
            base = self.cstart[r]
            keep = False
            for k in range(1, self.csize[r]):
                v = self.arena[base + k] >> 1
                if not self.seen[v] and self.level[v] > 0:
                    keep = True
                    break
            if keep:
                out.push_back(q)
        for v in to_clear:
            self.seen[v] = 0

        if out.size() == 1:
            return 0
        best = 1
        for i in range(2, out.size()):
            if self.level[out[i] >> 1] > self.level[out[best] >> 1]:
                best = i
        q = out[1]
        out[1] = out[best]
        out[best] = q
        return self.level[out[1] >> 1]

    cdef int _pick_branch(self):
        cdef int v
        while self.heap.size() > 0:
            v = self._heap_pop()
            if self.val[2 * v] == 0:
                return 2 * v + (0 if self.polarity[v] else 1)
        return -1

    cdef bint _locked(self, int cref):
        cdef int first = self.arena[self.cstart[cref]]
        return self.val[first] == 1 and self.reason[first >> 1] == cref

    cdef void _reduce_db(self):
        cdef vector[pair[double, int]] cands
        cdef size_t i
        cdef int cref
        for i in range(self.cstart.size()):
            if self.clearnt[i] and not self.cdead[i] and self.csize[i] > 2 and not self._locked(i):
                cands.push_back(pair[double, int](self.cact[i], i))
        sort(cands.begin(), cands.end())
        for i in range(cands.size() // 2):
            cref = cands[i].second
            self.cdead[cref] = 1
            self.dead_lits += self.csize[cref]
            self.num_learnts -= 1
        if self.dead_lits * 2 > <long>self.arena.size():
            self._collect()

    cdef void _collect(self):
        """Compact the clause arena, renumbering clause references."""
        cdef vector[int] remap
        cdef vector[int] arena, cstart, csize
        cdef vector[char] clearnt, cdead
        cdef vector[double] cact
        cdef size_t i
        cdef int k, cref, v
        remap.resize(self.cstart.size(), -1)
        for i in range(self.cstart.size()):
            if self.cdead[i]:
                continue
            remap[i] = cstart.size()
            cstart.push_back(arena.size())
            csize.push_back(self.csize[i])
            clearnt.push_back(self.clearnt[i])
            cdead.push_back(0)
            cact.push_back(self.cact[i])
            for k in range(self.csize[i]):
                arena.push_back(self.arena[self.cstart[i] + k])
        self.arena.swap(arena)
        self.cstart.swap(cstart)
        self.csize.swap(csize)
        self.clearnt.swap(clearnt)
        self.cdead.swap(cdead)
        self.cact.swap(cact)
        self.dead_lits = 0
        for i in range(self.watches.size()):
            self.watches[i].clear()
        for i in range(self.cstart.size()):
            self.watches[self.arena[self.cstart[i]]].push_back(i)
            self.watches[self.arena[self.cstart[i] + 1]].push_back(i)
        for v in range(1, self.nvars + 1):
            if self.reason[v] >= 0:
                self.reason[v] = remap[self.reason[v]]

    cdef int _search(self, int nof_conflicts, vector[int]& assumps, long limit):
        cdef int conflict_c = 0
        cdef int confl, bt, cref, p, nxt
        cdef vector[int] learnt
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                conflict_c += 1
                if self.trail_lim.size() == 0:
                    self.ok = False
                    return 0
                bt = self._analyze(confl, learnt)
                self._cancel(bt)
                if learnt.size() == 1:
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
                    return BUDGET
                continue
            if conflict_c >= nof_conflicts:
                self._cancel(0)
                return RESTART
            if self.num_learnts - <long>self.trail.size() >= self.max_learnts:
                self._reduce_db()
            nxt = -1
            while self.trail_lim.size() < assumps.size():
                p = assumps[self.trail_lim.size()]
                if self.val[p] == 1:
                    self.trail_lim.push_back(self.trail.size())
                elif self.val[p] == -1:
                    return 0
                else:
                    nxt = p
                    break
            if nxt == -1:
                self.decisions += 1
                nxt = self._pick_branch()
                if nxt == -1:
                    return 1
            self.trail_lim.push_back(self.trail.size())
            self._enqueue(nxt, -1)

    def solve(self, assumptions=(), long conflict_budget=-1):
        """Returns SAT (1), UNSAT (0) or UNKNOWN (-1) when the budget runs out."""
        cdef vector[int] assumps
        cdef int x, status, restarts = 0
        cdef long limit
        self.model = []
        if not self.ok:
            return 0
        self._cancel(0)
        for x in assumptions:
            if abs(x) > self.nvars:
                self.ensure_vars(abs(x))
            assumps.push_back(2 * abs(x) + (1 if x < 0 else 0))
        if self._propagate() != -1:
            self.ok = False
            return 0
        self.max_learnts = max(self.num_original / 3.0, 2000.0)
        limit = self.conflicts + conflict_budget if conflict_budget >= 0 else -1
        while True:
            status = self._search(<int>(luby(2.0, restarts) * 100), assumps, limit)
            if status == RESTART:
                restarts += 1
                self.max_learnts *= 1.1
                continue
            break
        if status == 1:
            self.model = [False] + [self.val[2 * x] == 1 for x in range(1, self.nvars + 1)]
        self._cancel(0)
        return -1 if status == BUDGET else status

    def get_model(self):
        return self.model

    def stats(self):
        return {"conflicts": self.conflicts, "decisions": self.decisions,
                "propagations": self.propagations}
