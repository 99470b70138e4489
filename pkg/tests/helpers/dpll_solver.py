"""Stand-alone DPLL solver speaking DIMACS in and competition output out.

Used as an independent "external solver" in tests: no clause learning, no
shared code with the package.
"""

from __future__ import annotations

import sys


def read_cnf(text: str) -> tuple[int, list[list[int]]]:
    num_vars, clauses, cur = 0, [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line[0] == "p":
            num_vars = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit:
                cur.append(lit)
            else:
                clauses.append(cur)
                cur = []
    return num_vars, clauses


def dpll(num_vars: int, clauses: list[list[int]]) -> dict[int, bool] | None:
    watch: dict[int, list[int]] = {}
    for i, c in enumerate(clauses):
        for lit in c:
            watch.setdefault(-lit, []).append(i)
    assign: dict[int, bool] = {}
    trail: list[int] = []

    def value(lit):
        v = assign.get(abs(lit))
        return None if v is None else v == (lit > 0)

    def propagate(queue):
        while queue:
            lit = queue.pop()
            for ci in watch.get(lit, ()):
                free, sat = None, False
                nfree = 0
                for l2 in clauses[ci]:
                    v = value(l2)
                    if v:
                        sat = True
                        break
                    if v is None:
                        nfree += 1
                        free = l2
                if sat:
                    continue
                if nfree == 0:
                    return False
                if nfree == 1:
                    assign[abs(free)] = free > 0
                    trail.append(free)
                    queue.append(free)
        return True

    def undo(mark):
        while len(trail) > mark:
            del assign[abs(trail.pop())]

    units = []
    for c in clauses:
        if not c:
            return None
        if len(c) == 1:
            units.append(c[0])
    for u in units:
        if value(u) is False:
            return None
        if value(u) is None:
            assign[abs(u)] = u > 0
            trail.append(u)
    if not propagate(list(trail)):
        return None

    def search():
        var = next((v for v in range(1, num_vars + 1) if v not in assign), None)
        if var is None:
            return all(any(value(l) for l in c) for c in clauses)
        for lit in (-var, var):
            mark = len(trail)
            assign[var] = lit > 0
            trail.append(lit)
            if propagate([lit]) and search():
                return True
            undo(mark)
        return False

    sys.setrecursionlimit(max(10000, 4 * num_vars))
    return dict(assign) if search() else None


def main(argv: list[str]) -> int:
    with open(argv[1]) as fh:
        num_vars, clauses = read_cnf(fh.read())
    model = dpll(num_vars, clauses)
    if model is None:
        print("s UNSATISFIABLE")
        return 20
    print("s SATISFIABLE")
    lits = [v if model.get(v, False) else -v for v in range(1, num_vars + 1)]
    print("v " + " ".join(map(str, lits)) + " 0")
    return 10


if __name__ == "__main__":
    sys.exit(main(sys.argv))
