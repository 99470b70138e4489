"""Compare the compiled and pure-Python CDCL backends.

Workloads: random 3-SAT near the phase transition, and the Tutorial-4
unrolled formula at the bound where the winning trace first appears.

    python benchmarks/bench_solver.py --repeat 3
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from sagasolve.bmc import unroll
from sagasolve.engine import Engine, Rng
from sagasolve.fixtures import load_fixture
from sagasolve.sat import CnfFormula, Solver, available_backends
from sagasolve.specialize import specialize_game


def random_3sat(n: int, seed: int, ratio: float = 4.26) -> CnfFormula:
    rng = random.Random(seed)
    f = CnfFormula()
    f.fresh_vars(n)
    for _ in range(int(ratio * n)):
        f.add_clause([v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)])
    return f


def tutorial4_formula(bound: int) -> CnfFormula:
    g = specialize_game(load_fixture("tutorial4"))
    start, _ = Engine(g).start(Rng())
    return unroll(g, start, [], bound, {"line0.0:score_win"}).formula


def time_solve(f: CnfFormula, backend: str, repeat: int) -> tuple[float, str, int]:
    times, status, conflicts = [], "", 0
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = Solver(f, backend).solve()
        times.append(time.perf_counter() - t0)
        status, conflicts = out.status, out.stats.get("conflicts", 0)
    return statistics.median(times), status, conflicts


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--sizes", default="50,100,150", help="3-SAT variable counts")
    p.add_argument("--instances", type=int, default=5, help="3-SAT instances per size")
    p.add_argument("--bound", type=int, default=14, help="Tutorial-4 unrolling bound")
    args = p.parse_args(argv)

    backends = available_backends()
    if len(backends) < 2:
        print("compiled backend not built; timing the Python backend only")
    workloads = []
    for n in (int(s) for s in args.sizes.split(",")):
        for i in range(args.instances):
            workloads.append((f"3sat n={n} #{i}", random_3sat(n, 1000 * n + i)))
    workloads.append((f"tutorial4 k={args.bound}", tutorial4_formula(args.bound)))

    header = f"{'workload':<22}{'vars':>7}{'clauses':>9}"
    header += "".join(f"{b + ' s':>12}" for b in backends) + f"{'status':>8}{'speedup':>9}"
    print(header)
    totals = dict.fromkeys(backends, 0.0)
    for name, f in workloads:
        row = f"{name:<22}{f.num_vars:>7}{len(f.clauses):>9}"
        secs = {}
        statuses = set()
        for b in backends:
            secs[b], status, _ = time_solve(f, b, args.repeat)
            totals[b] += secs[b]
            statuses.add(status)
            row += f"{secs[b]:>12.4f}"
        if len(statuses) != 1:
            raise SystemExit(f"backends disagree on {name}: {statuses}")
        row += f"{statuses.pop():>8}"
        if "cython" in secs and secs["cython"] > 0:
            row += f"{secs['python'] / secs['cython']:>8.1f}x"
        print(row)
    summary = "  ".join(f"{b}={t:.3f}s" for b, t in totals.items())
    print(f"total: {summary}")
    if "cython" in totals and totals["cython"] > 0:
        print(f"overall speedup: {totals['python'] / totals['cython']:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
