"""CNF construction and satisfiability checking.

The clause learning solver comes in two interchangeable builds: a compiled
extension and a pure-Python module. The compiled one is used when it imports;
set ``SAGASOLVE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from collections.abc import Sequence

from ._pycdcl import CdclSolver as PyCdclSolver
from .cnf import (CnfFormula, gate_and, gate_eq_const, gate_ite, gate_not, gate_or,
                  gate_xor)
from .dimacs import (SolverOutputError, emit_dimacs, parse_dimacs, parse_solver_output,
                     run_external)

try:
    if os.environ.get("SAGASOLVE_PURE_PYTHON") == "1":
        raise ImportError("pure Python backend requested")
    from ._cdcl import CdclSolver as NativeCdclSolver
except ImportError:
    NativeCdclSolver = None

DEFAULT_BACKEND = "cython" if NativeCdclSolver is not None else "python"

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"
_STATUS = {1: SAT, 0: UNSAT, -1: UNKNOWN}


class ModelCheckError(RuntimeError):
    pass


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if NativeCdclSolver is not None else [])


def solver_class(backend: str | None = None):
    backend = backend or DEFAULT_BACKEND
    if backend == "python":
        return PyCdclSolver
    if backend == "cython":
        if NativeCdclSolver is None:
            raise RuntimeError("compiled solver backend is not available")
        return NativeCdclSolver
    raise ValueError(f"unknown solver backend {backend!r}")


def first_falsified(clauses: Sequence[Sequence[int]], model: Sequence[bool]) -> int | None:
    """Index of the first clause the model violates, or None."""
    for i, clause in enumerate(clauses):
        for lit in clause:
            v = abs(lit)
            if v < len(model) and model[v] == (lit > 0):
                break
        else:
            return i
    return None


@dataclass
class SolveOutcome:
    status: str
    model: list[bool] | None = None
    stats: dict = field(default_factory=dict)

    def value(self, lit: int) -> bool:
        if self.model is None:
            raise ValueError(f"no model ({self.status})")
        return self.model[abs(lit)] == (lit > 0)

    def values(self, lits: Sequence[int]) -> list[bool]:
        return [self.value(lit) for lit in lits]


class Solver:
    """A formula loaded into the embedded solver, solvable repeatedly under
    different assumptions. Every model is checked against the clauses."""

    def __init__(self, f: CnfFormula, backend: str | None = None):
        self.formula = f
        self.backend = backend or DEFAULT_BACKEND
        self._impl = solver_class(self.backend)()
        self._impl.ensure_vars(f.num_vars)
        self._loaded = 0
        self._sync()

    def _sync(self) -> None:
        clauses = self.formula.clauses
        add = self._impl.add_clause
        for i in range(self._loaded, len(clauses)):
            add(clauses[i])
        self._loaded = len(clauses)
        self._impl.ensure_vars(self.formula.num_vars)

    def solve(self, assumptions: Sequence[int] = (), conflict_budget: int = -1) -> SolveOutcome:
        self._sync()
        code = self._impl.solve(list(assumptions), conflict_budget)
        status = _STATUS[code]
        outcome = SolveOutcome(status, stats=dict(self._impl.stats()))
        if status == SAT:
            model = list(self._impl.get_model())
            bad = first_falsified(self.formula.clauses, model)
            if bad is not None:
                raise ModelCheckError(f"model violates clause {bad}: {self.formula.clauses[bad]}")
            for lit in assumptions:
                if model[abs(lit)] != (lit > 0):
                    raise ModelCheckError(f"model violates assumption {lit}")
            outcome.model = model
        return outcome


def solve(f: CnfFormula, assumptions: Sequence[int] = (), *, conflict_budget: int = -1,
          backend: str | None = None) -> SolveOutcome:
    return Solver(f, backend).solve(assumptions, conflict_budget)


def solve_external(f: CnfFormula, command: str, timeout: float | None = None) -> SolveOutcome:
    status, model = run_external(command, f, timeout)
    if model is not None:
        bad = first_falsified(f.clauses, model)
        if bad is not None:
            raise ModelCheckError(f"external model violates clause {bad}")
    return SolveOutcome(status, model, {"backend": "external"})


__all__ = [
    "CnfFormula", "DEFAULT_BACKEND", "ModelCheckError", "NativeCdclSolver", "PyCdclSolver",
    "SAT", "Solver", "SolveOutcome", "SolverOutputError", "UNKNOWN", "UNSAT",
    "available_backends", "emit_dimacs", "first_falsified", "gate_and", "gate_eq_const",
    "gate_ite", "gate_not", "gate_or", "gate_xor", "parse_dimacs", "parse_solver_output",
    "run_external", "solve", "solve_external", "solver_class",
]
