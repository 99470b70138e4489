"""DIMACS CNF export/import and SAT-competition solver output parsing."""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile

from .cnf import CnfFormula


class SolverOutputError(ValueError):
    pass


def emit_dimacs(f: CnfFormula, comments: bool = False) -> str:
    lines = []
    if comments:
        for name, lits in f.probes.items():
            lines.append(f"c probe {name} {' '.join(map(str, lits))}")
    lines.append(f"p cnf {f.num_vars} {len(f.clauses)}")
    lines.extend(" ".join(map(str, c)) + " 0" for c in f.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    f = CnfFormula()
    declared = None
    current: list[int] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {no}: bad problem line {line!r}")
            f.num_vars = int(parts[2])
            declared = int(parts[3])
            continue
        if declared is None:
            raise ValueError(f"line {no}: clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                f.add_clause(current)
                current = []
            else:
                current.append(lit)
    if current:
        f.add_clause(current)
    if declared is not None and declared != len(f.clauses):
        raise ValueError(f"problem line declares {declared} clauses, found {len(f.clauses)}")
    return f


def parse_solver_output(text: str, num_vars: int = 0) -> tuple[str, list[bool] | None]:
    """Parse "s ..." / "v ..." lines; returns (status, model or None).

    The model is indexed by variable (entry 0 unused); unmentioned variables
    are False.
    """
    status = None
    values: dict[int, bool] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                status = "SAT"
            elif word == "UNSATISFIABLE":
                status = "UNSAT"
            elif word in ("UNKNOWN", "INDETERMINATE"):
                status = "UNKNOWN"
            else:
                raise SolverOutputError(f"unrecognized status line {line!r}")
        elif line.startswith("v ") or line == "v":
            for tok in line[1:].split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise SolverOutputError(f"bad value token {tok!r}") from None
                if lit:
                    values[abs(lit)] = lit > 0
    if status is None:
        raise SolverOutputError("no 's' status line in solver output")
    if status != "SAT":
        return status, None
    if not values:
        raise SolverOutputError("SATISFIABLE without any 'v' lines")
    n = max(num_vars, max(values))
    return status, [False] + [values.get(v, False) for v in range(1, n + 1)]


def run_external(command: str, f: CnfFormula, timeout: float | None = None
                 ) -> tuple[str, list[bool] | None]:
    """Run an external solver command on ``f``; the CNF path is appended."""
    fd, path = tempfile.mkstemp(suffix=".cnf")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(emit_dimacs(f))
        proc = subprocess.run(shlex.split(command) + [path], capture_output=True, text=True,
                              timeout=timeout)
    finally:
        os.unlink(path)
    return parse_solver_output(proc.stdout, f.num_vars)
