from __future__ import annotations

import runpy
from pathlib import Path

BENCH = Path(__file__).resolve().parent.parent / "benchmarks" / "bench_solver.py"


def test_benchmark_runs_and_backends_agree(capsys):
    module = runpy.run_path(str(BENCH))
    assert module["main"](["--repeat", "1", "--sizes", "30", "--instances", "2",
                           "--bound", "6"]) == 0
    out = capsys.readouterr().out
    assert "tutorial4 k=6" in out and "total:" in out
