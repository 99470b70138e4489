from __future__ import annotations

import itertools
import random
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from sagasolve.bmc import unroll
from sagasolve.engine import Engine, Rng
from sagasolve.sat import (SAT, UNKNOWN, UNSAT, CnfFormula, Solver, SolverOutputError,
                           available_backends, emit_dimacs, gate_and, gate_eq_const, gate_ite,
                           gate_not, gate_or, gate_xor, parse_dimacs, parse_solver_output, solve,
                           solve_external, solver_class)
from sagasolve.sat._pycdcl import luby

from helpers.enumeration import brute_force_sat, enumeration_corpus, random_formula, satisfies

BACKENDS = available_backends()
DPLL = f"{sys.executable} {Path(__file__).parent / 'helpers' / 'dpll_solver.py'}"


def test_brute_force_oracle_sanity():
    assert brute_force_sat(1, [])
    assert not brute_force_sat(1, [[1], [-1]])
    assert brute_force_sat(2, [[1, 2], [-1], [2]])
    assert not brute_force_sat(2, [[1, 2], [-1, 2], [1, -2], [-1, -2]])


def test_enumeration_corpus_is_balanced():
    verdicts = [sat for _, _, sat in enumeration_corpus()]
    assert min(verdicts.count(True), verdicts.count(False)) > 200


@pytest.mark.parametrize("backend", BACKENDS)
def test_agreement_with_exhaustive_enumeration(backend):
    for n, clauses, expected in enumeration_corpus():
        f = CnfFormula()
        f.fresh_vars(n)
        for c in clauses:
            f.add_clause(c)
        out = solve(f, backend=backend)
        assert out.status == (SAT if expected else UNSAT), clauses
        if expected:
            assert satisfies(clauses, out.model)


@pytest.mark.parametrize("backend", BACKENDS)
def test_trivial_formulas(backend):
    f = CnfFormula()
    assert solve(f, backend=backend).status == SAT
    x = f.fresh()
    f.add_clause([x])
    f.add_clause([-x])
    assert solve(f, backend=backend).status == UNSAT
    cls = solver_class(backend)
    s = cls()
    s.ensure_vars(1)
    assert s.add_clause([]) is False
    assert s.solve() == 0


def pigeonhole(holes: int) -> CnfFormula:
    f = CnfFormula()
    p = [[f.fresh() for _ in range(holes)] for _ in range(holes + 1)]
    for row in p:
        f.add_clause(row)
    for h in range(holes):
        for a, b in itertools.combinations(range(holes + 1), 2):
            f.add_clause([-p[a][h], -p[b][h]])
    return f


@pytest.mark.parametrize("backend", BACKENDS)
def test_pigeonhole_unsat_and_budget(backend):
    assert solve(pigeonhole(5), backend=backend).status == UNSAT
    out = solve(pigeonhole(8), backend=backend, conflict_budget=20)
    assert out.status == UNKNOWN and out.model is None


@pytest.mark.parametrize("backend", BACKENDS)
def test_assumptions_and_reuse(backend):
    rng = random.Random(3)
    for _ in range(60):
        n = rng.randint(3, 12)
        clauses = random_formula(rng, n)
        f = CnfFormula()
        f.fresh_vars(n)
        for c in clauses:
            f.add_clause(c)
        s = Solver(f, backend)
        for _ in range(4):
            assume = [v if rng.random() < 0.5 else -v
                      for v in rng.sample(range(1, n + 1), rng.randint(0, 3))]
            out = s.solve(assume)
            expected = brute_force_sat(n, clauses + [[a] for a in assume])
            assert out.status == (SAT if expected else UNSAT)
            if expected:
                assert all(out.value(a) for a in assume)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_backends_agree_on_larger_instances():
    rng = random.Random(9)
    for _ in range(20):
        n = 60
        clauses = [[v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3)]
                   for _ in range(int(4.26 * n))]
        f = CnfFormula()
        f.fresh_vars(n)
        for c in clauses:
            f.add_clause(c)
        assert solve(f, backend="python").status == solve(f, backend="cython").status


def test_luby_sequence():
    assert [luby(2, i) for i in range(15)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


# -- formula construction ---------------------------------------------------


def test_fresh_vars_and_probes():
    f = CnfFormula()
    assert f.fresh_vars(3) == [1, 2, 3]
    assert f.fresh_vars(2) == [4, 5]
    bits = f.fresh_vars(8, "input_verb_0")
    assert f.probe("input_verb_0") == bits
    with pytest.raises(ValueError):
        f.fresh_vars(1, "input_verb_0")
    with pytest.raises(ValueError):
        f.fresh_vars(0)
    with pytest.raises(ValueError):
        f.add_clause([99])


def _models(f: CnfFormula, inputs, out):
    """Map each input assignment to the set of output values it admits."""
    s = Solver(f)
    table = {}
    for vals in itertools.product([False, True], repeat=len(inputs)):
        assume = [v if b else -v for v, b in zip(inputs, vals)]
        table[vals] = {o for o in (False, True)
                       if s.solve(assume + [out if o else -out]).status == SAT}
    return table


@pytest.mark.parametrize("gate,fn,arity", [
    (gate_and, lambda a, b: a and b, 2),
    (gate_or, lambda a, b: a or b, 2),
    (gate_xor, lambda a, b: a != b, 2),
    (lambda f, a, b, c: gate_ite(f, a, b, c), lambda a, b, c: b if a else c, 3),
    (lambda f, a, b, c: gate_and(f, a, b, c), lambda a, b, c: a and b and c, 3),
    (lambda f, a, b, c: gate_or(f, a, gate_not(f, b), c), lambda a, b, c: a or not b or c, 3),
])
def test_gates_exhaustive(gate, fn, arity):
    f = CnfFormula()
    ins = f.fresh_vars(arity)
    out = gate(f, *ins)
    for vals, outs in _models(f, ins, out).items():
        assert outs == {fn(*vals)}, vals


def test_and_of_complements_is_false():
    f = CnfFormula()
    x = f.fresh()
    out = gate_and(f, x, -x)
    assert all(outs == {False} for outs in _models(f, [x], out).values())


def test_eq_const_pattern():
    f = CnfFormula()
    bits = f.fresh_vars(4)
    out = gate_eq_const(f, bits, 0b0101)
    for vals, outs in _models(f, bits, out).items():
        value = sum(b << i for i, b in enumerate(vals))
        assert outs == {value == 0b0101}


def test_ite_with_forced_condition_follows_then_branch():
    f = CnfFormula()
    c, a, b = f.fresh_vars(3)
    out = gate_ite(f, c, a, b)
    f.add_clause([c])
    for vals, outs in _models(f, [a, b], out).items():
        assert outs == {vals[0]}


def test_constant_folding_and_hashing():
    f = CnfFormula()
    a, b = f.fresh_vars(2)
    assert gate_and(f, a, b) == gate_and(f, b, a)
    assert gate_and(f, a, f.true) == a
    assert gate_and(f, a, f.false) == f.false
    assert gate_or(f, a, f.true) == f.true
    assert gate_xor(f, a, a) == f.false


@settings(max_examples=100, deadline=None)
@given(st.lists(st.booleans(), min_size=1, max_size=6), st.integers(0, 63))
def test_mux_and_bits_equal(vals, const):
    f = CnfFormula()
    bits = f.fresh_vars(len(vals))
    c = f.fresh()
    k = f.const_bits(const % (1 << len(vals)), len(vals))
    mux = f.mux_bits(c, bits, k)
    eq = f.bits_equal(mux, bits)
    assume = [b if v else -b for b, v in zip(bits, vals)]
    s = Solver(f)
    for cv in (False, True):
        out = s.solve(assume + [c if cv else -c])
        got = [out.value(l) for l in mux]
        assert got == (vals if cv else [bool(const % (1 << len(vals)) >> i & 1)
                                        for i in range(len(vals))])
        assert out.value(eq) == (got == vals)


# -- DIMACS -------------------------------------------------------------------


def test_emit_dimacs_exact():
    f = CnfFormula()
    f.fresh_vars(2)
    f.add_clause([1, -2])
    assert emit_dimacs(f) == "p cnf 2 1\n1 -2 0\n"


@settings(max_examples=100)
@given(st.integers(1, 12).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.lists(st.integers(1, n).flatmap(
        lambda v: st.sampled_from([v, -v])), min_size=1, max_size=4), max_size=30))))
def test_dimacs_round_trip(case):
    n, clauses = case
    f = CnfFormula()
    f.fresh_vars(n)
    for c in clauses:
        f.add_clause(c)
    g = parse_dimacs(emit_dimacs(f, comments=True))
    assert g.num_vars == n and g.clauses == clauses


def test_parse_solver_output():
    assert parse_solver_output("c hi\ns SATISFIABLE\nv 1 -2\nv 3 0\n", 3) == (
        "SAT", [False, True, False, True])
    assert parse_solver_output("s UNSATISFIABLE\n") == ("UNSAT", None)
    assert parse_solver_output("s UNKNOWN\n") == ("UNKNOWN", None)
    with pytest.raises(SolverOutputError):
        parse_solver_output("nothing here")
    with pytest.raises(SolverOutputError):
        parse_solver_output("s SATISFIABLE\n")
    with pytest.raises(SolverOutputError):
        parse_solver_output("s SATISFIABLE\nv 1 x 0\n")


def test_parse_dimacs_rejects_bad_counts():
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 2\n1 0\n")


def test_external_solver_agrees_on_tutorial4(games):
    g = games["tutorial4"]
    start, _ = Engine(g).start(Rng())
    goals = {s.label for s in g.ending_catalog}
    for bound, expected in ((1, UNSAT), (2, SAT)):
        u = unroll(g, start, [], bound, goals)
        ext = solve_external(u.formula, DPLL)
        emb = solve(u.formula)
        assert ext.status == emb.status == expected
        if ext.model is not None:
            assert satisfies(u.formula.clauses, ext.model)


def test_external_solver_random_formulas():
    rng = random.Random(5)
    for _ in range(15):
        n = rng.randint(3, 12)
        f = CnfFormula()
        f.fresh_vars(n)
        for c in random_formula(rng, n):
            f.add_clause(c)
        assert solve_external(f, DPLL).status == solve(f).status


def test_pure_python_fallback_selected_by_environment():
    import os
    import subprocess
    env = dict(os.environ, SAGASOLVE_PURE_PYTHON="1")
    code = "import sagasolve.sat as s; print(s.DEFAULT_BACKEND, s.available_backends())"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "python ['python']"
