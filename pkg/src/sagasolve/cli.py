"""Command-line front end: solve, play, verify, dump, oracle and stats.

Exit codes: 0 success, 1 bad input (unreadable, unparsable or invalid game,
malformed or diverging trace), 2 no ending within the bound, 3 solver gave up.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
import time

from .bmc import (EncodingError, ExhaustedAtBound, OracleBudgetExceeded, StateLayout, Trace,
                  bfs_oracle, precompute_random_schedule, solve_bounded, unroll)
from .dbformat import DatabaseError, GameDatabase, load_database, validate
from .engine import (Engine, Rng, TraceFormatError, UnknownWord, format_trace,
                     parse_player_words, parse_trace)
from .sat import DEFAULT_BACKEND, Solver, available_backends
from .specialize import SpecializedGame, dump_text, dump_tree, prune_placeholders, specialize_game

EXIT_OK, EXIT_INPUT, EXIT_EXHAUSTED, EXIT_UNKNOWN = 0, 1, 2, 3
EXTERNAL_SOLVER_ENV = "SAGASOLVE_EXTERNAL_SOLVER"
DEFAULT_SEED = 1979


class InputError(Exception):
    """Reported on stderr with exit status 1."""


def read_game(path: str, prune: bool = False) -> GameDatabase:
    try:
        db = load_database(path)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror or e}") from None
    except DatabaseError as e:
        raise InputError(f"{path}: parse error at {e}") from None
    problems = validate(db)
    if problems:
        raise InputError(f"{path}: invalid database\n" + "\n".join(f"  {p}" for p in problems))
    return prune_placeholders(db) if prune else db


def load_game(path: str, prune: bool = False) -> SpecializedGame:
    return specialize_game(read_game(path, prune))


def goal_labels(game: SpecializedGame, lines: list[int] | None) -> set[str] | None:
    """Ending labels on the chosen action lines; None means every ending."""
    if not lines:
        return None
    labels = set()
    for index in lines:
        found = [s.label for s in game.ending_catalog if s.line_index == index]
        if not found:
            raise InputError(f"line {index} contains no ending site")
        labels.update(found)
    return labels


def _words(db: GameDatabase, verb: int, noun: int) -> str:
    v = db.verbs[verb].lstrip("*") if verb < len(db.verbs) else "?"
    n = db.nouns[noun].lstrip("*") if noun < len(db.nouns) else "?"
    return f"{v} {n}".strip()


# -- solve -----------------------------------------------------------------


def cmd_solve(args) -> int:
    game = load_game(args.game, args.prune_placeholders)
    goals = goal_labels(game, args.goal_line)
    external = args.external_solver or os.environ.get(EXTERNAL_SOLVER_ENV) or None
    try:
        result = solve_bounded(game, args.seed, args.max_moves, goals,
                               free_random=args.free_random,
                               conflict_budget=args.conflict_budget, backend=args.backend,
                               external_solver=external, dimacs_path=args.emit_dimacs,
                               lamp_needs_carry=args.lamp_needs_carry)
    except EncodingError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return 4
    if args.verbose:
        for a in result.attempts:
            print(f"k={a.bound} vars={a.num_vars} clauses={a.num_clauses} "
                  f"encode={a.encode_ms:.1f}ms solve={a.solve_ms:.1f}ms {a.status}",
                  file=sys.stderr)
    out = result.outcome
    if isinstance(out, Trace):
        text = format_trace(args.seed, out.moves, game.db)
        if not out.verified:
            text = "# unverified: chance outcomes were chosen by the solver\n" + text
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        flag = "" if out.verified else " unverified"
        print(f"SOLVED k={len(out.moves)} ending={out.ending}{flag}")
        return EXIT_OK
    if isinstance(out, ExhaustedAtBound):
        print(f"EXHAUSTED k={out.bound}")
        return EXIT_EXHAUSTED
    print(f"UNKNOWN k={out.bound} ({out.reason})")
    return EXIT_UNKNOWN


# -- verify ----------------------------------------------------------------


def cmd_verify(args) -> int:
    game = load_game(args.game, args.prune_placeholders)
    try:
        with open(args.trace) as fh:
            seed, moves = parse_trace(fh.read())
    except OSError as e:
        raise InputError(f"{args.trace}: {e.strerror or e}") from None
    except TraceFormatError as e:
        raise InputError(f"{args.trace}: {e}") from None
    db = game.db
    engine = Engine(game, lamp_needs_carry=args.lamp_needs_carry)
    rng = Rng(seed)
    state, first = engine.start(rng)
    for m in first.messages:
        print(f"  {m}")
    ending, at = state.ended, 0
    for index, (verb, noun) in enumerate(moves, start=1):
        if state.ended is not None:
            print(f"DIVERGED at move {index}: the game already ended ({state.ended}) "
                  f"at move {at}", file=sys.stderr)
            return EXIT_INPUT
        print(f"move {index}: {verb} {noun}  {_words(db, verb, noun)}")
        try:
            result = engine.perform_turn(state, rng, verb, noun)
        except ValueError as e:
            print(f"DIVERGED at move {index}: {e}", file=sys.stderr)
            return EXIT_INPUT
        for m in result.messages:
            print(f"  {m}")
        if result.ending:
            ending, at = result.ending[1], index
    if ending is None:
        print("NO ENDING")
        return EXIT_EXHAUSTED
    print(f"VERIFIED ending={ending} at move {at}")
    return EXIT_OK


# -- play ------------------------------------------------------------------


def _parse_move(line: str, db: GameDatabase) -> tuple[int, int]:
    """Typed words, or a "VERB NOUN" index pair as written in trace files."""
    body = line.split("#", 1)[0].split()
    if len(body) == 2 and all(p.isdigit() for p in body):
        return int(body[0]), int(body[1])
    return parse_player_words(line, db)


def cmd_play(args) -> int:
    game = load_game(args.game, args.prune_placeholders)
    engine = Engine(game, lamp_needs_carry=args.lamp_needs_carry)
    rng = Rng(args.seed)
    out = sys.stdout
    state, first = engine.start(rng)
    out.write(engine.describe_room(state) + "\n")
    for m in first.messages:
        out.write(m + "\n")
    if state.ended is not None:
        return EXIT_OK
    interactive = sys.stdin.isatty()
    while True:
        if interactive:
            out.write("Tell me what to do ? ")
            out.flush()
        line = sys.stdin.readline()
        if not line:
            if interactive:
                out.write("\n")
            return EXIT_OK
        body = line.split("#", 1)[0].split()
        # Blank lines and the header of a piped trace file.
        if not body or (len(body) == 2 and body[0] == "seed" and body[1].isdigit()):
            continue
        try:
            verb, noun = _parse_move(line, game.db)
        except UnknownWord as e:
            out.write(f"{e}\n")
            continue
        room = state.current_room
        try:
            result = engine.perform_turn(state, rng, verb, noun)
        except ValueError as e:
            out.write(f"{e}\n")
            continue
        for m in result.messages:
            out.write(m + "\n")
        if result.ending:
            return EXIT_OK
        if result.look_requested or state.current_room != room:
            out.write(engine.describe_room(state) + "\n")


# -- dump / oracle ---------------------------------------------------------


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_dump(args) -> int:
    game = load_game(args.game, args.prune_placeholders)
    _emit(args, dump_tree(game) if args.format == "json" else dump_text(game))
    return EXIT_OK


def cmd_oracle(args) -> int:
    game = load_game(args.game, args.prune_placeholders)
    goals = goal_labels(game, args.goal_line)
    try:
        moves = bfs_oracle(game, args.seed, args.max_moves, goals, state_budget=args.state_budget,
                           lamp_needs_carry=args.lamp_needs_carry)
    except OracleBudgetExceeded as e:
        print(f"UNKNOWN ({e})")
        return EXIT_UNKNOWN
    if moves is None:
        _emit(args, "NONE\n")
        return EXIT_EXHAUSTED
    _emit(args, format_trace(args.seed, moves, game.db))
    return EXIT_OK


# -- stats -----------------------------------------------------------------


def truncate_actions(db: GameDatabase, n: int) -> GameDatabase:
    """The database with only its first ``n`` action lines."""
    if not 1 <= n <= len(db.actions):
        raise ValueError(f"cannot keep {n} of {len(db.actions)} action lines")
    header = dataclasses.replace(db.header, num_actions=n - 1)
    return dataclasses.replace(db, header=header, actions=db.actions[:n],
                               action_titles=db.action_titles[:n])


def measure(game: SpecializedGame, seed: int, bound: int, *, solve: bool = True,
            backend: str | None = None, lamp_needs_carry: bool = False) -> dict:
    """Size of the bound-``bound`` formula and the time to build and solve it."""
    engine = Engine(game, lamp_needs_carry=lamp_needs_carry)
    start, _ = engine.start(Rng(seed))
    schedule = precompute_random_schedule(game, seed, bound)
    goals = {s.label for s in game.ending_catalog}
    t0 = time.perf_counter()
    u = unroll(game, start, schedule, bound, goals, layout=StateLayout.for_game(game),
               lamp_needs_carry=lamp_needs_carry)
    t1 = time.perf_counter()
    row = {"vars": u.formula.num_vars, "clauses": len(u.formula.clauses),
           "encode_ms": round((t1 - t0) * 1000, 3), "solve_ms": ""}
    if solve:
        Solver(u.formula, backend).solve()
        row["solve_ms"] = round((time.perf_counter() - t1) * 1000, 3)
    return row


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_stats(args) -> int:
    db = read_game(args.game, args.prune_placeholders)
    game = specialize_game(db)
    rows = []
    for k in args.k_values:
        rows.append({"sweep": "moves", "value": k,
                     **measure(game, args.seed, k, solve=not args.no_solve,
                               backend=args.backend, lamp_needs_carry=args.lamp_needs_carry)})
    counts = args.action_counts or list(range(1, len(db.actions) + 1))
    for n in counts:
        part = specialize_game(truncate_actions(db, n))
        rows.append({"sweep": "actions", "value": n,
                     **measure(part, args.seed, args.max_moves, solve=False,
                               lamp_needs_carry=args.lamp_needs_carry)})
    fh = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.DictWriter(fh, ["sweep", "value", "vars", "clauses", "encode_ms",
                                     "solve_ms"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sagasolve",
                                description="Find winning move sequences for Scott Adams "
                                            "format adventure games by SAT-based bounded "
                                            "model checking.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, *, moves_default=None):
        sp.add_argument("game", help="game database (.dat)")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="random generator seed (default: %(default)s)")
        sp.add_argument("--prune-placeholders", action="store_true",
                        help="drop unreferenced placeholder items before solving")
        sp.add_argument("--lamp-needs-carry", action="store_true",
                        help="the lamp only lights a room while carried")
        if moves_default is not None:
            sp.add_argument("--max-moves", type=int, default=moves_default,
                            help="largest number of moves to consider (default: %(default)s)")
        sp.add_argument("-o", "--output", help="write the result here instead of stdout")
        sp.add_argument("-v", "--verbose", action="store_true")
        return sp

    def goal(sp):
        sp.add_argument("--goal-line", type=int, action="append", metavar="LINE",
                        help="only count endings on this action line (repeatable)")

    s = common(sub.add_parser("solve", help="search for a shortest ending trace"),
               moves_default=30)
    goal(s)
    s.add_argument("--free-random", action="store_true",
                   help="let the solver pick chance outcomes (trace is not replay-checked)")
    s.add_argument("--external-solver", metavar="CMD",
                   help=f"DIMACS solver command; the CNF path is appended "
                        f"(fallback: ${EXTERNAL_SOLVER_ENV})")
    s.add_argument("--emit-dimacs", metavar="PATH", help="write each bound's CNF here")
    s.add_argument("--conflict-budget", type=int, default=-1,
                   help="give up after this many conflicts per bound (default: unlimited)")
    s.add_argument("--backend", choices=available_backends(), default=DEFAULT_BACKEND)
    s.set_defaults(func=cmd_solve)

    s = common(sub.add_parser("play", help="play the game on the terminal"))
    s.set_defaults(func=cmd_play)

    s = sub.add_parser("verify", help="replay a trace file and report its ending")
    common(s)
    s.add_argument("trace", help="trace file written by solve or oracle")
    s.set_defaults(func=cmd_verify)

    s = common(sub.add_parser("dump", help="print the specialized action lines"))
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_dump)

    s = common(sub.add_parser("oracle", help="breadth-first shortest trace"), moves_default=8)
    goal(s)
    s.add_argument("--state-budget", type=int, default=2_000_000)
    s.set_defaults(func=cmd_oracle)

    s = common(sub.add_parser("stats", help="CSV of formula size and time sweeps"),
               moves_default=10)
    s.add_argument("--k-values", type=_int_list, default=[5, 10, 15, 20],
                   help="bounds for the moves sweep (default: 5,10,15,20)")
    s.add_argument("--action-counts", type=_int_list,
                   help="action-line prefixes for the actions sweep (default: all)")
    s.add_argument("--no-solve", action="store_true", help="skip solving in the moves sweep")
    s.add_argument("--backend", choices=available_backends(), default=DEFAULT_BACKEND)
    s.set_defaults(func=cmd_stats)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "max_moves", 0) < 0:
        print("--max-moves must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
