"""Lock-step comparison of the raw interpreter and the specialized executor."""

from __future__ import annotations

import random

from sagasolve.engine import Engine, RawEngine, Rng
from sagasolve.specialize import specialize_game

from .sampling import random_input, random_state


def differential(db, seed: int, turns: int) -> tuple[int, int]:
    """Play ``turns`` random turns through both executors, restarting after
    endings; returns (turns played, mismatching turns).

    After a mismatch the raw side is resynchronised from the specialized one.
    """
    g = specialize_game(db)
    rng = random.Random(seed)
    fast, raw = Engine(g), RawEngine(g)
    r1, r2 = Rng(seed), Rng(seed)
    s1, f1 = fast.start(r1)
    s2, f2 = raw.start(r2)
    bad = int((s1, f1) != (s2, f2))
    played = restarts = 0
    while played < turns:
        if s1.ended is not None or rng.random() < 0.02:
            restarts += 1
            if restarts > 10 * turns:
                break
            s1, f1 = fast.start(r1)
            s2, f2 = raw.start(r2)
            bad += (s1, f1) != (s2, f2)
            if rng.random() < 0.5 and s1.ended is None:
                s1 = random_state(g, rng)
            s2, r2 = s1.copy(), Rng(r1.state)
            continue
        verb, noun = random_input(g, rng)
        a = fast.perform_turn(s1, r1, verb, noun)
        b = raw.perform_turn(s2, r2, verb, noun)
        if a != b or s1 != s2 or r1.state != r2.state:
            bad += 1
            s2, r2 = s1.copy(), Rng(r1.state)
        played += 1
    return played, bad
