"""Random mini-games on which the breadth-first oracle completes."""

from __future__ import annotations

import random

from sagasolve.bmc import OracleBudgetExceeded, bfs_oracle
from sagasolve.engine import Engine, Rng
from sagasolve.gen import random_game
from sagasolve.specialize import specialize_game


def oracle_agreement_cases(count: int, max_depth: int = 8):
    """Random mini-games where the oracle completes, with its shortest depth."""
    seed = 0
    while count:
        rng = random.Random(seed)
        seed += 1
        g = specialize_game(random_game(rng, max_rooms=6, max_items=8, max_lines=20,
                                        ending_rate=0.3, guard_endings=True))
        if Engine(g).start(Rng(seed))[0].ended is not None:
            continue
        try:
            moves = bfs_oracle(g, seed, max_depth, state_budget=200_000)
        except OracleBudgetExceeded:
            continue
        count -= 1
        yield g, seed, moves
