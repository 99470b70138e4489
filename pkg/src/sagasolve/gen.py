"""Random small game databases for differential and oracle testing."""

from __future__ import annotations

import random

from . import opcodes as op
from .builder import GameBuilder
from .dbformat import GameDatabase, Item, validate

_VERBS = ("PUSH", "PULL", "WAVE", "RUB", "OPEN", "SCORE")
_NOUNS = ("LAMP", "KEY", "BOX", "GEM", "ROPE", "COIN", "BELL", "MAP", "AXE", "CUP")

# Effects the generator may emit, weighted roughly by how often real games use them.
_EFFECTS = (
    [op.GET, op.DROP, op.GOTO, op.DESTROY, op.SET_FLAG, op.CLEAR_FLAG, op.PUT, op.SWAP,
     op.SUPERGET, op.PUT_WITH, op.LOOK, op.SET_DARK, op.CLEAR_DARK] * 3
    + [op.DESTROY2, op.DIE, op.INVENTORY, op.SET_FLAG0, op.CLEAR_FLAG0, op.CLEAR_SCREEN,
       op.SAVE_GAME, op.LOOK2, op.DEC_COUNTER, op.PRINT_COUNTER, op.SET_COUNTER,
       op.SWAP_ROOM, op.SELECT_COUNTER, op.ADD_COUNTER, op.SUB_COUNTER, op.PRINT_NOUN,
       op.PRINT_NOUN_NL, op.NEWLINE, op.SWAP_SPECIFIC_ROOM, op.PAUSE, op.NOP89,
       op.CONTINUE]
)


def _operand(rng: random.Random, kind: str, num_items: int, num_rooms: int) -> int:
    if kind == op.ITEM:
        return rng.randint(0, num_items - 1)
    if kind == op.ROOM:
        return rng.randint(0 if rng.random() < 0.1 else 1, num_rooms)
    if kind == op.LOCATION:
        return rng.choice([0, op.CARRIED_EXTERNAL] + list(range(1, num_rooms + 1)))
    if kind == op.FLAGNUM:
        return rng.choice([0, 1, 2, 3, op.DARK_FLAG, rng.randint(0, 31)])
    if kind == op.VALUE:
        return rng.choice([0, 1, 2, 3, 5, rng.randint(0, 40)])
    return rng.choice([0, 1, 2, rng.randint(0, 15)])


def _condition(rng: random.Random, num_items: int, num_rooms: int) -> tuple[int, int]:
    code = rng.randint(1, 19)
    if code in op.ITEM_CONDITIONS:
        return code, rng.randint(0, num_items - 1)
    if code in op.ROOM_CONDITIONS:
        return code, rng.randint(1, num_rooms)
    if code in op.FLAG_CONDITIONS:
        return code, rng.choice([0, 1, 2, 3, op.DARK_FLAG])
    if code in op.COUNTER_CONDITIONS:
        return code, rng.choice([0, 1, 2, 3])
    return code, 0


def random_game(rng: random.Random, *, max_rooms: int = 6, max_items: int = 8,
                max_lines: int = 20, ending_rate: float = 0.15, lamp: bool = False,
                effects=None, guard_endings: bool = False) -> GameDatabase:
    """Build a random valid database.

    With ``lamp`` set the game gets at least ten items so that item 9 is a
    light source with a finite fuel supply. With ``guard_endings`` every line
    that can end the game also requires two carried/at/flag conditions, which
    makes one-move wins rare.
    """
    effects = _EFFECTS if effects is None else effects
    b = GameBuilder(max_carry=rng.randint(1, 4), light_time=rng.randint(3, 12) if lamp else -1)
    verbs = rng.sample(_VERBS, rng.randint(2, len(_VERBS)))
    for v in verbs:
        b.verb(v)
    nouns = rng.sample(_NOUNS, rng.randint(3, len(_NOUNS)))
    for n in nouns:
        b.noun(n)

    num_rooms = rng.randint(2, max_rooms)
    for r in range(num_rooms):
        b.room(f"room {r + 1}")
    for r in range(1, num_rooms + 1):
        for d in range(6):
            if rng.random() < 0.3:
                b.rooms[r][0][d] = rng.randint(1, num_rooms)

    num_items = max(rng.randint(2, max_items), 10 if lamp else 0)
    for i in range(num_items):
        treasure = rng.random() < 0.2
        desc = f"{'*' if treasure else ''}thing {i}{'*' if treasure else ''}"
        places = [0] + list(range(1, num_rooms + 1)) * 2
        if rng.random() < 0.15:
            places.append(op.CARRIED_EXTERNAL)
        loc = rng.choice(places)
        word = rng.choice(nouns) if rng.random() < 0.7 else None
        b.item(desc, loc, word)
    if lamp:
        b.items[op.LAMP_ITEM] = Item("lamp", rng.randint(1, num_rooms), "LAMP")
        b.noun("LAMP")
    b.player_room = rng.randint(1, num_rooms)
    b.treasure_room = rng.randint(1, num_rooms)

    n_lines = rng.randint(1, max_lines)
    while len(b.lines) < n_lines:
        conds = [_condition(rng, num_items, num_rooms) for _ in range(rng.randint(0, 3))]
        effs = []
        for _ in range(rng.randint(1, 3)):
            roll = rng.random()
            if roll < ending_rate:
                effs.append((rng.choice([op.GAME_OVER, op.SCORE]),))
            elif roll < ending_rate + 0.2:
                effs.append(("msg", f"message {rng.randint(1, 12)}"))
            else:
                code = rng.choice(effects)
                kinds = op.EFFECT_OPERANDS.get(code, ())
                effs.append((code, *(_operand(rng, k, num_items, num_rooms) for k in kinds)))
        if guard_endings and any(e[0] in op.ENDING_EFFECTS for e in effs):
            conds = [c for c in conds if c[0] in (op.CARRIED, op.AT, op.FLAG)]
            while len(conds) < 2:
                kind = rng.choice([op.CARRIED, op.CARRIED, op.AT, op.FLAG])
                if kind == op.CARRIED:
                    conds.append((kind, rng.randint(0, num_items - 1)))
                elif kind == op.AT:
                    conds.append((kind, rng.randint(1, num_rooms)))
                else:
                    conds.append((kind, rng.choice([0, 1, 2, 3])))
        if len(conds) + sum(len(e) - 1 for e in effs if e[0] != "msg") > 5:
            continue
        kind = rng.random()
        try:
            if kind < 0.55:
                pool = verbs + ["GO", "GET", "DROP"] if rng.random() < 0.2 else verbs
                verb = rng.choice(pool)
                noun = rng.choice(nouns + [None, "NORTH"])
                b.command(verb, noun, conds, effs)
            elif kind < 0.8 or not b.lines:
                b.auto(rng.choice([100, 100, 50, 25, 75]), conds, effs)
            else:
                b.auto(0, conds, effs)
        except ValueError:
            continue
    db = b.build()
    problems = validate(db)
    if problems:
        raise AssertionError("generator produced an invalid database: "
                             + "; ".join(map(str, problems)))
    return db
