"""Condition and effect opcode tables shared by every executor.

Conditions are packed as ``20 * param + opcode``; effects come two to an
action word packed as ``150 * first + second``.
"""

from __future__ import annotations

# -- conditions ------------------------------------------------------------

PARAM = 0
CARRIED = 1
HERE = 2
PRESENT = 3
AT = 4
NOT_HERE = 5
NOT_CARRIED = 6
NOT_AT = 7
FLAG = 8
NOT_FLAG = 9
LOADED = 10
NOT_LOADED = 11
NOT_PRESENT = 12
EXISTS = 13
NOT_EXISTS = 14
COUNTER_LE = 15
COUNTER_GT = 16
NOT_MOVED = 17
MOVED = 18
COUNTER_EQ = 19

CONDITION_NAMES = {
    PARAM: "param",
    CARRIED: "carried",
    HERE: "here",
    PRESENT: "present",
    AT: "at",
    NOT_HERE: "not_here",
    NOT_CARRIED: "not_carried",
    NOT_AT: "not_at",
    FLAG: "flag",
    NOT_FLAG: "not_flag",
    LOADED: "loaded",
    NOT_LOADED: "not_loaded",
    NOT_PRESENT: "not_present",
    EXISTS: "exists",
    NOT_EXISTS: "not_exists",
    COUNTER_LE: "counter_le",
    COUNTER_GT: "counter_gt",
    NOT_MOVED: "not_moved",
    MOVED: "moved",
    COUNTER_EQ: "counter_eq",
}

ITEM_CONDITIONS = frozenset(
    {CARRIED, HERE, PRESENT, NOT_HERE, NOT_CARRIED, NOT_PRESENT, EXISTS,
     NOT_EXISTS, NOT_MOVED, MOVED}
)
ROOM_CONDITIONS = frozenset({AT, NOT_AT})
FLAG_CONDITIONS = frozenset({FLAG, NOT_FLAG})
COUNTER_CONDITIONS = frozenset({COUNTER_LE, COUNTER_GT, COUNTER_EQ})

# -- effects ---------------------------------------------------------------

NOP = 0
GET = 52
DROP = 53
GOTO = 54
DESTROY = 55
SET_DARK = 56
CLEAR_DARK = 57
SET_FLAG = 58
DESTROY2 = 59
CLEAR_FLAG = 60
DIE = 61
PUT = 62
GAME_OVER = 63
LOOK = 64
SCORE = 65
INVENTORY = 66
SET_FLAG0 = 67
CLEAR_FLAG0 = 68
REFILL_LAMP = 69
CLEAR_SCREEN = 70
SAVE_GAME = 71
SWAP = 72
CONTINUE = 73
SUPERGET = 74
PUT_WITH = 75
LOOK2 = 76
DEC_COUNTER = 77
PRINT_COUNTER = 78
SET_COUNTER = 79
SWAP_ROOM = 80
SELECT_COUNTER = 81
ADD_COUNTER = 82
SUB_COUNTER = 83
PRINT_NOUN = 84
PRINT_NOUN_NL = 85
NEWLINE = 86
SWAP_SPECIFIC_ROOM = 87
PAUSE = 88
NOP89 = 89

EFFECT_NAMES = {
    NOP: "nop",
    GET: "get",
    DROP: "drop",
    GOTO: "goto",
    DESTROY: "destroy",
    SET_DARK: "set_dark",
    CLEAR_DARK: "clear_dark",
    SET_FLAG: "set_flag",
    DESTROY2: "destroy",
    CLEAR_FLAG: "clear_flag",
    DIE: "die",
    PUT: "put",
    GAME_OVER: "game_over",
    LOOK: "look",
    SCORE: "score",
    INVENTORY: "inventory",
    SET_FLAG0: "set_flag0",
    CLEAR_FLAG0: "clear_flag0",
    REFILL_LAMP: "refill_lamp",
    CLEAR_SCREEN: "clear_screen",
    SAVE_GAME: "save_game",
    SWAP: "swap",
    CONTINUE: "continue",
    SUPERGET: "superget",
    PUT_WITH: "put_with",
    LOOK2: "look",
    DEC_COUNTER: "dec_counter",
    PRINT_COUNTER: "print_counter",
    SET_COUNTER: "set_counter",
    SWAP_ROOM: "swap_room",
    SELECT_COUNTER: "select_counter",
    ADD_COUNTER: "add_counter",
    SUB_COUNTER: "sub_counter",
    PRINT_NOUN: "print_noun",
    PRINT_NOUN_NL: "print_noun_nl",
    NEWLINE: "newline",
    SWAP_SPECIFIC_ROOM: "swap_specific_room",
    PAUSE: "pause",
    NOP89: "nop",
}

# What each operand of an operand-consuming effect refers to.
ITEM, ROOM, LOCATION, FLAGNUM, VALUE, COUNTER_SLOT, ROOM_SLOT = (
    "item", "room", "location", "flag", "value", "counter_slot", "room_slot"
)

EFFECT_OPERANDS: dict[int, tuple[str, ...]] = {
    GET: (ITEM,),
    DROP: (ITEM,),
    GOTO: (ROOM,),
    DESTROY: (ITEM,),
    SET_FLAG: (FLAGNUM,),
    DESTROY2: (ITEM,),
    CLEAR_FLAG: (FLAGNUM,),
    PUT: (ITEM, LOCATION),
    SWAP: (ITEM, ITEM),
    SUPERGET: (ITEM,),
    PUT_WITH: (ITEM, ITEM),
    SET_COUNTER: (VALUE,),
    SELECT_COUNTER: (COUNTER_SLOT,),
    ADD_COUNTER: (VALUE,),
    SUB_COUNTER: (VALUE,),
    SWAP_SPECIFIC_ROOM: (ROOM_SLOT,),
}

ENDING_EFFECTS = frozenset({GAME_OVER, SCORE})

NUM_FLAGS = 32
NUM_COUNTERS = 16
NUM_SAVED_ROOMS = 16
DARK_FLAG = 15
LAMP_ITEM = 9
CARRIED_EXTERNAL = 255

# Hard-wired verb indices of the built-in commands.
VERB_GO = 1
VERB_GET = 10
VERB_DROP = 18
DIRECTIONS = ("NORTH", "SOUTH", "EAST", "WEST", "UP", "DOWN")


def message_number(opcode: int) -> int | None:
    """Message printed by an effect opcode, or None if it is not a print."""
    if 1 <= opcode <= 51:
        return opcode
    if opcode >= 102:
        return opcode - 50
    return None


def message_opcode(number: int) -> int:
    """Inverse of :func:`message_number` for message numbers >= 1."""
    if number < 1:
        raise ValueError(f"message {number} cannot be printed by an effect")
    return number if number <= 51 else number + 50


def is_known_effect(opcode: int) -> bool:
    return 0 <= opcode <= 89 or opcode >= 102


def effect_arity(opcode: int) -> int:
    return len(EFFECT_OPERANDS.get(opcode, ()))
