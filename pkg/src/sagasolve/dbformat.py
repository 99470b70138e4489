"""Reading, writing and checking SAGA game database (.dat) files.

A database is a flat stream of whitespace-separated integers and
double-quoted strings; strings may span lines. Every list in the file has
``count + 1`` entries because index 0 is valid everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import opcodes as op

DIRECTION_NAMES = ("N", "S", "E", "W", "U", "D")


class DatabaseError(ValueError):
    """A database that cannot be parsed; ``offset`` is a character offset."""

    def __init__(self, offset: int, field_name: str, message: str):
        super().__init__(f"{offset}:{field_name}:{message}")
        self.offset = offset
        self.field_name = field_name
        self.message = message


@dataclass(frozen=True)
class Diagnostic:
    field: str
    message: str
    offset: int | None = None

    def __str__(self) -> str:
        where = "-" if self.offset is None else str(self.offset)
        return f"{where}:{self.field}:{self.message}"


@dataclass(frozen=True)
class GameHeader:
    num_items: int
    num_actions: int
    num_words: int
    num_rooms: int
    max_carry: int
    player_room: int
    num_treasures: int
    word_length: int
    light_time: int
    num_messages: int
    treasure_room: int
    # First integer of the file; historically a text-size hint, never read.
    reserved: int = 0


@dataclass(frozen=True)
class RawAction:
    vocab: int
    conditions: tuple[int, int, int, int, int]
    actions: tuple[int, int]

    def __post_init__(self):
        if len(self.conditions) != 5 or len(self.actions) != 2:
            raise ValueError("an action line has 5 condition slots and 2 action words")


@dataclass(frozen=True)
class Room:
    exits: tuple[int, int, int, int, int, int]
    description: str


@dataclass(frozen=True)
class Item:
    description: str
    initial_location: int
    auto_get: str | None = None

    @property
    def is_treasure(self) -> bool:
        return self.description.startswith("*")


@dataclass(frozen=True)
class GameDatabase:
    header: GameHeader
    actions: tuple[RawAction, ...]
    verbs: tuple[str, ...]
    nouns: tuple[str, ...]
    rooms: tuple[Room, ...]
    messages: tuple[str, ...]
    items: tuple[Item, ...]
    action_titles: tuple[str, ...]
    trailer: tuple[int, int, int] = (0, 0, 0)

    @property
    def carried(self) -> int:
        """Internal location code for "in the player's inventory"."""
        return self.header.num_rooms + 1


# -- parsing ---------------------------------------------------------------


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_space(self) -> None:
        text, n = self.text, len(self.text)
        while self.pos < n and text[self.pos].isspace():
            self.pos += 1

    def integer(self, field_name: str) -> int:
        self._skip_space()
        start = self.pos
        text, n = self.text, len(self.text)
        if start >= n:
            raise DatabaseError(start, field_name, "unexpected end of input, expected integer")
        end = start
        if text[end] in "+-":
            end += 1
        digits = end
        while end < n and text[end].isdigit():
            end += 1
        if end == digits or (end < n and not text[end].isspace()):
            bad = text[start:end + 1]
            raise DatabaseError(start, field_name, f"expected integer, found {bad!r}")
        self.pos = end
        return int(text[start:end])

    def string(self, field_name: str) -> str:
        self._skip_space()
        start = self.pos
        if start >= len(self.text):
            raise DatabaseError(start, field_name, "unexpected end of input, expected string")
        if self.text[start] != '"':
            raise DatabaseError(start, field_name, f"expected '\"', found {self.text[start]!r}")
        end = self.text.find('"', start + 1)
        if end < 0:
            raise DatabaseError(start, field_name, "unterminated string")
        self.pos = end + 1
        return self.text[start + 1:end]


def _split_auto_get(text: str) -> tuple[str, str | None]:
    slash = text.find("/")
    # "//" and "/*" suffixes mean the item has no auto-get word.
    if slash < 0 or text[slash:] in ("//", "/*"):
        return text, None
    word = text[slash + 1:]
    close = word.find("/")
    if close >= 0:
        word = word[:close]
    return text[:slash], word


def parse_database(text: str | bytes) -> GameDatabase:
    """Parse the text of a .dat file.

    Raises :class:`DatabaseError` on truncated or malformed input. Cross
    references (exits, item locations, script operands) are not checked
    here; run :func:`validate` for that.
    """
    if isinstance(text, (bytes, bytearray)):
        text = bytes(text).decode("latin-1")
    r = _Reader(text)

    names = ("reserved", "num_items", "num_actions", "num_words", "num_rooms",
             "max_carry", "player_room", "num_treasures", "word_length",
             "light_time", "num_messages", "treasure_room")
    values = {}
    offsets = {}
    for name in names:
        r._skip_space()
        offsets[name] = r.pos
        values[name] = r.integer(f"header.{name}")
    for name in ("num_items", "num_actions", "num_words", "num_rooms", "num_messages",
                 "max_carry", "num_treasures"):
        if values[name] < 0:
            raise DatabaseError(offsets[name], f"header.{name}", "count must be >= 0")
    if values["word_length"] < 1:
        raise DatabaseError(offsets["word_length"], "header.word_length", "must be >= 1")
    for name in ("player_room", "treasure_room"):
        if not 0 <= values[name] <= values["num_rooms"]:
            raise DatabaseError(offsets[name], f"header.{name}",
                                f"room {values[name]} outside 0..{values['num_rooms']}")
    header = GameHeader(**values)

    actions = []
    for i in range(header.num_actions + 1):
        nums = [r.integer(f"actions[{i}]") for _ in range(8)]
        actions.append(RawAction(nums[0], tuple(nums[1:6]), tuple(nums[6:8])))

    verbs, nouns = [], []
    for i in range(header.num_words + 1):
        verbs.append(r.string(f"verbs[{i}]"))
        nouns.append(r.string(f"nouns[{i}]"))

    rooms = []
    for i in range(header.num_rooms + 1):
        exits = tuple(r.integer(f"rooms[{i}].exits") for _ in range(6))
        rooms.append(Room(exits, r.string(f"rooms[{i}].description")))

    messages = [r.string(f"messages[{i}]") for i in range(header.num_messages + 1)]

    items = []
    for i in range(header.num_items + 1):
        desc, auto_get = _split_auto_get(r.string(f"items[{i}].description"))
        loc = r.integer(f"items[{i}].location")
        if loc == -1:
            loc = op.CARRIED_EXTERNAL
        items.append(Item(desc, loc, auto_get))

    titles = [r.string(f"action_titles[{i}]") for i in range(header.num_actions + 1)]
    trailer = tuple(r.integer(f"trailer[{i}]") for i in range(3))

    return GameDatabase(header, tuple(actions), tuple(verbs), tuple(nouns), tuple(rooms),
                        tuple(messages), tuple(items), tuple(titles), trailer)


def load_database(path) -> GameDatabase:
    with open(path, "rb") as fh:
        return parse_database(fh.read())


# -- serialization ---------------------------------------------------------


def _quote(text: str) -> str:
    if '"' in text:
        raise ValueError(f"text may not contain a double quote: {text!r}")
    return f'"{text}"'


def serialize_database(db: GameDatabase) -> str:
    h = db.header
    out: list[str] = []
    for value in (h.reserved, h.num_items, h.num_actions, h.num_words, h.num_rooms,
                  h.max_carry, h.player_room, h.num_treasures, h.word_length,
                  h.light_time, h.num_messages, h.treasure_room):
        out.append(str(value))
    for a in db.actions:
        out.append(" ".join(str(v) for v in (a.vocab, *a.conditions, *a.actions)))
    for verb, noun in zip(db.verbs, db.nouns):
        out.append(_quote(verb))
        out.append(_quote(noun))
    for room in db.rooms:
        out.append(" ".join(str(e) for e in room.exits))
        out.append(_quote(room.description))
    out.extend(_quote(m) for m in db.messages)
    for item in db.items:
        text = item.description
        if item.auto_get is not None:
            text += f"/{item.auto_get}/"
        out.append(f"{_quote(text)} {item.initial_location}")
    out.extend(_quote(t) for t in db.action_titles)
    out.extend(str(v) for v in db.trailer)
    return "\n".join(out) + "\n"


# -- validation ------------------------------------------------------------


def _location_ok(db: GameDatabase, loc: int) -> bool:
    return 0 <= loc <= db.header.num_rooms or loc == op.CARRIED_EXTERNAL


def _check_operand(db: GameDatabase, kind: str, value: int) -> str | None:
    h = db.header
    if kind == op.ITEM and not 0 <= value <= h.num_items:
        return f"item {value} outside 0..{h.num_items}"
    if kind == op.ROOM and not 0 <= value <= h.num_rooms:
        return f"room {value} outside 0..{h.num_rooms}"
    if kind == op.LOCATION and not _location_ok(db, value):
        return f"location {value} is neither a room nor {op.CARRIED_EXTERNAL}"
    if kind == op.FLAGNUM and not 0 <= value < op.NUM_FLAGS:
        return f"flag {value} outside 0..{op.NUM_FLAGS - 1}"
    if kind == op.COUNTER_SLOT and not 0 <= value < op.NUM_COUNTERS:
        return f"counter {value} outside 0..{op.NUM_COUNTERS - 1}"
    if kind == op.ROOM_SLOT and not 0 <= value < op.NUM_SAVED_ROOMS:
        return f"saved room {value} outside 0..{op.NUM_SAVED_ROOMS - 1}"
    return None


def _validate_action(db: GameDatabase, index: int, action: RawAction) -> Iterable[Diagnostic]:
    h = db.header
    where = f"actions[{index}]"
    if action.vocab < 0 or any(c < 0 for c in action.conditions) or any(a < 0 for a in action.actions):
        yield Diagnostic(where, "negative packed value")
        return
    params = []
    for slot, raw in enumerate(action.conditions):
        param, code = divmod(raw, 20)
        if code == op.PARAM:
            params.append(param)
            continue
        problem = None
        if code in op.ITEM_CONDITIONS:
            problem = _check_operand(db, op.ITEM, param)
        elif code in op.ROOM_CONDITIONS:
            problem = _check_operand(db, op.ROOM, param)
        elif code in op.FLAG_CONDITIONS:
            problem = _check_operand(db, op.FLAGNUM, param)
        if problem:
            yield Diagnostic(f"{where}.conditions[{slot}]",
                             f"{op.CONDITION_NAMES[code]}: {problem}")
    acts = []
    for word in action.actions:
        acts.extend(divmod(word, 150))
    queue = iter(params)
    for pos, code in enumerate(acts):
        f = f"{where}.effects[{pos}]"
        if not op.is_known_effect(code):
            yield Diagnostic(f, f"unknown effect opcode {code}")
            continue
        msg = op.message_number(code)
        if msg is not None and msg > h.num_messages:
            yield Diagnostic(f, f"message {msg} outside 0..{h.num_messages}")
        if code == op.REFILL_LAMP and h.num_items < op.LAMP_ITEM:
            yield Diagnostic(f, f"refill_lamp needs item {op.LAMP_ITEM}")
        for kind in op.EFFECT_OPERANDS.get(code, ()):
            value = next(queue, None)
            if value is None:
                yield Diagnostic(f, f"{op.EFFECT_NAMES[code]} needs more parameters than the line provides")
                break
            problem = _check_operand(db, kind, value)
            if problem:
                yield Diagnostic(f, f"{op.EFFECT_NAMES[code]}: {problem}")


def validate(db: GameDatabase) -> list[Diagnostic]:
    """Return every range or consistency problem; an empty list means valid."""
    h = db.header
    diags: list[Diagnostic] = []
    for name in ("num_items", "num_actions", "num_words", "num_rooms", "num_messages",
                 "max_carry", "num_treasures"):
        if getattr(h, name) < 0:
            diags.append(Diagnostic(f"header.{name}", "count must be >= 0"))
    if h.word_length < 1:
        diags.append(Diagnostic("header.word_length", "must be >= 1"))
    if h.light_time < -1:
        diags.append(Diagnostic("header.light_time", "must be -1 (eternal) or >= 0"))
    for name in ("player_room", "treasure_room"):
        if not 0 <= getattr(h, name) <= h.num_rooms:
            diags.append(Diagnostic(f"header.{name}", f"room outside 0..{h.num_rooms}"))
    if h.num_words > 255:
        diags.append(Diagnostic("header.num_words", "more than 256 words cannot be encoded"))

    expected = {
        "actions": h.num_actions, "action_titles": h.num_actions, "verbs": h.num_words,
        "nouns": h.num_words, "rooms": h.num_rooms, "messages": h.num_messages,
        "items": h.num_items,
    }
    for name, count in expected.items():
        if len(getattr(db, name)) != count + 1:
            diags.append(Diagnostic(name, f"has {len(getattr(db, name))} entries, header says {count + 1}"))
    if diags:
        return diags

    for i, room in enumerate(db.rooms):
        for d, target in enumerate(room.exits):
            if not 0 <= target <= h.num_rooms:
                diags.append(Diagnostic(f"rooms[{i}].exits[{DIRECTION_NAMES[d]}]",
                                        f"exit to room {target} outside 0..{h.num_rooms}"))
    for i, item in enumerate(db.items):
        if not _location_ok(db, item.initial_location):
            diags.append(Diagnostic(f"items[{i}].location",
                                    f"location {item.initial_location} is neither a room nor "
                                    f"{op.CARRIED_EXTERNAL}"))
    for i, action in enumerate(db.actions):
        diags.extend(_validate_action(db, i, action))
    return diags
