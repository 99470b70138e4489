"""Lowering of packed script lines into a decoded, game-specific IR.

The generic interpreter re-decodes every condition and effect on every
turn. Specialization does that decoding once: parameter pushes become
operands bound to effects, triggers become tagged values, the noun-to-item
match table is precomputed and every game-ending effect gets a label.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from . import opcodes as op
from .dbformat import GameDatabase, Item, RawAction, Room, validate

PLACEHOLDER = "."


class LoweringError(ValueError):
    def __init__(self, line_index: int, message: str):
        super().__init__(f"actions[{line_index}]: {message}")
        self.line_index = line_index


@dataclass(frozen=True)
class Condition:
    opcode: int
    param: int


@dataclass(frozen=True)
class Effect:
    opcode: int
    operands: tuple[int, ...] = ()

    @property
    def message(self) -> int | None:
        return op.message_number(self.opcode)


@dataclass(frozen=True)
class Auto:
    chance: int


@dataclass(frozen=True)
class Command:
    verb: int
    noun: int
    noun_wildcard: bool


Trigger = Auto | Command


@dataclass(frozen=True)
class ScriptLine:
    line_index: int
    trigger: Trigger
    conditions: tuple[Condition, ...]
    effects: tuple[Effect, ...]
    params: tuple[int, ...]
    ending_sites: tuple[str, ...]

    @property
    def continues(self) -> bool:
        return any(e.opcode == op.CONTINUE for e in self.effects)

    @property
    def continuation_only(self) -> bool:
        """True for vocab 0 lines, which run only as part of a continuation."""
        return isinstance(self.trigger, Auto) and self.trigger.chance == 0


@dataclass(frozen=True)
class EndingSite:
    line_index: int
    position: int
    kind: str
    label: str


DARK_FALL = EndingSite(-1, -1, "dark_fall", "builtin:dark_fall")


@dataclass(frozen=True)
class MatchTable:
    candidates: tuple[tuple[int, ...], ...]

    def lookup(self, noun: int) -> tuple[int, ...]:
        if 0 <= noun < len(self.candidates):
            return self.candidates[noun]
        return ()


@dataclass(frozen=True)
class Constants:
    num_items: int
    num_rooms: int
    num_words: int
    carried: int
    max_carry: int
    light_time: int
    num_treasures: int
    treasure_room: int
    word_length: int
    player_room: int
    lamp_item: int | None
    treasures: tuple[int, ...]
    initial_locations: tuple[int, ...]


@dataclass(frozen=True)
class SpecializedGame:
    db: GameDatabase
    lines: tuple[ScriptLine, ...]
    match_table: MatchTable
    auto_rng_slots: int
    ending_catalog: tuple[EndingSite, ...]
    constants: Constants
    random_lines: tuple[int, ...] = field(default=())

    def site(self, label: str) -> EndingSite:
        for s in self.ending_catalog:
            if s.label == label:
                return s
        raise KeyError(label)

    def site_index(self, label: str) -> int:
        for i, s in enumerate(self.ending_catalog):
            if s.label == label:
                return i
        raise KeyError(label)


# -- decoding --------------------------------------------------------------


def decode_condition(raw: int) -> tuple[int, int]:
    return raw % 20, raw // 20


def decode_action_word(raw: int) -> tuple[int, int]:
    return raw // 150, raw % 150


def decode_vocab(raw: int) -> Trigger:
    verb, noun = divmod(raw, 150)
    if verb == 0:
        return Auto(noun)
    return Command(verb, noun, noun == 0)


def ending_label(line_index: int, position: int, opcode: int) -> str:
    kind = "score_win" if opcode == op.SCORE else "game_over"
    return f"line{line_index}.{position}:{kind}"


def lower_line(raw: RawAction, line_index: int) -> ScriptLine:
    conditions = []
    params = []
    for slot in raw.conditions:
        code, param = decode_condition(slot)
        if code == op.PARAM:
            params.append(param)
        else:
            conditions.append(Condition(code, param))

    codes = []
    for word in raw.actions:
        codes.extend(decode_action_word(word))

    effects = []
    sites = []
    ptr = 0
    for pos, code in enumerate(codes):
        arity = op.effect_arity(code)
        if ptr + arity > len(params):
            raise LoweringError(
                line_index,
                f"effect {pos} ({op.EFFECT_NAMES.get(code, code)}) needs {arity} parameter(s), "
                f"only {len(params) - ptr} left")
        effects.append(Effect(code, tuple(params[ptr:ptr + arity])))
        ptr += arity
        if code in op.ENDING_EFFECTS:
            sites.append(ending_label(line_index, pos, code))

    return ScriptLine(line_index, decode_vocab(raw.vocab), tuple(conditions), tuple(effects),
                      tuple(params), tuple(sites))


def _head_word(words, index: int) -> str:
    while index > 0 and words[index].startswith("*"):
        index -= 1
    return words[index].lstrip("*")


def map_synonym(db: GameDatabase, word: str) -> str | None:
    """Head noun of the first noun whose prefix matches ``word``."""
    wl = db.header.word_length
    key = word[:wl].upper()
    head = None
    for n in range(1, len(db.nouns)):
        text = db.nouns[n]
        if not text.startswith("*"):
            head = text
        if text.lstrip("*")[:wl].upper() == key:
            return head if head is not None else text.lstrip("*")
    return None


def build_match_table(db: GameDatabase) -> MatchTable:
    wl = db.header.word_length
    table = [()]
    for n in range(1, len(db.nouns)):
        text = db.nouns[n].lstrip("*")
        if not text:
            table.append(())
            continue
        word = map_synonym(db, text) or text
        key = word[:wl].upper()
        table.append(tuple(
            i for i, item in enumerate(db.items)
            if item.auto_get and item.auto_get[:wl].upper() == key))
    return MatchTable(tuple(table))


def _darkness_possible(db: GameDatabase, lines) -> bool:
    h = db.header
    if h.light_time != -1 and h.num_items >= op.LAMP_ITEM:
        return True
    for line in lines:
        for e in line.effects:
            if e.opcode == op.SET_DARK:
                return True
            if e.opcode == op.SET_FLAG and e.operands[0] == op.DARK_FLAG:
                return True
    return False


def _internal_location(db: GameDatabase, loc: int) -> int:
    return db.carried if loc == op.CARRIED_EXTERNAL else loc


def specialize_game(db: GameDatabase) -> SpecializedGame:
    lines = tuple(lower_line(a, i) for i, a in enumerate(db.actions))
    random_lines = tuple(
        l.line_index for l in lines
        if isinstance(l.trigger, Auto) and 0 < l.trigger.chance < 100)
    catalog = [
        EndingSite(l.line_index, pos, "score_win" if e.opcode == op.SCORE else "game_over",
                   ending_label(l.line_index, pos, e.opcode))
        for l in lines for pos, e in enumerate(l.effects) if e.opcode in op.ENDING_EFFECTS
    ]
    if _darkness_possible(db, lines):
        catalog.append(DARK_FALL)
    h = db.header
    constants = Constants(
        num_items=h.num_items,
        num_rooms=h.num_rooms,
        num_words=h.num_words,
        carried=db.carried,
        max_carry=h.max_carry,
        light_time=h.light_time,
        num_treasures=h.num_treasures,
        treasure_room=h.treasure_room,
        word_length=h.word_length,
        player_room=h.player_room,
        lamp_item=op.LAMP_ITEM if h.num_items >= op.LAMP_ITEM else None,
        treasures=tuple(i for i, it in enumerate(db.items) if it.is_treasure),
        initial_locations=tuple(_internal_location(db, it.initial_location) for it in db.items),
    )
    return SpecializedGame(db, lines, build_match_table(db), len(random_lines),
                           tuple(catalog), constants, random_lines)


# -- placeholder pruning ---------------------------------------------------


def _renumber(count: int, dead: set[int]) -> dict[int, int]:
    mapping, nxt = {}, 0
    for i in range(count):
        if i not in dead:
            mapping[i] = nxt
            nxt += 1
    return mapping


def _operand_kinds(line: ScriptLine) -> list[str | None]:
    kinds: list[str | None] = [None] * len(line.params)
    ptr = 0
    for e in line.effects:
        for kind in op.EFFECT_OPERANDS.get(e.opcode, ()):
            kinds[ptr] = kind
            ptr += 1
    return kinds


def _condition_kind(code: int) -> str | None:
    if code in op.ITEM_CONDITIONS:
        return op.ITEM
    if code in op.ROOM_CONDITIONS:
        return op.ROOM
    return None


def prune_placeholders(db: GameDatabase) -> GameDatabase:
    """Delete rooms, items and messages whose text is "." and every action
    line that refers to one of them, renumbering what is left.

    Placeholder items below the lamp slot are blanked in place instead of
    removed, since the engine finds the lamp by its fixed index.
    """
    h = db.header
    dead_rooms = {i for i, r in enumerate(db.rooms) if i and r.description == PLACEHOLDER}
    dead_items = {i for i, it in enumerate(db.items) if i and it.description == PLACEHOLDER}
    dead_msgs = {i for i, m in enumerate(db.messages) if i and m == PLACEHOLDER}
    keep_lamp_slot = h.num_items >= op.LAMP_ITEM and op.LAMP_ITEM not in dead_items
    pinned = {i for i in dead_items if keep_lamp_slot and i < op.LAMP_ITEM}

    room_map = _renumber(len(db.rooms), dead_rooms)
    item_map = _renumber(len(db.items), dead_items - pinned)
    msg_map = _renumber(len(db.messages), dead_msgs)

    def refers_to_dead(kind, value) -> bool:
        if kind == op.ITEM:
            return value in dead_items
        if kind in (op.ROOM, op.LOCATION):
            return value in dead_rooms
        return False

    def remap(kind, value) -> int:
        if kind == op.ITEM:
            return item_map[value]
        if kind in (op.ROOM, op.LOCATION) and value != op.CARRIED_EXTERNAL:
            return room_map[value]
        return value

    actions, titles = [], []
    for i, raw in enumerate(db.actions):
        line = lower_line(raw, i)
        kinds = _operand_kinds(line)
        if any(c.param in dead_items if _condition_kind(c.opcode) == op.ITEM else
               c.param in dead_rooms if _condition_kind(c.opcode) == op.ROOM else False
               for c in line.conditions):
            continue
        if any(refers_to_dead(k, v) for k, v in zip(kinds, line.params)):
            continue
        if any(e.message in dead_msgs for e in line.effects if e.message):
            continue
        slots, q = [], 0
        for slot in raw.conditions:
            code, param = decode_condition(slot)
            if code == op.PARAM:
                param = remap(kinds[q], param)
                q += 1
            else:
                param = remap(_condition_kind(code), param)
            slots.append(20 * param + code)
        codes = []
        for e in line.effects:
            m = e.message
            codes.append(op.message_opcode(msg_map[m]) if m else e.opcode)
        words = (150 * codes[0] + codes[1], 150 * codes[2] + codes[3])
        actions.append(RawAction(raw.vocab, tuple(slots), words))
        titles.append(db.action_titles[i])
    if not actions:
        actions.append(RawAction(0, (0, 0, 0, 0, 0), (0, 0)))
        titles.append("")

    def new_location(loc: int) -> int:
        if loc == op.CARRIED_EXTERNAL:
            return loc
        return 0 if loc in dead_rooms else room_map[loc]

    rooms = tuple(
        Room(tuple(0 if e in dead_rooms else room_map.get(e, e) for e in r.exits), r.description)
        for i, r in enumerate(db.rooms) if i not in dead_rooms)
    items = []
    for i, it in enumerate(db.items):
        if i in pinned:
            items.append(Item(it.description, 0, None))
        elif i not in dead_items:
            items.append(replace(it, initial_location=new_location(it.initial_location)))
    messages = tuple(m for i, m in enumerate(db.messages) if i not in dead_msgs)

    header = replace(
        h,
        num_items=len(items) - 1,
        num_actions=len(actions) - 1,
        num_rooms=len(rooms) - 1,
        num_messages=len(messages) - 1,
        player_room=new_location(h.player_room),
        treasure_room=new_location(h.treasure_room),
    )
    return replace(db, header=header, actions=tuple(actions), rooms=rooms,
                   messages=messages, items=tuple(items), action_titles=tuple(titles))


# -- dumping ---------------------------------------------------------------


def _trigger_text(game: SpecializedGame, t: Trigger) -> str:
    db = game.db
    if isinstance(t, Auto):
        return "AUTO continuation" if t.chance == 0 else f"AUTO {t.chance}%"
    noun = "*" if t.noun_wildcard else db.nouns[t.noun] if t.noun < len(db.nouns) else f"#{t.noun}"
    verb = db.verbs[t.verb] if t.verb < len(db.verbs) else f"#{t.verb}"
    return f"CMD {verb} {noun} [{t.verb} {t.noun}]"


def _effect_text(game: SpecializedGame, e: Effect) -> str:
    m = e.message
    if m is not None:
        text = game.db.messages[m] if m < len(game.db.messages) else "?"
        return f'msg({m} "{text}")'
    name = op.EFFECT_NAMES.get(e.opcode, f"op{e.opcode}")
    return f"{name}({', '.join(map(str, e.operands))})" if e.operands else name


def dump_text(game: SpecializedGame) -> str:
    out = []
    for line in game.lines:
        out.append(f"L{line.line_index:03d} {_trigger_text(game, line.trigger)}")
        conds = " & ".join(f"{op.CONDITION_NAMES[c.opcode]}({c.param})" for c in line.conditions)
        out.append(f"  if: {conds or 'true'}")
        effs = "; ".join(_effect_text(game, e) for e in line.effects if e.opcode != op.NOP)
        out.append(f"  do: {effs or 'nothing'}")
        if line.ending_sites:
            out.append(f"  ends: {' '.join(line.ending_sites)}")
    out.append("endings:")
    out.extend(f"  {s.label} ({s.kind})" for s in game.ending_catalog)
    return "\n".join(out) + "\n"


def dump_tree(game: SpecializedGame) -> str:
    def trigger(t):
        if isinstance(t, Auto):
            return {"auto": {"chance": t.chance}}
        return {"command": {"verb": t.verb, "noun": t.noun, "noun_wildcard": t.noun_wildcard}}

    tree = {
        "constants": {k: getattr(game.constants, k) for k in game.constants.__dataclass_fields__},
        "auto_rng_slots": game.auto_rng_slots,
        "match_table": {str(n): list(c) for n, c in enumerate(game.match_table.candidates) if c},
        "lines": [
            {
                "line": l.line_index,
                "trigger": trigger(l.trigger),
                "conditions": [{"op": op.CONDITION_NAMES[c.opcode], "param": c.param}
                               for c in l.conditions],
                "effects": [{"opcode": e.opcode, "operands": list(e.operands)} for e in l.effects],
                "ending_sites": list(l.ending_sites),
            }
            for l in game.lines
        ],
        "endings": [{"label": s.label, "line": s.line_index, "position": s.position,
                     "kind": s.kind} for s in game.ending_catalog],
    }
    return json.dumps(tree, indent=2, sort_keys=True) + "\n"


def checked_specialize(db: GameDatabase) -> SpecializedGame:
    """Validate then specialize; raises ValueError listing the diagnostics."""
    diags = validate(db)
    if diags:
        raise ValueError("invalid database:\n" + "\n".join(map(str, diags)))
    return specialize_game(db)
