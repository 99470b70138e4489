"""Programmatic construction of game databases.

Used to author the bundled fixture games and by the random game generator.
Conditions are ``(opcode, param)`` pairs; effects are ``(opcode, *operands)``
tuples or ``("msg", text)``. Effect operands are packed as parameter-push
condition slots after the real conditions, in order.
"""

from __future__ import annotations

from . import opcodes as op
from .dbformat import GameDatabase, GameHeader, Item, RawAction, Room

_DIR_INDEX = {"n": 0, "s": 1, "e": 2, "w": 3, "u": 4, "d": 5}
_OPPOSITE = {"n": "s", "s": "n", "e": "w", "w": "e", "u": "d", "d": "u"}


class GameBuilder:
    def __init__(self, *, max_carry: int = 6, word_length: int = 3, light_time: int = -1,
                 num_words: int = 18):
        self.max_carry = max_carry
        self.word_length = word_length
        self.light_time = light_time
        self.verbs = [""] * (num_words + 1)
        self.nouns = [""] * (num_words + 1)
        self.verbs[0], self.nouns[0] = "AUT", "ANY"
        self.verbs[op.VERB_GO] = "GO"
        self.verbs[op.VERB_GET] = "GET"
        self.verbs[op.VERB_DROP] = "DROP"
        for i, name in enumerate(op.DIRECTIONS, start=1):
            self.nouns[i] = name
        self.rooms: list[list] = [[[0] * 6, ""]]
        self.items: list[Item] = []
        self.messages: list[str] = [""]
        self.lines: list[tuple[RawAction, str]] = []
        self.player_room = 1
        self.treasure_room = 0
        self.num_treasures = 0

    # -- vocabulary -------------------------------------------------------

    def _word(self, table: list[str], word: str, reserved: set[int]) -> int:
        word = word.upper()
        for i in range(1, len(table)):
            if table[i].lstrip("*") == word:
                return i
        for i in range(1, len(table)):
            if table[i] == "" and i not in reserved:
                table[i] = word
                return i
        raise ValueError(f"vocabulary full, cannot add {word!r}")

    def verb(self, word: str) -> int:
        return self._word(self.verbs, word, {op.VERB_GO, op.VERB_GET, op.VERB_DROP})

    def noun(self, word: str) -> int:
        return self._word(self.nouns, word, set(range(1, 7)))

    def synonym(self, kind: str, head: str, word: str) -> int:
        table = self.verbs if kind == "verb" else self.nouns
        h = (self.verb if kind == "verb" else self.noun)(head)
        if h + 1 >= len(table) or table[h + 1] != "":
            raise ValueError(f"no free slot after {head!r} for synonym {word!r}")
        table[h + 1] = "*" + word.upper()
        return h + 1

    # -- world ------------------------------------------------------------

    def room(self, description: str, **exits: int) -> int:
        ex = [0] * 6
        for d, target in exits.items():
            ex[_DIR_INDEX[d]] = target
        self.rooms.append([ex, description])
        return len(self.rooms) - 1

    def connect(self, a: int, direction: str, b: int, both: bool = True) -> None:
        self.rooms[a][0][_DIR_INDEX[direction]] = b
        if both:
            self.rooms[b][0][_DIR_INDEX[_OPPOSITE[direction]]] = a

    def item(self, description: str, location: int, auto_get: str | None = None) -> int:
        if auto_get is not None:
            auto_get = auto_get.upper()
            self.noun(auto_get)
        self.items.append(Item(description, location, auto_get))
        return len(self.items) - 1

    def message(self, text: str) -> int:
        if text in self.messages[1:]:
            return self.messages.index(text, 1)
        self.messages.append(text)
        return len(self.messages) - 1

    # -- script -----------------------------------------------------------

    def _pack(self, vocab: int, conds, effects, title: str) -> None:
        slots = [20 * param + code for code, param in conds]
        acts = []
        for eff in effects:
            if eff[0] == "msg":
                acts.append(op.message_opcode(self.message(eff[1])))
                continue
            code, *operands = eff
            if len(operands) != op.effect_arity(code):
                raise ValueError(f"effect {code} takes {op.effect_arity(code)} operands")
            acts.append(code)
            slots.extend(20 * v for v in operands)
        if len(slots) > 5:
            raise ValueError("more than 5 condition/parameter slots")
        if len(acts) > 4:
            raise ValueError("more than 4 effects")
        slots += [0] * (5 - len(slots))
        acts += [0] * (4 - len(acts))
        words = (150 * acts[0] + acts[1], 150 * acts[2] + acts[3])
        self.lines.append((RawAction(vocab, tuple(slots), words), title))

    def command(self, verb: str, noun: str | None, conds=(), effects=(), title: str = "") -> int:
        v = self.verb(verb)
        n = 0 if noun is None else self.noun(noun)
        self._pack(150 * v + n, conds, effects, title or f"{verb} {noun or ''}".strip())
        return len(self.lines) - 1

    def auto(self, chance: int, conds=(), effects=(), title: str = "") -> int:
        self._pack(chance, conds, effects, title or f"auto {chance}")
        return len(self.lines) - 1

    def build(self) -> GameDatabase:
        if not self.lines:
            self._pack(0, (), (), "")
        num_items = len(self.items) - 1
        if num_items < 0:
            self.items.append(Item("", 0))
            num_items = 0
        header = GameHeader(
            num_items=num_items,
            num_actions=len(self.lines) - 1,
            num_words=len(self.verbs) - 1,
            num_rooms=len(self.rooms) - 1,
            max_carry=self.max_carry,
            player_room=self.player_room,
            num_treasures=self.num_treasures or sum(i.is_treasure for i in self.items),
            word_length=self.word_length,
            light_time=self.light_time,
            num_messages=len(self.messages) - 1,
            treasure_room=self.treasure_room,
        )
        return GameDatabase(
            header=header,
            actions=tuple(a for a, _ in self.lines),
            verbs=tuple(self.verbs),
            nouns=tuple(self.nouns),
            rooms=tuple(Room(tuple(ex), desc) for ex, desc in self.rooms),
            messages=tuple(self.messages),
            items=tuple(self.items),
            action_titles=tuple(t for _, t in self.lines),
            trailer=(1, 0, 0),
        )
