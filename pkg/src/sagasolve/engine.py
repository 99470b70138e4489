"""Concrete game execution.

Two executors share the built-in commands (GO, GET, DROP), lamp
bookkeeping and turn structure:

* :class:`Engine` runs the specialized script lines (the IR).
* :class:`RawEngine` decodes the packed action table on every turn, the way
  the original interpreter does. It exists to check the specializer.

A turn is: the player's command, lamp bookkeeping, then one pass over the
automatic lines. One extra automatic pass runs before the first command.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import opcodes as op
from .specialize import DARK_FALL, Auto, Command, EndingSite, ScriptLine, SpecializedGame

DEFAULT_SEED = 1979
_DIR_LETTERS = {"N": 1, "S": 2, "E": 3, "W": 4, "U": 5, "D": 6}


def wrap16(value: int) -> int:
    return ((value + 0x8000) & 0xFFFF) - 0x8000


@dataclass
class Rng:
    """Fixed linear congruential generator; the only source of chance."""

    state: int = DEFAULT_SEED

    def next(self) -> int:
        self.state = (self.state * 1103515245 + 12345) % (1 << 31)
        return self.state


def random_percent(rng: Rng, percent: int) -> bool:
    return (rng.next() // 65536) % 100 < percent


def rng_after(seed: int, draws: int) -> Rng:
    rng = Rng(seed)
    for _ in range(draws):
        rng.next()
    return rng


@dataclass
class GameState:
    item_locations: list[int]
    current_room: int
    flags: int = 0
    counter: int = 0
    counters: list[int] = field(default_factory=lambda: [0] * op.NUM_COUNTERS)
    saved_rooms: list[int] = field(default_factory=lambda: [0] * op.NUM_SAVED_ROOMS)
    lamp_fuel: int = -1
    carried_count: int = 0
    turn_index: int = 0
    ended: str | None = None

    def copy(self) -> GameState:
        return GameState(list(self.item_locations), self.current_room, self.flags, self.counter,
                         list(self.counters), list(self.saved_rooms), self.lamp_fuel,
                         self.carried_count, self.turn_index, self.ended)

    def key(self) -> tuple:
        """Hashable world state, ignoring the turn number and caches."""
        return (tuple(self.item_locations), self.current_room, self.flags, self.counter,
                tuple(self.counters), tuple(self.saved_rooms), self.lamp_fuel, self.ended)

    def flag(self, n: int) -> bool:
        return bool(self.flags >> n & 1)


@dataclass
class TurnResult:
    messages: list[str] = field(default_factory=list)
    ending: tuple[int, str] | None = None
    look_requested: bool = False


class GameEnded(RuntimeError):
    pass


class UnknownWord(ValueError):
    pass


class _GameOver(Exception):
    def __init__(self, site: EndingSite):
        self.site = site


def count_carried(state: GameState, carried: int) -> int:
    return sum(1 for loc in state.item_locations if loc == carried)


class Engine:
    """Executes specialized script lines against a :class:`GameState`."""

    def __init__(self, game: SpecializedGame, *, lamp_needs_carry: bool = False):
        self.game = game
        self.db = game.db
        self.k = game.constants
        self.lamp_needs_carry = lamp_needs_carry
        self._sites = {(s.line_index, s.position): s for s in game.ending_catalog}

    # -- state ------------------------------------------------------------

    def initial_state(self) -> GameState:
        locs = list(self.k.initial_locations)
        return GameState(
            item_locations=locs,
            current_room=self.k.player_room,
            lamp_fuel=self.k.light_time,
            carried_count=sum(1 for l in locs if l == self.k.carried),
        )

    def start(self, rng: Rng) -> tuple[GameState, TurnResult]:
        """Initial state after the automatic pass that precedes the first move."""
        state = self.initial_state()
        result = TurnResult()
        try:
            self._automatics(state, rng, result)
        except _GameOver as g:
            self._finish(state, result, g.site)
        return state, result

    def _move(self, st: GameState, item: int, loc: int) -> None:
        c = self.k.carried
        old = st.item_locations[item]
        if old == c:
            st.carried_count -= 1
        if loc == c:
            st.carried_count += 1
        st.item_locations[item] = loc

    def _finish(self, st: GameState, result: TurnResult, site: EndingSite) -> None:
        st.ended = site.label
        result.ending = (site.line_index, site.label)

    def is_dark(self, st: GameState) -> bool:
        if not st.flag(op.DARK_FLAG):
            return False
        lamp = self.k.lamp_item
        if lamp is None:
            return True
        loc = st.item_locations[lamp]
        return loc != self.k.carried and loc != st.current_room

    # -- turn -------------------------------------------------------------

    def perform_turn(self, st: GameState, rng: Rng, verb: int, noun: int) -> TurnResult:
        if st.ended is not None:
            raise GameEnded(f"game already ended ({st.ended})")
        nw = self.k.num_words
        if not (0 <= verb <= nw and 0 <= noun <= nw):
            raise ValueError(f"input ({verb}, {noun}) outside 0..{nw}")
        result = TurnResult()
        try:
            outcome = self._command(st, result, verb, noun)
            if outcome != 0:
                self._builtin(st, result, verb, noun, outcome)
            self._lamp(st, result)
            self._automatics(st, rng, result)
        except _GameOver as g:
            self._finish(st, result, g.site)
        st.turn_index += 1
        return result

    def _builtin(self, st, out: TurnResult, verb: int, noun: int, outcome: int) -> None:
        k = self.k
        if verb == op.VERB_GO:
            if noun == 0:
                out.messages.append("Give me a direction too.")
                return
            if noun <= 6:
                dark = self.is_dark(st)
                if dark:
                    out.messages.append("It is dangerous to move in the dark!")
                target = self.db.rooms[st.current_room].exits[noun - 1]
                if target != 0:
                    st.current_room = target
                    out.messages.append("O.K.")
                    out.look_requested = True
                    return
                if dark:
                    out.messages.append("I fell down and broke my neck.")
                    raise _GameOver(DARK_FALL)
                out.messages.append("I can't go in that direction.")
                return
        elif verb == op.VERB_GET:
            if noun == 0:
                out.messages.append("What ?")
                return
            if self._count_carried(st) >= k.max_carry:
                out.messages.append("I've too much to carry. ")
                return
            item = self.match_up_item(noun, st.current_room, st)
            if item is None:
                out.messages.append("It is beyond my power to do that.")
                return
            self._move(st, item, k.carried)
            out.messages.append("O.K.")
            out.look_requested = True
            return
        elif verb == op.VERB_DROP:
            if noun == 0:
                out.messages.append("What ?")
                return
            item = self.match_up_item(noun, k.carried, st)
            if item is None:
                out.messages.append("It's beyond my power to do that.")
                return
            self._move(st, item, st.current_room)
            out.messages.append("O.K.")
            out.look_requested = True
            return
        if outcome == -2:
            out.messages.append("I can't do that yet.")
        else:
            out.messages.append("You use word(s) I don't know!")

    def _lamp(self, st: GameState, out: TurnResult) -> None:
        k = self.k
        if k.light_time == -1 or k.lamp_item is None:
            return
        loc = st.item_locations[k.lamp_item]
        lit = loc == k.carried or (not self.lamp_needs_carry and loc == st.current_room)
        if not lit or st.lamp_fuel <= 0:
            return
        st.lamp_fuel -= 1
        if st.lamp_fuel == 0:
            st.flags |= 1 << op.DARK_FLAG
            out.messages.append("Your light has run out.")
        elif st.lamp_fuel < 25:
            out.messages.append("Your light is growing dim.")

    # -- IR execution -----------------------------------------------------

    def _count_carried(self, st: GameState) -> int:
        return st.carried_count

    def match_up_item(self, noun: int, loc: int, st: GameState) -> int | None:
        for item in self.game.match_table.lookup(noun):
            if st.item_locations[item] == loc:
                return item
        return None

    def _command(self, st, out, verb, noun) -> int:
        if verb == 0:
            return -1
        outcome = -1
        lines = self.game.lines
        for i, line in enumerate(lines):
            t = line.trigger
            if not isinstance(t, Command) or t.verb != verb:
                continue
            if not (t.noun_wildcard or t.noun == noun):
                continue
            outcome = -2
            if self._holds(st, line):
                if self._run(st, line, out, noun):
                    self._chain(st, i + 1, out, noun)
                return 0
        return outcome

    def _automatics(self, st, rng, out) -> None:
        lines = self.game.lines
        for i, line in enumerate(lines):
            t = line.trigger
            if not isinstance(t, Auto) or t.chance == 0:
                continue
            if t.chance < 100 and not random_percent(rng, t.chance):
                continue
            if self._holds(st, line) and self._run(st, line, out, 0):
                self._chain(st, i + 1, out, 0)

    def _chain(self, st, start: int, out, noun: int) -> None:
        lines = self.game.lines
        j = start
        while j < len(lines) and lines[j].continuation_only:
            if self._holds(st, lines[j]):
                self._run(st, lines[j], out, noun)
            j += 1

    def _holds(self, st: GameState, line: ScriptLine) -> bool:
        c = self.k.carried
        locs = st.item_locations
        room = st.current_room
        for cond in line.conditions:
            code, p = cond.opcode, cond.param
            if code == op.CARRIED:
                ok = locs[p] == c
            elif code == op.HERE:
                ok = locs[p] == room
            elif code == op.PRESENT:
                ok = locs[p] == c or locs[p] == room
            elif code == op.AT:
                ok = room == p
            elif code == op.NOT_HERE:
                ok = locs[p] != room
            elif code == op.NOT_CARRIED:
                ok = locs[p] != c
            elif code == op.NOT_AT:
                ok = room != p
            elif code == op.FLAG:
                ok = st.flag(p)
            elif code == op.NOT_FLAG:
                ok = not st.flag(p)
            elif code == op.LOADED:
                ok = st.carried_count > 0
            elif code == op.NOT_LOADED:
                ok = st.carried_count == 0
            elif code == op.NOT_PRESENT:
                ok = locs[p] != c and locs[p] != room
            elif code == op.EXISTS:
                ok = locs[p] != 0
            elif code == op.NOT_EXISTS:
                ok = locs[p] == 0
            elif code == op.COUNTER_LE:
                ok = st.counter <= p
            elif code == op.COUNTER_GT:
                ok = st.counter > p
            elif code == op.NOT_MOVED:
                ok = locs[p] == self.k.initial_locations[p]
            elif code == op.MOVED:
                ok = locs[p] != self.k.initial_locations[p]
            else:
                ok = st.counter == p
            if not ok:
                return False
        return True

    def _location(self, value: int) -> int:
        return self.k.carried if value == op.CARRIED_EXTERNAL else value

    def _run(self, st: GameState, line: ScriptLine, out: TurnResult, noun: int) -> bool:
        """Execute a line's effects; returns True if it asks for continuation."""
        k = self.k
        cont = False
        for pos, e in enumerate(line.effects):
            code, args = e.opcode, e.operands
            m = e.message
            if m is not None:
                out.messages.append(self.db.messages[m])
            elif code in (op.NOP, op.NOP89, op.CLEAR_SCREEN, op.SAVE_GAME):
                pass
            elif code == op.GET:
                if st.carried_count >= k.max_carry:
                    out.messages.append("I've too much to carry! ")
                else:
                    self._move(st, args[0], k.carried)
            elif code in (op.DROP, op.SUPERGET):
                self._move(st, args[0], st.current_room if code == op.DROP else k.carried)
            elif code == op.GOTO:
                st.current_room = args[0]
                out.look_requested = True
            elif code in (op.DESTROY, op.DESTROY2):
                self._move(st, args[0], 0)
            elif code == op.SET_DARK:
                st.flags |= 1 << op.DARK_FLAG
            elif code == op.CLEAR_DARK:
                st.flags &= ~(1 << op.DARK_FLAG)
            elif code == op.SET_FLAG:
                st.flags |= 1 << args[0]
            elif code == op.CLEAR_FLAG:
                st.flags &= ~(1 << args[0])
            elif code == op.SET_FLAG0:
                st.flags |= 1
            elif code == op.CLEAR_FLAG0:
                st.flags &= ~1
            elif code == op.DIE:
                out.messages.append("I am dead.")
                st.flags &= ~(1 << op.DARK_FLAG)
                st.current_room = k.num_rooms
                out.look_requested = True
            elif code == op.PUT:
                self._move(st, args[0], self._location(args[1]))
            elif code == op.GAME_OVER:
                out.messages.append("The game is now over.")
                raise _GameOver(self._sites[(line.line_index, pos)])
            elif code in (op.LOOK, op.LOOK2, op.PAUSE):
                out.look_requested = True
            elif code == op.SCORE:
                self._score(st, out, self._sites[(line.line_index, pos)])
            elif code == op.INVENTORY:
                out.messages.append(self.inventory_text(st))
            elif code == op.REFILL_LAMP:
                st.lamp_fuel = k.light_time
                self._move(st, op.LAMP_ITEM, k.carried)
            elif code == op.SWAP:
                a, b = args
                la, lb = st.item_locations[a], st.item_locations[b]
                self._move(st, a, lb)
                self._move(st, b, la)
            elif code == op.CONTINUE:
                cont = True
            elif code == op.PUT_WITH:
                self._move(st, args[0], st.item_locations[args[1]])
            elif code == op.DEC_COUNTER:
                if st.counter >= 0:
                    st.counter = wrap16(st.counter - 1)
            elif code == op.PRINT_COUNTER:
                out.messages.append(str(st.counter))
            elif code == op.SET_COUNTER:
                st.counter = wrap16(args[0])
            elif code == op.SWAP_ROOM:
                st.current_room, st.saved_rooms[0] = st.saved_rooms[0], st.current_room
                out.look_requested = True
            elif code == op.SELECT_COUNTER:
                st.counter, st.counters[args[0]] = st.counters[args[0]], st.counter
            elif code == op.ADD_COUNTER:
                st.counter = wrap16(st.counter + args[0])
            elif code == op.SUB_COUNTER:
                st.counter = max(wrap16(st.counter - args[0]), -1)
            elif code in (op.PRINT_NOUN, op.PRINT_NOUN_NL):
                out.messages.append(self.db.nouns[noun])
            elif code == op.NEWLINE:
                out.messages.append("")
            elif code == op.SWAP_SPECIFIC_ROOM:
                p = args[0]
                st.current_room, st.saved_rooms[p] = st.saved_rooms[p], st.current_room
                out.look_requested = True
        return cont

    def _score(self, st: GameState, out: TurnResult, site: EndingSite) -> None:
        k = self.k
        stored = sum(1 for i in k.treasures if st.item_locations[i] == k.treasure_room)
        rating = stored * 100 // k.num_treasures if k.num_treasures else 0
        out.messages.append(f"I've stored {stored} treasures.  On a scale of 0 to 100, "
                            f"that rates {rating}.")
        if stored == k.num_treasures:
            out.messages.append("Well done.")
            out.messages.append("The game is now over.")
            raise _GameOver(site)

    # -- display ----------------------------------------------------------

    def inventory_text(self, st: GameState) -> str:
        names = [it.description for i, it in enumerate(self.db.items)
                 if st.item_locations[i] == self.k.carried]
        return "I'm carrying: " + (" - ".join(names) if names else "Nothing") + "."

    def describe_room(self, st: GameState) -> str:
        if self.is_dark(st):
            return "I can't see. It is too dark!"
        room = self.db.rooms[st.current_room]
        text = room.description
        lines = [text[1:] if text.startswith("*") else f"I'm in a {text}"]
        exits = [op.DIRECTIONS[d].capitalize() for d, t in enumerate(room.exits) if t]
        lines.append("Obvious exits: " + (", ".join(exits) if exits else "none") + ".")
        seen = [it.description for i, it in enumerate(self.db.items)
                if st.item_locations[i] == st.current_room]
        if seen:
            lines.append("I can also see: " + " - ".join(seen))
        return "\n".join(lines)


class RawEngine(Engine):
    """Interprets the packed action table directly, decoding every turn."""

    def _count_carried(self, st: GameState) -> int:
        return count_carried(st, self.k.carried)

    def match_up_item(self, noun: int, loc: int, st: GameState) -> int | None:
        db = self.db
        wl = self.k.word_length
        text = db.nouns[noun].lstrip("*")
        if not text:
            return None
        word = text
        head = None
        for n in range(1, len(db.nouns)):
            t = db.nouns[n]
            if not t.startswith("*"):
                head = t
            if t.lstrip("*")[:wl].upper() == text[:wl].upper():
                word = head if head is not None else t.lstrip("*")
                break
        for i, item in enumerate(db.items):
            if (item.auto_get and st.item_locations[i] == loc
                    and item.auto_get[:wl].upper() == word[:wl].upper()):
                return i
        return None

    def _command(self, st, out, verb, noun) -> int:
        if verb == 0:
            return -1
        actions = self.db.actions
        na = len(actions) - 1
        fl = -1
        doagain = False
        ct = 0
        while ct <= na:
            vocab = actions[ct].vocab
            if doagain and vocab != 0:
                break
            if not doagain and fl == 0:
                break
            vv, nv = divmod(vocab, 150)
            if vv == verb or (doagain and vocab == 0):
                if doagain or (vv != 0 and (nv == noun or nv == 0)):
                    if fl == -1:
                        fl = -2
                    f2 = self._perform_line(st, ct, out, noun)
                    if f2 > 0:
                        fl = 0
                        if f2 == 2:
                            doagain = True
                        if not doagain:
                            return fl
            ct += 1
            if ct <= na and actions[ct].vocab != 0:
                doagain = False
        return fl

    def _automatics(self, st, rng, out) -> None:
        actions = self.db.actions
        na = len(actions) - 1
        doagain = False
        ct = 0
        while ct <= na:
            vocab = actions[ct].vocab
            vv, nv = divmod(vocab, 150)
            if vv == 0:
                if vocab == 0:
                    fire = doagain
                elif nv >= 100:
                    fire = True
                else:
                    fire = random_percent(rng, nv)
                if fire and self._perform_line(st, ct, out, 0) == 2:
                    doagain = True
            ct += 1
            if ct <= na and actions[ct].vocab != 0:
                doagain = False

    def _perform_line(self, st: GameState, ct: int, out: TurnResult, noun: int) -> int:
        k = self.k
        carried = k.carried
        locs = st.item_locations
        action = self.db.actions[ct]
        param = []
        for raw in action.conditions:
            dv, cv = divmod(raw, 20)
            here = st.current_room
            if cv == 0:
                param.append(dv)
            elif cv == 1:
                if locs[dv] != carried:
                    return 0
            elif cv == 2:
                if locs[dv] != here:
                    return 0
            elif cv == 3:
                if locs[dv] != carried and locs[dv] != here:
                    return 0
            elif cv == 4:
                if here != dv:
                    return 0
            elif cv == 5:
                if locs[dv] == here:
                    return 0
            elif cv == 6:
                if locs[dv] == carried:
                    return 0
            elif cv == 7:
                if here == dv:
                    return 0
            elif cv == 8:
                if not st.flags & (1 << dv):
                    return 0
            elif cv == 9:
                if st.flags & (1 << dv):
                    return 0
            elif cv == 10:
                if count_carried(st, carried) == 0:
                    return 0
            elif cv == 11:
                if count_carried(st, carried):
                    return 0
            elif cv == 12:
                if locs[dv] == carried or locs[dv] == here:
                    return 0
            elif cv == 13:
                if locs[dv] == 0:
                    return 0
            elif cv == 14:
                if locs[dv]:
                    return 0
            elif cv == 15:
                if st.counter > dv:
                    return 0
            elif cv == 16:
                if st.counter <= dv:
                    return 0
            elif cv == 17:
                if locs[dv] != k.initial_locations[dv]:
                    return 0
            elif cv == 18:
                if locs[dv] == k.initial_locations[dv]:
                    return 0
            elif cv == 19:
                if st.counter != dv:
                    return 0

        act = [action.actions[0] // 150, action.actions[0] % 150,
               action.actions[1] // 150, action.actions[1] % 150]
        pptr = 0
        continuation = 0
        for cc, a in enumerate(act):
            if 1 <= a < 52:
                out.messages.append(self.db.messages[a])
            elif a > 101:
                out.messages.append(self.db.messages[a - 50])
            elif a == 52:
                item = param[pptr]
                pptr += 1
                if count_carried(st, carried) >= k.max_carry:
                    out.messages.append("I've too much to carry! ")
                else:
                    self._move(st, item, carried)
            elif a == 53:
                self._move(st, param[pptr], st.current_room)
                pptr += 1
            elif a == 54:
                st.current_room = param[pptr]
                pptr += 1
                out.look_requested = True
            elif a in (55, 59):
                self._move(st, param[pptr], 0)
                pptr += 1
            elif a == 56:
                st.flags |= 1 << op.DARK_FLAG
            elif a == 57:
                st.flags &= ~(1 << op.DARK_FLAG)
            elif a == 58:
                st.flags |= 1 << param[pptr]
                pptr += 1
            elif a == 60:
                st.flags &= ~(1 << param[pptr])
                pptr += 1
            elif a == 61:
                out.messages.append("I am dead.")
                st.flags &= ~(1 << op.DARK_FLAG)
                st.current_room = k.num_rooms
                out.look_requested = True
            elif a == 62:
                i = param[pptr]
                where = param[pptr + 1]
                pptr += 2
                self._move(st, i, carried if where == op.CARRIED_EXTERNAL else where)
            elif a == 63:
                out.messages.append("The game is now over.")
                raise _GameOver(self._sites[(ct, cc)])
            elif a in (64, 76, 88):
                out.look_requested = True
            elif a == 65:
                self._score(st, out, self._sites[(ct, cc)])
            elif a == 66:
                out.messages.append(self.inventory_text(st))
            elif a == 67:
                st.flags |= 1
            elif a == 68:
                st.flags &= ~1
            elif a == 69:
                st.lamp_fuel = k.light_time
                self._move(st, op.LAMP_ITEM, carried)
            elif a == 72:
                i1, i2 = param[pptr], param[pptr + 1]
                pptr += 2
                t = locs[i1]
                self._move(st, i1, locs[i2])
                self._move(st, i2, t)
            elif a == 73:
                continuation = 1
            elif a == 74:
                self._move(st, param[pptr], carried)
                pptr += 1
            elif a == 75:
                i1, i2 = param[pptr], param[pptr + 1]
                pptr += 2
                self._move(st, i1, locs[i2])
            elif a == 77:
                if st.counter >= 0:
                    st.counter = wrap16(st.counter - 1)
            elif a == 78:
                out.messages.append(str(st.counter))
            elif a == 79:
                st.counter = wrap16(param[pptr])
                pptr += 1
            elif a == 80:
                st.current_room, st.saved_rooms[0] = st.saved_rooms[0], st.current_room
                out.look_requested = True
            elif a == 81:
                p = param[pptr]
                pptr += 1
                st.counter, st.counters[p] = st.counters[p], st.counter
            elif a == 82:
                st.counter = wrap16(st.counter + param[pptr])
                pptr += 1
            elif a == 83:
                st.counter = wrap16(st.counter - param[pptr])
                pptr += 1
                if st.counter < -1:
                    st.counter = -1
            elif a in (84, 85):
                out.messages.append(self.db.nouns[noun])
            elif a == 86:
                out.messages.append("")
            elif a == 87:
                p = param[pptr]
                pptr += 1
                st.current_room, st.saved_rooms[p] = st.saved_rooms[p], st.current_room
                out.look_requested = True
        return 1 + continuation


# -- player input ----------------------------------------------------------


def _which_word(word: str, words, wl: int) -> int | None:
    key = word[:wl].upper()
    head = 1
    for n in range(1, len(words)):
        text = words[n]
        if text.startswith("*"):
            text = text[1:]
        else:
            head = n
        if text and text[:wl].upper() == key:
            return head
    return None


def parse_player_words(text: str, db) -> tuple[int, int]:
    """Turn a typed command into (verb index, noun index); noun 0 if absent."""
    words = text.split()
    if not words:
        raise UnknownWord("Huh ?")
    wl = db.header.word_length
    verb_word = words[0]
    noun_word = words[1] if len(words) > 1 else ""
    if len(words) == 1 and verb_word.upper() in _DIR_LETTERS:
        return op.VERB_GO, _DIR_LETTERS[verb_word.upper()]
    verb = _which_word(verb_word, db.verbs, wl)
    if verb is None:
        as_noun = _which_word(verb_word, db.nouns, wl)
        if len(words) == 1 and as_noun is not None and 1 <= as_noun <= 6:
            return op.VERB_GO, as_noun
        raise UnknownWord(f'I don\'t know what "{verb_word}" means.')
    if not noun_word:
        return verb, 0
    noun = _which_word(noun_word, db.nouns, wl)
    if noun is None:
        raise UnknownWord(f'I don\'t know what "{noun_word}" means.')
    return verb, noun


# -- traces ----------------------------------------------------------------


class TraceFormatError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class ReplayError(RuntimeError):
    def __init__(self, move_index: int, message: str):
        super().__init__(f"move {move_index}: {message}")
        self.move_index = move_index


def format_trace(seed: int, moves, db=None) -> str:
    out = [f"seed {seed}"]
    for verb, noun in moves:
        line = f"{verb} {noun}"
        if db is not None:
            line += f"  # {db.verbs[verb].lstrip('*')} {db.nouns[noun].lstrip('*')}".rstrip()
        out.append(line)
    return "\n".join(out) + "\n"


def parse_trace(text: str) -> tuple[int, list[tuple[int, int]]]:
    seed = None
    moves = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if seed is None:
            if len(parts) != 2 or parts[0] != "seed":
                raise TraceFormatError(no, "first line must be 'seed <n>'")
            try:
                seed = int(parts[1])
            except ValueError:
                raise TraceFormatError(no, f"bad seed {parts[1]!r}") from None
            continue
        if len(parts) != 2:
            raise TraceFormatError(no, f"expected 'VERB NOUN' indices, got {line!r}")
        try:
            verb, noun = int(parts[0]), int(parts[1])
        except ValueError:
            raise TraceFormatError(no, f"expected integer indices, got {line!r}") from None
        if verb < 0 or noun < 0:
            raise TraceFormatError(no, "indices must be non-negative")
        moves.append((verb, noun))
    if seed is None:
        raise TraceFormatError(1, "missing 'seed <n>' line")
    return seed, moves


@dataclass
class ReplayReport:
    state: GameState
    ending: str | None
    ending_move: int | None
    initial_messages: list[str]
    move_messages: list[list[str]]


def replay_trace(game: SpecializedGame, seed: int, moves, *, raw: bool = False,
                 lamp_needs_carry: bool = False) -> ReplayReport:
    """Run the initial automatics and then each move; stop at an ending."""
    engine = (RawEngine if raw else Engine)(game, lamp_needs_carry=lamp_needs_carry)
    rng = Rng(seed)
    state, first = engine.start(rng)
    report = ReplayReport(state, state.ended, 0 if state.ended else None, first.messages, [])
    for index, (verb, noun) in enumerate(moves, start=1):
        if state.ended is not None:
            raise ReplayError(index, f"move after the game ended ({state.ended})")
        result = engine.perform_turn(state, rng, verb, noun)
        report.move_messages.append(result.messages)
        if result.ending:
            report.ending = result.ending[1]
            report.ending_move = index
    report.state = state
    return report
