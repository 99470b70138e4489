"""Bounded model checking of specialized games.

One move of the game becomes one layer of gates over a bit-packed state.
Unrolling K layers and asking for any ending literal to hold gives a formula
whose models are move sequences that end the game within K moves.

Encoding conventions:

* Every field update is a multiplexer on a guard literal. Guards carry the
  running ``alive`` literal, so effects after an ending do nothing and an
  ended state is absorbing.
* Command lines form a first-match priority chain on a ``done`` literal;
  their conditions see the state before dispatch. Effects and automatic
  lines see the running state, exactly like the concrete engine.
* Chance draws come from a schedule precomputed from the seed, because the
  engine draws a fixed number of times per automatics pass.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import opcodes as op
from .engine import Engine, GameState, Rng, random_percent, rng_after
from .sat import CnfFormula, Solver, emit_dimacs, solve_external
from .specialize import DARK_FALL, Auto, Command, ScriptLine, SpecializedGame

INPUT_BITS = 8
COUNTER_BITS = 16


class EncodingError(RuntimeError):
    """The encoded transition relation disagreed with the engine."""


class OracleBudgetExceeded(RuntimeError):
    pass


# -- state layout ----------------------------------------------------------


def _width(max_value: int) -> int:
    return max(1, max_value.bit_length())


def _to_signed(v: int) -> int:
    return v - (1 << COUNTER_BITS) if v >> (COUNTER_BITS - 1) else v


@dataclass(frozen=True)
class StateLayout:
    num_items: int
    num_rooms: int
    light_time: int
    endings: tuple[str, ...]
    loc_bits: int
    room_bits: int
    lamp_bits: int
    ended_bits: int

    @classmethod
    def for_game(cls, game: SpecializedGame) -> StateLayout:
        k = game.constants
        lamp_bits = _width(k.light_time) if k.light_time >= 0 and k.lamp_item is not None else 0
        return cls(
            num_items=k.num_items + 1,
            num_rooms=k.num_rooms,
            light_time=k.light_time,
            endings=tuple(s.label for s in game.ending_catalog),
            loc_bits=_width(k.num_rooms + 1),
            room_bits=_width(k.num_rooms),
            lamp_bits=lamp_bits,
            ended_bits=_width(len(game.ending_catalog)),
        )

    @property
    def carried(self) -> int:
        return self.num_rooms + 1

    def fields(self) -> list[tuple[str, int]]:
        out = [(f"item{i}", self.loc_bits) for i in range(self.num_items)]
        out.append(("room", self.room_bits))
        out += [(f"flag{i}", 1) for i in range(op.NUM_FLAGS)]
        out.append(("counter", COUNTER_BITS))
        out += [(f"counter{i}", COUNTER_BITS) for i in range(op.NUM_COUNTERS)]
        out += [(f"saved{i}", self.room_bits) for i in range(op.NUM_SAVED_ROOMS)]
        if self.lamp_bits:
            out.append(("lamp", self.lamp_bits))
        out.append(("ended", self.ended_bits))
        return out

    @property
    def total_bits(self) -> int:
        return sum(w for _, w in self.fields())

    def field_values(self, st: GameState) -> dict[str, int]:
        vals = {f"item{i}": loc for i, loc in enumerate(st.item_locations)}
        vals["room"] = st.current_room
        for i in range(op.NUM_FLAGS):
            vals[f"flag{i}"] = st.flags >> i & 1
        vals["counter"] = st.counter & 0xFFFF
        for i, c in enumerate(st.counters):
            vals[f"counter{i}"] = c & 0xFFFF
        for i, r in enumerate(st.saved_rooms):
            vals[f"saved{i}"] = r
        if self.lamp_bits:
            vals["lamp"] = st.lamp_fuel
        vals["ended"] = 0 if st.ended is None else self.endings.index(st.ended) + 1
        return vals

    def pack(self, st: GameState) -> list[int]:
        if len(st.item_locations) != self.num_items:
            raise ValueError("state has the wrong number of items")
        vals = self.field_values(st)
        bits = []
        for name, width in self.fields():
            v = vals[name]
            if v < 0 or v >> width:
                raise ValueError(f"{name}={v} does not fit in {width} bits")
            bits.extend(v >> i & 1 for i in range(width))
        return bits

    def unpack(self, bits) -> GameState:
        if len(bits) != self.total_bits:
            raise ValueError(f"expected {self.total_bits} bits, got {len(bits)}")
        vals = {}
        pos = 0
        for name, width in self.fields():
            vals[name] = sum(int(bool(bits[pos + i])) << i for i in range(width))
            pos += width
        locs = [vals[f"item{i}"] for i in range(self.num_items)]
        ended = vals["ended"]
        return GameState(
            item_locations=locs,
            current_room=vals["room"],
            flags=sum(vals[f"flag{i}"] << i for i in range(op.NUM_FLAGS)),
            counter=_to_signed(vals["counter"]),
            counters=[_to_signed(vals[f"counter{i}"]) for i in range(op.NUM_COUNTERS)],
            saved_rooms=[vals[f"saved{i}"] for i in range(op.NUM_SAVED_ROOMS)],
            lamp_fuel=vals["lamp"] if self.lamp_bits else self.light_time,
            carried_count=sum(1 for loc in locs if loc == self.carried),
            ended=None if ended == 0 else (self.endings[ended - 1]
                                           if ended <= len(self.endings) else f"?{ended}"),
        )


def pack_state(layout: StateLayout, st: GameState) -> list[int]:
    return layout.pack(st)


def unpack_state(layout: StateLayout, bits) -> GameState:
    return layout.unpack(bits)


def dynamic_fields(game: SpecializedGame) -> set[str]:
    """Fields that some transition can change; the rest stay at their initial value.

    Flags start clear, so a flag that nothing can set is static even if some
    effect clears it.
    """
    k = game.constants
    out = set()
    for cands in game.match_table.candidates:
        out.update(f"item{i}" for i in cands)
    if k.light_time != -1 and k.lamp_item is not None:
        out.update(("lamp", f"flag{op.DARK_FLAG}"))
    if any(any(r.exits) for r in game.db.rooms):
        out.add("room")
    if game.ending_catalog:
        out.add("ended")
    for line in game.lines:
        for e in line.effects:
            code, a = e.opcode, e.operands
            if code in (op.GET, op.DROP, op.DESTROY, op.DESTROY2, op.PUT, op.SUPERGET,
                        op.PUT_WITH):
                out.add(f"item{a[0]}")
            elif code == op.SWAP:
                out.update((f"item{a[0]}", f"item{a[1]}"))
            elif code == op.REFILL_LAMP:
                out.add(f"item{op.LAMP_ITEM}")
                if k.light_time >= 0:
                    out.add("lamp")
            elif code in (op.GOTO, op.DIE):
                out.add("room")
            elif code == op.SET_DARK:
                out.add(f"flag{op.DARK_FLAG}")
            elif code == op.SET_FLAG:
                out.add(f"flag{a[0]}")
            elif code == op.SET_FLAG0:
                out.add("flag0")
            elif code in (op.DEC_COUNTER, op.SET_COUNTER, op.ADD_COUNTER, op.SUB_COUNTER):
                out.add("counter")
            elif code == op.SELECT_COUNTER:
                out.update(("counter", f"counter{a[0]}"))
            elif code == op.SWAP_ROOM:
                out.update(("room", "saved0"))
            elif code == op.SWAP_SPECIFIC_ROOM:
                out.update(("room", f"saved{a[0]}"))
    return out


# -- symbolic state --------------------------------------------------------


@dataclass
class SymState:
    items: list[list[int]]
    room: list[int]
    flags: list[int]
    counter: list[int]
    counters: list[list[int]]
    saved: list[list[int]]
    lamp: list[int]
    ended: list[int]

    def copy(self) -> SymState:
        return SymState([list(x) for x in self.items], list(self.room), list(self.flags),
                        list(self.counter), [list(x) for x in self.counters],
                        [list(x) for x in self.saved], list(self.lamp), list(self.ended))

    def flatten(self) -> list[int]:
        out = [lit for bits in self.items for lit in bits]
        out += self.room + self.flags + self.counter
        for bits in self.counters:
            out += bits
        for bits in self.saved:
            out += bits
        return out + self.lamp + self.ended

    @classmethod
    def from_bits(cls, layout: StateLayout, lits: list[int]) -> SymState:
        pos = 0

        def take(n):
            nonlocal pos
            pos += n
            return list(lits[pos - n:pos])

        items = [take(layout.loc_bits) for _ in range(layout.num_items)]
        room = take(layout.room_bits)
        flags = take(op.NUM_FLAGS)
        counter = take(COUNTER_BITS)
        counters = [take(COUNTER_BITS) for _ in range(op.NUM_COUNTERS)]
        saved = [take(layout.room_bits) for _ in range(op.NUM_SAVED_ROOMS)]
        lamp = take(layout.lamp_bits)
        ended = take(layout.ended_bits)
        return cls(items, room, flags, counter, counters, saved, lamp, ended)


def initial_symbolic_state(f: CnfFormula, layout: StateLayout, game: SpecializedGame,
                           st: GameState, name: str = "state_0",
                           pin: bool = True) -> SymState:
    """Pre-state for the first step.

    Static fields become constants. Dynamic fields get fresh variables, fixed
    to ``st`` by unit clauses when ``pin`` is set, so that the first step has
    the same shape as every later one.
    """
    dyn = dynamic_fields(game)
    vals = layout.field_values(st)
    lits = []
    for fname, width in layout.fields():
        v = vals[fname]
        if fname in dyn:
            bits = f.fresh_vars(width)
            if pin:
                for i, b in enumerate(bits):
                    f.add_clause([b if v >> i & 1 else -b])
        else:
            bits = f.const_bits(v, width)
        lits.extend(bits)
    f.add_probe(name, lits)
    return SymState.from_bits(layout, lits)


# -- arithmetic helpers ----------------------------------------------------


def ule_const(f: CnfFormula, bits: list[int], c: int) -> int:
    """value(bits) <= c, unsigned."""
    if c < 0:
        return f.false
    if c >> len(bits):
        return f.true
    res = f.true
    for i, b in enumerate(bits):
        res = f.or_(-b, res) if c >> i & 1 else f.and_(-b, res)
    return res


def sle_const(f: CnfFormula, bits: list[int], c: int) -> int:
    """value(bits) <= c as 16-bit two's complement."""
    if c >= 0x7FFF:
        return f.true
    if c < -0x8000:
        return f.false
    flipped = bits[:-1] + [-bits[-1]]
    return ule_const(f, flipped, c + 0x8000)


def add_const(f: CnfFormula, bits: list[int], c: int) -> list[int]:
    carry = f.false
    out = []
    for i, b in enumerate(bits):
        if c >> i & 1:
            out.append(-f.xor(b, carry))
            carry = f.or_(b, carry)
        else:
            out.append(f.xor(b, carry))
            carry = f.and_(b, carry)
    return out


def at_least(f: CnfFormula, lits: list[int], k: int) -> int:
    if k <= 0:
        return f.true
    if k > len(lits):
        return f.false
    row = [f.true] + [f.false] * k
    for x in lits:
        row = [f.true] + [f.or_(row[j], f.and_(x, row[j - 1])) for j in range(1, k + 1)]
    return row[k]


def exactly(f: CnfFormula, lits: list[int], k: int) -> int:
    return f.and_(at_least(f, lits, k), -at_least(f, lits, k + 1))


# -- one step --------------------------------------------------------------


@dataclass
class StepEncoding:
    verb: list[int]
    noun: list[int]
    pre: SymState
    post: SymState
    fired: dict[str, int]
    draws: list[int]


class _StepEncoder:
    def __init__(self, f: CnfFormula, game: SpecializedGame, layout: StateLayout,
                 verb: list[int], noun: list[int], draws: list[int], pre: SymState,
                 lamp_needs_carry: bool):
        self.f = f
        self.game = game
        self.k = game.constants
        self.layout = layout
        self.verb = verb
        self.noun = noun
        self.draws = dict(zip(game.random_lines, draws))
        self.s = pre.copy()
        self.lamp_needs_carry = lamp_needs_carry
        self.alive = f.eq_const(pre.ended, 0)
        self.fired: dict[str, list[int]] = {s.label: [] for s in game.ending_catalog}
        self._site_index = {(s.line_index, s.position): i
                            for i, s in enumerate(game.ending_catalog)}

    # -- field helpers ----------------------------------------------------

    def loc_is(self, item: int, value: int) -> int:
        return self.f.eq_const(self.s.items[item], value)

    def room_bits_as_loc(self) -> list[int]:
        pad = self.layout.loc_bits - self.layout.room_bits
        return self.s.room + [self.f.false] * pad

    def is_here(self, item: int) -> int:
        return self.f.bits_equal(self.s.items[item], self.room_bits_as_loc())

    def is_carried(self, item: int) -> int:
        return self.loc_is(item, self.layout.carried)

    def carried_lits(self) -> list[int]:
        return [self.is_carried(i) for i in range(self.layout.num_items)]

    def is_dark(self) -> int:
        f = self.f
        flag = self.s.flags[op.DARK_FLAG]
        lamp = self.k.lamp_item
        if lamp is None:
            return flag
        return f.and_(flag, -self.is_carried(lamp), -self.is_here(lamp))

    def set_item(self, g: int, item: int, value: list[int]) -> None:
        self.s.items[item] = self.f.mux_bits(g, value, self.s.items[item])

    def const_loc(self, value: int) -> list[int]:
        return self.f.const_bits(value, self.layout.loc_bits)

    def end(self, g: int, site_index: int, label: str) -> None:
        f = self.f
        self.s.ended = f.mux_bits(g, f.const_bits(site_index + 1, self.layout.ended_bits),
                                  self.s.ended)
        self.alive = f.and_(self.alive, -g)
        self.fired[label].append(g)

    # -- conditions -------------------------------------------------------

    def condition(self, code: int, p: int) -> int:
        f, s = self.f, self.s
        if code == op.CARRIED:
            return self.is_carried(p)
        if code == op.HERE:
            return self.is_here(p)
        if code == op.PRESENT:
            return f.or_(self.is_carried(p), self.is_here(p))
        if code == op.AT:
            return f.eq_const(s.room, p)
        if code == op.NOT_HERE:
            return -self.is_here(p)
        if code == op.NOT_CARRIED:
            return -self.is_carried(p)
        if code == op.NOT_AT:
            return -f.eq_const(s.room, p)
        if code == op.FLAG:
            return s.flags[p]
        if code == op.NOT_FLAG:
            return -s.flags[p]
        if code == op.LOADED:
            return f.or_(*self.carried_lits())
        if code == op.NOT_LOADED:
            return -f.or_(*self.carried_lits())
        if code == op.NOT_PRESENT:
            return -f.or_(self.is_carried(p), self.is_here(p))
        if code == op.EXISTS:
            return -self.loc_is(p, 0)
        if code == op.NOT_EXISTS:
            return self.loc_is(p, 0)
        if code == op.COUNTER_LE:
            return sle_const(f, s.counter, p)
        if code == op.COUNTER_GT:
            return -sle_const(f, s.counter, p)
        if code == op.NOT_MOVED:
            return self.loc_is(p, self.k.initial_locations[p])
        if code == op.MOVED:
            return -self.loc_is(p, self.k.initial_locations[p])
        if code == op.COUNTER_EQ:
            return f.eq_const(s.counter, p) if p <= 0x7FFF else f.false
        raise ValueError(f"unknown condition opcode {code}")

    def conditions(self, line: ScriptLine) -> int:
        return self.f.and_(*(self.condition(c.opcode, c.param) for c in line.conditions))

    # -- effects ----------------------------------------------------------

    def run_line(self, line: ScriptLine, guard: int) -> None:
        f, k = self.f, self.k
        for pos, e in enumerate(line.effects):
            code, a = e.opcode, e.operands
            if e.message is not None or code in (
                    op.NOP, op.NOP89, op.CLEAR_SCREEN, op.SAVE_GAME, op.LOOK, op.LOOK2,
                    op.PAUSE, op.INVENTORY, op.PRINT_COUNTER, op.PRINT_NOUN,
                    op.PRINT_NOUN_NL, op.NEWLINE, op.CONTINUE):
                continue
            g = f.and_(guard, self.alive)
            if f.const_value(g) is False:
                continue
            s = self.s
            if code == op.GET:
                room_left = -at_least(f, self.carried_lits(), k.max_carry)
                self.set_item(f.and_(g, room_left), a[0], self.const_loc(k.carried))
            elif code == op.DROP:
                self.set_item(g, a[0], self.room_bits_as_loc())
            elif code == op.SUPERGET:
                self.set_item(g, a[0], self.const_loc(k.carried))
            elif code == op.GOTO:
                s.room = f.mux_bits(g, f.const_bits(a[0], self.layout.room_bits), s.room)
            elif code in (op.DESTROY, op.DESTROY2):
                self.set_item(g, a[0], self.const_loc(0))
            elif code == op.SET_DARK:
                s.flags[op.DARK_FLAG] = f.or_(g, s.flags[op.DARK_FLAG])
            elif code == op.CLEAR_DARK:
                s.flags[op.DARK_FLAG] = f.and_(-g, s.flags[op.DARK_FLAG])
            elif code == op.SET_FLAG:
                s.flags[a[0]] = f.or_(g, s.flags[a[0]])
            elif code == op.CLEAR_FLAG:
                s.flags[a[0]] = f.and_(-g, s.flags[a[0]])
            elif code == op.SET_FLAG0:
                s.flags[0] = f.or_(g, s.flags[0])
            elif code == op.CLEAR_FLAG0:
                s.flags[0] = f.and_(-g, s.flags[0])
            elif code == op.DIE:
                s.flags[op.DARK_FLAG] = f.and_(-g, s.flags[op.DARK_FLAG])
                s.room = f.mux_bits(g, f.const_bits(k.num_rooms, self.layout.room_bits), s.room)
            elif code == op.PUT:
                where = k.carried if a[1] == op.CARRIED_EXTERNAL else a[1]
                self.set_item(g, a[0], self.const_loc(where))
            elif code == op.GAME_OVER:
                site = self._site_index[(line.line_index, pos)]
                self.end(g, site, self.game.ending_catalog[site].label)
            elif code == op.SCORE:
                stored = [self.loc_is(i, k.treasure_room) for i in k.treasures]
                win = f.and_(g, exactly(f, stored, k.num_treasures))
                site = self._site_index[(line.line_index, pos)]
                self.end(win, site, self.game.ending_catalog[site].label)
            elif code == op.REFILL_LAMP:
                if self.layout.lamp_bits:
                    s.lamp = f.mux_bits(g, f.const_bits(k.light_time, self.layout.lamp_bits),
                                        s.lamp)
                self.set_item(g, op.LAMP_ITEM, self.const_loc(k.carried))
            elif code == op.SWAP:
                la, lb = s.items[a[0]], s.items[a[1]]
                self.set_item(g, a[0], lb)
                self.set_item(g, a[1], la)
            elif code == op.PUT_WITH:
                self.set_item(g, a[0], list(s.items[a[1]]))
            elif code == op.DEC_COUNTER:
                ok = f.and_(g, -s.counter[-1])
                s.counter = f.mux_bits(ok, add_const(f, s.counter, 0xFFFF), s.counter)
            elif code == op.SET_COUNTER:
                s.counter = f.mux_bits(g, f.const_bits(a[0] & 0xFFFF, COUNTER_BITS), s.counter)
            elif code == op.SELECT_COUNTER:
                cur, other = s.counter, s.counters[a[0]]
                s.counter = f.mux_bits(g, other, cur)
                s.counters[a[0]] = f.mux_bits(g, cur, other)
            elif code == op.ADD_COUNTER:
                s.counter = f.mux_bits(g, add_const(f, s.counter, a[0] & 0xFFFF), s.counter)
            elif code == op.SUB_COUNTER:
                diff = add_const(f, s.counter, (-a[0]) & 0xFFFF)
                below = sle_const(f, diff, -2)
                floored = f.mux_bits(below, f.const_bits(0xFFFF, COUNTER_BITS), diff)
                s.counter = f.mux_bits(g, floored, s.counter)
            elif code in (op.SWAP_ROOM, op.SWAP_SPECIFIC_ROOM):
                slot = 0 if code == op.SWAP_ROOM else a[0]
                cur, other = s.room, s.saved[slot]
                s.room = f.mux_bits(g, other, cur)
                s.saved[slot] = f.mux_bits(g, cur, other)
            else:
                raise ValueError(f"cannot encode effect opcode {code}")

    def chain(self, start: int, guard: int) -> None:
        lines = self.game.lines
        j = start
        while j < len(lines) and lines[j].continuation_only:
            self.run_line(lines[j], self.f.and_(guard, self.conditions(lines[j])))
            j += 1

    # -- phases -----------------------------------------------------------

    def command_phase(self) -> int:
        """Scripted command dispatch; returns the 'some line fired' literal."""
        f = self.f
        verb_is = {}
        done = f.false
        pre_conds = {}
        lines = self.game.lines
        for i, line in enumerate(lines):
            t = line.trigger
            if not isinstance(t, Command):
                continue
            if t.verb not in verb_is:
                verb_is[t.verb] = f.eq_const(self.verb, t.verb)
            trig = verb_is[t.verb]
            if not t.noun_wildcard:
                trig = f.and_(trig, f.eq_const(self.noun, t.noun))
            if f.const_value(trig) is False:
                continue
            pre_conds[i] = (trig, self.conditions(line))
        alive0 = self.alive
        for i, (trig, cond) in pre_conds.items():
            fire = f.and_(alive0, -done, trig, cond)
            done = f.or_(done, fire)
            self.run_line(lines[i], fire)
            if lines[i].continues:
                self.chain(i + 1, fire)
        return done

    def builtins(self, done: int) -> None:
        f, k, s = self.f, self.k, self.s
        base = f.and_(self.alive, -done)
        noun_nonzero = -f.eq_const(self.noun, 0)

        go = f.and_(base, f.eq_const(self.verb, op.VERB_GO))
        if f.const_value(go) is not False:
            noun_dir = [f.eq_const(self.noun, d) for d in range(1, 7)]
            sels = []
            bit_sources = [[] for _ in range(self.layout.room_bits)]
            for r, room in enumerate(self.game.db.rooms):
                here = f.eq_const(s.room, r)
                for d, target in enumerate(room.exits):
                    if target == 0:
                        continue
                    sel = f.and_(here, noun_dir[d])
                    sels.append(sel)
                    for b in range(self.layout.room_bits):
                        if target >> b & 1:
                            bit_sources[b].append(sel)
            has_exit = f.or_(*sels)
            new_room = [f.or_(*src) for src in bit_sources]
            dark = self.is_dark()
            fall = f.and_(go, f.or_(*noun_dir), -has_exit, dark)
            s.room = f.mux_bits(f.and_(go, has_exit), new_room, s.room)
            if f.const_value(fall) is not False:
                if DARK_FALL not in self.game.ending_catalog:
                    raise EncodingError("dark fall reachable but not catalogued")
                self.end(fall, self.game.ending_catalog.index(DARK_FALL), DARK_FALL.label)

        table = self.game.match_table
        get = f.and_(base, f.eq_const(self.verb, op.VERB_GET), noun_nonzero,
                     -at_least(f, self.carried_lits(), k.max_carry))
        drop = f.and_(base, f.eq_const(self.verb, op.VERB_DROP), noun_nonzero)
        get_guard: dict[int, list[int]] = {}
        drop_guard: dict[int, list[int]] = {}
        room_loc = self.room_bits_as_loc()
        for n, cands in enumerate(table.candidates):
            if n == 0 or not cands:
                continue
            noun_n = f.eq_const(self.noun, n)
            for verb_guard, test, out in ((get, self.is_here, get_guard),
                                          (drop, self.is_carried, drop_guard)):
                g = f.and_(verb_guard, noun_n)
                if f.const_value(g) is False:
                    continue
                for item in cands:
                    at = test(item)
                    out.setdefault(item, []).append(f.and_(g, at))
                    g = f.and_(g, -at)
        for item, gs in get_guard.items():
            self.set_item(f.or_(*gs), item, self.const_loc(k.carried))
        for item, gs in drop_guard.items():
            self.set_item(f.or_(*gs), item, room_loc)

    def lamp_phase(self) -> None:
        f, k, s = self.f, self.k, self.s
        if k.light_time == -1 or k.lamp_item is None:
            return
        lit = self.is_carried(k.lamp_item)
        if not self.lamp_needs_carry:
            lit = f.or_(lit, self.is_here(k.lamp_item))
        g = f.and_(self.alive, lit, -f.eq_const(s.lamp, 0))
        s.lamp = f.mux_bits(g, add_const(f, s.lamp, (1 << len(s.lamp)) - 1), s.lamp)
        out = f.and_(g, f.eq_const(s.lamp, 0))
        s.flags[op.DARK_FLAG] = f.or_(out, s.flags[op.DARK_FLAG])

    def automatics(self) -> None:
        f = self.f
        lines = self.game.lines
        for i, line in enumerate(lines):
            t = line.trigger
            if not isinstance(t, Auto) or t.chance == 0:
                continue
            draw = f.true if t.chance >= 100 else self.draws[i]
            fire = f.and_(self.alive, draw, self.conditions(line))
            self.run_line(line, fire)
            if line.continues:
                self.chain(i + 1, fire)

    def encode(self) -> StepEncoding:
        pre = self.s.copy()
        done = self.command_phase()
        self.builtins(done)
        self.lamp_phase()
        self.automatics()
        f = self.f
        fired = {label: f.or_(*gs) for label, gs in self.fired.items()}
        return StepEncoding(self.verb, self.noun, pre, self.s,
                            fired, [self.draws[i] for i in self.game.random_lines])


def input_bits(f: CnfFormula, game: SpecializedGame, k: int) -> tuple[list[int], list[int]]:
    verb = f.fresh_vars(INPUT_BITS, f"input_verb_{k}")
    noun = f.fresh_vars(INPUT_BITS, f"input_noun_{k}")
    nw = game.constants.num_words
    f.add_clause([ule_const(f, verb, nw)])
    f.add_clause([ule_const(f, noun, nw)])
    return verb, noun


def encode_step(f: CnfFormula, game: SpecializedGame, layout: StateLayout, k: int,
                schedule: list[bool] | None, pre: SymState, *,
                lamp_needs_carry: bool = False) -> StepEncoding:
    """Add move ``k`` to ``f``.

    ``schedule`` holds this move's draw outcomes, one per chance line; None
    makes the draws free variables (probe ``random_<k>``).
    """
    verb, noun = input_bits(f, game, k)
    if schedule is None:
        draws = f.fresh_vars(len(game.random_lines), f"random_{k}") if game.random_lines else []
    else:
        draws = [f.const(b) for b in schedule]
    step = _StepEncoder(f, game, layout, verb, noun, draws, pre, lamp_needs_carry).encode()
    f.add_probe(f"state_{k + 1}", step.post.flatten())
    return step


# -- random schedule -------------------------------------------------------


def precompute_random_schedule(game: SpecializedGame, seed: int, max_moves: int
                               ) -> list[list[bool]]:
    """Draw outcomes for each automatics pass: pass 0 runs before the first
    move, pass k+1 at the end of move k."""
    if not game.random_lines:
        return []
    rng = Rng(seed)
    chances = [game.lines[i].trigger.chance for i in game.random_lines]
    return [[random_percent(rng, c) for c in chances] for _ in range(max_moves + 1)]


def draw_outcomes(game: SpecializedGame, rng: Rng) -> list[bool]:
    """Outcomes the next automatics pass would draw from ``rng`` (not advanced)."""
    probe = Rng(rng.state)
    return [random_percent(probe, game.lines[i].trigger.chance) for i in game.random_lines]


# -- bounded solving -------------------------------------------------------


@dataclass
class Trace:
    moves: list[tuple[int, int]]
    ending: str
    bound: int
    verified: bool = True


@dataclass
class ExhaustedAtBound:
    bound: int


@dataclass
class Unknown:
    reason: str
    bound: int


@dataclass
class Attempt:
    bound: int
    num_vars: int
    num_clauses: int
    encode_ms: float
    solve_ms: float
    status: str


@dataclass
class SolveResult:
    outcome: Trace | ExhaustedAtBound | Unknown
    attempts: list[Attempt] = field(default_factory=list)


@dataclass
class Unrolling:
    formula: CnfFormula
    steps: list[StepEncoding]
    goal: int


def unroll(game: SpecializedGame, start: GameState, schedule: list[list[bool]] | None,
           bound: int, goals: set[str], *, layout: StateLayout | None = None,
           lamp_needs_carry: bool = False) -> Unrolling:
    """Formula for reaching a goal ending within ``bound`` moves from ``start``.

    ``schedule`` is indexed by pass; None leaves every draw free.
    """
    layout = layout or StateLayout.for_game(game)
    f = CnfFormula()
    s = initial_symbolic_state(f, layout, game, start)
    steps = []
    goal_lits = []
    for k in range(bound):
        draws = None if schedule is None else (schedule[k + 1] if schedule else [])
        step = encode_step(f, game, layout, k, draws, s, lamp_needs_carry=lamp_needs_carry)
        steps.append(step)
        goal_lits += [lit for label, lit in step.fired.items() if label in goals]
        s = step.post
    goal = f.or_(*goal_lits)
    f.add_clause([goal])
    return Unrolling(f, steps, goal)


def decode_moves(unrolling: Unrolling, model_value) -> tuple[list[tuple[int, int]], str | None]:
    """Inputs up to and including the first step where an ending fired."""
    moves = []
    for step in unrolling.steps:
        verb = sum(model_value(b) << i for i, b in enumerate(step.verb))
        noun = sum(model_value(b) << i for i, b in enumerate(step.noun))
        moves.append((verb, noun))
        for label, lit in step.fired.items():
            if model_value(lit):
                return moves, label
    return moves, None


def solve_bounded(game: SpecializedGame, seed: int, max_moves: int, goals=None, *,
                  free_random: bool = False, conflict_budget: int = -1,
                  backend: str | None = None, external_solver: str | None = None,
                  dimacs_path=None, lamp_needs_carry: bool = False,
                  min_moves: int = 1) -> SolveResult:
    """Iterative deepening over the bound; the first model found is replayed
    in the engine before it is reported."""
    if max_moves < 0:
        raise ValueError("max_moves must be >= 0")
    goals = set(s.label for s in game.ending_catalog) if goals is None else set(goals)
    engine = Engine(game, lamp_needs_carry=lamp_needs_carry)
    rng = Rng(seed)
    start, first = engine.start(rng)
    result = SolveResult(ExhaustedAtBound(0))
    if start.ended is not None:
        result.outcome = (Trace([], start.ended, 0) if start.ended in goals
                          else ExhaustedAtBound(max_moves))
        return result
    schedule = None if free_random else precompute_random_schedule(game, seed, max_moves)
    layout = StateLayout.for_game(game)
    for bound in range(max(1, min_moves), max_moves + 1):
        t0 = time.perf_counter()
        u = unroll(game, start, schedule, bound, goals, layout=layout,
                   lamp_needs_carry=lamp_needs_carry)
        t1 = time.perf_counter()
        if dimacs_path is not None:
            with open(dimacs_path, "w") as fh:
                fh.write(emit_dimacs(u.formula, comments=True))
        if external_solver:
            outcome = solve_external(u.formula, external_solver)
        else:
            outcome = Solver(u.formula, backend).solve(conflict_budget=conflict_budget)
        t2 = time.perf_counter()
        result.attempts.append(Attempt(bound, u.formula.num_vars, len(u.formula.clauses),
                                       (t1 - t0) * 1000, (t2 - t1) * 1000, outcome.status))
        if outcome.status == "UNKNOWN":
            result.outcome = Unknown("conflict budget exhausted", bound)
            return result
        if outcome.status == "SAT":
            moves, label = decode_moves(u, outcome.value)
            if label is None:
                raise EncodingError("model satisfies the goal but no ending literal is true")
            trace = Trace(moves, label, bound, verified=not free_random)
            if not free_random:
                _verify(game, seed, trace, lamp_needs_carry)
            result.outcome = trace
            return result
    result.outcome = ExhaustedAtBound(max_moves)
    return result


def _verify(game: SpecializedGame, seed: int, trace: Trace, lamp_needs_carry: bool) -> None:
    from .engine import replay_trace

    report = replay_trace(game, seed, trace.moves, lamp_needs_carry=lamp_needs_carry)
    if report.ending != trace.ending or report.ending_move != len(trace.moves):
        raise EncodingError(
            f"solver trace ends with {trace.ending} at move {len(trace.moves)} but the "
            f"engine replay gives {report.ending} at move {report.ending_move}")


# -- explicit-state oracle -------------------------------------------------


def relevant_inputs(game: SpecializedGame) -> list[tuple[int, int]]:
    """One representative per class of inputs with identical effect on the state.

    Verbs that no line or built-in responds to behave like the null verb 0.
    For a given verb, nouns that no trigger or built-in distinguishes behave
    like any one of them.
    """
    nw = game.constants.num_words
    line_nouns: dict[int, set[int]] = {}
    for line in game.lines:
        t = line.trigger
        if isinstance(t, Command):
            line_nouns.setdefault(t.verb, set()).add(t.noun)
    builtin = {v for v in (op.VERB_GO, op.VERB_GET, op.VERB_DROP) if v <= nw}
    inputs = [(0, 0)]
    for verb in sorted((set(line_nouns) | builtin) - {0}):
        nouns = set(line_nouns.get(verb, ())) | {0}
        if verb == op.VERB_GO:
            nouns.update(range(1, min(6, nw) + 1))
        if verb in (op.VERB_GET, op.VERB_DROP):
            nouns.update(n for n, c in enumerate(game.match_table.candidates) if c)
        other = next((n for n in range(nw + 1) if n not in nouns), None)
        if other is not None:
            nouns.add(other)
        inputs.extend((verb, n) for n in sorted(nouns) if n <= nw)
    return inputs


def bfs_oracle(game: SpecializedGame, seed: int, max_depth: int, goals=None, *,
               state_budget: int = 2_000_000, lamp_needs_carry: bool = False
               ) -> list[tuple[int, int]] | None:
    """Shortest move sequence reaching a goal ending, or None within max_depth."""
    goals = set(s.label for s in game.ending_catalog) if goals is None else set(goals)
    engine = Engine(game, lamp_needs_carry=lamp_needs_carry)
    start, _ = engine.start(Rng(seed))
    if start.ended is not None:
        return [] if start.ended in goals else None
    slots = game.auto_rng_slots
    inputs = relevant_inputs(game)
    frontier = [(start, [])]
    seen = {start.key()}
    stored = 1
    for depth in range(max_depth):
        pass_rng = rng_after(seed, slots * (depth + 1)).state
        if slots:
            seen = set()
        nxt = []
        for st, path in frontier:
            for verb, noun in inputs:
                s2 = st.copy()
                result = engine.perform_turn(s2, Rng(pass_rng), verb, noun)
                if result.ending is not None:
                    if result.ending[1] in goals:
                        return path + [(verb, noun)]
                    continue
                key = s2.key()
                if key in seen:
                    continue
                seen.add(key)
                stored += 1
                if stored > state_budget:
                    raise OracleBudgetExceeded(f"more than {state_budget} states at depth "
                                               f"{depth + 1}")
                nxt.append((s2, path + [(verb, noun)]))
        frontier = nxt
        if not frontier:
            break
    return None


# -- one-step differential check -------------------------------------------


class StepChecker:
    """One encoded move with a free pre-state, inputs and draws.

    ``post_state`` fixes those by assumptions and reads the successor from the
    model, for comparison with the engine.
    """

    def __init__(self, game: SpecializedGame, *, backend: str | None = None,
                 lamp_needs_carry: bool = False):
        self.game = game
        self.layout = StateLayout.for_game(game)
        self.dynamic = dynamic_fields(game)
        f = CnfFormula()
        initial = Engine(game).initial_state()
        pre = initial_symbolic_state(f, self.layout, game, initial, "pre", pin=False)
        self.step = encode_step(f, game, self.layout, 0, None, pre,
                                lamp_needs_carry=lamp_needs_carry)
        self.formula = f
        self.solver = Solver(f, backend)

    def representable(self, st: GameState) -> bool:
        """True if ``st`` agrees with the initial state on every static field."""
        vals = self.layout.field_values(st)
        init = self.layout.field_values(Engine(self.game).initial_state())
        return all(vals[n] == init[n] for n, _ in self.layout.fields() if n not in self.dynamic)

    def post_state(self, st: GameState, verb: int, noun: int, draws: list[bool]
                   ) -> tuple[GameState, dict[str, bool]]:
        f = self.formula
        assume = []
        for lit, bit in zip(f.probe("pre"), self.layout.pack(st)):
            if f.is_const(lit):
                if f.const_value(lit) != bool(bit):
                    raise ValueError("state differs from the initial state on a static field")
                continue
            assume.append(lit if bit else -lit)
        for bits, value in ((self.step.verb, verb), (self.step.noun, noun)):
            assume += [b if value >> i & 1 else -b for i, b in enumerate(bits)]
        assume += [d if v else -d for d, v in zip(self.step.draws, draws)]
        out = self.solver.solve(assume)
        if out.status != "SAT":
            raise EncodingError(f"step relation has no successor ({out.status})")
        post = self.layout.unpack([out.value(lit) for lit in self.step.post.flatten()])
        fired = {label: out.value(lit) for label, lit in self.step.fired.items()}
        return post, fired
