from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from sagasolve import opcodes as op
from sagasolve.builder import GameBuilder
from sagasolve.engine import (Engine, GameEnded, RawEngine, ReplayError, Rng, TraceFormatError,
                              UnknownWord, count_carried, format_trace, parse_player_words,
                              parse_trace, random_percent, replay_trace, rng_after, wrap16)
from sagasolve.gen import random_game
from sagasolve.specialize import specialize_game

from helpers.differential import differential

# First outputs of the recurrence from seed 1979, computed independently.
LCG_1979 = [2013295832, 1927004209, 1929769750, 1654482071, 359925380]


def test_rng_sequence():
    r = Rng(1979)
    assert [r.next() for _ in range(5)] == LCG_1979


def test_random_percent_golden():
    assert random_percent(Rng(1979), 50) is True   # (2013295832 // 65536) % 100 == 20
    assert random_percent(Rng(1979), 20) is False
    assert random_percent(Rng(1979), 0) is False
    assert rng_after(1979, 3).state == LCG_1979[2]


@settings(max_examples=200)
@given(st.integers(0, 2**31 - 1))
def test_percent_zero_never_fires(seed):
    assert not random_percent(Rng(seed), 0)


@pytest.mark.parametrize("v,expected", [(32767, 32767), (32768, -32768), (-32769, 32767), (-1, -1)])
def test_wrap16(v, expected):
    assert wrap16(v) == expected


def test_initial_state(games):
    g = games["tutorial4"]
    st = Engine(g).initial_state()
    assert st.current_room == 1
    assert st.carried_count == 0 == count_carried(st, g.constants.carried)
    assert st.flags == 0 and st.counter == 0 and st.counters == [0] * 16


def test_item_initially_carried_counts():
    b = GameBuilder()
    b.room("hall")
    b.item("Lamp", op.CARRIED_EXTERNAL, "LAMP")
    assert Engine(specialize_game(b.build())).initial_state().carried_count == 1


def test_carried_count_after_get_and_all(games):
    g = games["mini_treasure"]
    e = Engine(g)
    st, _ = e.start(Rng())
    e.perform_turn(st, Rng(), op.VERB_GO, 3)
    e.perform_turn(st, Rng(), op.VERB_GET, g.db.nouns.index("PEARL"))
    assert st.carried_count == 1 == count_carried(st, g.constants.carried)
    st.item_locations = [g.constants.carried] * len(st.item_locations)
    assert count_carried(st, g.constants.carried) == g.db.header.num_items + 1


def test_vampire_bites_without_cross(games):
    g = games["tutorial4"]
    report = replay_trace(g, 1979, [(1, 1), (1, 4)])
    assert report.ending == "line5.1:game_over" and report.ending_move == 2
    assert "Vampire bites me! I'm dead!" in report.move_messages[-1]


def test_open_door_without_key_is_locked(games):
    g = games["tutorial4"]
    e = Engine(g)
    st, _ = e.start(Rng())
    st.current_room = 4
    before = st.copy()
    res = e.perform_turn(st, Rng(), g.db.verbs.index("OPEN"), g.db.nouns.index("DOOR"))
    assert res.messages == ["It's locked."]
    before.turn_index += 1
    assert st == before


def test_get_absent_item(games):
    g = games["tutorial4"]
    e = Engine(g)
    st, _ = e.start(Rng())
    before = st.copy()
    res = e.perform_turn(st, Rng(), op.VERB_GET, g.db.nouns.index("KEY"))
    assert res.messages == ["It is beyond my power to do that."]
    before.turn_index += 1
    assert st == before


def test_match_up_item(games):
    g = games["tutorial4"]
    key = g.db.nouns.index("KEY")
    for cls in (Engine, RawEngine):
        e = cls(g)
        st = e.initial_state()
        assert e.match_up_item(key, 3, st) == 3
        assert e.match_up_item(key, 1, st) is None
    d = games["duplicate_keys"]
    for cls in (Engine, RawEngine):
        e = cls(d)
        assert e.match_up_item(d.db.nouns.index("KEY"), 1, e.initial_state()) == 0


def test_get_takes_lowest_numbered_duplicate(games):
    d = games["duplicate_keys"]
    e = Engine(d)
    st, _ = e.start(Rng())
    e.perform_turn(st, Rng(), op.VERB_GET, d.db.nouns.index("KEY"))
    assert st.item_locations[0] == d.constants.carried
    assert st.item_locations[1:] == [1, 1]


def test_capacity_limit():
    b = GameBuilder(max_carry=1)
    b.room("hall")
    b.item("Rock", 1, "ROCK")
    b.item("Stick", 1, "STICK")
    g = specialize_game(b.build())
    e = Engine(g)
    st, _ = e.start(Rng())
    e.perform_turn(st, Rng(), op.VERB_GET, g.db.nouns.index("ROCK"))
    res = e.perform_turn(st, Rng(), op.VERB_GET, g.db.nouns.index("STICK"))
    assert res.messages == ["I've too much to carry. "]
    assert st.item_locations[1] == 1


def test_empty_trace_has_no_ending(games):
    report = replay_trace(games["tutorial4"], 1979, [])
    assert report.ending is None and report.ending_move is None


def test_mini_treasure_winning_trace(games):
    g = games["mini_treasure"]
    pearl = g.db.nouns.index("PEARL")
    moves = [(1, 3), (10, pearl), (1, 4), (18, pearl), (g.db.verbs.index("SCORE"), 0)]
    report = replay_trace(g, 1979, moves)
    assert report.ending == "line0.0:score_win" and report.ending_move == 5
    assert replay_trace(g, 1979, moves, raw=True).ending == "line0.0:score_win"


def test_move_after_ending_is_rejected(games):
    with pytest.raises(ReplayError) as e:
        replay_trace(games["tutorial4"], 1979, [(1, 1), (1, 4), (1, 3)])
    assert e.value.move_index == 3
    st, _ = Engine(games["tutorial4"]).start(Rng())
    st.ended = "line5.1:game_over"
    with pytest.raises(GameEnded):
        Engine(games["tutorial4"]).perform_turn(st, Rng(), 0, 0)


def test_out_of_range_words_rejected(games):
    e = Engine(games["tutorial4"])
    st, _ = e.start(Rng())
    with pytest.raises(ValueError):
        e.perform_turn(st, Rng(), games["tutorial4"].constants.num_words + 1, 0)


def test_dark_fall():
    b = GameBuilder()
    b.verb("SCORE")
    pit = b.room("pit edge")
    b.room("pit")
    b.auto(100, effects=[(op.SET_DARK,)])
    b.player_room = pit
    g = specialize_game(b.build())
    report = replay_trace(g, 1979, [(op.VERB_GO, 1)])
    assert report.ending == "builtin:dark_fall"
    assert "I fell down and broke my neck." in report.move_messages[0]


def test_describe_room_withheld_in_dark(games):
    g = games["dark_cellar"]
    e = Engine(g)
    report = replay_trace(g, 1979, [(1, 6), (1, 6)])
    assert e.describe_room(report.state) == "I can't see. It is too dark!"
    st, _ = e.start(Rng())
    assert "candle-lit hall" in e.describe_room(st)


# -- words and traces ------------------------------------------------------


def test_parse_player_words(games):
    db = games["tutorial4"].db
    assert parse_player_words("GO NORTH", db) == (1, 1)
    assert parse_player_words("go north", db) == (1, 1)
    assert parse_player_words("n", db) == (1, 1)
    assert parse_player_words("NORTH", db) == (1, 1)
    assert parse_player_words("SCO", db) == (db.verbs.index("SCORE"), 0)
    assert parse_player_words("GET CROSSBOW", db) == (10, db.nouns.index("CROSS"))
    with pytest.raises(UnknownWord):
        parse_player_words("", db)
    with pytest.raises(UnknownWord):
        parse_player_words("XYZZY", db)


def test_trace_round_trip(games):
    db = games["tutorial4"].db
    moves = [(1, 1), (10, 9), (2, 0)]
    text = format_trace(7, moves, db)
    assert text.splitlines()[0] == "seed 7"
    assert parse_trace(text) == (7, moves)


@pytest.mark.parametrize("text,line", [("seed x\n", 1), ("seed 1\n1 2\nfoo\n", 3),
                                       ("1 2\n", 1), ("seed 1\n1 -2\n", 2), ("", 1)])
def test_trace_format_errors(text, line):
    with pytest.raises(TraceFormatError) as e:
        parse_trace(text)
    assert e.value.line_no == line


# -- raw interpreter vs specialized executor -------------------------------


def test_differential_10k_turns_over_random_databases():
    # Games whose opening automatics already end them contribute no turns and
    # are not counted.
    total, dbs, seed = 0, 0, 0
    while dbs < 30:
        rng = random.Random(seed)
        db = random_game(rng, lamp=seed % 3 == 0, max_items=12 if seed % 3 == 0 else 8)
        played, bad = differential(db, seed, 340)
        assert bad == 0
        if played:
            total += played
            dbs += 1
        seed += 1
    assert dbs >= 25 and total >= 10_000


@pytest.mark.parametrize("name", ["tutorial4", "tutorial3", "dark_cellar", "duplicate_keys"])
def test_differential_on_fixtures(games, name):
    assert differential(games[name].db, 11, 400) == (400, 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_differential_property(seed):
    db = random_game(random.Random(seed), lamp=seed % 2 == 0)
    assert differential(db, seed, 40)[1] == 0
