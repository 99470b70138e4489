from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from sagasolve import opcodes as op
from sagasolve.builder import GameBuilder
from sagasolve.dbformat import RawAction, validate
from sagasolve.engine import Engine, RawEngine, Rng
from sagasolve.gen import random_game
from sagasolve.specialize import (DARK_FALL, Auto, Command, checked_specialize, decode_action_word,
                                  decode_condition, decode_vocab, dump_text, dump_tree,
                                  lower_line, prune_placeholders, specialize_game)


@pytest.mark.parametrize("raw,expected", [(0, (0, 0)), (21, (1, 1)), (85, (5, 4))])
def test_decode_condition(raw, expected):
    assert decode_condition(raw) == expected


@pytest.mark.parametrize("raw,expected", [(0, (0, 0)), (150, (1, 0)), (9353, (62, 53))])
def test_decode_action_word(raw, expected):
    assert decode_action_word(raw) == expected


def test_decode_vocab():
    assert decode_vocab(100) == Auto(100)
    assert decode_vocab(1507) == Command(10, 7, False)
    assert decode_vocab(150) == Command(1, 0, True)
    assert decode_vocab(0) == Auto(0)


def test_empty_line_lowers_to_noops():
    line = lower_line(RawAction(0, (0, 0, 0, 0, 0), (0, 0)), 0)
    assert line.conditions == ()
    assert [e.opcode for e in line.effects] == [op.NOP] * 4
    assert line.ending_sites == ()


def test_tutorial4_open_door_line(games):
    g = games["tutorial4"]
    line = g.lines[3]
    assert isinstance(line.trigger, Command)
    assert g.db.verbs[line.trigger.verb] == "OPEN"
    assert g.db.nouns[line.trigger.noun] == "DOOR"
    assert [(c.opcode, c.param) for c in line.conditions] == [(op.HERE, 0)]
    swaps = [e for e in line.effects if e.opcode == op.SWAP]
    assert len(swaps) == 1 and swaps[0].operands == (0, 2)


def test_tutorial4_match_table(games):
    g = games["tutorial4"]
    noun = {w: i for i, w in enumerate(g.db.nouns)}
    assert g.match_table.lookup(noun["KEY"]) == (3,)
    assert g.match_table.lookup(noun["COIN"]) == (5,)
    assert g.match_table.lookup(noun["CROSS"]) == (1,)
    assert g.match_table.lookup(noun["DOOR"]) == ()
    assert g.match_table.lookup(10_000) == ()


def test_duplicate_auto_get_lists_all_lowest_first(games):
    g = games["duplicate_keys"]
    assert g.match_table.lookup(g.db.nouns.index("KEY")) == (0, 1, 2)


def test_tutorial4_ending_catalog(games):
    g = games["tutorial4"]
    labels = [s.label for s in g.ending_catalog]
    assert labels == ["line0.0:score_win", "line5.1:game_over"]
    assert g.lines[5].ending_sites == ("line5.1:game_over",)


def test_dark_fall_only_when_darkness_possible(games):
    assert DARK_FALL in games["dark_cellar"].ending_catalog
    assert DARK_FALL not in games["tutorial4"].ending_catalog


def test_auto_rng_slots(games):
    assert games["mini_treasure"].auto_rng_slots == 0
    assert games["tutorial3"].auto_rng_slots == 1
    assert games["tutorial4"].auto_rng_slots == 0


@pytest.mark.parametrize("name", ["tutorial4", "tutorial3", "dark_cellar", "unwinnable"])
def test_line_count_preserved(games, name):
    g = games[name]
    assert len(g.lines) == g.db.header.num_actions + 1
    assert [l.line_index for l in g.lines] == list(range(len(g.lines)))


def test_opcode_61_is_not_an_ending():
    b = GameBuilder()
    b.verb("JUMP")
    b.room("ledge")
    b.command("JUMP", None, effects=[(op.DIE,)])
    assert specialize_game(b.build()).ending_catalog == ()


def test_checked_specialize_rejects_invalid(games):
    db = games["mini_treasure"].db
    bad = type(db)(db.header, db.actions, db.verbs, db.nouns, db.rooms[:-1], db.messages,
                   db.items, db.action_titles)
    with pytest.raises(ValueError, match="rooms"):
        checked_specialize(bad)


# -- pruning ---------------------------------------------------------------


def _placeholder_game():
    b = GameBuilder()
    b.verb("RUB")
    b.verb("WAVE")
    hall = b.room("hall")
    b.item("Lamp", hall, "LAMP")
    b.item(".", hall)
    b.item("Wand", hall, "WAND")
    b.command("RUB", "LAMP", conds=[(op.PRESENT, 1)], effects=[("msg", "Nothing happens.")])
    b.command("WAVE", "WAND", conds=[(op.CARRIED, 2)], effects=[("msg", "Sparks!"),
                                                              (op.PUT, 2, hall)])
    return b.build()


def test_prune_is_identity_without_placeholders(games):
    db = games["tutorial4"].db
    assert prune_placeholders(db) == db


def test_prune_removes_item_and_referencing_line():
    db = _placeholder_game()
    pruned = prune_placeholders(db)
    assert validate(pruned) == []
    assert [it.description for it in pruned.items] == ["Lamp", "Wand"]
    assert len(pruned.actions) == len(db.actions) - 1
    g = specialize_game(pruned)
    wave = next(l for l in g.lines if isinstance(l.trigger, Command)
                and pruned.verbs[l.trigger.verb] == "WAVE")
    assert [(c.opcode, c.param) for c in wave.conditions] == [(op.CARRIED, 1)]
    assert prune_placeholders(pruned) == pruned


def test_prune_preserves_behaviour_on_untouched_inputs():
    db = _placeholder_game()
    full = Engine(specialize_game(db))
    small = Engine(specialize_game(prune_placeholders(db)))
    words = [("GET", "WAND"), ("WAVE", "WAND"), ("DROP", "WAND"), ("GET", "LAMP"), ("GO", "")]
    a, _ = full.start(Rng())
    b, _ = small.start(Rng())
    for verb, noun in words:
        v = db.verbs.index(verb)
        n = db.nouns.index(noun) if noun else 0
        ra = full.perform_turn(a, Rng(), v, n)
        rb = small.perform_turn(b, Rng(), v, n)
        assert ra.messages == rb.messages
        assert [l for i, l in enumerate(a.item_locations) if i != 1] == b.item_locations


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_prune_idempotent_on_random_games(seed):
    rng = random.Random(seed)
    db = random_game(rng)
    items = list(db.items)
    for i in rng.sample(range(len(items)), k=min(2, len(items) - 1)):
        items[i] = type(items[i])(".", items[i].initial_location, None)
    db = type(db)(db.header, db.actions, db.verbs, db.nouns, db.rooms, db.messages,
                  tuple(items), db.action_titles)
    once = prune_placeholders(db)
    assert validate(once) == []
    assert prune_placeholders(once) == once


# -- dumps -----------------------------------------------------------------


def test_dump_text_lists_endings(games):
    text = dump_text(games["tutorial4"])
    assert "line5.1:game_over" in text and "line0.0:score_win" in text
    assert text.count("\nL") + text.startswith("L") == 7


def test_dump_tree_is_json(games):
    tree = json.loads(dump_tree(games["tutorial4"]))
    assert len(tree["lines"]) == 7
    assert len(tree["endings"]) >= 2
    assert tree["match_table"]["7"] == [3]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_raw_and_specialized_agree_on_first_turns(seed):
    rng = random.Random(seed)
    g = specialize_game(random_game(rng))
    a, b = Engine(g), RawEngine(g)
    ra, rb = Rng(seed), Rng(seed)
    sa, _ = a.start(ra)
    sb, _ = b.start(rb)
    assert sa == sb
