from __future__ import annotations

import re

import pytest
from hypothesis import given, settings, strategies as st

from sagasolve import opcodes as op
from sagasolve.builder import GameBuilder
from sagasolve.dbformat import (DatabaseError, RawAction, parse_database, serialize_database,
                                validate)
from sagasolve.fixtures import FIXTURES, game_path, load_fixture
from sagasolve.gen import random_game

MINIMAL = """0 0 0 0 1 1 1 0 3 -1 0 1
0 0 0 0 0 0 0 0
"AUT" "ANY"
0 0 0 0 0 0 "nowhere"
0 0 0 0 0 0 "room"
""
"coin" 1
""
0 0 0
"""


def test_minimal_database_fields():
    db = parse_database(MINIMAL)
    assert db.header.num_rooms == 1
    assert db.header.word_length == 3
    assert db.header.light_time == -1
    assert db.actions == (RawAction(0, (0, 0, 0, 0, 0), (0, 0)),)
    assert db.verbs == ("AUT",) and db.nouns == ("ANY",)
    assert [r.description for r in db.rooms] == ["nowhere", "room"]
    assert db.items[0].description == "coin" and db.items[0].initial_location == 1
    assert db.carried == 2
    assert validate(db) == []


def test_minimal_serializes_to_same_integer_sequence():
    ints = lambda text: re.findall(r"-?\d+", re.sub(r'"[^"]*"', " ", text))
    assert ints(serialize_database(parse_database(MINIMAL))) == ints(MINIMAL)


def test_auto_get_suffix():
    db = parse_database(MINIMAL.replace('"coin" 1', '"Key/KEY/" 2'))
    item = db.items[0]
    assert (item.description, item.auto_get, item.initial_location) == ("Key", "KEY", 2)


@pytest.mark.parametrize("suffix", ["//", "/*"])
def test_empty_auto_get_suffix(suffix):
    db = parse_database(MINIMAL.replace('"coin" 1', f'"Rock{suffix}" 1'))
    # The marker stays in the text, as in the reference interpreter.
    assert db.items[0].auto_get is None and db.items[0].description == f"Rock{suffix}"


def test_carried_minus_one_maps_to_external_code():
    db = parse_database(MINIMAL.replace('"coin" 1', '"coin" -1'))
    assert db.items[0].initial_location == op.CARRIED_EXTERNAL


def test_treasure_asterisks_and_synonym_order_preserved():
    b = GameBuilder()
    carry = b.verb("CARRY")
    b.synonym("verb", "CARRY", "TAKE")
    b.room("hall")
    b.item("*GOLD*", 1, "GOLD")
    db = b.build()
    text = serialize_database(db)
    assert '"*GOLD*/GOLD/"' in text
    again = parse_database(text)
    assert again == db
    assert again.verbs[carry] == "CARRY" and again.verbs[carry + 1] == "*TAKE"
    assert again.items[0].is_treasure


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_bundled_files_round_trip(name):
    db = load_fixture(name)
    assert validate(db) == []
    text = serialize_database(db)
    assert parse_database(text) == db
    assert parse_database(game_path(name).read_bytes()) == FIXTURES[name]()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_database_round_trip(seed):
    import random
    db = random_game(random.Random(seed), lamp=seed % 4 == 0)
    assert parse_database(serialize_database(db)) == db


def test_truncated_input_reports_offset_and_field():
    text = MINIMAL[:MINIMAL.index('"room"')]
    with pytest.raises(DatabaseError) as e:
        parse_database(text)
    assert e.value.field_name == "rooms[1].description"
    assert e.value.offset == len(text)


def test_non_integer_header():
    with pytest.raises(DatabaseError) as e:
        parse_database("0 0 x" + MINIMAL[5:])
    assert e.value.field_name == "header.num_actions"
    assert e.value.offset == 4


def test_unterminated_string():
    with pytest.raises(DatabaseError, match="unterminated"):
        parse_database(MINIMAL[:MINIMAL.index('"nowhere"') + 4])


def test_exit_out_of_range_diagnostic():
    db = parse_database(MINIMAL.replace('0 0 0 0 0 0 "room"', '0 0 4 0 0 0 "room"'))
    diags = validate(db)
    assert len(diags) == 1
    assert "rooms[1]" in diags[0].field and diags[0].field.endswith("[E]")


def test_condition_item_out_of_range_names_line():
    num_items = 0
    packed = 20 * (num_items + 1) + op.CARRIED
    text = MINIMAL.replace("0 0 0 0 0 0 0 0", f"0 {packed} 0 0 0 0 0 0")
    diags = validate(parse_database(text))
    assert diags and all("actions[0]" in d.field for d in diags)


def test_diagnostics_are_complete_not_first_only():
    text = MINIMAL.replace('0 0 0 0 0 0 "room"', '9 0 9 0 0 0 "room"')
    assert len(validate(parse_database(text))) == 2
