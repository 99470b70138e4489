"""Small hand-authored games bundled with the package.

``tools/make_fixtures.py`` serializes these into ``games/*.dat``; tests load
the files so the parser is exercised too.
"""

from __future__ import annotations

from importlib import resources

from . import opcodes as op
from .builder import GameBuilder
from .dbformat import GameDatabase, parse_database


def tutorial4() -> GameDatabase:
    """Vampire crypt: take the cross, fetch the key, open the door, bring the coin home."""
    b = GameBuilder(max_carry=6)
    for word in ("KEY", "COIN", "CROSS", "DOOR"):
        b.noun(word)
    b.verb("SCORE")
    b.verb("INVENTORY")
    b.verb("OPEN")

    chamber = b.room("dusty chamber")
    hall = b.room("long hall")
    crypt = b.room("damp crypt")
    dungeon = b.room("dank dungeon")
    cell = b.room("tiny cell")
    b.connect(chamber, "n", hall)
    b.connect(hall, "w", crypt)
    b.connect(crypt, "n", dungeon)
    b.rooms[cell][0][1] = dungeon

    locked = b.item("Locked door", dungeon)
    cross = b.item("Cross", hall, "CROSS")
    opened = b.item("Open door", 0)
    key = b.item("Key", crypt, "KEY")
    vampire = b.item("Vampire", crypt)
    b.item("*Gold coin*", cell, "COIN")
    b.item("Coffin", crypt)
    b.player_room = chamber
    b.treasure_room = chamber

    b.command("SCORE", None, effects=[(op.SCORE,)])
    b.command("INVENTORY", None, effects=[(op.INVENTORY,)])
    b.command("OPEN", "DOOR", conds=[(op.HERE, locked), (op.NOT_CARRIED, key), (op.NOT_HERE, key)],
              effects=[("msg", "It's locked.")])
    b.command("OPEN", "DOOR", conds=[(op.HERE, locked)],
              effects=[(op.SWAP, locked, opened), ("msg", "The door creaks open.")])
    b.command("GO", "DOOR", conds=[(op.HERE, opened)], effects=[(op.GOTO, cell), (op.LOOK,)])
    b.auto(100, conds=[(op.HERE, vampire), (op.NOT_CARRIED, cross)],
           effects=[("msg", "Vampire bites me! I'm dead!"), (op.GAME_OVER,)])
    b.auto(100, conds=[(op.HERE, vampire), (op.CARRIED, cross)],
           effects=[("msg", "The vampire cowers away from the cross.")])
    return b.build()


def tutorial3() -> GameDatabase:
    """Garden shed: four rooms, five items, a key-locked door and a songbird."""
    b = GameBuilder(max_carry=4)
    b.verb("SCORE")
    b.verb("UNLOCK")
    hall = b.room("quiet hall")
    garden = b.room("overgrown garden")
    yard = b.room("cobbled yard")
    shed = b.room("cramped shed")
    b.connect(hall, "n", garden)
    b.connect(garden, "e", yard)
    b.rooms[shed][0][3] = yard

    b.item("*Ruby*", shed, "RUBY")
    key = b.item("Rusty key", garden, "KEY")
    locked = b.item("Locked shed door", yard)
    opened = b.item("Open shed door", 0)
    b.item("Stone bench", garden)
    b.noun("DOOR")
    b.player_room = hall
    b.treasure_room = yard

    b.command("SCORE", None, effects=[(op.SCORE,)])
    b.command("UNLOCK", "DOOR", conds=[(op.HERE, locked), (op.CARRIED, key)],
              effects=[(op.SWAP, locked, opened), ("msg", "Click.")])
    b.command("UNLOCK", "DOOR", conds=[(op.HERE, locked)], effects=[("msg", "I need a key.")])
    b.command("GO", "DOOR", conds=[(op.HERE, opened)], effects=[(op.GOTO, shed), (op.LOOK,)])
    b.auto(30, conds=[(op.AT, garden)], effects=[("msg", "A bird sings.")])
    return b.build()


def dark_cellar() -> GameDatabase:
    """Dark-room game: the gem lies in an unlit vault; a lamp exists but is optional."""
    b = GameBuilder(max_carry=5, light_time=60)
    b.verb("SCORE")
    hall = b.room("candle-lit hall")
    stairs = b.room("stone stairway")
    cellar = b.room("black cellar")
    vault = b.room("silent vault")
    b.connect(hall, "d", stairs)
    b.connect(stairs, "d", cellar)
    b.connect(cellar, "e", vault)

    fillers = [("Faded rug", hall), ("Oil painting", hall), ("Old barrel", cellar),
               ("Wooden crate", stairs), ("Cobwebs", cellar), ("Pile of bones", vault),
               ("Oak table", hall), ("Sign", stairs)]
    b.item("*Gem*", vault, "GEM")
    for desc, where in fillers:
        b.item(desc, where)
    lamp = b.item("Lamp", hall, "LAMP")
    assert lamp == op.LAMP_ITEM
    b.player_room = hall
    b.treasure_room = hall

    b.command("SCORE", None, effects=[(op.SCORE,)])
    b.auto(100, conds=[(op.AT, cellar)], effects=[(op.SET_DARK,)])
    b.auto(100, conds=[(op.AT, vault)], effects=[(op.SET_DARK,)])
    b.auto(100, conds=[(op.AT, stairs)], effects=[(op.CLEAR_DARK,)])
    return b.build()


def mini_treasure() -> GameDatabase:
    """Three rooms: fetch the pearl from the grotto and score it at home."""
    b = GameBuilder(max_carry=2)
    b.verb("SCORE")
    home = b.room("snug cottage")
    grotto = b.room("sea grotto")
    cliff = b.room("windy cliff")
    b.connect(home, "e", grotto)
    b.connect(home, "w", cliff)
    b.item("*Pearl*", grotto, "PEARL")
    b.item("Driftwood", cliff, "WOOD")
    b.player_room = home
    b.treasure_room = home
    b.command("SCORE", None, effects=[(op.SCORE,)])
    return b.build()


def unwinnable() -> GameDatabase:
    """Nothing in here can ever end the game."""
    b = GameBuilder()
    b.verb("WAVE")
    a = b.room("grey room")
    c = b.room("white room")
    b.connect(a, "n", c)
    b.item("Flag", a, "FLAG")
    b.command("WAVE", "FLAG", conds=[(op.CARRIED, 0)], effects=[("msg", "You wave the flag."),
                                                              (op.SET_FLAG, 3)])
    b.auto(50, conds=[(op.FLAG, 3)], effects=[("msg", "Nobody notices.")])
    return b.build()


def duplicate_keys() -> GameDatabase:
    """Three items answer to KEY; GET must take the lowest-numbered one present."""
    b = GameBuilder()
    b.verb("SCORE")
    room = b.room("locksmith's shop")
    b.item("Brass key", room, "KEY")
    b.item("Iron key", room, "KEY")
    b.item("*Golden key*", room, "KEY")
    b.player_room = room
    b.treasure_room = room
    b.command("SCORE", None, effects=[(op.SCORE,)])
    return b.build()


FIXTURES = {
    "tutorial4": tutorial4,
    "tutorial3": tutorial3,
    "dark_cellar": dark_cellar,
    "mini_treasure": mini_treasure,
    "unwinnable": unwinnable,
    "duplicate_keys": duplicate_keys,
}


def game_path(name: str):
    return resources.files("sagasolve") / "games" / f"{name}.dat"


def load_fixture(name: str) -> GameDatabase:
    return parse_database(game_path(name).read_bytes())
