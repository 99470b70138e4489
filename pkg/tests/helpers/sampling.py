"""State and input samplers shared by the differential tests."""

from __future__ import annotations

import random

from sagasolve.bmc import dynamic_fields, relevant_inputs
from sagasolve.engine import Engine, GameState
from sagasolve.specialize import SpecializedGame


def random_state(game: SpecializedGame, rng: random.Random) -> GameState:
    """A state that differs from the initial one only in fields the game can change."""
    st = Engine(game).initial_state()
    dyn = dynamic_fields(game)
    k = game.constants
    for i in range(len(st.item_locations)):
        if f"item{i}" in dyn:
            st.item_locations[i] = rng.randint(0, k.carried)
    if "room" in dyn:
        st.current_room = rng.randint(0, k.num_rooms)
    for i in range(32):
        if f"flag{i}" in dyn and rng.random() < 0.5:
            st.flags |= 1 << i
    if "counter" in dyn:
        st.counter = rng.choice([rng.randint(-3, 5), rng.randint(-32768, 32767)])
    for i in range(16):
        if f"counter{i}" in dyn:
            st.counters[i] = rng.randint(-5, 5)
        if f"saved{i}" in dyn:
            st.saved_rooms[i] = rng.randint(0, k.num_rooms)
    if "lamp" in dyn:
        st.lamp_fuel = rng.randint(0, k.light_time)
    st.carried_count = sum(1 for loc in st.item_locations if loc == k.carried)
    return st


def random_input(game: SpecializedGame, rng: random.Random) -> tuple[int, int]:
    """Mostly inputs some line or built-in reacts to, sometimes arbitrary words."""
    nw = game.constants.num_words
    if rng.random() < 0.7:
        verb, noun = rng.choice(relevant_inputs(game))
    else:
        verb = rng.randint(0, nw)
        noun = rng.randint(0, nw)
    if rng.random() < 0.3:
        noun = rng.randint(0, nw)
    return verb, noun
