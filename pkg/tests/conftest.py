"""Shared fixtures and randomized-value generators for the test suite."""

import random

import pytest

from gcz.words import (
    KEY_NAMES,
    ControlSentence,
    GamepadWord,
    KeyboardWord,
    MouseWord,
)

# the three-word fireball macro payload used across the suite
HADOUKEN_JSON = (
    '[{"dpad":2,"btn":[],"dur":2,"ang":[0,0,0,0]},'
    '{"dpad":3,"btn":[],"dur":2,"ang":[0,0,0,0]},'
    '{"dpad":6,"btn":[1],"dur":2,"ang":[0,0,0,0]}]'
)

HADOUKEN_OBJ = [
    {"dpad": 2, "btn": [], "dur": 2, "ang": [0, 0, 0, 0]},
    {"dpad": 3, "btn": [], "dur": 2, "ang": [0, 0, 0, 0]},
    {"dpad": 6, "btn": [1], "dur": 2, "ang": [0, 0, 0, 0]},
]


def random_gamepad_word(rng: random.Random, max_dur: int = 32767, hold: bool = False) -> GamepadWord:
    return GamepadWord(
        dpad=rng.randint(1, 9),
        btn=frozenset(rng.sample(range(1, 17), rng.randint(0, 16))),
        ang=tuple(rng.randint(-127, 127) for _ in range(4)),
        dur=-1 if hold else rng.randint(1, max_dur),
    )


def random_mouse_word(rng: random.Random, max_dur: int = 32767, hold: bool = False) -> MouseWord:
    return MouseWord(
        btn=frozenset(rng.sample(range(1, 4), rng.randint(0, 3))),
        mov=(rng.randint(-127, 127), rng.randint(-127, 127)),
        dur=-1 if hold else rng.randint(1, max_dur),
    )


def random_keyboard_word(rng: random.Random, max_dur: int = 32767, hold: bool = False) -> KeyboardWord:
    return KeyboardWord(
        key=frozenset(rng.sample(KEY_NAMES, rng.randint(0, 6))),
        mod=frozenset(rng.sample(range(8), rng.randint(0, 8))),
        dur=-1 if hold else rng.randint(1, max_dur),
    )


_MAKERS = {
    "gamepad": random_gamepad_word,
    "mouse": random_mouse_word,
    "keyboard": random_keyboard_word,
}


def random_word(rng: random.Random, kind: str | None = None, **kw):
    kind = kind or rng.choice(("gamepad", "mouse", "keyboard"))
    return _MAKERS[kind](rng, **kw)


def random_sentence(rng: random.Random, kind: str | None = None, max_words: int = 5,
                    max_dur: int = 32767, allow_hold: bool = False) -> ControlSentence:
    kind = kind or rng.choice(("gamepad", "mouse", "keyboard"))
    n = rng.randint(1, max_words)
    words = [random_word(rng, kind, max_dur=max_dur) for _ in range(n - 1)]
    hold_last = allow_hold and rng.random() < 0.3
    words.append(random_word(rng, kind, max_dur=max_dur, hold=hold_last))
    return ControlSentence(tuple(words))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
