"""Instantaneous virtual-device state and sentence expansion on the 60 fps grid.

A word is a full state assertion: applying it sets the device exactly to the
word's fields. Mouse displacement is transient; it is the pending [dx, dy]
for the frame being delivered and is drained once consumed by a clock tick.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union

from .errors import KindMismatch, UnboundedDuration
from .words import (
    DPAD_NEUTRAL,
    DUR_HOLD,
    ControlSentence,
    ControlWord,
    GamepadWord,
    KeyboardWord,
    MouseWord,
)

FRAME_RATE = 60.0
FRAME_PERIOD = 1.0 / FRAME_RATE


@dataclass(frozen=True)
class GamepadState:
    kind: ClassVar[str] = "gamepad"
    dpad: int = DPAD_NEUTRAL
    btn: frozenset[int] = frozenset()
    ang: tuple[int, int, int, int] = (0, 0, 0, 0)


@dataclass(frozen=True)
class MouseState:
    kind: ClassVar[str] = "mouse"
    btn: frozenset[int] = frozenset()
    mov: tuple[int, int] = (0, 0)  # pending displacement for the current frame


@dataclass(frozen=True)
class KeyboardState:
    kind: ClassVar[str] = "keyboard"
    key: frozenset[str] = frozenset()
    mod: frozenset[int] = frozenset()


DeviceState = Union[GamepadState, MouseState, KeyboardState]

_NEUTRAL = {
    "gamepad": GamepadState(),
    "mouse": MouseState(),
    "keyboard": KeyboardState(),
}


def neutral_state(kind: str) -> DeviceState:
    try:
        return _NEUTRAL[kind]
    except KeyError:
        raise KindMismatch(f"unknown device kind {kind!r}") from None


def apply_word(state: DeviceState, word: ControlWord) -> DeviceState:
    """Return the state the word asserts; idempotent for gamepad/keyboard."""
    if state.kind != word.kind:
        raise KindMismatch(f"cannot apply {word.kind} word to {state.kind} state")
    if isinstance(word, GamepadWord):
        return GamepadState(dpad=word.dpad, btn=word.btn, ang=word.ang)
    if isinstance(word, MouseWord):
        return MouseState(btn=word.btn, mov=word.mov)
    return KeyboardState(key=word.key, mod=word.mod)


def drain_motion(state: DeviceState) -> DeviceState:
    """Consume a mouse state's pending displacement; other kinds pass through."""
    if isinstance(state, MouseState) and state.mov != (0, 0):
        return MouseState(btn=state.btn, mov=(0, 0))
    return state


def state_to_word(state: DeviceState, dur: int = 1) -> ControlWord:
    """A word asserting the state for ``dur`` frames."""
    if isinstance(state, GamepadState):
        return GamepadWord(dpad=state.dpad, btn=state.btn, ang=state.ang, dur=dur)
    if isinstance(state, MouseState):
        return MouseWord(btn=state.btn, mov=state.mov, dur=dur)
    return KeyboardWord(key=state.key, mod=state.mod, dur=dur)


def diff_states(prev: DeviceState, next_state: DeviceState) -> ControlWord | None:
    """None when equal; otherwise a hold word (dur=-1) asserting ``next_state``."""
    if prev.kind != next_state.kind:
        raise KindMismatch(f"cannot diff {prev.kind} state against {next_state.kind}")
    if prev == next_state:
        return None
    return state_to_word(next_state, dur=DUR_HOLD)


@dataclass(frozen=True)
class FrameStream:
    """Per-frame states, frame indices implicitly 0..n-1 on the 60 fps grid."""

    states: tuple[DeviceState, ...]
    frame_period: float = FRAME_PERIOD

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(enumerate(self.states))


def expand_sentence(sentence: ControlSentence) -> FrameStream:
    """Expand finite words to dur-many frames each, then one neutral release frame."""
    frames: list[DeviceState] = []
    state = neutral_state(sentence.kind)
    for i, word in enumerate(sentence):
        if word.dur == DUR_HOLD:
            raise UnboundedDuration(
                "cannot batch-expand an unbounded hold word", pointer=f"/{i}/dur"
            )
        state = apply_word(drain_motion(state), word)
        frames.extend([state] * word.dur)
    frames.append(neutral_state(sentence.kind))
    return FrameStream(tuple(frames))
