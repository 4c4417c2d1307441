"""Control-word grammar: timed device-input words, sentences, and canonical JSON.

A word is one timed unit of control for a gamepad, mouse, or keyboard; a
sentence is an ordered run of words of one device kind. Durations count
frames at 60 fps; ``dur == -1`` means "hold until superseded" and may only
close a sentence.

Canonical JSON is compact (no whitespace) with fixed key order per kind:
gamepad ``dpad,btn,dur,ang`` / mouse ``btn,mov,dur`` / keyboard
``key,mod,dur``. Set-valued fields serialize ascending (keys by table code),
so equal words always serialize byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import ClassVar, Union

from .errors import (
    AmbiguousKind,
    EmptySentence,
    HoldNotLast,
    InvariantViolation,
    MalformedJson,
    MixedKinds,
)

DPAD_NEUTRAL = 5
AXIS_MIN, AXIS_MAX = -127, 127
DUR_HOLD = -1
DUR_MAX = 32767  # i16 ceiling so every valid word fits the binary codec
KEY_ROLLOVER = 6  # boot-protocol keyboard limit

KEY_NAMES: tuple[str, ...] = tuple(
    [chr(c) for c in range(ord("a"), ord("z") + 1)]
    + [str(d) for d in range(10)]
    + [f"f{i}" for i in range(1, 13)]
    + ["enter", "space", "tab", "escape", "backspace",
       "up", "down", "left", "right", "shift", "ctrl", "alt"]
)
# 1-based wire codes; 0 marks an empty slot in fixed-width layouts
KEY_CODES: dict[str, int] = {name: i + 1 for i, name in enumerate(KEY_NAMES)}


def _require_int(field: str, value: object) -> int:
    # bool is an int subclass; the grammar wants genuine integers
    if type(value) is not int:
        raise InvariantViolation(field, value, "must be an integer")
    return value


def _check_dur(dur: object) -> int:
    dur = _require_int("dur", dur)
    if dur != DUR_HOLD and not 1 <= dur <= DUR_MAX:
        raise InvariantViolation("dur", dur, f"must be -1 or in 1..{DUR_MAX}")
    return dur


def _check_index_set(field: str, values, lo: int, hi: int) -> frozenset[int]:
    out = set()
    for v in values:
        v = _require_int(field, v)
        if not lo <= v <= hi:
            raise InvariantViolation(field, v, f"out of range {lo}..{hi}")
        out.add(v)
    return frozenset(out)


def _check_axes(field: str, values, count: int) -> tuple[int, ...]:
    values = tuple(values)
    if len(values) != count:
        raise InvariantViolation(field, list(values), f"must have exactly {count} elements")
    for v in values:
        v = _require_int(field, v)
        if not AXIS_MIN <= v <= AXIS_MAX:
            raise InvariantViolation(field, v, f"out of range {AXIS_MIN}..{AXIS_MAX}")
    return values


@dataclass(frozen=True)
class GamepadWord:
    """Direction pad (numeric-keypad code, 5 = neutral), buttons 1-16, 4 axes."""

    kind: ClassVar[str] = "gamepad"

    dpad: int = DPAD_NEUTRAL
    btn: frozenset[int] = frozenset()
    ang: tuple[int, int, int, int] = (0, 0, 0, 0)
    dur: int = 1

    def __post_init__(self):
        dpad = _require_int("dpad", self.dpad)
        if not 1 <= dpad <= 9:
            raise InvariantViolation("dpad", dpad, "out of range 1..9")
        object.__setattr__(self, "btn", _check_index_set("btn", self.btn, 1, 16))
        object.__setattr__(self, "ang", _check_axes("ang", self.ang, 4))
        object.__setattr__(self, "dur", _check_dur(self.dur))


@dataclass(frozen=True)
class MouseWord:
    """Buttons 1=left 2=right 3=middle plus a relative [dx, dy] displacement."""

    kind: ClassVar[str] = "mouse"

    btn: frozenset[int] = frozenset()
    mov: tuple[int, int] = (0, 0)
    dur: int = 1

    def __post_init__(self):
        object.__setattr__(self, "btn", _check_index_set("btn", self.btn, 1, 3))
        object.__setattr__(self, "mov", _check_axes("mov", self.mov, 2))
        object.__setattr__(self, "dur", _check_dur(self.dur))


@dataclass(frozen=True)
class KeyboardWord:
    """Up to 6 named keys plus modifier bit positions 0-7 (LCtrl..RGui)."""

    kind: ClassVar[str] = "keyboard"

    key: frozenset[str] = frozenset()
    mod: frozenset[int] = frozenset()
    dur: int = 1

    def __post_init__(self):
        keys = set()
        for name in self.key:
            if not isinstance(name, str) or name not in KEY_CODES:
                raise InvariantViolation("key", name, "not in the key-name table")
            keys.add(name)
        if len(keys) > KEY_ROLLOVER:
            raise InvariantViolation("key", sorted(keys), f"more than {KEY_ROLLOVER} keys")
        object.__setattr__(self, "key", frozenset(keys))
        object.__setattr__(self, "mod", _check_index_set("mod", self.mod, 0, 7))
        object.__setattr__(self, "dur", _check_dur(self.dur))


ControlWord = Union[GamepadWord, MouseWord, KeyboardWord]

# discriminator field -> (kind, word class, allowed JSON fields)
_VARIANTS = {
    "dpad": ("gamepad", GamepadWord, ("dpad", "btn", "ang", "dur")),
    "mov": ("mouse", MouseWord, ("btn", "mov", "dur")),
    "key": ("keyboard", KeyboardWord, ("key", "mod", "dur")),
}


@dataclass(frozen=True)
class ControlSentence:
    """Non-empty run of same-kind words; a hold word (dur=-1) may only be last."""

    words: tuple[ControlWord, ...]

    def __post_init__(self):
        words = tuple(self.words)
        object.__setattr__(self, "words", words)
        if not words:
            raise EmptySentence("sentence has no words")
        kinds = {w.kind for w in words}
        if len(kinds) > 1:
            raise MixedKinds(f"sentence mixes device kinds: {sorted(kinds)}")
        for i, w in enumerate(words[:-1]):
            if w.dur == DUR_HOLD:
                raise HoldNotLast(
                    f"hold word (dur=-1) at position {i} is not last", pointer=f"/{i}/dur"
                )

    @property
    def kind(self) -> str:
        return self.words[0].kind

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)


def _load_json(text: str | bytes):
    try:
        return json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedJson(f"not valid JSON: {exc}") from exc


def _reject_duplicates(field: str, values: list, pointer: str) -> None:
    seen = set()
    for v in values:
        marker = v if isinstance(v, (int, str)) else repr(v)
        if marker in seen:
            raise InvariantViolation(field, v, "listed more than once", pointer=f"{pointer}/{field}")
        seen.add(marker)


def word_from_obj(obj: dict, pointer: str = "") -> ControlWord:
    """Build a validated word from a decoded JSON object."""
    if not isinstance(obj, dict):
        raise MalformedJson(f"expected a JSON object, got {type(obj).__name__}", pointer=pointer or None)
    hits = [d for d in _VARIANTS if d in obj]
    if len(hits) != 1:
        raise AmbiguousKind(
            f"key set {sorted(obj)} matches {len(hits)} word kinds "
            "(need exactly one of dpad/mov/key)",
            pointer=pointer or None,
        )
    _, cls, allowed = _VARIANTS[hits[0]]
    for k in obj:
        if k not in allowed:
            raise InvariantViolation(k, obj[k], "unexpected field", pointer=f"{pointer}/{k}")
    for field in ("btn", "key", "mod"):
        if field in obj:
            if not isinstance(obj[field], list):
                raise InvariantViolation(field, obj[field], "must be an array", pointer=f"{pointer}/{field}")
            _reject_duplicates(field, obj[field], pointer)
    for field in ("ang", "mov"):
        if field in obj and not isinstance(obj[field], list):
            raise InvariantViolation(field, obj[field], "must be an array", pointer=f"{pointer}/{field}")
    try:
        return cls(**obj)
    except InvariantViolation as exc:
        exc.pointer = f"{pointer}/{exc.field}"
        raise


def parse_word(text: str | bytes) -> ControlWord:
    """Parse one UTF-8 JSON object into a validated word."""
    return word_from_obj(_load_json(text))


def sentence_from_obj(arr: list, pointer: str = "") -> ControlSentence:
    """Build a validated sentence from a decoded JSON array."""
    if not isinstance(arr, list):
        raise MalformedJson(f"expected a JSON array, got {type(arr).__name__}", pointer=pointer or None)
    return ControlSentence(tuple(
        word_from_obj(item, pointer=f"{pointer}/{i}") for i, item in enumerate(arr)
    ))


def parse_sentence(text: str | bytes) -> ControlSentence:
    """Parse a UTF-8 JSON array of word objects into a validated sentence."""
    return sentence_from_obj(_load_json(text))


def word_to_obj(word: ControlWord) -> dict:
    """Canonical JSON-ready dict with the fixed key order for the word's kind."""
    if isinstance(word, GamepadWord):
        return {"dpad": word.dpad, "btn": sorted(word.btn), "dur": word.dur, "ang": list(word.ang)}
    if isinstance(word, MouseWord):
        return {"btn": sorted(word.btn), "mov": list(word.mov), "dur": word.dur}
    if isinstance(word, KeyboardWord):
        return {"key": sorted(word.key, key=KEY_CODES.__getitem__),
                "mod": sorted(word.mod), "dur": word.dur}
    raise TypeError(f"not a control word: {word!r}")  # pragma: no cover


def serialize_word(word: ControlWord) -> str:
    """Canonical compact JSON text; ``parse_word(serialize_word(w)) == w``."""
    return json.dumps(word_to_obj(word), separators=(",", ":"))


def serialize_sentence(sentence: ControlSentence) -> str:
    """Canonical compact JSON array of the sentence's words."""
    return json.dumps([word_to_obj(w) for w in sentence.words], separators=(",", ":"))
