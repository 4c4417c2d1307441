"""Compact binary codec for control sentences.

Layout (little-endian):
  header   magic 0x47 'G', kind byte (0x01 gamepad / 0x02 mouse / 0x03 keyboard)
  gamepad  10 B: dpad u8; btn bitmask u16 (bit i-1 = button i); 4 x i8 ang; dur i16; 1 reserved
  mouse     6 B: btn bitmask u8; dx i8; dy i8; dur i16; 1 reserved
  keyboard 10 B: mod bitmask u8; 6 x u8 key codes (table index, 1-based,
                 ascending, zero-padded); dur i16; 1 reserved

Every encoding is strictly shorter than the sentence's canonical JSON.
"""

from __future__ import annotations

import struct

from .errors import BadMagic, EmptySentence, InvariantViolation, TruncatedRecord
from .words import (
    KEY_NAMES,
    KEY_CODES,
    ControlSentence,
    ControlWord,
    GamepadWord,
    KeyboardWord,
    MouseWord,
)

MAGIC = 0x47  # 'G'

KIND_BYTES = {"gamepad": 0x01, "mouse": 0x02, "keyboard": 0x03}

_GAMEPAD = struct.Struct("<BH4bhx")
_MOUSE = struct.Struct("<B2bhx")
_KEYBOARD = struct.Struct("<B6Bhx")
_RECORDS = {0x01: _GAMEPAD, 0x02: _MOUSE, 0x03: _KEYBOARD}

RECORD_SIZES = {kind: _RECORDS[code].size for kind, code in KIND_BYTES.items()}


def button_mask(btn: frozenset[int]) -> int:
    return sum(1 << (b - 1) for b in btn)


def _mask_buttons(mask: int, width: int) -> frozenset[int]:
    return frozenset(i + 1 for i in range(width) if mask >> i & 1)


def key_slot_codes(key: frozenset[str]) -> tuple[int, ...]:
    """Six ascending 1-based table codes, zero-padded."""
    codes = sorted(KEY_CODES[k] for k in key)
    return tuple(codes + [0] * (6 - len(codes)))


def _pack_word(word: ControlWord) -> bytes:
    if isinstance(word, GamepadWord):
        return _GAMEPAD.pack(word.dpad, button_mask(word.btn), *word.ang, word.dur)
    if isinstance(word, MouseWord):
        return _MOUSE.pack(button_mask(word.btn), *word.mov, word.dur)
    return _KEYBOARD.pack(sum(1 << m for m in word.mod), *key_slot_codes(word.key), word.dur)


def encode_binary(sentence: ControlSentence) -> bytes:
    """Encode a sentence as magic + kind + fixed-size per-word records."""
    out = bytearray((MAGIC, KIND_BYTES[sentence.kind]))
    for word in sentence:
        out += _pack_word(word)
    return bytes(out)


def _unpack_gamepad(rec: bytes) -> GamepadWord:
    dpad, mask, a0, a1, a2, a3, dur = _GAMEPAD.unpack(rec)
    return GamepadWord(dpad=dpad, btn=_mask_buttons(mask, 16), ang=(a0, a1, a2, a3), dur=dur)


def _unpack_mouse(rec: bytes) -> MouseWord:
    mask, dx, dy, dur = _MOUSE.unpack(rec)
    if mask & ~0x07:
        raise InvariantViolation("btn", mask, "unknown mouse-button bits set")
    return MouseWord(btn=_mask_buttons(mask, 3), mov=(dx, dy), dur=dur)


def _unpack_keyboard(rec: bytes) -> KeyboardWord:
    fields = _KEYBOARD.unpack(rec)
    mask, codes, dur = fields[0], fields[1:7], fields[7]
    keys = []
    prev = 0
    for code in codes:
        if code == 0:
            prev = -1  # only zero padding may follow
            continue
        if prev == -1 or code <= prev:
            raise InvariantViolation("key", list(codes), "codes not ascending, zero-padded")
        if code > len(KEY_NAMES):
            raise InvariantViolation("key", code, "not a key-table code")
        keys.append(KEY_NAMES[code - 1])
        prev = code
    return KeyboardWord(
        key=frozenset(keys), mod=frozenset(i for i in range(8) if mask >> i & 1), dur=dur
    )


_UNPACKERS = {0x01: _unpack_gamepad, 0x02: _unpack_mouse, 0x03: _unpack_keyboard}


def decode_binary(data: bytes) -> ControlSentence:
    """Exact inverse of :func:`encode_binary`, validating every invariant."""
    if len(data) < 2 or data[0] != MAGIC:
        raise BadMagic(f"missing magic byte 0x{MAGIC:02X}")
    kind_byte = data[1]
    record = _RECORDS.get(kind_byte)
    if record is None:
        raise InvariantViolation("kind", kind_byte, "unknown device-kind byte")
    body = data[2:]
    if len(body) % record.size:
        raise TruncatedRecord(
            f"{len(body)} payload bytes is not a multiple of the {record.size}-byte record"
        )
    if not body:
        raise EmptySentence("header with zero records")
    unpack = _UNPACKERS[kind_byte]
    words = tuple(
        unpack(body[i: i + record.size]) for i in range(0, len(body), record.size)
    )
    return ControlSentence(words)
