"""Self-delimiting serial frames carrying instantaneous device state.

Frame: sync 0xAA | kind (0x01/0x02/0x03) | payload | checksum, where the
checksum is the XOR of every preceding byte including sync. Payloads are the
binary-codec records minus duration (state has no duration): gamepad 7 B
(dpad u8, btn u16 LE, 4 x i8), mouse 3 B (btn u8, dx i8, dy i8), keyboard
7 B (mod u8, 6 x u8 key codes). A decoder that loses alignment scans forward
byte by byte to the next sync; garbage virtually never checksums into a frame.
"""

from __future__ import annotations

import struct
from typing import NamedTuple

from .errors import BadSync, ChecksumMismatch, InvariantViolation, Truncated
from .state import DeviceState, GamepadState, KeyboardState, MouseState
from .wire import button_mask, key_slot_codes
from .words import KEY_NAMES

SYNC = 0xAA
KIND_BYTES = {"gamepad": 0x01, "mouse": 0x02, "keyboard": 0x03}

_GAMEPAD = struct.Struct("<BH4b")
_MOUSE = struct.Struct("<B2b")
_KEYBOARD = struct.Struct("<B6B")
_PAYLOADS = {0x01: _GAMEPAD, 0x02: _MOUSE, 0x03: _KEYBOARD}

FRAME_SIZES = {kind: _PAYLOADS[code].size + 3 for kind, code in KIND_BYTES.items()}


def _xor(data: bytes) -> int:
    out = 0
    for b in data:
        out ^= b
    return out


def encode_uart_frame(state: DeviceState) -> bytes:
    """Bit-exact frame for one instantaneous device state."""
    if isinstance(state, GamepadState):
        payload = _GAMEPAD.pack(state.dpad, button_mask(state.btn), *state.ang)
    elif isinstance(state, MouseState):
        payload = _MOUSE.pack(button_mask(state.btn), *state.mov)
    elif isinstance(state, KeyboardState):
        payload = _KEYBOARD.pack(sum(1 << m for m in state.mod), *key_slot_codes(state.key))
    else:
        raise TypeError(f"not a device state: {state!r}")
    body = bytes((SYNC, KIND_BYTES[state.kind])) + payload
    return body + bytes((_xor(body),))


def _decode_payload(kind_byte: int, payload: bytes) -> DeviceState:
    if kind_byte == 0x01:
        dpad, mask, a0, a1, a2, a3 = _GAMEPAD.unpack(payload)
        if not 1 <= dpad <= 9:
            raise InvariantViolation("dpad", dpad, "out of range 1..9")
        btn = frozenset(i + 1 for i in range(16) if mask >> i & 1)
        return GamepadState(dpad=dpad, btn=btn, ang=(a0, a1, a2, a3))
    if kind_byte == 0x02:
        mask, dx, dy = _MOUSE.unpack(payload)
        if mask & ~0x07:
            raise InvariantViolation("btn", mask, "unknown mouse-button bits set")
        return MouseState(btn=frozenset(i + 1 for i in range(3) if mask >> i & 1), mov=(dx, dy))
    fields = _KEYBOARD.unpack(payload)
    mask, codes = fields[0], fields[1:]
    keys = []
    prev = 0
    for code in codes:
        if code == 0:
            prev = -1  # only zero padding may follow
            continue
        if prev == -1 or code <= prev or code > len(KEY_NAMES):
            raise InvariantViolation("key", list(codes), "codes not ascending table entries")
        keys.append(KEY_NAMES[code - 1])
        prev = code
    return KeyboardState(key=frozenset(keys),
                         mod=frozenset(i for i in range(8) if mask >> i & 1))


class _Scan(NamedTuple):
    states: list[DeviceState]
    resume: int         # offset where an incomplete frame may still complete
    bad_checksum: bool  # a complete sync candidate failed its checksum
    incomplete: bool    # a sync candidate ran past the end of the buffer


def _scan(buf: bytes) -> _Scan:
    states: list[DeviceState] = []
    i = 0
    bad_checksum = False
    incomplete_at: int | None = None
    while i < len(buf):
        if buf[i] != SYNC:
            i += 1
            continue
        if i + 1 >= len(buf):
            incomplete_at = i  # lone sync byte could still grow into a frame
            break
        payload_struct = _PAYLOADS.get(buf[i + 1])
        if payload_struct is None:
            i += 1
            continue
        frame_len = payload_struct.size + 3
        if i + frame_len > len(buf):
            incomplete_at = i
            break
        frame = buf[i: i + frame_len]
        if _xor(frame[:-1]) == frame[-1]:
            try:
                states.append(_decode_payload(frame[1], frame[2:-1]))
            except InvariantViolation:
                i += 1  # checksum fluke over garbage; keep hunting
                continue
            i += frame_len
            continue
        bad_checksum = True
        i += 1
    resume = incomplete_at if incomplete_at is not None else len(buf)
    return _Scan(states, resume, bad_checksum, incomplete_at is not None)


def decode_uart_frame(data: bytes) -> DeviceState:
    """Decode the first frame in ``data``, resynchronizing past leading garbage."""
    result = _scan(bytes(data))
    if result.states:
        return result.states[0]
    if result.bad_checksum:
        raise ChecksumMismatch("frame checksum does not match")
    if result.incomplete:
        raise Truncated("frame is incomplete")
    raise BadSync("no sync byte found")


class UartStreamDecoder:
    """Incremental decoder for a byte stream of frames with arbitrary gaps."""

    def __init__(self):
        self._buf = bytearray()

    def feed(self, data: bytes) -> list[DeviceState]:
        """Consume bytes, returning every complete frame found."""
        self._buf += data
        result = _scan(bytes(self._buf))
        del self._buf[:result.resume]
        return result.states

    @property
    def pending(self) -> int:
        return len(self._buf)
