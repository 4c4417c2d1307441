"""Binary codec tests: frozen layouts, round-trips, compression, error paths."""

import pytest

from conftest import HADOUKEN_JSON, random_sentence
from gcz.errors import BadMagic, EmptySentence, InvariantViolation, TruncatedRecord
from gcz.wire import MAGIC, RECORD_SIZES, decode_binary, encode_binary
from gcz.words import (
    ControlSentence,
    GamepadWord,
    KeyboardWord,
    MouseWord,
    parse_sentence,
    serialize_sentence,
)

NEUTRAL_SENTENCE = ControlSentence((GamepadWord(),))


def test_record_sizes():
    assert RECORD_SIZES == {"gamepad": 10, "mouse": 6, "keyboard": 10}


def test_neutral_word_sizes():
    encoded = encode_binary(NEUTRAL_SENTENCE)
    assert len(encoded) == 2 + 10 == 12
    canonical = serialize_sentence(NEUTRAL_SENTENCE)
    # canonical JSON computed independently: 43-byte word plus array brackets
    assert canonical == '[{"dpad":5,"btn":[],"dur":1,"ang":[0,0,0,0]}]'
    assert len(canonical) == 45
    assert len(encoded) < len(canonical)


def test_hadouken_length_is_header_plus_three_records():
    sentence = parse_sentence(HADOUKEN_JSON)
    assert len(encode_binary(sentence)) == 2 + 3 * 10 == 32


def test_gamepad_record_bit_layout():
    word = GamepadWord(dpad=6, btn=frozenset({1, 16}), ang=(1, -1, 127, -127), dur=2)
    encoded = encode_binary(ControlSentence((word,)))
    assert encoded == bytes.fromhex("47 01 06 01 80 01 ff 7f 81 02 00 00".replace(" ", ""))


def test_mouse_record_bit_layout():
    word = MouseWord(btn=frozenset({1, 3}), mov=(-2, 5), dur=-1)
    encoded = encode_binary(ControlSentence((word,)))
    # magic, kind 02, mask 0b101, dx -2, dy 5, dur -1 LE, reserved
    assert encoded == bytes.fromhex("47 02 05 fe 05 ff ff 00".replace(" ", ""))


def test_keyboard_record_bit_layout():
    word = KeyboardWord(key=frozenset({"a", "space"}), mod=frozenset({0, 1}), dur=1)
    encoded = encode_binary(ControlSentence((word,)))
    # 'a' is table code 1, 'space' is 50 (0x32); codes ascend, zero-padded
    assert encoded == bytes.fromhex("47 03 03 01 32 00 00 00 00 01 00 00".replace(" ", ""))


def test_round_trip_randomized_sentences(rng):
    for _ in range(1000):
        sentence = random_sentence(rng, allow_hold=True)
        assert decode_binary(encode_binary(sentence)) == sentence


def test_binary_always_beats_canonical_json(rng):
    for _ in range(1000):
        sentence = random_sentence(rng, allow_hold=True)
        assert len(encode_binary(sentence)) < len(serialize_sentence(sentence))


def test_round_trip_of_button_press_sample():
    sentence = parse_sentence('[{"dpad":5, "btn":[1], "dur":2, "ang":[0,0,0,0]}]')
    assert decode_binary(encode_binary(sentence)) == sentence


@pytest.mark.parametrize("data,error", [
    (b"", BadMagic),
    (b"\x00", BadMagic),
    (b"X\x01" + b"\x00" * 10, BadMagic),
    (bytes([MAGIC]), BadMagic),
    (bytes([MAGIC, 0x04]) + b"\x00" * 10, InvariantViolation),  # unknown kind
    (bytes([MAGIC, 0x01]) + b"\x00" * 9, TruncatedRecord),
    (bytes([MAGIC, 0x01]) + b"\x05" + b"\x00" * 9 + b"\x05" + b"\x00" * 8, TruncatedRecord),
    (bytes([MAGIC, 0x01]), EmptySentence),
])
def test_decode_rejects_malformed_streams(data, error):
    with pytest.raises(error):
        decode_binary(data)


def test_decode_validates_field_ranges():
    bad_dpad = bytes([MAGIC, 0x01, 0x00]) + b"\x00" * 9
    with pytest.raises(InvariantViolation):
        decode_binary(bad_dpad)
    bad_mouse_bits = bytes([MAGIC, 0x02, 0xF8, 0x00, 0x00, 0x01, 0x00, 0x00])
    with pytest.raises(InvariantViolation):
        decode_binary(bad_mouse_bits)
    # keyboard codes must ascend; 2 then 1 is invalid
    bad_keys = bytes([MAGIC, 0x03, 0x00, 2, 1, 0, 0, 0, 0, 0x01, 0x00, 0x00])
    with pytest.raises(InvariantViolation):
        decode_binary(bad_keys)


def test_decode_enforces_sentence_invariants():
    hold_then_more = encode_binary(ControlSentence((GamepadWord(dur=-1),)))
    hold_then_more += encode_binary(ControlSentence((GamepadWord(),)))[2:]
    from gcz.errors import HoldNotLast

    with pytest.raises(HoldNotLast):
        decode_binary(hold_then_more)
