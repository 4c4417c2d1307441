"""Acceptance gate: one test per release criterion, each printing PASS or FAIL.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete. Every tolerance is pinned here, not configurable.
"""

import io
import json
import random
import time
import urllib.request

from conftest import (
    HADOUKEN_JSON,
    random_sentence,
    random_word,
)
from gcz.bench import run_route
from gcz.bus import LoopbackBus, SentenceSubscriber, topic_for_device
from gcz.clock import FrameClock, RecordingSink
from gcz.config import RunConfig
from gcz.engine import Engine
from gcz.errors import BadSync, ChecksumMismatch, Truncated
from gcz.graph import build_graph
from gcz.remap import (
    AngTransform,
    ButtonMapping,
    DpadMapping,
    remap_ang,
    remap_button,
    remap_dpad,
)
from gcz.state import apply_word, expand_sentence, neutral_state
from gcz.uart import UartStreamDecoder, decode_uart_frame, encode_uart_frame
from gcz.wire import decode_binary, encode_binary
from gcz.words import (
    ControlSentence,
    GamepadWord,
    parse_sentence,
    parse_word,
    serialize_sentence,
    serialize_word,
)


def _check(name, body):
    start = time.perf_counter()
    try:
        body()
    except BaseException:
        print(f"[FAIL] {name}", flush=True)
        raise
    print(f"[PASS] {name} ({time.perf_counter() - start:.2f}s)", flush=True)


def _frame_log(stream):
    buf = io.StringIO()
    sink = RecordingSink(buf)
    for _, state in stream:
        sink(state)
    sink.close()
    return buf.getvalue()


def test_hadouken_golden():
    def body():
        start = time.perf_counter()
        sentence = parse_sentence(HADOUKEN_JSON)
        stream = expand_sentence(sentence)
        assert len(stream) == 7
        states = stream.states
        assert [s.dpad for s in states[0:2]] == [2, 2]
        assert [s.dpad for s in states[2:4]] == [3, 3]
        assert [s.dpad for s in states[4:6]] == [6, 6]
        assert all(s.btn == frozenset() for s in states[0:4])
        assert all(s.btn == frozenset({1}) for s in states[4:6])
        assert states[6] == neutral_state("gamepad")
        first = _frame_log(stream)
        again = _frame_log(expand_sentence(parse_sentence(HADOUKEN_JSON)))
        assert first == again  # byte-identical across repeated runs
        assert len(first.splitlines()) == 7
        assert time.perf_counter() - start < 1.0

    _check("hadouken-golden", body)


def test_grammar_round_trip():
    def body():
        start = time.perf_counter()
        rng = random.Random(20260810)
        for kind in ("gamepad", "mouse", "keyboard"):
            for _ in range(10_000):
                word = random_word(rng, kind)
                assert parse_word(serialize_word(word)) == word
                sentence = ControlSentence((word,))
                encoded = encode_binary(sentence)
                assert decode_binary(encoded) == sentence
                assert len(encoded) < len(serialize_sentence(sentence))
        # multi-word sentences through the binary codec as well
        for _ in range(2_000):
            sentence = random_sentence(rng, allow_hold=True)
            encoded = encode_binary(sentence)
            assert decode_binary(encoded) == sentence
            assert len(encoded) < len(serialize_sentence(sentence))
        assert time.perf_counter() - start < 10.0

    _check("grammar-round-trip", body)


def test_remap_algebra():
    def body():
        rng = random.Random(1337)
        identity_btn = ButtonMapping({i: i for i in range(1, 17)})
        identity_dpad = DpadMapping({})
        identity_ang = AngTransform()
        negate = AngTransform(scale=(-1, -1, -1, -1))
        for _ in range(1_000):
            word = random_word(rng, "gamepad")
            assert remap_button(word, identity_btn) == word
            assert remap_dpad(word, identity_dpad) == word
            assert remap_ang(word, identity_ang) == word
            assert remap_ang(remap_ang(word, negate), negate) == word

            targets = rng.sample(range(1, 17), 16)
            bmap = ButtonMapping(dict(zip(range(1, 17), targets)))
            assert remap_button(remap_button(word, bmap), bmap.inverse()) == word

            others = [1, 2, 3, 4, 6, 7, 8, 9]
            shuffled = rng.sample(others, 8)
            dmap = DpadMapping(dict(zip(others, shuffled)))
            assert remap_dpad(remap_dpad(word, dmap), dmap.inverse()) == word

        # chained remaps equal the composed single remap
        for _ in range(1_000):
            word = random_word(rng, "gamepad")
            p1 = dict(zip(range(1, 17), rng.sample(range(1, 17), 16)))
            p2 = dict(zip(range(1, 17), rng.sample(range(1, 17), 16)))
            m1, m2 = ButtonMapping(p1), ButtonMapping(p2)
            composed = ButtonMapping({b: p2[p1[b]] for b in range(1, 17)})
            assert remap_button(remap_button(word, m1), m2) == remap_button(word, composed)

    _check("remap-algebra", body)


def test_trigger_end_to_end():
    def body():
        import socket

        with socket.socket() as s:
            s.bind(("127.0.0.1", 0))
            http_port = s.getsockname()[1]
        graph = build_graph(
            [{"id": "web", "type": "http-in", "params": {}},
             {"id": "pad", "type": "virtual-gamepad",
              "params": {"dpad": 5, "btn": [1], "dur": 2, "ang": [0, 0, 0, 0]}},
             {"id": "emu", "type": "swemu-out", "params": {"device": "pad0"}}],
            [["web", "out", "pad", "in"], ["pad", "out", "emu", "in"]],
        )
        expected = ControlSentence((GamepadWord(btn=frozenset({1}), dur=2),))
        bus = LoopbackBus()
        got = []
        SentenceSubscriber(bus, topic_for_device("pad0"), lambda seq, s: got.append(s))
        engine = Engine(graph, RunConfig(http_port=http_port), bus=bus).start()
        try:
            for trial in range(100):
                before = len(got)
                with urllib.request.urlopen(
                    f"http://127.0.0.1:{http_port}/trigger/fire", timeout=5
                ) as resp:
                    assert json.loads(resp.read()) == {"fired": "fire"}
                deadline = time.monotonic() + 5
                while len(got) <= before and time.monotonic() < deadline:
                    time.sleep(0.001)
                assert len(got) == before + 1, f"trial {trial}: expected exactly one sentence"
                assert got[-1] == expected
        finally:
            engine.stop()
        assert len(got) == 100

    _check("trigger-end-to-end", body)


def test_standalone_latency():
    def body():
        result, _ = run_route("standalone", 100)
        assert result.stats.mean_ms <= 16.0, f"mean {result.stats.mean_ms:.3f} ms"
        assert all(ok for _, ok in result.classification)

    _check("standalone-latency", body)


def test_overall_latency():
    def body():
        result, _ = run_route("overall", 100)
        assert result.stats.mean_ms <= 44.0, f"mean {result.stats.mean_ms:.3f} ms"
        assert [ok for _, ok in result.classification] == [True, True, True]

    _check("overall-latency", body)


def test_uart_robustness():
    def body():
        rng = random.Random(0xBEEF)
        states = []
        for _ in range(10_000):
            kind = rng.choice(("gamepad", "mouse", "keyboard"))
            states.append(apply_word(neutral_state(kind), random_word(rng, kind)))
        blob = bytearray()
        for state in states:
            blob += bytes(rng.randrange(256) for _ in range(rng.randint(0, 4)))
            blob += encode_uart_frame(state)
        blob += bytes(rng.randrange(256) for _ in range(8))
        decoder = UartStreamDecoder()
        decoded = []
        # feed in uneven chunks to exercise buffering
        view = bytes(blob)
        pos = 0
        while pos < len(view):
            step = rng.randint(1, 64)
            decoded.extend(decoder.feed(view[pos:pos + step]))
            pos += step
        assert decoded == states

        rejected = 0
        for _ in range(1_000):
            kind = rng.choice(("gamepad", "mouse", "keyboard"))
            state = apply_word(neutral_state(kind), random_word(rng, kind))
            frame = bytearray(encode_uart_frame(state))
            pos = rng.randrange(len(frame))
            frame[pos] = (frame[pos] + rng.randint(1, 255)) % 256
            try:
                decode_uart_frame(bytes(frame))
            except (BadSync, ChecksumMismatch, Truncated):
                rejected += 1
        assert rejected == 1_000

    _check("uart-robustness", body)


def test_clock_60fps():
    def body():
        clock = FrameClock(rate=60.0)
        start = time.perf_counter()
        clock.run(lambda: None, lambda s: None, ticks=600)
        nominal = 1 / 60.0
        intervals = clock.intervals()
        mean = sum(intervals) / len(intervals)
        assert abs(mean - nominal) <= 0.10 * nominal, f"mean period {mean * 1000:.3f} ms"
        drift = abs((clock.tick_times[-1] - start) - 600 * nominal)
        assert drift < nominal, f"drift {drift * 1000:.3f} ms over 10 s"

    _check("clock-60fps", body)
