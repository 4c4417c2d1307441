"""Fixed-rate frame clock with drift-free deadlines, plus word scheduling and sinks.

Deadlines are absolute (``start + n * period``), so a late tick shortens the
next sleep instead of accumulating drift. Delivery times are recorded for
jitter analysis.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from typing import Callable, Iterable

from .errors import SinkClosed
from .state import (
    DeviceState,
    FrameStream,
    apply_word,
    drain_motion,
    neutral_state,
    state_to_word,
)
from .words import DUR_HOLD, ControlWord, serialize_word

WordSource = Callable[[], "ControlWord | None"]
Sink = Callable[[DeviceState], None]


class FrameClock:
    """Delivers one device state per period; holds the last state when idle."""

    def __init__(self, rate: float = 60.0, spin: float = 0.0015):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.period = 1.0 / rate
        self.spin = spin
        self.tick_times: list[float] = []

    def _wait(self, deadline: float) -> None:
        while True:
            remaining = deadline - time.perf_counter()
            if remaining <= 0:
                return
            if remaining > self.spin:
                time.sleep(remaining - self.spin)
            # burn the last sliver for sub-millisecond accuracy

    def run(
        self,
        source: WordSource,
        sink: Sink,
        *,
        ticks: int | None = None,
        kind: str = "gamepad",
        initial: DeviceState | None = None,
        stop: threading.Event | None = None,
    ) -> DeviceState:
        """Tick until ``ticks`` deliveries or ``stop`` is set; returns the final state.

        Each tick pulls at most one word from ``source`` (None = hold), applies
        it, and delivers the current state to ``sink``. Mouse pending
        displacement is consumed after delivery.
        """
        state = initial if initial is not None else neutral_state(kind)
        start = time.perf_counter()
        n = 0
        while ticks is None or n < ticks:
            if stop is not None and stop.is_set():
                break
            self._wait(start + (n + 1) * self.period)
            word = source()
            if word is not None:
                state = apply_word(state, word)
            sink(state)
            self.tick_times.append(time.perf_counter())
            state = drain_motion(state)
            n += 1
        return state

    def intervals(self) -> list[float]:
        """Seconds between consecutive deliveries."""
        t = self.tick_times
        return [b - a for a, b in zip(t, t[1:])]


def run_clock(
    source: WordSource,
    sink: Sink,
    rate: float = 60.0,
    *,
    ticks: int | None = None,
    kind: str = "gamepad",
    stop: threading.Event | None = None,
) -> FrameClock:
    """Run a clock to completion and return it (tick times included)."""
    clock = FrameClock(rate=rate)
    clock.run(source, sink, ticks=ticks, kind=kind, stop=stop)
    return clock


def stream_word_source(stream: FrameStream) -> WordSource:
    """Replay an expanded stream one frame per tick; holds after exhaustion."""
    it = iter(stream.states)

    def source() -> ControlWord | None:
        state = next(it, None)
        return None if state is None else state_to_word(state, dur=1)

    return source


class WordScheduler:
    """Ordered, bounded word queue honoring durations and unbounded holds.

    A finite word occupies dur ticks; a hold word (dur=-1) plays until the
    next word arrives. On overflow the oldest unplayed finite word is dropped
    first (live freshness beats completeness); ``dropped`` counts losses.
    """

    def __init__(self, maxlen: int = 64):
        self._queue: deque[ControlWord] = deque()
        self._maxlen = maxlen
        self._remaining = 0  # ticks left on the playing word; -1 = unbounded hold
        self._lock = threading.Lock()
        self.dropped = 0

    def push(self, word: ControlWord) -> None:
        with self._lock:
            if len(self._queue) >= self._maxlen:
                for i, queued in enumerate(self._queue):
                    if queued.dur != DUR_HOLD:
                        del self._queue[i]
                        break
                else:
                    self._queue.popleft()
                self.dropped += 1
            self._queue.append(word)

    def push_sentence(self, sentence: Iterable[ControlWord]) -> None:
        for word in sentence:
            self.push(word)

    def idle(self) -> bool:
        with self._lock:
            return not self._queue and self._remaining <= 0

    def __call__(self) -> ControlWord | None:
        with self._lock:
            if self._remaining > 0:
                self._remaining -= 1
                return None
            if not self._queue:
                self._remaining = 0
                return None
            word = self._queue.popleft()
            self._remaining = word.dur - 1 if word.dur != DUR_HOLD else -1
            return word


class CollectSink:
    """Accumulates delivered states in memory; raising once closed."""

    def __init__(self):
        self.states: list[DeviceState] = []
        self._closed = False

    def __call__(self, state: DeviceState) -> None:
        if self._closed:
            raise SinkClosed("collect sink is closed")
        self.states.append(state)

    def close(self) -> None:
        self._closed = True


class RecordingSink:
    """Frame log writer: ``frame_index<TAB><canonical word JSON>`` per line."""

    def __init__(self, path_or_file):
        if hasattr(path_or_file, "write"):
            self._file = path_or_file
            self._owns = False
        else:
            self._file = open(path_or_file, "w", encoding="utf-8")
            self._owns = True
        self._index = 0
        self._closed = False

    def __call__(self, state: DeviceState) -> None:
        if self._closed:
            raise SinkClosed("recording sink is closed")
        self._file.write(f"{self._index}\t{serialize_word(state_to_word(state))}\n")
        self._index += 1

    def close(self) -> None:
        if not self._closed:
            self._closed = True
            self._file.flush()
            if self._owns:
                self._file.close()


def record_stream(stream: FrameStream, path_or_file) -> None:
    """Write an expanded stream straight to a frame log (no clocking)."""
    sink = RecordingSink(path_or_file)
    try:
        for _, state in stream:
            sink(state)
    finally:
        sink.close()
