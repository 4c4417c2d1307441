"""Assembles a loaded graph with its transports into a running middleware process.

One worker thread owns message propagation: listeners enqueue inbound
messages, the worker steps the graph and dispatches each sink output. Sink
side effects are: loopback-out fans out to in-process taps, swemu-out
publishes to the topic bus, record-out and hw-emulator-out play sentences
through a 60 fps clock into a frame log or serial UART frames.
"""

from __future__ import annotations

import queue
import threading
import time
from collections import deque

from .bus import SentencePublisher, make_bus, topic_for_device
from .clock import FrameClock, RecordingSink, WordScheduler
from .config import RunConfig
from .errors import ConfigError, GczError, KindMismatch
from .graph import Message, NodeGraph, TriggerEvent, step_graph
from .servers import HttpTriggerServer, WsIngestServer
from .uart import encode_uart_frame
from .words import ControlSentence


class ClockedWriter:
    """Plays queued words through a frame clock into a per-state writer."""

    def __init__(self, kind: str, write_state, rate: float = 60.0):
        self.scheduler = WordScheduler()
        self._stop = threading.Event()
        self._clock = FrameClock(rate=rate)
        self._kind = kind
        self._write = write_state
        self._thread = threading.Thread(target=self._run, daemon=True)

    def _run(self) -> None:
        self._clock.run(self.scheduler, self._write, kind=self._kind, stop=self._stop)

    def start(self) -> None:
        self._thread.start()

    def feed(self, sentence: ControlSentence) -> None:
        if sentence.kind != self._kind:
            raise KindMismatch(f"{self._kind} sink cannot play a {sentence.kind} sentence")
        self.scheduler.push_sentence(sentence)

    def stop(self, drain_timeout: float = 5.0) -> None:
        deadline = time.monotonic() + drain_timeout
        while not self.scheduler.idle() and time.monotonic() < deadline:
            time.sleep(0.005)
        self._stop.set()
        self._thread.join(timeout=5)


class Engine:
    """A loaded graph plus its listeners, bus, and sink writers."""

    def __init__(self, graph: NodeGraph, config: RunConfig | None = None, bus=None):
        self.graph = graph
        self.config = config or RunConfig()
        self.bus = bus if bus is not None else make_bus(self.config.broker)
        self.errors: deque = deque(maxlen=100)  # per-message failures, newest last
        self._queue: "queue.Queue" = queue.Queue()
        self._taps: dict[str, list] = {}
        self._publishers: dict[str, SentencePublisher] = {}
        self._writers: dict[str, ClockedWriter] = {}
        self._files: list = []
        self._ws: WsIngestServer | None = None
        self._http: HttpTriggerServer | None = None
        self._worker = threading.Thread(target=self._run, name="engine", daemon=True)
        self._started = False

    # --- wiring ---

    def add_tap(self, sink_id: str, callback) -> None:
        """Observe messages arriving at a loopback-out sink (worker thread)."""
        self._taps.setdefault(sink_id, []).append(callback)

    def _prepare_sinks(self) -> None:
        for spec in self.graph.nodes_of_type("swemu-out"):
            topic = topic_for_device(spec.compiled, self.config.topic_prefix)
            self._publishers[spec.id] = SentencePublisher(self.bus, topic)
        for spec in self.graph.nodes_of_type("record-out"):
            sink = RecordingSink(spec.compiled["path"])
            self._files.append(sink)
            self._writers[spec.id] = ClockedWriter(spec.compiled["kind"], sink)
        hw_specs = self.graph.nodes_of_type("hw-emulator-out")
        if hw_specs:
            if not self.config.serial:
                raise ConfigError("graph has hw-emulator-out nodes but no serial path is set")
            serial = open(self.config.serial, "ab", buffering=0)
            self._files.append(serial)
            for spec in hw_specs:
                self._writers[spec.id] = ClockedWriter(
                    spec.compiled["kind"], lambda s, f=serial: f.write(encode_uart_frame(s))
                )

    def _start_listeners(self) -> None:
        if self.graph.nodes_of_type("ws-in"):
            self._ws = WsIngestServer("0.0.0.0", self.config.ws_port, self._on_ws_sentence)
            self._ws.start()
        if self.graph.nodes_of_type("http-in"):
            self._http = HttpTriggerServer("0.0.0.0", self.config.http_port, self._on_trigger)
            self._http.start()

    def start(self) -> "Engine":
        self._prepare_sinks()
        self._start_listeners()
        self._worker.start()
        self._started = True
        for writer in self._writers.values():
            writer.start()
        return self

    # --- inbound ---

    def _on_ws_sentence(self, conn_id: int, device: "str | None", sentence) -> None:
        for spec in self.graph.nodes_of_type("ws-in"):
            if spec.compiled is None or device is None or spec.compiled == device:
                self.inject(spec.id, sentence)

    def _on_trigger(self, name: str) -> None:
        for spec in self.graph.nodes_of_type("http-in"):
            self.inject(spec.id, TriggerEvent(name))

    def inject(self, source_id: str, msg: Message) -> None:
        """Queue one message at a source node (thread-safe)."""
        self._queue.put((source_id, msg))

    # --- propagation ---

    def _run(self) -> None:
        while True:
            item = self._queue.get()
            if item is None:
                self._queue.task_done()
                return
            try:
                for sink_id, msg in step_graph(self.graph, item):
                    self._dispatch(sink_id, msg)
            except GczError as exc:
                self.errors.append(exc)
            finally:
                self._queue.task_done()

    def _dispatch(self, sink_id: str, msg: Message) -> None:
        node_type = self.graph.nodes[sink_id].type
        if node_type == "loopback-out":
            for cb in self._taps.get(sink_id, ()):
                cb(msg)
            return
        if not isinstance(msg, ControlSentence):
            return  # only sentences cross device boundaries
        if node_type == "swemu-out":
            self._publishers[sink_id].publish(msg)
        elif node_type in ("record-out", "hw-emulator-out"):
            self._writers[sink_id].feed(msg)

    def wait_idle(self, timeout: float = 5.0) -> bool:
        """Block until every queued message has been propagated."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            if self._queue.unfinished_tasks == 0:
                return True
            time.sleep(0.001)
        return False

    # --- teardown ---

    def stop(self) -> None:
        """Stop listeners, drain the inbound queue, stop writers, close files."""
        if self._ws is not None:
            self._ws.stop()
        if self._http is not None:
            self._http.stop()
        if self._started:
            self._queue.put(None)
            self._worker.join(timeout=10)
        for writer in self._writers.values():
            writer.stop()
        for fh in self._files:
            fh.close()
        if hasattr(self.bus, "close"):
            self.bus.close()

    @property
    def ws_port(self) -> "int | None":
        return self._ws.port if self._ws else None

    @property
    def http_port(self) -> "int | None":
        return self._http.port if self._http else None
