"""Latency assessment: timed probes through configured routes, threshold checks.

A probe is a single-word sentence (neutral pad plus one button). Probes run
strictly one at a time on a monotonic clock; a route's result is the sample
set over n probes plus its classification against the game-genre delay
thresholds (100 / 500 / 1000 ms).
"""

from __future__ import annotations

import math
import socket
import threading
import time
from dataclasses import dataclass

from websockets.sync.client import connect as ws_connect

from .bus import LoopbackBus, SentenceSubscriber, topic_for_device
from .config import RunConfig
from .engine import Engine
from .errors import ProbeTimeout, RouteUnavailable
from .graph import build_graph
from .words import ControlSentence, GamepadWord, serialize_sentence

THRESHOLDS: tuple[tuple[str, float], ...] = (
    ("avatar-first-person", 100.0),
    ("avatar-third-person", 500.0),
    ("omnipresent", 1000.0),
)


@dataclass(frozen=True)
class LatencySample:
    route: str
    label: str
    t_in_ns: int
    t_out_ns: int

    @property
    def delay_ms(self) -> float:
        return (self.t_out_ns - self.t_in_ns) / 1e6


def _percentile(sorted_ms: list[float], q: float) -> float:
    # nearest-rank; for n == 1 every percentile is the one sample
    k = max(1, math.ceil(q * len(sorted_ms)))
    return sorted_ms[k - 1]


@dataclass(frozen=True)
class LatencyStats:
    n: int
    mean_ms: float
    p50_ms: float
    p95_ms: float
    max_ms: float

    @classmethod
    def from_samples(cls, samples: list[LatencySample]) -> "LatencyStats":
        if not samples:
            raise ValueError("need at least one sample")
        delays = sorted(s.delay_ms for s in samples)
        return cls(
            n=len(delays),
            mean_ms=sum(delays) / len(delays),
            p50_ms=_percentile(delays, 0.50),
            p95_ms=_percentile(delays, 0.95),
            max_ms=delays[-1],
        )


def classify(stats: LatencyStats, table=THRESHOLDS) -> list[tuple[str, bool]]:
    """Pass per group iff mean delay is at or under the group threshold."""
    return [(label, stats.mean_ms <= threshold) for label, threshold in table]


def write_sample_log(path: str, samples: list[LatencySample]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for s in samples:
            fh.write(f"{s.route},{s.label},{s.t_in_ns},{s.t_out_ns}\n")


def read_sample_log(path: str) -> list[LatencySample]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            route, label, t_in, t_out = line.rstrip("\n").split(",")
            out.append(LatencySample(route, label, int(t_in), int(t_out)))
    return out


def probe_sentence() -> ControlSentence:
    return ControlSentence((GamepadWord(dpad=5, btn=frozenset({1}), dur=1),))


def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


_REMAP_PARAMS = [
    ("remap-button", {"map": {"1": "2", "2": "1"}, "policy": "pass"}),
    ("remap-ang", {"scale": 1, "offset": 0}),
    ("remap-dpad", {"map": {"1": "3", "3": "1", "4": "6", "6": "4", "7": "9", "9": "7"}}),
]


def _chain_graph(source: dict, sink: dict, transforms=_REMAP_PARAMS):
    nodes = [source]
    nodes += [{"id": f"n{i}", "type": t, "params": p} for i, (t, p) in enumerate(transforms)]
    nodes.append(sink)
    ids = [n["id"] for n in nodes]
    wires = [[a, "out", b, "in"] for a, b in zip(ids, ids[1:])]
    return build_graph(nodes, wires)


class _Tap:
    """Arrival notifier: records the observation time and wakes the prober."""

    def __init__(self):
        self.event = threading.Event()
        self.t_out_ns = 0

    def __call__(self, *_args) -> None:
        self.t_out_ns = time.perf_counter_ns()
        self.event.set()

    def await_probe(self, timeout: float, route: str, label: str) -> int:
        if not self.event.wait(timeout):
            raise ProbeTimeout(f"{route}: probe {label} not observed within {timeout:.0f} s")
        self.event.clear()
        return self.t_out_ns


class _InProcessRoute:
    """inject -> (transforms) -> loopback-out, engine queue included."""

    def __init__(self, transforms):
        graph = _chain_graph(
            {"id": "in", "type": "inject", "params": {}},
            {"id": "out", "type": "loopback-out", "params": {}},
            transforms,
        )
        self.tap = _Tap()
        self.engine = Engine(graph, RunConfig(), bus=LoopbackBus())
        self.engine.add_tap("out", self.tap)
        self.engine.start()

    def probe(self, sentence, timeout, route, label):
        t_in = time.perf_counter_ns()
        self.engine.inject("in", sentence)
        return t_in, self.tap.await_probe(timeout, route, label)

    def close(self):
        self.engine.stop()


class _WsToBusRoute:
    """WebSocket ingest -> remap chain -> pub/sub loopback subscriber."""

    def __init__(self):
        graph = _chain_graph(
            {"id": "in", "type": "ws-in", "params": {}},
            {"id": "out", "type": "swemu-out", "params": {"device": "pad0"}},
        )
        bus = LoopbackBus()
        config = RunConfig(ws_port=_free_port())
        self.tap = _Tap()
        self.subscriber = SentenceSubscriber(bus, topic_for_device("pad0"), self.tap)
        self.engine = Engine(graph, config, bus=bus).start()
        self.client = ws_connect(f"ws://127.0.0.1:{config.ws_port}/input")

    def probe(self, sentence, timeout, route, label):
        text = serialize_sentence(sentence)
        t_in = time.perf_counter_ns()
        self.client.send(text)
        return t_in, self.tap.await_probe(timeout, route, label)

    def close(self):
        self.client.close()
        self.engine.stop()


@dataclass(frozen=True)
class RouteSpec:
    name: str
    input_label: str
    nodes_label: str
    emulation_label: str
    factory: object  # () -> runner with probe()/close()


ROUTES: dict[str, RouteSpec] = {
    "direct": RouteSpec(
        "direct", "Gamepad", "(none)", "loopback",
        lambda: _InProcessRoute(()),
    ),
    "standalone": RouteSpec(
        "standalone", "Gamepad", "remap-button remap-ang remap-dpad", "loopback",
        lambda: _InProcessRoute(_REMAP_PARAMS),
    ),
    "overall": RouteSpec(
        "overall", "Gamepad (WebSocket)", "remap-button remap-ang remap-dpad",
        "pub/sub loopback",
        _WsToBusRoute,
    ),
}


@dataclass(frozen=True)
class RouteResult:
    route: str
    input_label: str
    nodes_label: str
    emulation_label: str
    stats: LatencyStats

    @property
    def classification(self) -> list[tuple[str, bool]]:
        return classify(self.stats)


def run_route(
    name: str,
    n: int = 100,
    *,
    timeout: float = 5.0,
    sample_log: str | None = None,
) -> tuple[RouteResult, list[LatencySample]]:
    """Probe a named route n times, one probe in flight at a time."""
    spec = ROUTES.get(name)
    if spec is None:
        raise RouteUnavailable(f"unknown route {name!r}; have {sorted(ROUTES)}")
    if n < 1:
        raise ValueError("n must be at least 1")
    sentence = probe_sentence()
    runner = spec.factory()
    samples: list[LatencySample] = []
    try:
        for i in range(n):
            label = f"probe{i}"
            t_in, t_out = runner.probe(sentence, timeout, name, label)
            samples.append(LatencySample(name, label, t_in, t_out))
    finally:
        runner.close()
    if sample_log:
        write_sample_log(sample_log, samples)
    result = RouteResult(
        spec.name, spec.input_label, spec.nodes_label, spec.emulation_label,
        LatencyStats.from_samples(samples),
    )
    return result, samples


REPORT_SCHEMA = {
    "type": "object",
    "required": ["results"],
    "additionalProperties": False,
    "properties": {
        "results": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["route", "input", "nodes", "emulation",
                             "n", "mean_ms", "p50_ms", "p95_ms", "max_ms",
                             "classification"],
                "additionalProperties": False,
                "properties": {
                    "route": {"type": "string"},
                    "input": {"type": "string"},
                    "nodes": {"type": "string"},
                    "emulation": {"type": "string"},
                    "n": {"type": "integer", "minimum": 1},
                    "mean_ms": {"type": "number", "minimum": 0},
                    "p50_ms": {"type": "number", "minimum": 0},
                    "p95_ms": {"type": "number", "minimum": 0},
                    "max_ms": {"type": "number", "minimum": 0},
                    "classification": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["group", "threshold_ms", "pass"],
                            "additionalProperties": False,
                            "properties": {
                                "group": {"type": "string"},
                                "threshold_ms": {"type": "number"},
                                "pass": {"type": "boolean"},
                            },
                        },
                    },
                },
            },
        },
    },
}


def report_obj(results: list[RouteResult]) -> dict:
    thresholds = dict(THRESHOLDS)
    return {
        "results": [
            {
                "route": r.route,
                "input": r.input_label,
                "nodes": r.nodes_label,
                "emulation": r.emulation_label,
                "n": r.stats.n,
                "mean_ms": r.stats.mean_ms,
                "p50_ms": r.stats.p50_ms,
                "p95_ms": r.stats.p95_ms,
                "max_ms": r.stats.max_ms,
                "classification": [
                    {"group": g, "threshold_ms": thresholds[g], "pass": ok}
                    for g, ok in r.classification
                ],
            }
            for r in results
        ]
    }


def emit_report(results: list[RouteResult], fmt: str = "text") -> str:
    """Render results as a fixed-schema JSON document or an aligned text table."""
    if not results:
        raise ValueError("need at least one result")
    if fmt == "json":
        import json

        return json.dumps(report_obj(results), indent=2)
    header = ["Input", "Processed Nodes", "Emulation", "Average Delay",
              "p50", "p95", "max", "n", "Thresholds"]
    rows = [header]
    for r in results:
        verdicts = "/".join("pass" if ok else "FAIL" for _, ok in r.classification)
        rows.append([
            r.input_label, r.nodes_label, r.emulation_label,
            f"{r.stats.mean_ms:.3f} ms", f"{r.stats.p50_ms:.3f}", f"{r.stats.p95_ms:.3f}",
            f"{r.stats.max_ms:.3f}", str(r.stats.n), verdicts,
        ])
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[j]) for j, cell in enumerate(row)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)
