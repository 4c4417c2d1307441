"""At-least-once topic bus with sequence-numbered envelopes and dedup.

The bus backend is pluggable: an in-process loopback bus carries tests and
desk-scale runs; addresses of the form ``mqtt://host[:port]`` select an
external broker client when one is installed. Envelopes are canonical JSON
``{"seq":n,"payload":<sentence>}``; subscribers drop any sequence number at
or below the last one seen, so duplicate deliveries collapse.
"""

from __future__ import annotations

import json
import threading
import time
from typing import Callable

from .errors import BrokerUnreachable, ConfigError, MalformedJson
from .words import ControlSentence, sentence_from_obj, serialize_sentence

TOPIC_PREFIX = "gcz/emu"


def topic_for_device(device_id: str, prefix: str = TOPIC_PREFIX) -> str:
    if not device_id or any(c in device_id for c in "+#/"):
        raise ConfigError(f"bad device id {device_id!r} (empty or wildcard characters)")
    return f"{prefix}/{device_id}"


class LoopbackBus:
    """In-process ordered topic bus; delivery happens in the publisher's thread."""

    def __init__(self):
        self._subs: dict[str, list[Callable[[str, str], None]]] = {}
        self._lock = threading.Lock()

    def subscribe(self, topic: str, callback: Callable[[str, str], None]) -> None:
        with self._lock:
            self._subs.setdefault(topic, []).append(callback)

    def publish(self, topic: str, payload: str) -> None:
        with self._lock:
            subs = list(self._subs.get(topic, ()))
        for cb in subs:
            cb(topic, payload)

    def close(self) -> None:
        with self._lock:
            self._subs.clear()


def make_bus(address: str):
    """Build the backend named by ``address`` (``loopback`` or ``mqtt://...``)."""
    if address == "loopback":
        return LoopbackBus()
    if address.startswith("mqtt://"):
        try:
            import paho.mqtt.client  # noqa: F401
        except ImportError:
            raise BrokerUnreachable(
                f"{address}: MQTT backend needs the paho-mqtt package installed"
            ) from None
        raise BrokerUnreachable(f"{address}: MQTT backend not wired in this build")
    raise ConfigError(f"unknown broker address {address!r} (use 'loopback' or 'mqtt://...')")


def make_envelope(seq: int, sentence: ControlSentence) -> str:
    return f'{{"seq":{seq},"payload":{serialize_sentence(sentence)}}}'


def parse_envelope(payload: str) -> tuple[int, ControlSentence]:
    try:
        obj = json.loads(payload)
    except json.JSONDecodeError as exc:
        raise MalformedJson(f"bad envelope: {exc}") from exc
    if not isinstance(obj, dict) or type(obj.get("seq")) is not int or "payload" not in obj:
        raise MalformedJson("envelope must be {'seq': int, 'payload': [...]}")
    return obj["seq"], sentence_from_obj(obj["payload"], pointer="/payload")


class SentencePublisher:
    """Publishes sentences to one topic with increasing sequence numbers.

    Backend hiccups are retried with capped exponential backoff; persistent
    failure surfaces as BrokerUnreachable after ``attempts`` tries.
    """

    def __init__(self, bus, topic: str, *, attempts: int = 5, base_delay: float = 0.05,
                 max_delay: float = 1.0):
        self.bus = bus
        self.topic = topic
        self.attempts = attempts
        self.base_delay = base_delay
        self.max_delay = max_delay
        self._seq = 0
        self._lock = threading.Lock()

    def publish(self, sentence: ControlSentence) -> int:
        with self._lock:
            self._seq += 1
            seq = self._seq
            envelope = make_envelope(seq, sentence)
            delay = self.base_delay
            for attempt in range(self.attempts):
                try:
                    self.bus.publish(self.topic, envelope)
                    return seq
                except Exception as exc:
                    if attempt == self.attempts - 1:
                        raise BrokerUnreachable(
                            f"publish to {self.topic} failed {self.attempts} times: {exc}"
                        ) from exc
                    time.sleep(delay)
                    delay = min(delay * 2, self.max_delay)


class SentenceSubscriber:
    """Per-topic subscriber that unwraps envelopes and suppresses duplicates."""

    def __init__(self, bus, topic: str, callback: Callable[[int, ControlSentence], None]):
        self.topic = topic
        self.callback = callback
        self.duplicates = 0
        self._last_seq = 0
        self._lock = threading.Lock()
        bus.subscribe(topic, self._on_message)

    def _on_message(self, topic: str, payload: str) -> None:
        seq, sentence = parse_envelope(payload)
        with self._lock:
            if seq <= self._last_seq:
                self.duplicates += 1
                return
            self._last_seq = seq
        self.callback(seq, sentence)
