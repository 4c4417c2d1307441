"""Declarative node graphs routing control messages from sources to sinks.

A graph is a JSON document of typed nodes plus wires. Messages are either
trigger events (named, payload-free) or control sentences. Propagation is
topological with fan-out in wire-declaration order, so a given graph and
inbound message always produce the same output list.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from .errors import (
    CycleDetected,
    DanglingWire,
    GczError,
    MalformedJson,
    SchemaError,
    UnknownNodeType,
    UnknownSource,
    UnknownTrigger,
)
from .remap import (
    AngTransform,
    ButtonMapping,
    DpadMapping,
    remap_ang,
    remap_button,
    remap_dpad,
)
from .words import ControlSentence, sentence_from_obj, word_from_obj

SOURCE_TYPES = frozenset({"ws-in", "http-in", "inject"})
TRANSFORM_TYPES = frozenset({
    "remap-button", "remap-dpad", "remap-ang", "macro",
    "virtual-gamepad", "virtual-keyboard", "virtual-mouse",
})
SINK_TYPES = frozenset({"hw-emulator-out", "swemu-out", "loopback-out", "record-out"})
NODE_TYPES = SOURCE_TYPES | TRANSFORM_TYPES | SINK_TYPES


@dataclass(frozen=True)
class TriggerEvent:
    """A named, payload-free event (e.g. one HTTP GET)."""

    name: str


Message = Union[TriggerEvent, ControlSentence]


@dataclass(frozen=True)
class NodeSpec:
    id: str
    type: str
    params: dict
    compiled: object = None  # type-specific: mapping table, macro dict, fixed word...


@dataclass(frozen=True)
class Wire:
    from_node: str
    from_port: str
    to_node: str
    to_port: str


def _int_key_map(raw: dict, pointer: str) -> dict[int, int]:
    out = {}
    for k, v in raw.items():
        try:
            out[int(k)] = int(v)
        except (TypeError, ValueError):
            raise SchemaError(f"map entry {k!r}: {v!r} is not integer", pointer=pointer) from None
    return out


def _four(value, default, pointer: str):
    if value is None:
        return default
    if isinstance(value, (int, float, str)):
        return (value,) * 4
    if isinstance(value, list) and len(value) == 4:
        return tuple(value)
    raise SchemaError("expected a scalar or 4-element array", pointer=pointer)


def _compile_params(index: int, node_id: str, node_type: str, params: dict):
    ptr = f"/nodes/{index}/params"
    if not isinstance(params, dict):
        raise SchemaError("params must be an object", pointer=ptr)
    try:
        if node_type == "remap-button":
            mapping = _int_key_map(params.get("map", {}), f"{ptr}/map")
            return ButtonMapping(mapping, params.get("policy", "pass"))
        if node_type == "remap-dpad":
            return DpadMapping(_int_key_map(params.get("map", {}), f"{ptr}/map"))
        if node_type == "remap-ang":
            return AngTransform(
                scale=_four(params.get("scale"), (1, 1, 1, 1), f"{ptr}/scale"),
                offset=_four(params.get("offset"), (0, 0, 0, 0), f"{ptr}/offset"),
                perm=tuple(params.get("perm", (0, 1, 2, 3))),
            )
        if node_type == "macro":
            triggers = params.get("triggers")
            if not isinstance(triggers, dict) or not triggers:
                raise SchemaError("macro needs a non-empty 'triggers' object", pointer=ptr)
            return {
                name: sentence_from_obj(body, pointer=f"{ptr}/triggers/{name}")
                for name, body in triggers.items()
            }
        if node_type == "virtual-gamepad":
            return word_from_obj({"dpad": 5, **params}, pointer=ptr)
        if node_type == "virtual-keyboard":
            return word_from_obj({"key": [], **params}, pointer=ptr)
        if node_type == "virtual-mouse":
            return word_from_obj({"mov": [0, 0], **params}, pointer=ptr)
        if node_type in ("record-out", "hw-emulator-out"):
            kind = params.get("kind", "gamepad")
            if kind not in ("gamepad", "mouse", "keyboard"):
                raise SchemaError(f"bad device kind {kind!r}", pointer=f"{ptr}/kind")
            if node_type == "hw-emulator-out":
                return {"kind": kind}
            path = params.get("path")
            if not isinstance(path, str) or not path:
                raise SchemaError("record-out needs a 'path' string", pointer=f"{ptr}/path")
            return {"kind": kind, "path": path}
        if node_type == "swemu-out":
            device = params.get("device", "pad0")
            if not isinstance(device, str) or not device or any(c in device for c in "+#/"):
                raise SchemaError(f"bad device id {device!r}", pointer=f"{ptr}/device")
            return device
        if node_type == "http-in":
            return params.get("name")  # optional trigger-name filter
        if node_type == "ws-in":
            return params.get("device")  # optional device filter
        if node_type == "inject":
            body = params.get("sentence")
            return None if body is None else sentence_from_obj(body, pointer=f"{ptr}/sentence")
        return None  # loopback-out carries no compiled params
    except SchemaError:
        raise
    except GczError as exc:  # word/sentence validation failures are config errors here
        raise SchemaError(str(exc), pointer=getattr(exc, "pointer", None) or ptr) from exc


@dataclass(frozen=True)
class NodeGraph:
    nodes: dict[str, NodeSpec]
    wires: tuple[Wire, ...]
    order: tuple[str, ...]          # deterministic topological order
    successors: dict[str, tuple[str, ...]]
    warnings: tuple[str, ...]

    def is_source(self, node_id: str) -> bool:
        return self.nodes[node_id].type in SOURCE_TYPES

    def nodes_of_type(self, node_type: str) -> list[NodeSpec]:
        return [spec for spec in self.nodes.values() if spec.type == node_type]


def _find_cycle(nodes: list[str], edges: dict[str, list[str]]) -> list[str]:
    # DFS back-edge hunt restricted to nodes Kahn's pass could not order
    state: dict[str, int] = {}
    stack: list[str] = []

    def visit(n: str) -> list[str] | None:
        state[n] = 1
        stack.append(n)
        for m in edges.get(n, []):
            if m not in state:
                found = visit(m)
                if found:
                    return found
            elif state.get(m) == 1:
                return stack[stack.index(m):] + [m]
        state[n] = 2
        stack.pop()
        return None

    for n in nodes:
        if n not in state:
            found = visit(n)
            if found:
                return found
    return []


def build_graph(node_specs: list[dict], wire_specs: list) -> NodeGraph:
    """Validate node/wire descriptions and return a runnable graph."""
    nodes: dict[str, NodeSpec] = {}
    for i, raw in enumerate(node_specs):
        if not isinstance(raw, dict) or not isinstance(raw.get("id"), str) or not raw["id"]:
            raise SchemaError("node needs a string 'id'", pointer=f"/nodes/{i}")
        node_id, node_type = raw["id"], raw.get("type")
        if node_id in nodes:
            raise SchemaError(f"duplicate node id {node_id!r}", pointer=f"/nodes/{i}/id")
        if node_type not in NODE_TYPES:
            raise UnknownNodeType(f"unknown node type {node_type!r}", pointer=f"/nodes/{i}/type")
        params = raw.get("params", {})
        compiled = _compile_params(i, node_id, node_type, params)
        nodes[node_id] = NodeSpec(node_id, node_type, params, compiled)

    wires: list[Wire] = []
    for i, raw in enumerate(wire_specs):
        if not (isinstance(raw, list) and len(raw) == 4 and all(isinstance(x, str) for x in raw)):
            raise SchemaError(
                "wire must be [fromId, fromPort, toId, toPort]", pointer=f"/wires/{i}"
            )
        wire = Wire(*raw)
        for end, node_id in (("from", wire.from_node), ("to", wire.to_node)):
            if node_id not in nodes:
                raise DanglingWire(f"wire {end}-node {node_id!r} does not exist",
                                   pointer=f"/wires/{i}")
        if wire.from_port != "out" or nodes[wire.from_node].type in SINK_TYPES:
            raise DanglingWire(
                f"node {wire.from_node!r} has no output port {wire.from_port!r}",
                pointer=f"/wires/{i}",
            )
        if wire.to_port != "in" or nodes[wire.to_node].type in SOURCE_TYPES:
            raise DanglingWire(
                f"node {wire.to_node!r} has no input port {wire.to_port!r}",
                pointer=f"/wires/{i}",
            )
        wires.append(wire)

    successors: dict[str, list[str]] = {n: [] for n in nodes}
    indegree: dict[str, int] = {n: 0 for n in nodes}
    for wire in wires:
        successors[wire.from_node].append(wire.to_node)
        indegree[wire.to_node] += 1

    order: list[str] = []
    pending = dict(indegree)
    while len(order) < len(nodes):
        ready = [n for n in nodes if pending.get(n) == 0]
        if not ready:
            leftover = [n for n in nodes if n not in set(order)]
            cycle = _find_cycle(leftover, successors)
            raise CycleDetected("cycle: " + " -> ".join(cycle))
        for n in ready:
            order.append(n)
            pending[n] = -1
            for m in successors[n]:
                pending[m] -= 1

    warnings: list[str] = []
    sink_ids = [n for n, spec in nodes.items() if spec.type in SINK_TYPES]
    if not sink_ids:
        warnings.append("NoSinks")
    reachable: set[str] = set()
    frontier = [n for n, spec in nodes.items() if spec.type in SOURCE_TYPES]
    while frontier:
        n = frontier.pop()
        if n in reachable:
            continue
        reachable.add(n)
        frontier.extend(successors[n])
    warnings.extend(f"UnreachableSink:{n}" for n in sink_ids if n not in reachable)

    return NodeGraph(
        nodes=nodes,
        wires=tuple(wires),
        order=tuple(order),
        successors={n: tuple(s) for n, s in successors.items()},
        warnings=tuple(warnings),
    )


def graph_from_obj(obj: dict) -> NodeGraph:
    if not isinstance(obj, dict) or not isinstance(obj.get("nodes"), list):
        raise SchemaError("config must be an object with a 'nodes' array", pointer="/nodes")
    wires = obj.get("wires", [])
    if not isinstance(wires, list):
        raise SchemaError("'wires' must be an array", pointer="/wires")
    return build_graph(obj["nodes"], wires)


def load_graph(config_text: str | bytes) -> NodeGraph:
    """Parse and validate a JSON graph config."""
    try:
        obj = json.loads(config_text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedJson(f"not valid JSON: {exc}") from exc
    return graph_from_obj(obj)


def fire_macro(trigger_name: str, table: dict[str, ControlSentence]) -> ControlSentence:
    """Look up a named sentence; sentences are immutable so no copy is needed."""
    try:
        return table[trigger_name]
    except KeyError:
        raise UnknownTrigger(f"no macro named {trigger_name!r}") from None


def _map_gamepad_sentence(sentence: ControlSentence, fn) -> ControlSentence:
    return ControlSentence(tuple(fn(w) for w in sentence))


def apply_node(spec: NodeSpec, msg: Message) -> list[Message]:
    """One node's reaction to one message (zero or one outputs)."""
    t = spec.type
    if t == "http-in":
        if spec.compiled is not None and isinstance(msg, TriggerEvent) and msg.name != spec.compiled:
            return []
        return [msg]
    if t in SOURCE_TYPES:
        return [msg]
    if t == "macro":
        if isinstance(msg, TriggerEvent):
            return [fire_macro(msg.name, spec.compiled)]
        return [msg]
    if t.startswith("virtual-"):
        return [ControlSentence((spec.compiled,))]
    if t in ("remap-button", "remap-dpad", "remap-ang"):
        if not isinstance(msg, ControlSentence) or msg.kind != "gamepad":
            return [msg]  # non-gamepad traffic passes through untouched
        if t == "remap-button":
            return [_map_gamepad_sentence(msg, lambda w: remap_button(w, spec.compiled))]
        if t == "remap-dpad":
            return [_map_gamepad_sentence(msg, lambda w: remap_dpad(w, spec.compiled))]
        return [_map_gamepad_sentence(msg, lambda w: remap_ang(w, spec.compiled))]
    raise UnknownNodeType(f"node {spec.id!r} has unroutable type {t!r}")  # pragma: no cover


def step_graph(graph: NodeGraph, inbound: tuple[str, Message]) -> list[tuple[str, Message]]:
    """Propagate one inbound message; returns (sink_id, message) pairs in order."""
    source_id, msg = inbound
    spec = graph.nodes.get(source_id)
    if spec is None or spec.type not in SOURCE_TYPES:
        raise UnknownSource(f"{source_id!r} is not a source node")
    inbox: dict[str, list[Message]] = {source_id: [msg]}
    outputs: list[tuple[str, Message]] = []
    for node_id in graph.order:
        msgs = inbox.pop(node_id, None)
        if not msgs:
            continue
        node = graph.nodes[node_id]
        if node.type in SINK_TYPES:
            outputs.extend((node_id, m) for m in msgs)
            continue
        emitted: list[Message] = []
        for m in msgs:
            emitted.extend(apply_node(node, m))
        if emitted:
            for succ in graph.successors[node_id]:
                inbox.setdefault(succ, []).extend(emitted)
    return outputs
