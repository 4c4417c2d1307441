"""Input-remapping middleware for game control.

Parses a JSON control language into timed device words, routes them through
declarative node graphs (button/dpad/axis remaps, macros, virtual devices),
and emits them over WebSocket, HTTP trigger, pub/sub, and serial wire
formats, with a latency benchmark harness on top.
"""

from .bus import LoopbackBus, SentencePublisher, SentenceSubscriber, make_bus, topic_for_device
from .clock import FrameClock, RecordingSink, WordScheduler, run_clock, stream_word_source
from .engine import Engine
from .graph import NodeGraph, TriggerEvent, build_graph, fire_macro, load_graph, step_graph
from .remap import (
    AngTransform,
    ButtonMapping,
    DpadMapping,
    MIRROR_HORIZONTAL,
    remap_ang,
    remap_button,
    remap_dpad,
)
from .state import (
    DeviceState,
    FrameStream,
    GamepadState,
    KeyboardState,
    MouseState,
    apply_word,
    diff_states,
    expand_sentence,
    neutral_state,
    state_to_word,
)
from .uart import UartStreamDecoder, decode_uart_frame, encode_uart_frame
from .wire import decode_binary, encode_binary
from .words import (
    ControlSentence,
    ControlWord,
    GamepadWord,
    KeyboardWord,
    MouseWord,
    parse_sentence,
    parse_word,
    serialize_sentence,
    serialize_word,
)

__version__ = "0.1.0"

__all__ = [
    "AngTransform", "ButtonMapping", "ControlSentence", "ControlWord",
    "DeviceState", "DpadMapping", "Engine", "FrameClock", "FrameStream",
    "GamepadState", "GamepadWord", "KeyboardState", "KeyboardWord",
    "LoopbackBus", "MIRROR_HORIZONTAL", "MouseState", "MouseWord",
    "NodeGraph", "RecordingSink", "SentencePublisher", "SentenceSubscriber",
    "TriggerEvent", "UartStreamDecoder", "WordScheduler",
    "apply_word", "build_graph", "decode_binary", "decode_uart_frame",
    "diff_states", "encode_binary", "encode_uart_frame", "expand_sentence",
    "fire_macro", "load_graph", "make_bus", "neutral_state", "parse_sentence",
    "parse_word", "remap_ang", "remap_button", "remap_dpad", "run_clock",
    "serialize_sentence", "serialize_word", "state_to_word", "step_graph",
    "stream_word_source", "topic_for_device",
]
