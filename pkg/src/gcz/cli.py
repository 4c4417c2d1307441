"""Command-line entry point: validate, play, serve, and bench."""

from __future__ import annotations

import functools
import json
import signal
import sys
import threading

import click

from . import bench as bench_mod
from .bus import SentencePublisher, make_bus, topic_for_device
from .clock import CollectSink, RecordingSink, run_clock, stream_word_source
from .config import load_config
from .engine import Engine
from .errors import ConfigError, GczError, MalformedJson
from .graph import graph_from_obj, load_graph
from .state import expand_sentence, state_to_word
from .uart import encode_uart_frame
from .words import ControlSentence, parse_sentence, sentence_from_obj, word_from_obj

EXIT_CLASSIFY_FAIL = 35


def _gcz_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except GczError as exc:
            click.echo(f"error: {exc.diagnostic()}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


@click.group()
def main() -> None:
    """Game-control middleware: DSL validation, playback, serving, benchmarks."""


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@_gcz_errors
def validate(path: str) -> None:
    """Check that PATH parses as a sentence, a word, or a graph config."""
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        doc = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedJson(f"not valid JSON: {exc}") from exc
    if isinstance(doc, list):
        sentence_from_obj(doc)
    elif isinstance(doc, dict) and "nodes" in doc:
        graph_from_obj(doc)
    elif isinstance(doc, dict):
        word_from_obj(doc)
    else:
        raise MalformedJson(f"top-level JSON must be an array or object, got {type(doc).__name__}")


@main.command()
@click.argument("sentence_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--sink", type=click.Choice(["loopback", "record", "uart", "pubsub"]),
              default="loopback", show_default=True)
@click.option("--out", "out_path", default="frames.log", show_default=True,
              help="Frame-log path for the record sink.")
@click.option("--serial", envvar="GCZ_SERIAL", default=None,
              help="Serial device or file path for the uart sink.")
@click.option("--broker", envvar="GCZ_BROKER", default="loopback", show_default=True)
@click.option("--device", default="pad0", show_default=True,
              help="Device id for the pub/sub topic.")
@click.option("--rate", default=60.0, show_default=True, help="Frames per second.")
@_gcz_errors
def play(sentence_path: str, sink: str, out_path: str, serial: str | None,
         broker: str, device: str, rate: float) -> None:
    """Expand SENTENCE_PATH and clock it into a sink at 60 fps."""
    with open(sentence_path, "rb") as fh:
        sentence = parse_sentence(fh.read())
    stream = expand_sentence(sentence)

    closers = []
    if sink == "loopback":
        target = CollectSink()
    elif sink == "record":
        target = RecordingSink(out_path)
        closers.append(target.close)
    elif sink == "uart":
        if not serial:
            raise ConfigError("uart sink needs --serial (or GCZ_SERIAL)")
        fh = open(serial, "ab", buffering=0)
        closers.append(fh.close)
        target = lambda state: fh.write(encode_uart_frame(state))
    else:
        bus = make_bus(broker)
        publisher = SentencePublisher(bus, topic_for_device(device))
        target = lambda state: publisher.publish(ControlSentence((state_to_word(state),)))

    try:
        run_clock(stream_word_source(stream), target, rate,
                  ticks=len(stream), kind=sentence.kind)
    finally:
        for close in closers:
            close()
    click.echo(f"played {len(stream)} frames to {sink}")


@main.command()
@click.option("--graph", "graph_path", envvar="GCZ_GRAPH",
              type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--config", "config_path", envvar="GCZ_CONFIG",
              type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--ws-port", envvar="GCZ_WS_PORT", type=int, default=None)
@click.option("--http-port", envvar="GCZ_HTTP_PORT", type=int, default=None)
@click.option("--broker", envvar="GCZ_BROKER", default=None)
@click.option("--serial", envvar="GCZ_SERIAL", default=None)
@click.option("--topic-prefix", envvar="GCZ_TOPIC_PREFIX", default=None)
@_gcz_errors
def serve(graph_path: str, config_path: str | None, ws_port: int | None,
          http_port: int | None, broker: str | None, serial: str | None,
          topic_prefix: str | None) -> None:
    """Run the middleware: graph + listeners until interrupted."""
    config = load_config(config_path, {
        "graph": graph_path, "ws_port": ws_port, "http_port": http_port,
        "broker": broker, "serial": serial, "topic_prefix": topic_prefix,
    })
    with open(config.graph, "rb") as fh:
        graph = load_graph(fh.read())
    for warning in graph.warnings:
        click.echo(f"warning: {warning}", err=True)

    engine = Engine(graph, config)
    stop = threading.Event()
    for sig in (signal.SIGINT, signal.SIGTERM):
        signal.signal(sig, lambda *_: stop.set())
    engine.start()
    ports = []
    if engine.ws_port:
        ports.append(f"ws :{engine.ws_port}/input")
    if engine.http_port:
        ports.append(f"http :{engine.http_port}/trigger/<name>")
    click.echo("serving " + (", ".join(ports) if ports else "(no listeners)"), err=True)
    stop.wait()
    engine.stop()


@main.command("bench")
@click.option("--route", default="standalone", show_default=True,
              help=f"One of: {', '.join(sorted(bench_mod.ROUTES))}.")
@click.option("--n", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
@click.option("--samples-log", default=None,
              help="Write raw samples as route,label,t_in_ns,t_out_ns lines.")
@_gcz_errors
def bench(route: str, n: int, fmt: str, samples_log: str | None) -> None:
    """Measure probe latency over a route and classify against thresholds."""
    result, _samples = bench_mod.run_route(route, n, sample_log=samples_log)
    click.echo(bench_mod.emit_report([result], fmt))
    if not all(ok for _, ok in result.classification):
        sys.exit(EXIT_CLASSIFY_FAIL)


if __name__ == "__main__":
    main()
