"""Run configuration assembled from file, environment, and CLI flags."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields

from .errors import ConfigError, MalformedJson

ENV_PREFIX = "GCZ_"


@dataclass
class RunConfig:
    graph: str | None = None
    ws_port: int = 8765
    http_port: int = 8766
    broker: str = "loopback"
    serial: str | None = None
    topic_prefix: str = "gcz/emu"
    log_level: str = "info"

    def validate(self) -> "RunConfig":
        for name in ("ws_port", "http_port"):
            port = getattr(self, name)
            if not isinstance(port, int) or not 1 <= port <= 65535:
                raise ConfigError(f"{name}={port!r} outside 1..65535")
        if self.graph is not None and not os.path.exists(self.graph):
            raise ConfigError(f"graph file {self.graph!r} does not exist")
        return self


_INT_FIELDS = {"ws_port", "http_port"}


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Layer config sources: defaults < file < GCZ_* environment < overrides."""
    values: dict = {}
    known = {f.name for f in fields(RunConfig)}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise MalformedJson(f"config {path!r}: {exc}") from exc
        if not isinstance(doc, dict):
            raise ConfigError(f"config {path!r} must be a JSON object")
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(f"config {path!r} has unknown keys {sorted(unknown)}")
        values.update(doc)
    for name in known:
        env = os.environ.get(ENV_PREFIX + name.upper())
        if env is not None:
            values[name] = env
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    for name in _INT_FIELDS & set(values):
        try:
            values[name] = int(values[name])
        except (TypeError, ValueError):
            raise ConfigError(f"{name}={values[name]!r} is not an integer") from None
    return RunConfig(**values).validate()
