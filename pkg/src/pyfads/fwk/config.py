"""JSON pipeline configuration.

Document shape::

    {
      "global_seed": 42,
      "sources": ["gen_event"],
      "tasks": [
        {"id": "...", "kind": "...", "params": {...},
         "inputs": {"port": "collection key"}, "outputs": {"port": "collection key"}}
      ],
      "detector": {...},          # optional, read by simulation tasks
      "input": {...}              # optional default event source
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

_REGISTRY: dict[str, type] = {}


def register(kind):
    """Class decorator adding a task kind to the registry."""

    def deco(cls):
        if kind in _REGISTRY and _REGISTRY[kind] is not cls:
            raise ValueError(f"task kind {kind!r} registered twice")
        _REGISTRY[kind] = cls
        cls.kind = kind
        return cls

    return deco


def registered_kinds():
    return sorted(_REGISTRY)


@dataclass
class TaskConfig:
    id: str
    kind: str
    params: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)


@dataclass
class PipelineConfig:
    global_seed: int
    tasks: list[TaskConfig]
    sources: list[str]
    detector: dict = field(default_factory=dict)
    input: dict = field(default_factory=dict)
    path: Path | None = None


def _keymap(raw, what, tid):
    if raw is None:
        return {}
    if not isinstance(raw, dict) or not all(
        isinstance(k, str) and isinstance(v, str) and v for k, v in raw.items()
    ):
        raise ConfigError(f"task {tid!r}: {what} must map port names to non-empty collection keys")
    return dict(raw)


def parse_config(doc, path=None) -> PipelineConfig:
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(doc) - {"global_seed", "tasks", "sources", "detector", "input"}
    if unknown:
        raise ConfigError(f"unknown top-level keys {sorted(unknown)}")
    seed = doc.get("global_seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise ConfigError("global_seed must be an unsigned 64-bit integer")
    sources = doc.get("sources", [])
    if not isinstance(sources, list) or not all(isinstance(s, str) and s for s in sources):
        raise ConfigError("sources must be a list of collection keys")
    raw_tasks = doc.get("tasks")
    if not isinstance(raw_tasks, list):
        raise ConfigError("tasks must be a list")
    tasks = []
    for i, raw in enumerate(raw_tasks):
        if not isinstance(raw, dict):
            raise ConfigError(f"tasks[{i}] must be an object")
        tid = raw.get("id")
        if not isinstance(tid, str) or not tid:
            raise ConfigError(f"tasks[{i}] needs a non-empty string id")
        kind = raw.get("kind")
        if not isinstance(kind, str):
            raise ConfigError(f"task {tid!r}: missing kind")
        params = raw.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError(f"task {tid!r}: params must be an object")
        tasks.append(
            TaskConfig(
                tid,
                kind,
                params,
                _keymap(raw.get("inputs"), "inputs", tid),
                _keymap(raw.get("outputs"), "outputs", tid),
            )
        )
    return PipelineConfig(
        seed, tasks, list(sources), doc.get("detector", {}) or {}, doc.get("input", {}) or {}, path
    )


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return parse_config(doc, path)


def build_tasks(cfg: PipelineConfig):
    """Instantiate every configured task through the kind registry."""
    out = []
    for tc in cfg.tasks:
        cls = _REGISTRY.get(tc.kind)
        if cls is None:
            raise ConfigError(f"task {tc.id!r}: unknown kind {tc.kind!r}")
        try:
            out.append(cls.from_config(tc, cfg))
        except ConfigError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"task {tc.id!r} ({tc.kind}): {exc}") from exc
    return out
