from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Literal


@dataclass(frozen=True)
class PortDecl:
    name: str
    kind: Literal["input", "output"]
    type_tag: str


def default_salt(task_id: str) -> int:
    """Stable 64-bit salt derived from the task id."""
    return int.from_bytes(hashlib.blake2b(task_id.encode(), digest_size=8).digest(), "little")


class Task:
    """Base class for framework tasks.

    ``inputs`` and ``outputs`` map collection keys to opaque type tags.
    Subclasses override any of the lifecycle hooks; ``process`` must be safe to
    call concurrently for different events.
    """

    def __init__(self, id, inputs=None, outputs=None, seed_salt=None):
        if not id:
            raise ValueError("task id must be non-empty")
        self.id = id
        self.inputs = [PortDecl(k, "input", t) for k, t in (inputs or {}).items()]
        self.outputs = [PortDecl(k, "output", t) for k, t in (outputs or {}).items()]
        for ports in (self.inputs, self.outputs):
            for p in ports:
                if not p.name:
                    raise ValueError(f"task {id!r} declares an empty collection key")
        self.seed_salt = default_salt(id) if seed_salt is None else seed_salt & 0xFFFFFFFFFFFFFFFF
        self._in_keys = frozenset(p.name for p in self.inputs)
        self._out_keys = frozenset(p.name for p in self.outputs)

    @property
    def input_keys(self):
        return self._in_keys

    @property
    def output_keys(self):
        return self._out_keys

    def configure(self, services):
        pass

    def start(self, services):
        pass

    def process(self, ctx):
        pass

    def stop(self, services):
        pass

    def __repr__(self):
        return f"<{type(self).__name__} {self.id!r}>"


class FuncTask(Task):
    """Task whose ``process`` is a plain function ``fn(ctx)``."""

    def __init__(self, id, fn, inputs=None, outputs=None, seed_salt=None):
        super().__init__(id, inputs, outputs, seed_salt)
        self._fn = fn

    def process(self, ctx):
        self._fn(ctx)
