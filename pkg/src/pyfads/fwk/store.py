from __future__ import annotations

import threading

from .errors import DoubleWrite, UndeclaredInput, UndeclaredOutput
from .seeding import make_rng, task_event_seed


class EventStore:
    """Single-assignment store for one event."""

    __slots__ = ("event_index", "_slots", "_lock")

    def __init__(self, event_index):
        self.event_index = event_index
        self._slots = {}
        self._lock = threading.Lock()

    def put(self, key, value, task=None):
        if task is not None and key not in task.output_keys:
            raise UndeclaredOutput(key, task.id)
        with self._lock:
            if key in self._slots:
                raise DoubleWrite(key, self.event_index)
            self._slots[key] = value

    def get(self, key, task=None):
        if task is not None and key not in task.input_keys:
            raise UndeclaredInput(key, task.id)
        return self._slots[key]

    def __contains__(self, key):
        return key in self._slots

    def keys(self):
        return self._slots.keys()


class EventContext:
    """What a task sees while processing one event.

    Aggregation calls (``fill``, ``fill2d``, ``append``) are buffered and
    applied by the framework in event order once the event completes.
    """

    __slots__ = (
        "event_index", "task", "store", "_global_seed", "_rng", "_ops", "_log", "_hbook", "skipped"
    )

    def __init__(self, store, task, global_seed, log=None, hbook=None):
        self.event_index = store.event_index
        self.task = task
        self.store = store
        self._global_seed = global_seed
        self._rng = None
        self._ops = []
        self._log = log
        self._hbook = hbook
        self.skipped = False

    # store access

    def get(self, key):
        return self.store.get(key, self.task)

    def put(self, key, value):
        self.store.put(key, value, self.task)

    # randomness

    @property
    def seed(self):
        return task_event_seed(self._global_seed, self.task.seed_salt, self.event_index)

    @property
    def rng(self):
        if self._rng is None:
            self._rng = make_rng(self.seed)
        return self._rng

    # control

    def skip(self):
        """Veto the rest of this event: downstream tasks do not run and no
        aggregation from this event is recorded."""
        self.skipped = True

    # services

    def log(self, level, message):
        if self._log is not None:
            self._log.log(level, self.task.id, self.event_index, message)

    def fill(self, name, x, w=1.0):
        if self._hbook is not None:
            self._hbook.require(name, "h1")
        self._ops.append((0, name, x, w))

    def fill2d(self, name, x, y, w=1.0):
        if self._hbook is not None:
            self._hbook.require(name, "h2")
        self._ops.append((1, name, x, y, w))

    def append(self, name, row):
        row = tuple(row)
        if self._hbook is not None:
            # schema errors surface in the task that made them
            self._hbook.require(name, "nt")._check(row)
        self._ops.append((2, name, row))
