"""Message logging service.

A thin wrapper over :mod:`logging`; each call emits a whole line under the
handler lock, so concurrent callers never interleave within a message.
"""

import logging
import sys

LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


def parse_level(level):
    if isinstance(level, int):
        return level
    try:
        return LEVELS[level.lower()]
    except KeyError:
        raise ValueError(f"unknown log level {level!r}; choose from {sorted(LEVELS)}") from None


class LogService:
    def __init__(self, threshold="info", stream=None, name="pyfads.fwk"):
        self.logger = logging.getLogger(name)
        self.logger.propagate = False
        self.logger.setLevel(logging.DEBUG)
        self._handler = logging.StreamHandler(stream if stream is not None else sys.stderr)
        self._handler.setFormatter(logging.Formatter("%(levelname)-7s %(message)s"))
        for h in list(self.logger.handlers):
            if getattr(h, "_pyfads", False):
                self.logger.removeHandler(h)
        self._handler._pyfads = True
        self.logger.addHandler(self._handler)
        self.set_threshold(threshold)

    def set_threshold(self, level):
        self.threshold = parse_level(level)
        self._handler.setLevel(self.threshold)

    def log(self, level, task_id, event_index, message):
        lvl = parse_level(level)
        if lvl < self.threshold:
            return
        where = f"[{task_id}]" if event_index is None else f"[{task_id} evt={event_index}]"
        self.logger.log(lvl, "%s %s", where, message)

    def close(self):
        self.logger.removeHandler(self._handler)
        self._handler.flush()
