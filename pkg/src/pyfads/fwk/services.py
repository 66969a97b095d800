"""Services shared by all tasks of a run."""

from __future__ import annotations

from .. import rio
from ..hbook import Hist1D, Hist2D, NTuple
from .log import LogService

_KINDS = {"h1": Hist1D, "h2": Hist2D, "nt": NTuple}


class HBookService:
    """Histogram and n-tuple booking plus ordered commit of event buffers.

    Objects are booked single-threaded (configure/start). During the event
    loop tasks only buffer fills; the framework applies each event's buffers
    in event-index order, so results do not depend on the worker count.
    """

    def __init__(self, output=None):
        self.output = output
        self.objects: dict[str, Hist1D | Hist2D | NTuple] = {}

    def _book(self, name, obj):
        if name in self.objects:
            raise KeyError(f"{name!r} already booked")
        self.objects[name] = obj
        return obj

    def book_h1(self, name, n_bins, lo, hi):
        return self._book(name, Hist1D(n_bins, lo, hi))

    def book_h2(self, name, nx, xlo, xhi, ny, ylo, yhi):
        return self._book(name, Hist2D(nx, xlo, xhi, ny, ylo, yhi))

    def book_ntuple(self, name, schema):
        return self._book(name, NTuple(schema))

    def require(self, name, kind):
        obj = self.objects.get(name)
        if not isinstance(obj, _KINDS[kind]):
            raise KeyError(f"no {_KINDS[kind].__name__} booked as {name!r}")
        return obj

    def commit(self, event_index, ops):
        objs = self.objects
        for op in ops:
            if op[0] == 0:
                objs[op[1]].fill(op[2], op[3])
            elif op[0] == 1:
                objs[op[1]].fill(op[2], op[3], op[4])
            else:
                objs[op[1]].append(event_index, op[2])

    def write(self, path=None):
        path = path or self.output
        if path is not None:
            rio.dump(path, self.objects)
        return path


class Services:
    """Bundle handed to configure/start/stop hooks."""

    def __init__(self, hbook=None, log=None, global_seed=0):
        self.hbook = hbook if hbook is not None else HBookService()
        self.log = log if log is not None else LogService()
        self.global_seed = global_seed
