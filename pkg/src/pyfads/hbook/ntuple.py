"""Columnar n-tuples whose rows are ordered by event index."""

from __future__ import annotations

COLUMN_TYPES = {"int64": int, "float64": float, "string": str}


class SchemaMismatch(Exception):
    pass


class NTuple:
    """Schema-typed table.

    Rows are staged per event index; :attr:`rows` always lists them ordered by
    ``(event_index, append order)`` regardless of the order events arrived in.
    """

    def __init__(self, schema):
        self.schema = [(str(name), str(kind)) for name, kind in schema]
        names = [n for n, _ in self.schema]
        if len(set(names)) != len(names):
            raise SchemaMismatch(f"duplicate column names in {names}")
        for name, kind in self.schema:
            if kind not in COLUMN_TYPES:
                raise SchemaMismatch(f"column {name!r}: unsupported type {kind!r}")
        self._by_event: dict[int, list[tuple]] = {}

    @property
    def columns(self):
        return [n for n, _ in self.schema]

    def _check(self, row):
        if len(row) != len(self.schema):
            raise SchemaMismatch(f"row has {len(row)} cells, schema has {len(self.schema)}")
        out = []
        for value, (name, kind) in zip(row, self.schema):
            if kind == "int64":
                ok = isinstance(value, int) and not isinstance(value, bool)
                ok = ok and -(2**63) <= value < 2**63
            elif kind == "float64":
                ok = isinstance(value, (int, float)) and not isinstance(value, bool)
                if ok:
                    value = float(value)
            else:
                ok = isinstance(value, str)
            if not ok:
                raise SchemaMismatch(f"column {name!r} ({kind}) got {value!r}")
            out.append(value)
        return tuple(out)

    def append(self, event_index, row):
        self._by_event.setdefault(int(event_index), []).append(self._check(row))

    def merge(self, other: NTuple) -> NTuple:
        """Union of two n-tuples; rows keep (event index, shard order)."""
        if self.schema != other.schema:
            raise SchemaMismatch(f"{self.schema} vs {other.schema}")
        out = NTuple(self.schema)
        for src in (self, other):
            for ev, rows in src._by_event.items():
                out._by_event.setdefault(ev, []).extend(rows)
        return out

    __add__ = merge

    @property
    def rows(self):
        return [r for ev in sorted(self._by_event) for r in self._by_event[ev]]

    def __len__(self):
        return sum(len(v) for v in self._by_event.values())

    def __eq__(self, other):
        return isinstance(other, NTuple) and self.schema == other.schema and self.rows == other.rows

    def __repr__(self):
        return f"NTuple({self.schema}, rows={len(self)})"


def ntuple_append(nt: NTuple, event_index, row):
    nt.append(event_index, row)
