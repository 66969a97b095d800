"""Record-oriented binary persistence for histograms and n-tuples.

File layout (all integers little-endian)::

    b"RIO1"
    record*

    record  := name_len:u32  name:bytes[name_len] (UTF-8)
               type_tag:u32  version:u32
               payload_len:u64  payload:bytes[payload_len]
               crc32:u32  (IEEE CRC-32 of payload)

Payloads, version 1:

    Hist1D (tag 1): n_bins:u32 lo:f64 hi:f64
                    (entries:u64 sum_w:f64 sum_w2:f64 sum_wx:f64 sum_wx2:f64) x (n_bins+2)
                    nan_entries:u64
                    bins run underflow first, then bins 0..n_bins-1, overflow last.
    Hist2D (tag 2): nx:u32 xlo:f64 xhi:f64 ny:u32 ylo:f64 yhi:f64
                    (entries:u64 sum_w:f64 sum_w2:f64) x (nx+2)*(ny+2)
                    nan_entries:u64
                    cells in x-major order: x slot 0 (underflow) .. nx+1, and for
                    each x slot the y slots 0 .. ny+1.
    NTuple (tag 3): n_cols:u32 (name:str type_code:u8) x n_cols
                    n_rows:u64 rows packed cell by cell in schema order
                    type codes: 1 int64 (i64), 2 float64 (f64), 3 string (str)
                    str := len:u32 bytes[len] (UTF-8)
"""

from __future__ import annotations

import io
import struct
import zlib

import numpy as np

from .hbook import Hist1D, Hist2D, NTuple

MAGIC = b"RIO1"
TAG_HIST1D, TAG_HIST2D, TAG_NTUPLE = 1, 2, 3
VERSION = 1
COLUMN_CODES = {"int64": 1, "float64": 2, "string": 3}
CODE_COLUMNS = {v: k for k, v in COLUMN_CODES.items()}

_HEAD = struct.Struct("<II Q")  # type_tag, version, payload_len


class RioError(Exception):
    pass


class BadMagic(RioError):
    pass


class CrcMismatch(RioError):
    pass


class UnknownTypeTag(RioError):
    pass


class UnknownVersion(RioError):
    pass


class TruncatedRecord(RioError):
    pass


class CorruptPayload(RioError):
    """Payload passed its CRC but does not decode under its type tag."""


def _pack_str(s):
    b = s.encode("utf-8")
    return struct.pack("<I", len(b)) + b


def _encode_hist1d(h: Hist1D):
    rec = np.empty(
        h.n_bins + 2,
        dtype=[("n", "<u8"), ("w", "<f8"), ("w2", "<f8"), ("wx", "<f8"), ("wx2", "<f8")],
    )
    rec["n"], rec["w"], rec["w2"] = h.entries, h.sum_w, h.sum_w2
    rec["wx"], rec["wx2"] = h.sum_wx, h.sum_wx2
    return (
        struct.pack("<Idd", h.n_bins, h.lo, h.hi)
        + rec.tobytes()
        + struct.pack("<Q", h.nan_entries)
    )


def _encode_hist2d(h: Hist2D):
    x, y = h.xaxis, h.yaxis
    rec = np.empty(h.entries.size, dtype=[("n", "<u8"), ("w", "<f8"), ("w2", "<f8")])
    rec["n"], rec["w"], rec["w2"] = h.entries.ravel(), h.sum_w.ravel(), h.sum_w2.ravel()
    return (
        struct.pack("<IddIdd", x.n_bins, x.lo, x.hi, y.n_bins, y.lo, y.hi)
        + rec.tobytes()
        + struct.pack("<Q", h.nan_entries)
    )


def _encode_ntuple(nt: NTuple):
    out = [struct.pack("<I", len(nt.schema))]
    for name, kind in nt.schema:
        out.append(_pack_str(name))
        out.append(struct.pack("<B", COLUMN_CODES[kind]))
    rows = nt.rows
    out.append(struct.pack("<Q", len(rows)))
    kinds = [k for _, k in nt.schema]
    for row in rows:
        for v, kind in zip(row, kinds):
            if kind == "int64":
                out.append(struct.pack("<q", v))
            elif kind == "float64":
                out.append(struct.pack("<d", v))
            else:
                out.append(_pack_str(v))
    return b"".join(out)


def encode_payload(obj):
    """Return ``(type_tag, payload_bytes)``; a pure function of ``obj``."""
    if isinstance(obj, Hist1D):
        return TAG_HIST1D, _encode_hist1d(obj)
    if isinstance(obj, Hist2D):
        return TAG_HIST2D, _encode_hist2d(obj)
    if isinstance(obj, NTuple):
        return TAG_NTUPLE, _encode_ntuple(obj)
    raise TypeError(f"cannot persist {type(obj).__name__}")


def encode_record(name, obj):
    tag, payload = encode_payload(obj)
    nb = name.encode("utf-8")
    return b"".join(
        (
            struct.pack("<I", len(nb)),
            nb,
            _HEAD.pack(tag, VERSION, len(payload)),
            payload,
            struct.pack("<I", zlib.crc32(payload)),
        )
    )


class _Cursor:
    def __init__(self, buf):
        self.buf = buf
        self.pos = 0

    def take(self, n):
        if self.pos + n > len(self.buf):
            raise CorruptPayload("payload shorter than its declared contents")
        b = self.buf[self.pos : self.pos + n]
        self.pos += n
        return b

    def unpack(self, fmt):
        s = struct.Struct(fmt)
        return s.unpack(self.take(s.size))

    def string(self):
        (n,) = self.unpack("<I")
        try:
            return bytes(self.take(n)).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptPayload(str(exc)) from None


def _decode_hist1d(cur):
    n, lo, hi = cur.unpack("<Idd")
    try:
        h = Hist1D(n, lo, hi)
    except ValueError as exc:
        raise CorruptPayload(str(exc)) from None
    dt = np.dtype([("n", "<u8"), ("w", "<f8"), ("w2", "<f8"), ("wx", "<f8"), ("wx2", "<f8")])
    rec = np.frombuffer(cur.take(dt.itemsize * (n + 2)), dtype=dt)
    h.entries = rec["n"].astype(np.uint64)
    h.sum_w, h.sum_w2 = rec["w"].astype(float), rec["w2"].astype(float)
    h.sum_wx, h.sum_wx2 = rec["wx"].astype(float), rec["wx2"].astype(float)
    (h.nan_entries,) = cur.unpack("<Q")
    return h


def _decode_hist2d(cur):
    nx, xlo, xhi, ny, ylo, yhi = cur.unpack("<IddIdd")
    try:
        h = Hist2D(nx, xlo, xhi, ny, ylo, yhi)
    except ValueError as exc:
        raise CorruptPayload(str(exc)) from None
    dt = np.dtype([("n", "<u8"), ("w", "<f8"), ("w2", "<f8")])
    rec = np.frombuffer(cur.take(dt.itemsize * (nx + 2) * (ny + 2)), dtype=dt)
    shape = (nx + 2, ny + 2)
    h.entries = rec["n"].astype(np.uint64).reshape(shape)
    h.sum_w = rec["w"].astype(float).reshape(shape)
    h.sum_w2 = rec["w2"].astype(float).reshape(shape)
    (h.nan_entries,) = cur.unpack("<Q")
    return h


def _decode_ntuple(cur):
    (ncol,) = cur.unpack("<I")
    schema = []
    for _ in range(ncol):
        name = cur.string()
        (code,) = cur.unpack("<B")
        if code not in CODE_COLUMNS:
            raise CorruptPayload(f"unknown column type code {code}")
        schema.append((name, CODE_COLUMNS[code]))
    try:
        nt = NTuple(schema)
    except Exception as exc:
        raise CorruptPayload(str(exc)) from None
    (nrows,) = cur.unpack("<Q")
    rows = []
    for _ in range(nrows):
        row = []
        for _, kind in schema:
            if kind == "int64":
                row.append(cur.unpack("<q")[0])
            elif kind == "float64":
                row.append(cur.unpack("<d")[0])
            else:
                row.append(cur.string())
        rows.append(tuple(row))
    nt._by_event[0] = rows
    return nt


_DECODERS = {TAG_HIST1D: _decode_hist1d, TAG_HIST2D: _decode_hist2d, TAG_NTUPLE: _decode_ntuple}


def decode_payload(tag, version, payload):
    if tag not in _DECODERS:
        raise UnknownTypeTag(tag)
    if version != VERSION:
        raise UnknownVersion(version)
    cur = _Cursor(memoryview(payload))
    obj = _DECODERS[tag](cur)
    if cur.pos != len(payload):
        raise CorruptPayload(f"{len(payload) - cur.pos} trailing payload bytes")
    return obj


class Writer:
    """Append records to a rio stream. Use as a context manager."""

    def __init__(self, file):
        if isinstance(file, (str, bytes)) or hasattr(file, "__fspath__"):
            self._f = open(file, "wb")
            self._own = True
        else:
            self._f = file
            self._own = False
        self._f.write(MAGIC)

    def write_record(self, name, obj):
        self._f.write(encode_record(name, obj))

    def close(self):
        if self._own:
            self._f.close()
        else:
            self._f.flush()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


class Reader:
    """Iterate ``(name, object)`` pairs from a rio stream."""

    def __init__(self, file):
        if isinstance(file, (str, bytes)) or hasattr(file, "__fspath__"):
            self._f = open(file, "rb")
            self._own = True
        else:
            self._f = file
            self._own = False
        magic = self._f.read(4)
        if magic != MAGIC:
            raise BadMagic(magic)

    def _read(self, n, what):
        if n > 4096 and self._f.seekable():
            # refuse absurd lengths from a corrupt header before allocating
            here = self._f.tell()
            end = self._f.seek(0, io.SEEK_END)
            self._f.seek(here)
            if here + n > end:
                raise TruncatedRecord(f"wanted {n} bytes of {what}, {end - here} left")
        b = self._f.read(n)
        if len(b) != n:
            raise TruncatedRecord(f"wanted {n} bytes of {what}, got {len(b)}")
        return b

    def read_record(self):
        """Next ``(name, object)``, or ``None`` at a clean end of file."""
        first = self._f.read(4)
        if not first:
            return None
        if len(first) != 4:
            raise TruncatedRecord("partial record header")
        (name_len,) = struct.unpack("<I", first)
        raw_name = self._read(name_len, "name")
        tag, version, payload_len = _HEAD.unpack(self._read(_HEAD.size, "header"))
        payload = self._read(payload_len, "payload")
        (crc,) = struct.unpack("<I", self._read(4, "crc"))
        if zlib.crc32(payload) != crc:
            raise CrcMismatch(f"record {raw_name!r}")
        try:
            name = raw_name.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CorruptPayload(f"record name is not UTF-8: {exc}") from None
        return name, decode_payload(tag, version, payload)

    def __iter__(self):
        while (rec := self.read_record()) is not None:
            yield rec

    def close(self):
        if self._own:
            self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_record(file, name, obj):
    file.write(encode_record(name, obj))


def read_record(reader: Reader):
    return reader.read_record()


def dump(path, objects):
    """Write ``{name: object}`` to ``path``, records ordered by name."""
    with Writer(path) as w:
        for name in sorted(objects):
            w.write_record(name, objects[name])


def load(path):
    with Reader(path) as r:
        return dict(r)


def dumps(objects):
    buf = io.BytesIO()
    with Writer(buf) as w:
        for name in sorted(objects):
            w.write_record(name, objects[name])
    return buf.getvalue()
