"""HepMC2 ASCII (IO_GenEvent) reader, plus a minimal writer for fixtures.

Line layouts understood by the reader (fields separated by whitespace)::

    E evt_number n_mpi scale alpha_qcd alpha_qed signal_process_id
      signal_vertex_barcode n_vertices beam1_barcode beam2_barcode
      n_rng [rng_state ...] n_weights [weight ...]
    N n_names "name" ...                    weight names
    U momentum_unit length_unit             GEV|MEV and MM|CM
    C cross_section cross_section_error
    H ... / F ...                           heavy-ion and PDF info (skipped)
    V barcode id x y z ctau n_orphan_in n_out n_weights [weight ...]
    P barcode pdg_id px py pz e generated_mass status pol_theta pol_phi
      end_vertex_barcode n_flow [flow_index flow_code ...]

Each ``V`` line is followed by ``n_orphan_in + n_out`` ``P`` lines: first the
orphan incoming particles (whose end vertex is this vertex), then the
particles produced at this vertex.
"""

from __future__ import annotations

import gzip
import io
import logging
from decimal import Decimal
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)

START = "HepMC::IO_GenEvent-START_EVENT_LISTING"
END = "HepMC::IO_GenEvent-END_EVENT_LISTING"

# powers of ten taking file units to GeV and mm; conversion shifts the decimal
# text so converted values are correctly rounded from what the file says
_MOMENTUM_EXP = {"GEV": 0, "MEV": -3}
_LENGTH_EXP = {"MM": 0, "CM": 1}


class HepMCError(Exception):
    """Base class; ``path`` is filled in by the reader when it knows the file."""

    path = None

    def __str__(self):
        msg = super().__str__()
        return f"{self.path}: {msg}" if self.path else msg


class MalformedLine(HepMCError):
    def __init__(self, line_no, reason):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class BarcodeClash(HepMCError):
    pass


class DanglingEndVertex(HepMCError):
    pass


class UnexpectedEOF(HepMCError):
    pass


@dataclass
class GenParticle:
    barcode: int
    pdg_id: int
    momentum: tuple[float, float, float, float]
    generated_mass: float
    status: int
    end_vertex_barcode: int = 0
    production_vertex_barcode: int = 0
    polarization: tuple[float, float] = (0.0, 0.0)
    flow: dict[int, int] = field(default_factory=dict)


@dataclass
class GenVertex:
    barcode: int
    id: int
    position: tuple[float, float, float, float]
    particles_in: list[int] = field(default_factory=list)
    particles_out: list[int] = field(default_factory=list)
    weights: list[float] = field(default_factory=list)
    # counts declared on the V line; parse bookkeeping, not event content
    n_orphan_in: int = field(default=0, compare=False)
    n_out_declared: int = field(default=0, compare=False)


@dataclass
class GenEvent:
    event_number: int
    event_scale: float
    alpha_qcd: float
    alpha_qed: float
    signal_process_id: int
    vertices: list[GenVertex] = field(default_factory=list)
    weights: list[float] = field(default_factory=list)
    n_mpi: int = -1
    signal_vertex_barcode: int = 0
    beam_barcodes: tuple[int, int] = (0, 0)
    random_states: list[int] = field(default_factory=list)
    weight_names: list[str] = field(default_factory=list)
    momentum_unit: str = "GEV"
    length_unit: str = "MM"
    cross_section: tuple[float, float] | None = None
    particles: dict[int, GenParticle] = field(default_factory=dict)

    def vertex(self, barcode):
        for v in self.vertices:
            if v.barcode == barcode:
                return v
        raise KeyError(barcode)


def stable_final_state(event: GenEvent):
    """Particles with status 1 that never decay inside the event."""
    return [p for p in event.particles.values() if p.status == 1 and p.end_vertex_barcode == 0]


def _open_text(source):
    if isinstance(source, (str, Path)):
        raw = open(source, "rb")
        magic = raw.read(2)
        raw.seek(0)
        if magic == b"\x1f\x8b":
            raw = gzip.GzipFile(fileobj=raw)
        return io.TextIOWrapper(raw, encoding="utf-8", errors="replace")
    if isinstance(source, io.TextIOBase):
        return source
    return io.TextIOWrapper(source, encoding="utf-8", errors="replace")


class HepMCReader:
    """Sequential HepMC2 event reader.

    ``source`` is a path (plain or gzip) or an open file. Iterating yields
    :class:`GenEvent` objects with momenta in GeV and positions in mm.
    """

    def __init__(self, source):
        self._f = _open_text(source)
        self._own = isinstance(source, (str, Path))
        self.name = str(source) if self._own else getattr(source, "name", None)
        self.line_no = 0
        self._pushback = None
        self._in_block = False

    def close(self):
        if self._own:
            self._f.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def __iter__(self):
        while True:
            try:
                ev = self.next_event()
            except HepMCError as exc:
                if exc.path is None and isinstance(self.name, str):
                    exc.path = self.name
                raise
            if ev is None:
                return
            yield ev

    def _line(self):
        if self._pushback is not None:
            line, self._pushback = self._pushback, None
            return line
        raw = self._f.readline()
        if not raw:
            return None
        self.line_no += 1
        return raw.strip()

    def _unread(self, line):
        self._pushback = line

    def next_event(self):
        """Next event, or ``None`` once the listing ends."""
        while True:
            line = self._line()
            if line is None:
                if self._in_block:
                    log.warning("HepMC stream ended without %s", END)
                return None
            if not line:
                continue
            if line.startswith(START):
                self._in_block = True
                continue
            if line.startswith(END):
                self._in_block = False
                continue
            if not self._in_block or line.startswith("HepMC::"):
                continue
            if line[0] == "E" and (len(line) == 1 or line[1].isspace()):
                return self._read_event(line)
            raise MalformedLine(self.line_no, f"expected an E line, got {line[:20]!r}")

    # field parsing

    def _fields(self, line, tag, n_min):
        parts = line.split()
        if parts[0] != tag:
            raise MalformedLine(self.line_no, f"expected {tag} line")
        if len(parts) - 1 < n_min:
            raise MalformedLine(self.line_no, f"{tag} line has {len(parts) - 1} fields, need {n_min}")
        return parts[1:]

    def _int(self, s, what):
        try:
            return int(s)
        except ValueError:
            raise MalformedLine(self.line_no, f"{what}: {s!r} is not an integer") from None

    def _float(self, s, what, exp=0):
        try:
            if exp:
                return float(Decimal(s).scaleb(exp))
            return float(s)
        except (ValueError, ArithmeticError):
            raise MalformedLine(self.line_no, f"{what}: {s!r} is not a number") from None

    def _counted(self, f, pos, what, conv):
        """Read ``n`` then ``n`` values starting at ``f[pos]``."""
        if pos >= len(f):
            raise MalformedLine(self.line_no, f"missing {what} count")
        n = self._int(f[pos], f"{what} count")
        if n < 0 or pos + 1 + n > len(f):
            raise MalformedLine(self.line_no, f"{what} count {n} exceeds the line")
        return [conv(x, what) for x in f[pos + 1 : pos + 1 + n]], pos + 1 + n

    def _read_event(self, line):
        f = self._fields(line, "E", 12)
        ev = GenEvent(
            event_number=self._int(f[0], "event number"),
            n_mpi=self._int(f[1], "n_mpi"),
            event_scale=self._float(f[2], "event scale"),
            alpha_qcd=self._float(f[3], "alpha_qcd"),
            alpha_qed=self._float(f[4], "alpha_qed"),
            signal_process_id=self._int(f[5], "signal process id"),
            signal_vertex_barcode=self._int(f[6], "signal vertex"),
            beam_barcodes=(self._int(f[8], "beam 1"), self._int(f[9], "beam 2")),
        )
        n_vertices = self._int(f[7], "vertex count")
        ev.random_states, pos = self._counted(f, 10, "random state", self._int)
        ev.weights, pos = self._counted(f, pos, "weight", self._float)
        if pos != len(f):
            raise MalformedLine(self.line_no, f"{len(f) - pos} trailing fields on E line")
        pscale, lscale = 0, 0

        # auxiliary lines until the first vertex
        while True:
            line = self._line()
            if line is None:
                if n_vertices == 0:
                    return ev
                raise UnexpectedEOF(f"event {ev.event_number}: end of stream before vertices")
            if not line:
                continue
            tag = line[0]
            if tag == "U":
                u = self._fields(line, "U", 2)
                mu, lu = u[0].upper(), u[1].upper()
                if mu not in _MOMENTUM_EXP or lu not in _LENGTH_EXP:
                    raise MalformedLine(self.line_no, f"unknown units {u[0]} {u[1]}")
                ev.momentum_unit, ev.length_unit = mu, lu
                pscale, lscale = _MOMENTUM_EXP[mu], _LENGTH_EXP[lu]
            elif tag == "N":
                ev.weight_names = self._parse_names(line)
            elif tag == "C":
                c = self._fields(line, "C", 2)
                ev.cross_section = (self._float(c[0], "cross section"), self._float(c[1], "error"))
            elif tag in "HF":
                pass
            elif tag == "V" or tag == "E" or line.startswith("HepMC::"):
                self._unread(line)
                break
            else:
                log.warning("line %d: skipping unknown HepMC line type %r", self.line_no, tag)

        for _ in range(n_vertices):
            line = self._line()
            while line == "":
                line = self._line()
            if line is None or line.startswith(END):
                raise UnexpectedEOF(f"event {ev.event_number}: missing vertices")
            if not line.startswith("V"):
                raise MalformedLine(self.line_no, f"expected V line, got {line[:20]!r}")
            self._read_vertex(line, ev, pscale, lscale)

        by_barcode = {v.barcode: v for v in ev.vertices}
        for p in ev.particles.values():
            bc = p.end_vertex_barcode
            if bc == 0:
                continue
            if bc not in by_barcode:
                raise DanglingEndVertex(
                    f"event {ev.event_number}: particle {p.barcode} ends at unknown vertex {bc}"
                )
            by_barcode[bc].particles_in.append(p.barcode)
        return ev

    def _parse_names(self, line):
        head, _, rest = line.partition('"')
        parts = head.split()
        n = self._int(parts[1], "weight name count") if len(parts) > 1 else 0
        names = ('"' + rest).split('"')[1::2] if rest else []
        if len(names) != n:
            raise MalformedLine(self.line_no, f"N line declares {n} names, found {len(names)}")
        return names

    def _read_vertex(self, line, ev, pscale, lscale):
        f = self._fields(line, "V", 9)
        bc = self._int(f[0], "vertex barcode")
        if bc >= 0:
            raise MalformedLine(self.line_no, f"vertex barcode {bc} must be negative")
        if any(v.barcode == bc for v in ev.vertices):
            raise BarcodeClash(f"event {ev.event_number}: vertex barcode {bc} repeated")
        pos = tuple(self._float(x, "vertex position", lscale) for x in f[2:6])
        n_orph = self._int(f[6], "orphan count")
        n_out = self._int(f[7], "outgoing count")
        if n_orph < 0 or n_out < 0:
            raise MalformedLine(self.line_no, "negative particle count")
        weights, end = self._counted(f, 8, "vertex weight", self._float)
        if end != len(f):
            raise MalformedLine(self.line_no, f"{len(f) - end} trailing fields on V line")
        v = GenVertex(
            bc, self._int(f[1], "vertex id"), pos, weights=weights,
            n_orphan_in=n_orph, n_out_declared=n_out,
        )
        ev.vertices.append(v)
        for k in range(n_orph + n_out):
            line = self._line()
            while line == "":
                line = self._line()
            if line is None or line.startswith(END):
                raise UnexpectedEOF(f"event {ev.event_number}: vertex {bc} missing particles")
            if not line.startswith("P"):
                raise MalformedLine(self.line_no, f"expected P line, got {line[:20]!r}")
            p = self._read_particle(line, pscale)
            if p.barcode in ev.particles:
                raise BarcodeClash(f"event {ev.event_number}: particle barcode {p.barcode} repeated")
            if k < n_orph:
                if p.end_vertex_barcode != bc:
                    raise MalformedLine(
                        self.line_no, f"orphan particle {p.barcode} must end at vertex {bc}"
                    )
            else:
                p.production_vertex_barcode = bc
                v.particles_out.append(p.barcode)
            ev.particles[p.barcode] = p

    def _read_particle(self, line, pscale):
        f = self._fields(line, "P", 12)
        bc = self._int(f[0], "particle barcode")
        if bc <= 0:
            raise MalformedLine(self.line_no, f"particle barcode {bc} must be positive")
        mom = tuple(self._float(x, "momentum", pscale) for x in f[2:6])
        flow_n = self._int(f[11], "flow count")
        if flow_n < 0 or 12 + 2 * flow_n != len(f):
            raise MalformedLine(self.line_no, "flow entries do not match their count")
        flow = {
            self._int(f[12 + 2 * k], "flow index"): self._int(f[13 + 2 * k], "flow code")
            for k in range(flow_n)
        }
        p = GenParticle(
            barcode=bc,
            pdg_id=self._int(f[1], "pdg id"),
            momentum=mom,
            generated_mass=self._float(f[6], "mass", pscale),
            status=self._int(f[7], "status"),
            polarization=(self._float(f[8], "theta"), self._float(f[9], "phi")),
            end_vertex_barcode=self._int(f[10], "end vertex"),
            flow=flow,
        )
        if p.momentum[3] < 0:
            log.warning("line %d: particle %d has negative energy %g", self.line_no, bc, p.momentum[3])
        return p


def read_events(source):
    with HepMCReader(source) as r:
        yield from r


# serialization helpers for fixtures and round-trip tests


def _fmt(x, exp=0):
    if exp:
        return repr(float(Decimal(repr(float(x))).scaleb(exp)))
    return repr(float(x))


def format_event(ev: GenEvent) -> str:
    """HepMC2 text for one event, in the units recorded on ``ev``.

    Momenta and positions stored on ``ev`` are GeV and mm; they are written
    back in ``ev.momentum_unit`` / ``ev.length_unit``.
    """
    ps = -_MOMENTUM_EXP[ev.momentum_unit]
    ls = -_LENGTH_EXP[ev.length_unit]
    e = [
        "E",
        ev.event_number,
        ev.n_mpi,
        _fmt(ev.event_scale),
        _fmt(ev.alpha_qcd),
        _fmt(ev.alpha_qed),
        ev.signal_process_id,
        ev.signal_vertex_barcode,
        len(ev.vertices),
        ev.beam_barcodes[0],
        ev.beam_barcodes[1],
        len(ev.random_states),
        *ev.random_states,
        len(ev.weights),
        *map(_fmt, ev.weights),
    ]
    lines = [" ".join(map(str, e))]
    if ev.weight_names:
        lines.append(f"N {len(ev.weight_names)} " + " ".join(f'"{n}"' for n in ev.weight_names))
    lines.append(f"U {ev.momentum_unit} {ev.length_unit}")
    if ev.cross_section is not None:
        lines.append(f"C {_fmt(ev.cross_section[0])} {_fmt(ev.cross_section[1])}")
    orphans_by_vertex: dict[int, list[GenParticle]] = {}
    produced = {b for v in ev.vertices for b in v.particles_out}
    for p in ev.particles.values():
        if p.barcode not in produced and p.end_vertex_barcode:
            orphans_by_vertex.setdefault(p.end_vertex_barcode, []).append(p)
    for v in ev.vertices:
        orph = orphans_by_vertex.get(v.barcode, [])
        pos = " ".join(_fmt(x, ls) for x in v.position)
        w = " ".join([str(len(v.weights)), *map(_fmt, v.weights)])
        lines.append(f"V {v.barcode} {v.id} {pos} {len(orph)} {len(v.particles_out)} {w}")
        for p in orph + [ev.particles[b] for b in v.particles_out]:
            mom = " ".join(_fmt(x, ps) for x in p.momentum)
            flow = " ".join(f"{k} {c}" for k, c in sorted(p.flow.items()))
            lines.append(
                f"P {p.barcode} {p.pdg_id} {mom} {_fmt(p.generated_mass, ps)} {p.status} "
                f"{_fmt(p.polarization[0])} {_fmt(p.polarization[1])} {p.end_vertex_barcode} "
                f"{len(p.flow)}" + (f" {flow}" if flow else "")
            )
    return "\n".join(lines) + "\n"


def write_events(events, fileobj, version="2.06.09"):
    fileobj.write(f"\nHepMC::Version {version}\n{START}\n")
    for ev in events:
        fileobj.write(format_event(ev))
    fileobj.write(f"{END}\n")


def event_to_dict(ev: GenEvent) -> dict:
    """JSON-ready dump used for golden fixtures."""
    return {
        "event_number": ev.event_number,
        "n_mpi": ev.n_mpi,
        "event_scale": ev.event_scale,
        "alpha_qcd": ev.alpha_qcd,
        "alpha_qed": ev.alpha_qed,
        "signal_process_id": ev.signal_process_id,
        "signal_vertex_barcode": ev.signal_vertex_barcode,
        "beam_barcodes": list(ev.beam_barcodes),
        "random_states": list(ev.random_states),
        "weights": list(ev.weights),
        "weight_names": list(ev.weight_names),
        "units": [ev.momentum_unit, ev.length_unit],
        "cross_section": list(ev.cross_section) if ev.cross_section else None,
        "vertices": [
            {
                "barcode": v.barcode,
                "id": v.id,
                "position": list(v.position),
                "weights": list(v.weights),
                "particles_in": list(v.particles_in),
                "particles_out": list(v.particles_out),
            }
            for v in ev.vertices
        ],
        "particles": [
            {
                "barcode": p.barcode,
                "pdg_id": p.pdg_id,
                "momentum": list(p.momentum),
                "generated_mass": p.generated_mass,
                "status": p.status,
                "polarization": list(p.polarization),
                "production_vertex": p.production_vertex_barcode,
                "end_vertex": p.end_vertex_barcode,
                "flow": {str(k): c for k, c in sorted(p.flow.items())},
            }
            for p in ev.particles.values()
        ],
    }
