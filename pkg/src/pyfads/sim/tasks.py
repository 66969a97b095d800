"""Framework tasks wrapping the simulation operations.

Each kind has fixed port names. A pipeline configuration maps those ports to
collection keys, e.g. ``"inputs": {"particles": "stable"}``. Candidate
collections are tuples of :class:`Candidate`.
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..fwk.config import register
from ..fwk.errors import ConfigError
from ..fwk.task import Task
from ..hepmc import GenEvent, stable_final_state
from .calorimeter import calorimeter
from .detector import DetectorConfig, Table
from .isolation import isolation
from .jets import JetDefinition, as_candidate, cluster_jets
from .kinematics import Candidate, FourMomentum, charge_of
from .propagate import VertexOutsideDetector, propagate
from .response import apply_efficiency, energy_rescale, smear_momentum
from .tagging import MATCH_DR, flavor_tag, tau_tag

GEN_EVENT = "GenEvent"
CANDIDATES = "Candidates"
JETS = "Jets"

_NEUTRINOS = {12, 14, 16}
_PARTONS = {1, 2, 3, 4, 5, 21}


class SimTask(Task):
    """Task with named ports bound to collection keys at construction."""

    IN: dict[str, str] = {}
    OUT: dict[str, str] = {}
    OPTIONAL_IN: frozenset = frozenset()

    def __init__(self, id, inputs=None, outputs=None, seed_salt=None):
        inputs = dict(self.IN if inputs is None else inputs)
        outputs = dict(self.OUT if outputs is None else outputs)
        for what, given, known, optional in (
            ("input", inputs, self.IN, self.OPTIONAL_IN),
            ("output", outputs, self.OUT, frozenset()),
        ):
            unknown = set(given) - set(known)
            if unknown:
                raise ConfigError(f"task {id!r}: unknown {what} ports {sorted(unknown)}")
            missing = set(known) - set(given) - optional
            if missing:
                raise ConfigError(f"task {id!r}: {what} ports {sorted(missing)} are not wired")
        self.port_in, self.port_out = inputs, outputs
        super().__init__(
            id,
            {k: self.IN[p] for p, k in inputs.items()},
            {k: self.OUT[p] for p, k in outputs.items()},
            seed_salt,
        )

    def read(self, ctx, port):
        return ctx.get(self.port_in[port])

    def write(self, ctx, port, value):
        ctx.put(self.port_out[port], value)

    @classmethod
    def from_config(cls, tc, cfg):
        params = dict(tc.params)
        salt = params.pop("seed_salt", None)
        kw = cls.parse_params(params, cfg)
        if params:
            raise ConfigError(f"task {tc.id!r}: unknown params {sorted(params)}")
        return cls(tc.id, inputs=tc.inputs, outputs=tc.outputs, seed_salt=salt, **kw)

    @classmethod
    def parse_params(cls, params, cfg):
        return {}


def _detector(cfg):
    try:
        return DetectorConfig.from_dict(cfg.detector)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"detector: {exc}") from exc


def _table(spec, det):
    """A table given inline (object or number) or by name in the detector."""
    if isinstance(spec, str):
        return det.table(spec)
    return Table.from_dict(spec)


def _momentum(p):
    return FourMomentum(*p.momentum)


@register("final-state")
class FinalState(SimTask):
    """Split a generator event into stable particles, partons and visible taus.

    Production vertices are converted from millimetres to metres.
    """

    IN = {"event": GEN_EVENT}
    OUT = {"stable": CANDIDATES, "partons": CANDIDATES, "taus": CANDIDATES}

    def process(self, ctx):
        ev: GenEvent = self.read(ctx, "event")
        vpos = {v.barcode: v.position for v in ev.vertices}
        stable = []
        for p in stable_final_state(ev):
            x, y, z, _ = vpos.get(p.production_vertex_barcode, (0.0, 0.0, 0.0, 0.0))
            stable.append(
                Candidate(_momentum(p), charge_of(p.pdg_id), p.pdg_id, (x * 1e-3, y * 1e-3, z * 1e-3),
                          uid=p.barcode)
            )
        partons = [
            Candidate(_momentum(p), 0, p.pdg_id)
            for p in ev.particles.values()
            if abs(p.pdg_id) in _PARTONS and p.status not in (1, 4)
        ]
        taus = []
        vout = {v.barcode: v.particles_out for v in ev.vertices}
        for p in ev.particles.values():
            if abs(p.pdg_id) == 15 and p.end_vertex_barcode:
                vis = _visible(ev, vout, p.end_vertex_barcode)
                if vis is not None:
                    taus.append(Candidate(vis, charge_of(p.pdg_id), p.pdg_id))
        self.write(ctx, "stable", tuple(stable))
        self.write(ctx, "partons", tuple(partons))
        self.write(ctx, "taus", tuple(taus))


def _visible(ev, vout, vbc):
    """Sum of non-neutrino stable descendants of vertex ``vbc``."""
    total = None
    stack = list(reversed(vout.get(vbc, ())))
    while stack:
        d = ev.particles[stack.pop()]
        if d.status == 1 and not d.end_vertex_barcode:
            if abs(d.pdg_id) not in _NEUTRINOS:
                m = _momentum(d)
                total = m if total is None else total + m
        elif d.end_vertex_barcode:
            stack.extend(reversed(vout.get(d.end_vertex_barcode, ())))
    return total


@register("propagator")
class Propagator(SimTask):
    """Transport particles to the tracker boundary.

    Particles produced outside the tracker volume are dropped.
    """

    IN = {"particles": CANDIDATES}
    OUT = {"particles": CANDIDATES}

    def __init__(self, id, detector=None, backend=None, **kw):
        super().__init__(id, **kw)
        self.detector = detector or DetectorConfig()
        self.backend = backend

    @classmethod
    def parse_params(cls, params, cfg):
        return {"detector": _detector(cfg), "backend": params.pop("backend", None)}

    def process(self, ctx):
        out = []
        for c in self.read(ctx, "particles"):
            try:
                out.append(propagate(c, self.detector, self.backend))
            except VertexOutsideDetector:
                continue
        self.write(ctx, "particles", tuple(out))


@register("calorimeter")
class Calorimeter(SimTask):
    IN = {"particles": CANDIDATES}
    OUT = {"towers": CANDIDATES}

    def __init__(self, id, detector=None, **kw):
        super().__init__(id, **kw)
        self.detector = detector or DetectorConfig()

    @classmethod
    def parse_params(cls, params, cfg):
        return {"detector": _detector(cfg)}

    def process(self, ctx):
        self.write(ctx, "towers", tuple(calorimeter(self.read(ctx, "particles"), self.detector, ctx.rng)))


class _Selecting(SimTask):
    """Base for tasks acting on the particles whose |pdg id| is in ``pdg``
    (all particles when ``pdg`` is empty); the others are not passed on."""

    IN = {"particles": CANDIDATES}
    OUT = {"particles": CANDIDATES}

    def __init__(self, id, table=None, pdg=(), **kw):
        super().__init__(id, **kw)
        self.table = table
        self.pdg = frozenset(abs(int(x)) for x in pdg)

    TABLE_PARAM = "table"

    @classmethod
    def parse_params(cls, params, cfg):
        if cls.TABLE_PARAM not in params:
            raise ConfigError(f"{cls.kind}: missing param {cls.TABLE_PARAM!r}")
        det = _detector(cfg)
        return {"table": _table(params.pop(cls.TABLE_PARAM), det), "pdg": params.pop("pdg", ())}

    def selected(self, ctx):
        parts = self.read(ctx, "particles")
        if not self.pdg:
            return parts
        return [c for c in parts if abs(c.pdg_id) in self.pdg]


@register("efficiency")
class Efficiency(_Selecting):
    TABLE_PARAM = "efficiency"

    def process(self, ctx):
        rng = ctx.rng
        self.write(ctx, "particles", tuple(c for c in self.selected(ctx) if apply_efficiency(c, self.table, rng)))


@register("momentum-smearing")
class MomentumSmearing(_Selecting):
    TABLE_PARAM = "sigma"

    def process(self, ctx):
        rng = ctx.rng
        self.write(ctx, "particles", tuple(smear_momentum(c, self.table, rng) for c in self.selected(ctx)))


@register("energy-scale")
class EnergyScale(_Selecting):
    TABLE_PARAM = "scale"

    def process(self, ctx):
        self.write(ctx, "particles", tuple(energy_rescale(c, self.table) for c in self.selected(ctx)))


@register("isolation")
class Isolation(SimTask):
    """Flag ``candidates`` isolated with respect to ``reference``.

    With ``keep_all`` false only isolated candidates are passed on.
    """

    IN = {"candidates": CANDIDATES, "reference": CANDIDATES}
    OUT = {"candidates": CANDIDATES}

    def __init__(self, id, dr_max=0.5, threshold=0.1, keep_all=False, **kw):
        super().__init__(id, **kw)
        self.dr_max, self.threshold, self.keep_all = float(dr_max), float(threshold), bool(keep_all)

    @classmethod
    def parse_params(cls, params, cfg):
        return {k: params.pop(k) for k in ("dr_max", "threshold", "keep_all") if k in params}

    def process(self, ctx):
        ref = self.read(ctx, "reference")
        out = []
        for c in self.read(ctx, "candidates"):
            if c.pt > 0.0 and isolation(ref, c, self.dr_max, self.threshold):
                out.append(c.with_flag("isolated"))
            elif self.keep_all:
                out.append(c)
        self.write(ctx, "candidates", tuple(out))


@register("jet-finder")
class JetFinder(SimTask):
    IN = {"particles": CANDIDATES}
    OUT = {"jets": CANDIDATES}

    def __init__(self, id, p=-1.0, R=0.4, pt_min=0.0, backend=None, **kw):
        super().__init__(id, **kw)
        self.jetdef = JetDefinition(float(p), float(R))
        self.pt_min = float(pt_min)
        self.backend = backend

    @classmethod
    def parse_params(cls, params, cfg):
        return {k: params.pop(k) for k in ("p", "R", "pt_min", "backend") if k in params}

    def process(self, ctx):
        parts = [c for c in self.read(ctx, "particles") if c.pt > 0.0]
        jets = cluster_jets(parts, self.jetdef, self.pt_min, self.backend)
        self.write(ctx, "jets", tuple(as_candidate(j) for j in jets))


@register("btagging")
class BTagging(SimTask):
    IN = {"jets": CANDIDATES, "partons": CANDIDATES}
    OUT = {"jets": CANDIDATES}

    def __init__(self, id, eff_b=0.7, eff_c=0.2, mistag=0.01, dr=MATCH_DR, **kw):
        super().__init__(id, **kw)
        self.eff_b, self.eff_c, self.mistag, self.dr = float(eff_b), float(eff_c), float(mistag), float(dr)

    @classmethod
    def parse_params(cls, params, cfg):
        return {k: params.pop(k) for k in ("eff_b", "eff_c", "mistag", "dr") if k in params}

    def process(self, ctx):
        jets = flavor_tag(self.read(ctx, "jets"), self.read(ctx, "partons"),
                          self.eff_b, self.eff_c, self.mistag, ctx.rng, self.dr)
        self.write(ctx, "jets", tuple(jets))


@register("tautagging")
class TauTagging(SimTask):
    IN = {"jets": CANDIDATES, "taus": CANDIDATES}
    OUT = {"jets": CANDIDATES}

    def __init__(self, id, eff=0.6, mistag=0.01, dr=MATCH_DR, **kw):
        super().__init__(id, **kw)
        self.eff, self.mistag, self.dr = float(eff), float(mistag), float(dr)

    @classmethod
    def parse_params(cls, params, cfg):
        return {k: params.pop(k) for k in ("eff", "mistag", "dr") if k in params}

    def process(self, ctx):
        jets = tau_tag(self.read(ctx, "jets"), self.read(ctx, "taus"), self.eff, self.mistag, ctx.rng, self.dr)
        self.write(ctx, "jets", tuple(jets))


@register("analysis")
class Analysis(SimTask):
    """Book and fill the standard summary histograms and n-tuple.

    The optional ``leptons`` and ``towers`` ports add lepton and tower
    histograms. Events with fewer than ``min_jets`` jets are skipped.
    """

    IN = {"jets": CANDIDATES, "leptons": CANDIDATES, "towers": CANDIDATES}
    OUT: dict[str, str] = {}
    OPTIONAL_IN = frozenset({"leptons", "towers"})

    def __init__(self, id, prefix="", min_jets=0, **kw):
        super().__init__(id, **kw)
        self.prefix = prefix
        self.min_jets = int(min_jets)

    @classmethod
    def parse_params(cls, params, cfg):
        return {k: params.pop(k) for k in ("prefix", "min_jets") if k in params}

    def _n(self, name):
        return self.prefix + name

    def configure(self, services):
        hb, n = services.hbook, self._n
        hb.book_h1(n("n_jets"), 20, -0.5, 19.5)
        hb.book_h1(n("jet_pt"), 50, 0.0, 250.0)
        hb.book_h1(n("jet_eta"), 50, -5.0, 5.0)
        hb.book_h2(n("jet_eta_phi"), 20, -5.0, 5.0, 16, -math.pi, math.pi)
        hb.book_ntuple(n("events"), [("n_jets", "int64"), ("lead_pt", "float64"), ("tags", "string")])
        if "leptons" in self.port_in:
            hb.book_h1(n("lepton_pt"), 50, 0.0, 250.0)
        if "towers" in self.port_in:
            hb.book_h1(n("tower_e"), 50, 0.0, 100.0)

    def process(self, ctx):
        n = self._n
        jets = self.read(ctx, "jets")
        if len(jets) < self.min_jets:
            ctx.skip()
            return
        ctx.fill(n("n_jets"), len(jets))
        for j in jets:
            ctx.fill(n("jet_pt"), j.pt)
            ctx.fill(n("jet_eta"), j.eta)
            ctx.fill2d(n("jet_eta_phi"), j.eta, j.phi)
        tags = "".join("b" if "b_tagged" in j.flags else "t" if "tau_tagged" in j.flags else "-" for j in jets)
        ctx.append(n("events"), (len(jets), jets[0].pt if jets else 0.0, tags))
        if "leptons" in self.port_in:
            for c in self.read(ctx, "leptons"):
                ctx.fill(n("lepton_pt"), c.pt)
        if "towers" in self.port_in:
            for t in self.read(ctx, "towers"):
                ctx.fill(n("tower_e"), t.momentum.E)


@register("busy-loop")
class BusyLoop(SimTask):
    """CPU-bound synthetic stage running the ``spin`` kernel.

    The compiled kernel releases the GIL, so several events make progress at
    once on a multi-core host. ``alloc_mb`` holds a per-event buffer of that
    size while spinning, to make memory use scale with events in flight.
    """

    IN = {"tick": "any"}
    OUT = {"value": "float"}

    def __init__(self, id, n_iter=200_000, alloc_mb=0.0, backend=None, **kw):
        super().__init__(id, **kw)
        self.n_iter, self.alloc_mb, self.backend = int(n_iter), float(alloc_mb), backend

    @classmethod
    def parse_params(cls, params, cfg):
        return {k: params.pop(k) for k in ("n_iter", "alloc_mb", "backend") if k in params}

    def process(self, ctx):
        buf = np.ones(int(self.alloc_mb * (1 << 20)), dtype=np.uint8) if self.alloc_mb > 0 else None
        value = kernels.get_backend(self.backend).spin(self.n_iter, ctx.seed)
        if buf is not None:
            value += float(buf[-1]) - 1.0
        self.write(ctx, "value", value)


@register("counter")
class Counter(SimTask):
    """Histogram a float per event (booked as ``name``)."""

    IN = {"value": "float"}
    OUT: dict[str, str] = {}

    def __init__(self, id, name="value", n_bins=100, lo=0.0, hi=1.0, **kw):
        super().__init__(id, **kw)
        self.name, self.n_bins, self.lo, self.hi = name, int(n_bins), float(lo), float(hi)

    @classmethod
    def parse_params(cls, params, cfg):
        return {k: params.pop(k) for k in ("name", "n_bins", "lo", "hi") if k in params}

    def configure(self, services):
        services.hbook.book_h1(self.name, self.n_bins, self.lo, self.hi)

    def process(self, ctx):
        ctx.fill(self.name, self.read(ctx, "value"))
