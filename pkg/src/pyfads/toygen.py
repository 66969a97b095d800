"""Toy collision events for fixtures and benchmarks.

Not physics: a 2 -> 2 hard scatter (b, c or light quark pairs, tau pairs, or
lepton pairs) with collinear "fragmentation" into stable hadrons plus a soft
underlying event. It only needs to produce plausible HepMC2 records that
exercise every stage of the simulation.
"""

from __future__ import annotations

import math

import numpy as np

from .hepmc import GenEvent, GenParticle, GenVertex

MASSES = {
    11: 0.000511, 13: 0.10566, 15: 1.77686, 12: 0.0, 14: 0.0, 16: 0.0,
    22: 0.0, 211: 0.13957, 111: 0.13498, 321: 0.49368, 130: 0.49761,
    2112: 0.93957, 2212: 0.93827, 1: 0.33, 2: 0.33, 3: 0.5, 4: 1.5, 5: 4.8,
}
HADRONS = [(211, 0.45), (-211, 0.45), (22, 0.6), (321, 0.1), (-321, 0.1), (130, 0.1), (2112, 0.05), (2212, 0.05)]
CHANNELS = [("bb", 0.3), ("cc", 0.15), ("qq", 0.25), ("tautau", 0.15), ("ll", 0.15)]


def _four(pt, eta, phi, m):
    px, py, pz = pt * math.cos(phi), pt * math.sin(phi), pt * math.sinh(eta)
    return (px, py, pz, math.sqrt(px * px + py * py + pz * pz + m * m))


def _choice(rng, table):
    w = np.array([p for _, p in table])
    return table[int(rng.choice(len(table), p=w / w.sum()))][0]


class _Builder:
    def __init__(self, number):
        self.ev = GenEvent(
            event_number=number, event_scale=91.1876, alpha_qcd=0.118, alpha_qed=0.0078125,
            signal_process_id=0, n_mpi=1, weights=[1.0],
        )
        self.next_p = 1
        self.next_v = -1

    def vertex(self, pos=(0.0, 0.0, 0.0, 0.0)):
        v = GenVertex(self.next_v, 0, tuple(float(x) for x in pos))
        self.next_v -= 1
        self.ev.vertices.append(v)
        return v

    def particle(self, pdg, mom, status, prod=None):
        p = GenParticle(self.next_p, int(pdg), tuple(float(x) for x in mom),
                        MASSES.get(abs(pdg), 0.0), status)
        self.next_p += 1
        if prod is not None:
            p.production_vertex_barcode = prod.barcode
            prod.particles_out.append(p.barcode)
        self.ev.particles[p.barcode] = p
        return p

    def decay(self, parent, vertex):
        parent.end_vertex_barcode = vertex.barcode
        vertex.particles_in.append(parent.barcode)


def _fragment(b, rng, parent, pdg_pool, vtx, extra=()):
    px, py, pz, _ = parent.momentum
    pt = math.hypot(px, py)
    eta, phi = math.asinh(pz / pt), math.atan2(py, px)
    n = int(rng.integers(3, 9))
    fracs = rng.dirichlet(np.full(n + len(extra), 1.5))
    species = list(extra) + [_choice(rng, pdg_pool) for _ in range(n)]
    for pdg, z in zip(species, fracs):
        deta, dphi = rng.normal(0.0, 0.08, size=2)
        b.particle(pdg, _four(max(z * pt, 0.2), eta + deta, phi + dphi, MASSES.get(abs(pdg), 0.0)), 1, vtx)


def generate_event(rng, number):
    b = _Builder(number)
    hard = b.vertex()
    b.ev.signal_vertex_barcode = hard.barcode
    for sign in (1, -1):
        beam = b.particle(2212, (0.0, 0.0, sign * 6500.0, math.hypot(6500.0, MASSES[2212])), 4)
        b.decay(beam, hard)
    b.ev.beam_barcodes = (1, 2)

    channel = _choice(rng, CHANNELS)
    pt = float(rng.uniform(25.0, 150.0))
    phi = float(rng.uniform(-math.pi, math.pi))
    etas = rng.uniform(-2.2, 2.2, size=2)
    flavour = {"bb": 5, "cc": 4, "qq": int(rng.integers(1, 4)), "tautau": 15, "ll": int(rng.choice([11, 13]))}[channel]
    b.ev.signal_process_id = {"bb": 5, "cc": 4, "qq": 1, "tautau": 15, "ll": 23}[channel]
    for k, sign in enumerate((1, -1)):
        pdg = sign * flavour
        mom = _four(pt * float(rng.uniform(0.85, 1.15)), float(etas[k]), phi + k * math.pi, MASSES[flavour])
        if channel == "ll":
            b.particle(pdg, mom, 1, hard)
            continue
        status = 2 if channel == "tautau" else 23
        parton = b.particle(pdg, mom, status, hard)
        # b hadrons fly a couple of mm before the fragmentation vertex
        flight = float(rng.exponential(1.5)) if flavour == 5 else 0.0
        nx, ny, nz = (c / math.sqrt(mom[0] ** 2 + mom[1] ** 2 + mom[2] ** 2) for c in mom[:3])
        vtx = b.vertex((flight * nx, flight * ny, flight * nz, flight))
        b.decay(parton, vtx)
        if channel == "tautau":
            nu = 16 if pdg > 0 else -16
            pi = -211 if pdg > 0 else 211
            _fragment(b, rng, parton, [(22, 1.0)], vtx, extra=(pi, nu))
        elif flavour == 5 and rng.random() < 0.2:
            _fragment(b, rng, parton, HADRONS, vtx, extra=(13 if pdg > 0 else -13,))
        else:
            _fragment(b, rng, parton, HADRONS, vtx)

    for _ in range(int(rng.integers(10, 25))):
        pdg = _choice(rng, HADRONS)
        mom = _four(float(rng.exponential(1.0)) + 0.3, float(rng.uniform(-4.0, 4.0)),
                    float(rng.uniform(-math.pi, math.pi)), MASSES.get(abs(pdg), 0.0))
        b.particle(pdg, mom, 1, hard)
    return b.ev


def generate_events(n, seed=0):
    rng = np.random.default_rng(seed)
    return [generate_event(rng, k) for k in range(n)]
