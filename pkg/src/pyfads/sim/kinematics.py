"""Four-vectors and the candidate record passed between simulation tasks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class FourMomentum:
    px: float
    py: float
    pz: float
    E: float

    @classmethod
    def from_pt_eta_phi_m(cls, pt, eta, phi, m=0.0):
        px, py, pz = pt * math.cos(phi), pt * math.sin(phi), pt * math.sinh(eta)
        return cls(px, py, pz, math.sqrt(px * px + py * py + pz * pz + m * m))

    @property
    def pt(self):
        return math.hypot(self.px, self.py)

    @property
    def p(self):
        return math.sqrt(self.px * self.px + self.py * self.py + self.pz * self.pz)

    @property
    def eta(self):
        pt = self.pt
        if pt > 0.0:
            return math.asinh(self.pz / pt)
        return math.copysign(math.inf, self.pz) if self.pz else 0.0

    @property
    def phi(self):
        phi = math.atan2(self.py, self.px)
        return math.pi if phi == -math.pi else phi

    @property
    def m2(self):
        return self.E * self.E - (self.px * self.px + self.py * self.py + self.pz * self.pz)

    @property
    def m(self):
        return math.sqrt(max(0.0, self.m2))

    def __add__(self, o):
        return FourMomentum(self.px + o.px, self.py + o.py, self.pz + o.pz, self.E + o.E)

    def scaled(self, f):
        return FourMomentum(self.px * f, self.py * f, self.pz * f, self.E * f)


def wrap_phi(dphi):
    """Map an angle difference into (-pi, pi]."""
    if dphi > math.pi:
        dphi -= TWO_PI
    elif dphi <= -math.pi:
        dphi += TWO_PI
    return dphi


def delta_r(a, b):
    """Angular distance between two ``(eta, phi)`` pairs."""
    deta = a[0] - b[0]
    dphi = wrap_phi(a[1] - b[1])
    return math.sqrt(deta * deta + dphi * dphi)


FLAGS = frozenset({"isolated", "b_tagged", "tau_tagged"})


@dataclass(frozen=True, slots=True)
class Candidate:
    momentum: FourMomentum
    charge: int = 0
    pdg_id: int = 0
    # meters, at the last propagation surface
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    flags: frozenset = field(default_factory=frozenset)
    propagated: bool = False
    constituents: tuple[int, ...] = ()
    # generator barcode of the originating particle, 0 for composites
    uid: int = 0

    def __post_init__(self):
        if abs(self.charge) > 2:
            raise ValueError(f"|charge| must be <= 2, got {self.charge}")
        if not self.flags <= FLAGS:
            raise ValueError(f"unknown flags {set(self.flags) - FLAGS}")

    @property
    def pt(self):
        return self.momentum.pt

    @property
    def eta(self):
        return self.momentum.eta

    @property
    def phi(self):
        return self.momentum.phi

    @property
    def eta_phi(self):
        return (self.momentum.eta, self.momentum.phi)

    def with_flag(self, flag):
        return replace(self, flags=self.flags | {flag})

    def with_momentum(self, momentum):
        return replace(self, momentum=momentum)


# charge in units of e for the species the toy generator and typical
# generator records produce; anything else is treated as neutral
_CHARGE = {
    11: -1, 13: -1, 15: -1, 211: 1, 321: 1, 2212: 1, 24: 1, 411: 1, 521: 1,
    1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 0,
}


def charge_of(pdg_id):
    q = _CHARGE.get(abs(pdg_id), 0)
    return -q if pdg_id < 0 else q
