"""Detector description: tracker volume, field, tower grid, response tables."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Table:
    """Piecewise-constant function of (pt, |eta|).

    ``values[i][j]`` applies for ``pt_edges[i] <= pt < pt_edges[i+1]`` and
    ``eta_edges[j] <= |eta| < eta_edges[j+1]``. Outside the edges ``lookup``
    returns its ``default``.
    """

    pt_edges: tuple[float, ...]
    eta_edges: tuple[float, ...]
    values: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        pe, ee = list(self.pt_edges), list(self.eta_edges)
        if len(pe) < 2 or len(ee) < 2:
            raise ValueError("table needs at least two edges per axis")
        if pe != sorted(pe) or ee != sorted(ee) or len(set(pe)) != len(pe) or len(set(ee)) != len(ee):
            raise ValueError("table edges must be strictly increasing")
        if len(self.values) != len(pe) - 1 or any(len(r) != len(ee) - 1 for r in self.values):
            raise ValueError(
                f"table values must be {len(pe) - 1} x {len(ee) - 1} for the given edges"
            )

    @classmethod
    def constant(cls, value, pt_max=math.inf, eta_max=math.inf):
        return cls((0.0, pt_max), (0.0, eta_max), ((float(value),),))

    @classmethod
    def from_dict(cls, d):
        if isinstance(d, (int, float)):
            return cls.constant(d)
        return cls(
            tuple(float(x) for x in d["pt_edges"]),
            tuple(float(x) for x in d["eta_edges"]),
            tuple(tuple(float(v) for v in row) for row in d["values"]),
        )

    def lookup(self, pt, abs_eta, default=0.0):
        i = bisect.bisect_right(self.pt_edges, pt) - 1
        j = bisect.bisect_right(self.eta_edges, abs_eta) - 1
        if 0 <= i < len(self.values) and 0 <= j < len(self.values[0]):
            return self.values[i][j]
        return default


@dataclass(frozen=True)
class Resolution:
    """Calorimeter resolution sigma(E) = sqrt(S^2 E + N^2 + C^2 E^2)."""

    S: float = 0.0
    N: float = 0.0
    C: float = 0.0

    def sigma(self, e):
        return math.sqrt(self.S * self.S * e + self.N * self.N + self.C * self.C * e * e)

    @property
    def is_zero(self):
        return self.S == 0.0 and self.N == 0.0 and self.C == 0.0


@dataclass(frozen=True)
class TowerGrid:
    """Uniform (eta, phi) cells covering |eta| < eta_max and the full azimuth."""

    eta_max: float = 5.0
    d_eta: float = 0.1
    n_phi: int = 64

    def __post_init__(self):
        if self.eta_max <= 0 or self.d_eta <= 0 or self.n_phi < 1:
            raise ValueError("tower grid needs eta_max > 0, d_eta > 0, n_phi >= 1")

    @property
    def n_eta(self):
        return int(round(2.0 * self.eta_max / self.d_eta))

    @property
    def d_phi(self):
        return 2.0 * math.pi / self.n_phi

    def cell(self, eta, phi):
        """``(eta_bin, phi_bin)`` containing the direction, or ``None`` outside
        the acceptance."""
        if not -self.eta_max <= eta < self.eta_max:
            return None
        ie = min(int(math.floor((eta + self.eta_max) / self.d_eta)), self.n_eta - 1)
        ip = int(math.floor((phi + math.pi) / self.d_phi))
        return ie, min(max(ip, 0), self.n_phi - 1)

    def center(self, ie, ip):
        return (-self.eta_max + (ie + 0.5) * self.d_eta, -math.pi + (ip + 0.5) * self.d_phi)


def _default_fractions():
    # (electromagnetic, hadronic) share of deposited energy, keyed by |pdg id|;
    # species not listed deposit everything hadronically
    return {11: (1.0, 0.0), 22: (1.0, 0.0), 111: (1.0, 0.0),
            12: (0.0, 0.0), 13: (0.0, 0.0), 14: (0.0, 0.0), 16: (0.0, 0.0)}


@dataclass
class DetectorConfig:
    bz: float = 2.0
    radius: float = 1.15
    half_length: float = 3.51
    grid: TowerGrid = field(default_factory=TowerGrid)
    em_resolution: Resolution = field(default_factory=Resolution)
    had_resolution: Resolution = field(default_factory=Resolution)
    tower_e_min: float = 0.0
    fractions: dict[int, tuple[float, float]] = field(default_factory=_default_fractions)
    default_fraction: tuple[float, float] = (0.0, 1.0)
    tables: dict[str, Table] = field(default_factory=dict)

    def __post_init__(self):
        if self.bz < 0 or self.radius <= 0 or self.half_length <= 0:
            raise ValueError("detector needs B >= 0, radius > 0, half_length > 0")

    @property
    def eta_max(self):
        return self.grid.eta_max

    def fraction(self, pdg_id):
        return self.fractions.get(abs(pdg_id), self.default_fraction)

    def table(self, name):
        try:
            return self.tables[name]
        except KeyError:
            raise KeyError(f"detector has no table {name!r}") from None

    @classmethod
    def from_dict(cls, d):
        d = dict(d or {})
        kw = {}
        for key in ("bz", "radius", "half_length", "tower_e_min"):
            if key in d:
                kw[key] = float(d.pop(key))
        if "grid" in d:
            kw["grid"] = TowerGrid(**d.pop("grid"))
        for key in ("em_resolution", "had_resolution"):
            if key in d:
                kw[key] = Resolution(**d.pop(key))
        if "fractions" in d:
            fr = _default_fractions()
            fr.update({int(k): tuple(map(float, v)) for k, v in d.pop("fractions").items()})
            kw["fractions"] = fr
        if "default_fraction" in d:
            kw["default_fraction"] = tuple(map(float, d.pop("default_fraction")))
        if "tables" in d:
            kw["tables"] = {k: Table.from_dict(v) for k, v in d.pop("tables").items()}
        d.pop("comment", None)
        if d:
            raise ValueError(f"unknown detector keys {sorted(d)}")
        return cls(**kw)
