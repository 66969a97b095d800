"""Transport of candidates to the tracker boundary in a solenoid field."""

from __future__ import annotations

import math
from dataclasses import replace

from .. import kernels
from .kinematics import Candidate, FourMomentum

GEV_TO_TESLA_METER = 0.299792458


class VertexOutsideDetector(ValueError):
    pass


def gyroradius(pt, charge, bz):
    """Helix radius in meters for ``pt`` in GeV and ``bz`` in Tesla."""
    return pt / (GEV_TO_TESLA_METER * abs(charge) * bz)


def propagate(c: Candidate, det, backend=None) -> Candidate:
    """Move ``c`` from its production point to where it leaves the tracker.

    Neutral particles (or any particle with B = 0) travel in a straight line;
    charged ones follow a helix about z. The result has ``propagated`` set,
    unless the particle can reach neither barrel nor endcap (a looper with
    pz = 0, or a particle at rest), which is returned unchanged.
    """
    x, y, z = c.position
    if x * x + y * y > det.radius * det.radius or abs(z) > det.half_length:
        raise VertexOutsideDetector(f"production point {c.position} is outside the tracker")
    m = c.momentum
    impl = kernels.get_backend(backend)
    ok, ex, ey, ez, px, py = impl.helix_exit(
        x, y, z, m.px, m.py, m.pz, int(c.charge), float(det.bz), float(det.radius), float(det.half_length)
    )
    if not ok:
        return c
    if px == m.px and py == m.py:
        mom = m
    else:
        mom = FourMomentum(px, py, m.pz, m.E)
    return replace(c, momentum=mom, position=(ex, ey, ez), propagated=True)


def exit_radius_ok(c: Candidate, det, tol=1e-9):
    """True when ``c`` sits on the barrel or an endcap within ``tol`` meters."""
    x, y, z = c.position
    on_barrel = abs(math.hypot(x, y) - det.radius) <= tol and abs(z) <= det.half_length + tol
    on_cap = abs(abs(z) - det.half_length) <= tol and math.hypot(x, y) <= det.radius + tol
    return on_barrel or on_cap
