"""Tower calorimeter: energy deposition, per-compartment smearing, threshold."""

from __future__ import annotations

import math

from .kinematics import Candidate, FourMomentum


def deposit_direction(c: Candidate):
    """``(eta, phi)`` where ``c`` hits the calorimeter.

    Propagated candidates use their exit point as seen from the origin;
    others fall back to the momentum direction.
    """
    if c.propagated:
        x, y, z = c.position
        return FourMomentum(x, y, z, 0.0).eta, FourMomentum(x, y, z, 0.0).phi
    return c.eta, c.phi


def deposits(particles, det):
    """Unsmeared ``{cell: [em, had]}`` accumulated over ``particles``."""
    cells: dict[tuple[int, int], list[float]] = {}
    for c in particles:
        f_em, f_had = det.fraction(c.pdg_id)
        if f_em == 0.0 and f_had == 0.0:
            continue
        cell = det.grid.cell(*deposit_direction(c))
        if cell is None:
            continue
        acc = cells.setdefault(cell, [0.0, 0.0])
        e = c.momentum.E
        acc[0] += f_em * e
        acc[1] += f_had * e
    return cells


def _smear(e, res, rng):
    if e <= 0.0:
        return e
    g = rng.standard_normal()
    return max(0.0, e + res.sigma(e) * g)


def calorimeter(particles, det, rng):
    """Towers built from ``particles`` as massless candidates.

    Cells are visited in (eta bin, phi bin) order and each non-empty
    compartment consumes one normal draw, so the result depends only on the
    deposits and the generator state.
    """
    towers = []
    cells = deposits(particles, det)
    for cell in sorted(cells):
        em, had = cells[cell]
        e = _smear(em, det.em_resolution, rng) + _smear(had, det.had_resolution, rng)
        if e <= 0.0 or e < det.tower_e_min:
            continue
        eta, phi = det.grid.center(*cell)
        pt = e / math.cosh(eta)
        mom = FourMomentum.from_pt_eta_phi_m(pt, eta, phi)
        # keep the summed energy exactly rather than the recomputed one
        towers.append(Candidate(FourMomentum(mom.px, mom.py, mom.pz, e)))
    return towers
