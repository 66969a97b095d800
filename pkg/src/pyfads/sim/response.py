"""Efficiency, momentum smearing and energy-scale response."""

from __future__ import annotations


from .kinematics import Candidate, FourMomentum

PT_FLOOR = 1e-6


def apply_efficiency(c: Candidate, table, rng) -> bool:
    """Keep ``c`` with probability ``table(pt, |eta|)``; zero off the table.

    One uniform number is drawn per call whatever the outcome, so the random
    stream does not depend on the table contents.
    """
    u = rng.random()
    return bool(u < table.lookup(c.pt, abs(c.eta), 0.0))


def smear_momentum(c: Candidate, sigma_table, rng) -> Candidate:
    """Scale pt by ``1 + g`` with ``g ~ Normal(0, sigma(pt, |eta|))``.

    Direction and mass are kept; the energy is recomputed. A zero sigma
    returns ``c`` itself.
    """
    g = rng.standard_normal()
    m = c.momentum
    pt, eta = m.pt, m.eta
    sigma = sigma_table.lookup(pt, abs(eta), 0.0)
    if sigma == 0.0:
        return c
    new_pt = max(pt * (1.0 + sigma * g), PT_FLOOR)
    mass = m.m
    return c.with_momentum(FourMomentum.from_pt_eta_phi_m(new_pt, eta, m.phi, mass))


def energy_rescale(c: Candidate, scale_table) -> Candidate:
    """Multiply the four-momentum by ``scale(pt, |eta|)`` (1 off the table)."""
    f = scale_table.lookup(c.pt, abs(c.eta), 1.0)
    if f == 1.0:
        return c
    return c.with_momentum(c.momentum.scaled(f))


