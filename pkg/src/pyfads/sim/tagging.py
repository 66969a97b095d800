"""Truth-matched b/c and tau tagging."""

from __future__ import annotations

from .kinematics import delta_r

MATCH_DR = 0.3


def match(jet, truth, dr=MATCH_DR):
    """The highest-pt truth object within ``dr`` of ``jet`` (first on ties)."""
    best = None
    ref = jet.eta_phi
    for t in truth:
        if t.pt > 0.0 and delta_r(ref, t.eta_phi) < dr:
            if best is None or t.pt > best.pt:
                best = t
    return best


def flavor_tag(jets, truth_partons, eff_b, eff_c, mistag, rng, dr=MATCH_DR):
    """Return ``jets`` with ``b_tagged`` set according to truth matching.

    A uniform number is drawn for every jet.
    """
    out = []
    for j in jets:
        u = rng.random()
        t = match(j, truth_partons, dr)
        flav = abs(t.pdg_id) if t is not None else 0
        prob = eff_b if flav == 5 else eff_c if flav == 4 else mistag
        out.append(j.with_flag("b_tagged") if u < prob else j)
    return out


def tau_tag(jets, truth_taus, eff, mistag, rng, dr=MATCH_DR):
    out = []
    for j in jets:
        u = rng.random()
        prob = eff if match(j, truth_taus, dr) is not None else mistag
        out.append(j.with_flag("tau_tagged") if u < prob else j)
    return out
