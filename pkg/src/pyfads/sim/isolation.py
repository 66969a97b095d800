from __future__ import annotations

from .kinematics import delta_r


class ZeroPt(ValueError):
    pass


def isolation_ratio(candidates, around, dr_max):
    """Summed pt of the other candidates inside ``dr_max`` over pt(around).

    ``around`` itself is skipped, matched by identity or by a shared non-zero
    ``uid`` (another copy of the same generator particle), so it may or may
    not be a member of ``candidates``.
    """
    pt0 = around.pt
    if pt0 <= 0.0:
        raise ZeroPt(f"candidate {around!r} has zero pt")
    ref = around.eta_phi
    uid = around.uid
    total = 0.0
    for c in candidates:
        if c is around or (uid and c.uid == uid):
            continue
        if delta_r(ref, c.eta_phi) < dr_max:
            total += c.pt
    return total / pt0


def isolation(candidates, around, dr_max, threshold):
    return isolation_ratio(candidates, around, dr_max) < threshold
