"""Independent reference implementations used as test oracles.

These are written directly from the definitions, deliberately with a
different structure from the production code, and favour clarity over speed.
"""

from __future__ import annotations

import math

import numpy as np

# --- graphs -----------------------------------------------------------------


def has_cycle(nodes, edges):
    """Transitive closure (Warshall); a cycle exists iff some node reaches itself."""
    idx = {n: k for k, n in enumerate(nodes)}
    n = len(nodes)
    reach = [[False] * n for _ in range(n)]
    for a, b in edges:
        reach[idx[a]][idx[b]] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return any(reach[i][i] for i in range(n))


# --- histograms ---------------------------------------------------------------


def linear_scan_bin(x, lo, hi, n):
    """Bin by walking the edges one at a time: -1 underflow, n overflow."""
    if x != x:
        return None
    if x < lo:
        return -1
    if x >= hi:
        return n
    width = (hi - lo) / n
    k = 0
    while k < n - 1 and x >= lo + (k + 1) * width:
        k += 1
    return k


def two_pass_moments(xs, ws):
    """Weighted mean and standard deviation by the two-pass formula."""
    sw = math.fsum(ws)
    mean = math.fsum(w * x for x, w in zip(xs, ws)) / sw
    var = math.fsum(w * (x - mean) ** 2 for x, w in zip(xs, ws)) / sw
    return mean, math.sqrt(var)


# --- kinematics ---------------------------------------------------------------


def delta_r_bruteforce(a, b):
    """Smallest distance over the three nearest azimuthal images."""
    deta = a[0] - b[0]
    return min(math.sqrt(deta**2 + (a[1] - b[1] + 2 * math.pi * k) ** 2) for k in (-1, 0, 1))


# --- jet clustering -------------------------------------------------------------


def brute_cluster(momenta, p, R):
    """Generalized-kt clustering straight from the distance definitions.

    ``momenta`` is a list of (px, py, pz, E). Every iteration lists every
    candidate step as ``(distance, kind, id_a, id_b)`` with kind 0 for a pair
    and 1 for a beam distance, and takes the minimum. Ids are history ids, so
    ties go to the pair before the beam and then to the smallest ids. A merge
    sums the lower-id pseudojet first. Returns ``[(constituents, momentum)]``
    in promotion order.
    """
    active = {k: (tuple(m), (k,)) for k, m in enumerate(momenta)}
    next_id = len(momenta)
    inv_r2 = 1.0 / (R * R)

    def kt(m):
        pt2 = m[0] * m[0] + m[1] * m[1]
        if pt2 == 0.0:
            return math.inf if p < 0 else (1.0 if p == 0 else 0.0)
        return pt2 ** float(p)

    def eta_phi(m):
        pt = math.sqrt(m[0] * m[0] + m[1] * m[1])
        if pt > 0:
            eta = math.asinh(m[2] / pt)
        else:
            eta = math.copysign(math.inf, m[2]) if m[2] else 0.0
        return eta, math.atan2(m[1], m[0])

    jets = []
    while active:
        steps = []
        ids = sorted(active)
        info = {i: (kt(active[i][0]), *eta_phi(active[i][0])) for i in ids}
        for a_pos, a in enumerate(ids):
            steps.append((info[a][0], 1, a, a))
            for b in ids[a_pos + 1:]:
                dphi = info[a][2] - info[b][2]
                if dphi > math.pi:
                    dphi -= 2 * math.pi
                elif dphi <= -math.pi:
                    dphi += 2 * math.pi
                deta = info[a][1] - info[b][1]
                d = min(info[a][0], info[b][0]) * (deta * deta + dphi * dphi) * inv_r2
                steps.append((d, 0, a, b))
        d, kind, a, b = min(steps)
        if kind == 1:
            jets.append((tuple(sorted(active[a][1])), active[a][0]))
            del active[a]
        else:
            (ma, ca), (mb, cb) = active.pop(a), active.pop(b)
            active[next_id] = (tuple(x + y for x, y in zip(ma, mb)), ca + cb)
            next_id += 1
    return jets


# --- helix propagation -------------------------------------------------------


def integrate_exit(x, y, z, px, py, pz, charge, bz, radius, half_length):
    """Exit point by numerically integrating the Lorentz force.

    The state is advanced in path length ``s`` with dp/ds = k q (p/|p|) x B,
    k = 0.299792458 GeV / (T m), using an 8th-order Runge-Kutta scheme with
    event location on the barrel and the endcaps. Returns ``(x, y, z)`` or
    ``None`` if the track does not leave within 50 turns.
    """
    from scipy.integrate import solve_ivp

    k = 0.299792458 * charge * bz
    p = math.sqrt(px * px + py * py + pz * pz)

    def rhs(s, u):
        ux, uy = u[3] / p, u[4] / p
        return [ux, uy, u[5] / p, k * uy, -k * ux, 0.0]

    def barrel(s, u):
        return u[0] * u[0] + u[1] * u[1] - radius * radius

    def endcap(s, u):
        return abs(u[2]) - half_length

    barrel.terminal = endcap.terminal = True
    barrel.direction = endcap.direction = 1.0
    # path length of one full turn is 2 pi p / |k|
    per_turn = 2 * math.pi * p / abs(k) if k else 0.0
    s_max = max(10.0 * (radius + half_length), 50.0 * per_turn)
    sol = solve_ivp(
        rhs, (0.0, s_max), [x, y, z, px, py, pz], method="DOP853",
        rtol=1e-13, atol=1e-13, events=(barrel, endcap), max_step=0.1,
    )
    hits = [(ev[0], ys[0]) for ev, ys in zip(sol.t_events, sol.y_events) if len(ev)]
    if not hits:
        return None
    s_hit, y_hit = min(hits, key=lambda h: h[0])
    return float(y_hit[0]), float(y_hit[1]), float(y_hit[2])


def random_momenta(rng: np.random.Generator, n, pt_range=(1.0, 100.0), eta_max=3.0):
    out = []
    for _ in range(n):
        pt = float(rng.uniform(*pt_range))
        eta = float(rng.uniform(-eta_max, eta_max))
        phi = float(rng.uniform(-math.pi, math.pi))
        m = float(rng.uniform(0.0, 1.0))
        px, py, pz = pt * math.cos(phi), pt * math.sin(phi), pt * math.sinh(eta)
        out.append((px, py, pz, math.sqrt(px * px + py * py + pz * pz + m * m)))
    return out
