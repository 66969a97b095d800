"""Pure-Python versions of the hot kernels.

Every function here mirrors ``_ckernels.pyx`` operation for operation so both
backends produce bit-identical floating-point results. Keep them in sync.
"""

from math import acos, asinh, atan2, cos, fmod, inf, pi, sin, sqrt

TWO_PI = 2.0 * pi
GEV_TO_TESLA_METER = 0.299792458


def _eta(px, py, pz):
    pt = sqrt(px * px + py * py)
    if pt > 0.0:
        return asinh(pz / pt)
    if pz > 0.0:
        return inf
    if pz < 0.0:
        return -inf
    return 0.0


def _kt(pt2, p):
    if pt2 == 0.0:
        return inf if p < 0.0 else (1.0 if p == 0.0 else 0.0)
    return pt2 ** p


def _dr2(eta_a, phi_a, eta_b, phi_b):
    deta = eta_a - eta_b
    dphi = phi_a - phi_b
    if dphi > pi:
        dphi -= TWO_PI
    elif dphi <= -pi:
        dphi += TWO_PI
    return deta * deta + dphi * dphi


def cluster(px, py, pz, e, p, R):
    """Naive O(N^3) generalized-kt clustering.

    Returns ``(jets, labels)``: ``jets`` is a list of ``(px, py, pz, E,
    history_id)`` for every final jet in the order jets were promoted, and
    ``labels[k]`` is the index into ``jets`` owning input ``k``.
    """
    n = len(px)
    p = float(p)
    inv_r2 = 1.0 / (R * R)
    # active pseudojets, kept sorted by history id
    ids = list(range(n))
    mom = [[px[k], py[k], pz[k], e[k]] for k in range(n)]
    members = [[k] for k in range(n)]
    kin = []
    for k in range(n):
        a, b, c = mom[k][0], mom[k][1], mom[k][2]
        kin.append((_eta(a, b, c), atan2(b, a), _kt(a * a + b * b, p)))
    next_id = n
    jets = []
    labels = [0] * n

    while ids:
        m = len(ids)
        best_pair = inf
        bi = bj = -1
        for i in range(m):
            eta_i, phi_i, kt_i = kin[i]
            for j in range(i + 1, m):
                eta_j, phi_j, kt_j = kin[j]
                kt = kt_i if kt_i < kt_j else kt_j
                d = kt * _dr2(eta_i, phi_i, eta_j, phi_j) * inv_r2
                if d < best_pair:
                    best_pair = d
                    bi, bj = i, j
        best_beam = inf
        bb = -1
        for i in range(m):
            if kin[i][2] < best_beam:
                best_beam = kin[i][2]
                bb = i

        if bi >= 0 and best_pair <= best_beam:
            a, b = mom[bi], mom[bj]
            merged = [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
            cons = members[bi] + members[bj]
            for idx in (bj, bi):
                del ids[idx], mom[idx], members[idx], kin[idx]
            ids.append(next_id)
            next_id += 1
            mom.append(merged)
            members.append(cons)
            x, y, z = merged[0], merged[1], merged[2]
            kin.append((_eta(x, y, z), atan2(y, x), _kt(x * x + y * y, p)))
        else:
            v = mom[bb]
            for k in members[bb]:
                labels[k] = len(jets)
            jets.append((v[0], v[1], v[2], v[3], ids[bb]))
            del ids[bb], mom[bb], members[bb], kin[bb]
    return jets, labels


def helix_exit(x, y, z, px, py, pz, charge, bz, radius, half_length):
    """Exit point of a track leaving the tracker cylinder.

    Positions are meters, momenta GeV, ``bz`` Tesla. Returns
    ``(ok, x, y, z, px, py)``; ``pz`` and the energy never change. ``ok`` is
    False for a looper that can reach neither barrel nor endcap.
    """
    pt2 = px * px + py * py
    pt = sqrt(pt2)
    if charge == 0 or bz == 0.0 or pt == 0.0:
        return _straight_exit(x, y, z, px, py, pz, radius, half_length)

    rg = pt / (GEV_TO_TESLA_METER * abs(charge) * bz)
    # rotation sense in the transverse plane: clockwise for positive charge
    s = -1.0 if charge > 0 else 1.0
    phi0 = atan2(py, px)
    xc = x - s * rg * sin(phi0)
    yc = y + s * rg * cos(phi0)
    d = sqrt(xc * xc + yc * yc)

    alpha = inf
    if d > 0.0:
        cos_arg = (radius * radius - d * d - rg * rg) / (2.0 * rg * d)
        if -1.0 <= cos_arg <= 1.0:
            theta_c = atan2(yc, xc)
            half = acos(cos_arg)
            theta0 = phi0 - s * 0.5 * pi
            for theta in (theta_c + half, theta_c - half):
                a = fmod(s * (theta - theta0), TWO_PI)
                if a < 0.0:
                    a += TWO_PI
                if a < alpha:
                    alpha = a
    if pz != 0.0:
        zt = half_length if pz > 0.0 else -half_length
        a = (zt - z) * pt / (pz * rg)
        if a < alpha:
            alpha = a
    if alpha == inf:
        return (False, x, y, z, px, py)

    psi = phi0 + s * alpha
    ex = xc + s * rg * sin(psi)
    ey = yc - s * rg * cos(psi)
    ez = z + pz / pt * rg * alpha
    return (True, ex, ey, ez, pt * cos(psi), pt * sin(psi))


def _straight_exit(x, y, z, px, py, pz, radius, half_length):
    pt2 = px * px + py * py
    t = inf
    if pt2 > 0.0:
        # x + t*px on the circle: pt2 t^2 + 2 (x px + y py) t + (r0^2 - R^2) = 0
        bq = x * px + y * py
        cq = x * x + y * y - radius * radius
        disc = bq * bq - pt2 * cq
        if disc < 0.0:
            disc = 0.0
        t = (-bq + sqrt(disc)) / pt2
    if pz != 0.0:
        zt = half_length if pz > 0.0 else -half_length
        tz = (zt - z) / pz
        if tz < t:
            t = tz
    if t == inf:
        return (False, x, y, z, px, py)
    return (True, x + t * px, y + t * py, z + t * pz, px, py)


def spin(n_iter, seed):
    """Synthetic CPU-bound work: xorshift64* stream folded into a float."""
    mask = 0xFFFFFFFFFFFFFFFF
    state = (seed & mask) or 0x9E3779B97F4A7C15
    acc = 0.0
    for _ in range(n_iter):
        state ^= state >> 12
        state ^= (state << 25) & mask
        state ^= state >> 27
        r = (state * 0x2545F4914F6CDD1D) & mask
        acc += (r >> 11) * (1.0 / 9007199254740992.0)
    return acc
