# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Operation-for-operation twin of ``_pykernels.py``; results are bit-identical
as long as both are built without fast-math or FMA contraction.
"""

from libc.math cimport acos, asinh, atan2, cos, fmod, pow, sin, sqrt, INFINITY, M_PI
from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc

cdef double TWO_PI = 2.0 * M_PI
cdef double GEV_TO_TESLA_METER = 0.299792458


cdef inline double _eta(double px, double py, double pz) noexcept nogil:
    cdef double pt = sqrt(px * px + py * py)
    if pt > 0.0:
        return asinh(pz / pt)
    if pz > 0.0:
        return INFINITY
    if pz < 0.0:
        return -INFINITY
    return 0.0


cdef inline double _kt(double pt2, double p) noexcept nogil:
    if pt2 == 0.0:
        if p < 0.0:
            return INFINITY
        return 1.0 if p == 0.0 else 0.0
    return pow(pt2, p)


cdef inline double _dr2(double eta_a, double phi_a, double eta_b, double phi_b) noexcept nogil:
    cdef double deta = eta_a - eta_b
    cdef double dphi = phi_a - phi_b
    if dphi > M_PI:
        dphi -= TWO_PI
    elif dphi <= -M_PI:
        dphi += TWO_PI
    return deta * deta + dphi * dphi


cdef void _remove(double* arr, int width, int idx, int m) noexcept nogil:
    cdef int k, c
    for k in range(idx, m - 1):
        for c in range(width):
            arr[k * width + c] = arr[(k + 1) * width + c]


cdef void _remove_int(long* arr, int idx, int m) noexcept nogil:
    cdef int k
    for k in range(idx, m - 1):
        arr[k] = arr[k + 1]


cdef int _cluster(int n, double* mom, double* kin, long* ids, long* owner,
                  double p, double R, double* jets_out, long* jet_ids,
                  long* labels) noexcept nogil:
    """Cluster in place. ``owner[k]`` tracks which active history id holds
    input k; returns the number of jets written to ``jets_out``."""
    cdef double inv_r2 = 1.0 / (R * R)
    cdef int m = n
    cdef long next_id = n
    cdef int n_jets = 0
    cdef int i, j, k, c, bi, bj, bb
    cdef double best_pair, best_beam, kt, d, x, y, z, ee
    cdef long id_i, id_j

    while m > 0:
        best_pair = INFINITY
        bi = -1
        bj = -1
        for i in range(m):
            for j in range(i + 1, m):
                kt = kin[i * 3 + 2] if kin[i * 3 + 2] < kin[j * 3 + 2] else kin[j * 3 + 2]
                d = kt * _dr2(kin[i * 3], kin[i * 3 + 1], kin[j * 3], kin[j * 3 + 1]) * inv_r2
                if d < best_pair:
                    best_pair = d
                    bi = i
                    bj = j
        best_beam = INFINITY
        bb = -1
        for i in range(m):
            if kin[i * 3 + 2] < best_beam:
                best_beam = kin[i * 3 + 2]
                bb = i

        if bi >= 0 and best_pair <= best_beam:
            x = mom[bi * 4] + mom[bj * 4]
            y = mom[bi * 4 + 1] + mom[bj * 4 + 1]
            z = mom[bi * 4 + 2] + mom[bj * 4 + 2]
            ee = mom[bi * 4 + 3] + mom[bj * 4 + 3]
            id_i = ids[bi]
            id_j = ids[bj]
            for k in range(n):
                if owner[k] == id_i or owner[k] == id_j:
                    owner[k] = next_id
            _remove(mom, 4, bj, m)
            _remove(kin, 3, bj, m)
            _remove_int(ids, bj, m)
            m -= 1
            _remove(mom, 4, bi, m)
            _remove(kin, 3, bi, m)
            _remove_int(ids, bi, m)
            m -= 1
            mom[m * 4] = x
            mom[m * 4 + 1] = y
            mom[m * 4 + 2] = z
            mom[m * 4 + 3] = ee
            kin[m * 3] = _eta(x, y, z)
            kin[m * 3 + 1] = atan2(y, x)
            kin[m * 3 + 2] = _kt(x * x + y * y, p)
            ids[m] = next_id
            next_id += 1
            m += 1
        else:
            for c in range(4):
                jets_out[n_jets * 4 + c] = mom[bb * 4 + c]
            jet_ids[n_jets] = ids[bb]
            for k in range(n):
                if owner[k] == ids[bb]:
                    labels[k] = n_jets
                    owner[k] = -1
            n_jets += 1
            _remove(mom, 4, bb, m)
            _remove(kin, 3, bb, m)
            _remove_int(ids, bb, m)
            m -= 1
    return n_jets


def cluster(px, py, pz, e, double p, double R):
    """Naive O(N^3) generalized-kt clustering (see ``_pykernels.cluster``)."""
    cdef int n = len(px)
    cdef int k, c, n_jets
    if n == 0:
        return [], []
    cdef double* mom = <double*> malloc(n * 4 * sizeof(double))
    cdef double* kin = <double*> malloc(n * 3 * sizeof(double))
    cdef double* jets_out = <double*> malloc(n * 4 * sizeof(double))
    cdef long* ids = <long*> malloc(n * sizeof(long))
    cdef long* owner = <long*> malloc(n * sizeof(long))
    cdef long* jet_ids = <long*> malloc(n * sizeof(long))
    cdef long* labels = <long*> malloc(n * sizeof(long))
    if not (mom and kin and jets_out and ids and owner and jet_ids and labels):
        free(mom); free(kin); free(jets_out); free(ids); free(owner); free(jet_ids); free(labels)
        raise MemoryError()
    try:
        for k in range(n):
            mom[k * 4] = px[k]
            mom[k * 4 + 1] = py[k]
            mom[k * 4 + 2] = pz[k]
            mom[k * 4 + 3] = e[k]
            kin[k * 3] = _eta(mom[k * 4], mom[k * 4 + 1], mom[k * 4 + 2])
            kin[k * 3 + 1] = atan2(mom[k * 4 + 1], mom[k * 4])
            kin[k * 3 + 2] = _kt(mom[k * 4] * mom[k * 4] + mom[k * 4 + 1] * mom[k * 4 + 1], p)
            ids[k] = k
            owner[k] = k
        with nogil:
            n_jets = _cluster(n, mom, kin, ids, owner, p, R, jets_out, jet_ids, labels)
        jets = [(jets_out[k * 4], jets_out[k * 4 + 1], jets_out[k * 4 + 2],
                 jets_out[k * 4 + 3], jet_ids[k]) for k in range(n_jets)]
        return jets, [labels[k] for k in range(n)]
    finally:
        free(mom); free(kin); free(jets_out); free(ids); free(owner); free(jet_ids); free(labels)


cdef tuple _straight_exit(double x, double y, double z, double px, double py, double pz,
                          double radius, double half_length):
    cdef double pt2 = px * px + py * py
    cdef double t = INFINITY
    cdef double bq, cq, disc, zt, tz
    if pt2 > 0.0:
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
    if t == INFINITY:
        return (False, x, y, z, px, py)
    return (True, x + t * px, y + t * py, z + t * pz, px, py)


def helix_exit(double x, double y, double z, double px, double py, double pz,
               int charge, double bz, double radius, double half_length):
    """Exit point of a track leaving the tracker cylinder (see ``_pykernels``)."""
    cdef double pt2 = px * px + py * py
    cdef double pt = sqrt(pt2)
    if charge == 0 or bz == 0.0 or pt == 0.0:
        return _straight_exit(x, y, z, px, py, pz, radius, half_length)

    cdef double rg = pt / (GEV_TO_TESLA_METER * abs(charge) * bz)
    cdef double s = -1.0 if charge > 0 else 1.0
    cdef double phi0 = atan2(py, px)
    cdef double xc = x - s * rg * sin(phi0)
    cdef double yc = y + s * rg * cos(phi0)
    cdef double d = sqrt(xc * xc + yc * yc)
    cdef double alpha = INFINITY
    cdef double cos_arg, theta_c, half, theta0, theta, a, zt, psi
    cdef int k

    if d > 0.0:
        cos_arg = (radius * radius - d * d - rg * rg) / (2.0 * rg * d)
        if -1.0 <= cos_arg <= 1.0:
            theta_c = atan2(yc, xc)
            half = acos(cos_arg)
            theta0 = phi0 - s * 0.5 * M_PI
            for k in range(2):
                theta = theta_c + half if k == 0 else theta_c - half
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
    if alpha == INFINITY:
        return (False, x, y, z, px, py)

    psi = phi0 + s * alpha
    return (True, xc + s * rg * sin(psi), yc - s * rg * cos(psi),
            z + pz / pt * rg * alpha, pt * cos(psi), pt * sin(psi))


cdef double _spin(long n_iter, uint64_t state) noexcept nogil:
    cdef double acc = 0.0
    cdef uint64_t r
    cdef long k
    for k in range(n_iter):
        state ^= state >> 12
        state ^= state << 25
        state ^= state >> 27
        r = state * <uint64_t> 0x2545F4914F6CDD1D
        acc += <double> (r >> 11) * (1.0 / 9007199254740992.0)
    return acc


def spin(long n_iter, seed):
    """Synthetic CPU-bound work; releases the GIL for the whole loop."""
    cdef uint64_t state = <uint64_t> (seed & 0xFFFFFFFFFFFFFFFF)
    cdef double acc
    if state == 0:
        state = <uint64_t> 0x9E3779B97F4A7C15
    with nogil:
        acc = _spin(n_iter, state)
    return acc
