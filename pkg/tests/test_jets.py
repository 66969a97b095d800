import math

import numpy as np
import pytest

from oracles import brute_cluster, random_momenta
from pyfads import kernels
from pyfads.sim import Candidate, FourMomentum, JetDefinition, cluster, cluster_jets


def fm(m):
    return FourMomentum(*m)


def test_jetdef():
    assert JetDefinition.anti_kt(0.4) == JetDefinition(-1.0, 0.4)
    assert JetDefinition.kt(1.0).p == 1.0 and JetDefinition.cambridge_aachen(0.7).p == 0.0
    with pytest.raises(ValueError):
        JetDefinition(-1, 0.0)


def test_single_particle():
    m = FourMomentum.from_pt_eta_phi_m(25.0, 0.4, 1.0, 0.3)
    (j,) = cluster_jets([m], JetDefinition.anti_kt(0.4))
    assert j.momentum == m and j.constituents == (0,)


def test_empty_and_ptmin():
    assert cluster_jets([], JetDefinition.anti_kt(0.4)) == []
    moms = [FourMomentum.from_pt_eta_phi_m(pt, eta, 0.0) for pt, eta in [(5, -2.0), (50, 0.0), (20, 2.0)]]
    jets = cluster_jets(moms, JetDefinition.anti_kt(0.4), pt_min=10.0)
    assert [round(j.pt) for j in jets] == [50, 20]


def test_anti_kt_two_particles():
    a = FourMomentum.from_pt_eta_phi_m(10.0, 0.0, 0.1)
    b = FourMomentum.from_pt_eta_phi_m(10.0, 0.0, -0.1)
    (j,) = cluster_jets([a, b], JetDefinition.anti_kt(0.4))
    assert j.pt == pytest.approx(19.90, abs=0.005)
    assert j.momentum == a + b


@pytest.mark.parametrize("backend", kernels.available_backends())
def test_matches_bruteforce(backend):
    rng = np.random.default_rng(31)
    for _ in range(200):
        moms = random_momenta(rng, int(rng.integers(0, 21)))
        for p in (-1, 0, 1):
            R = float(rng.uniform(0.3, 1.2))
            ref = brute_cluster(moms, p, R)
            got = cluster([fm(m) for m in moms], JetDefinition(p, R), backend)
            assert [(j.constituents, (j.momentum.px, j.momentum.py, j.momentum.pz, j.momentum.E)) for j in got] == ref


def test_tie_breaking_pair_beats_beam():
    """kt with p = 1: two identical particles at distance R have d_ij = d_iB."""
    a = FourMomentum.from_pt_eta_phi_m(10.0, 0.0, 0.0)
    b = FourMomentum.from_pt_eta_phi_m(10.0, 0.5, 0.0)
    jets = cluster([a, b], JetDefinition(1.0, 0.5))
    ref = brute_cluster([(a.px, a.py, a.pz, a.E), (b.px, b.py, b.pz, b.E)], 1.0, 0.5)
    assert [j.constituents for j in jets] == [c for c, _ in ref]


def test_partition_invariant_under_permutation():
    rng = np.random.default_rng(5)
    for _ in range(100):
        moms = [fm(m) for m in random_momenta(rng, 15)]
        perm = rng.permutation(len(moms))
        base = {frozenset(j.constituents) for j in cluster(moms, JetDefinition.anti_kt(0.5))}
        shuffled = cluster([moms[k] for k in perm], JetDefinition.anti_kt(0.5))
        back = {frozenset(int(perm[k]) for k in j.constituents) for j in shuffled}
        assert back == base


def test_e_scheme_conservation():
    rng = np.random.default_rng(9)
    moms = [fm(m) for m in random_momenta(rng, 20)]
    jets = cluster(moms, JetDefinition.kt(0.6))
    assert sorted(k for j in jets for k in j.constituents) == list(range(20))
    for j in jets:
        s = [math.fsum(getattr(moms[k], f) for k in j.constituents) for f in ("px", "py", "pz", "E")]
        assert (j.momentum.px, j.momentum.py, j.momentum.pz, j.momentum.E) == pytest.approx(s, rel=1e-12, abs=1e-9)


def test_candidate_inputs():
    cands = [Candidate(FourMomentum.from_pt_eta_phi_m(30.0, 0.0, 0.0)), Candidate(FourMomentum.from_pt_eta_phi_m(30.0, 0.05, 0.0))]
    jets = cluster_jets(cands, JetDefinition.anti_kt(0.4))
    assert len(jets) == 1 and jets[0].constituents == (0, 1)
