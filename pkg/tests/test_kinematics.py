import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import delta_r_bruteforce
from pyfads.sim import Candidate, FourMomentum, charge_of, delta_r, wrap_phi

angles = st.floats(-math.pi, math.pi)


def test_delta_r_examples():
    assert delta_r((0.3, 1.0), (0.3, 1.0)) == 0.0
    assert delta_r((0.0, 3.0), (0.0, -3.0)) == pytest.approx(2 * math.pi - 6, abs=1e-12)
    assert 2 * math.pi - 6 == pytest.approx(0.28319, abs=1e-5)


def test_delta_r_bruteforce():
    rng = random.Random(8)
    for _ in range(5000):
        a = (rng.uniform(-5, 5), rng.uniform(-math.pi, math.pi))
        b = (rng.uniform(-5, 5), rng.uniform(-math.pi, math.pi))
        assert delta_r(a, b) == pytest.approx(delta_r_bruteforce(a, b), rel=1e-12, abs=1e-12)


@given(angles, angles)
def test_wrap_phi_range(a, b):
    d = wrap_phi(a - b)
    assert -math.pi < d <= math.pi


def test_four_momentum_accessors():
    p = FourMomentum.from_pt_eta_phi_m(10.0, 1.2, -2.0, 5.0)
    assert p.pt == pytest.approx(10.0)
    assert p.eta == pytest.approx(1.2)
    assert p.phi == pytest.approx(-2.0)
    assert p.m == pytest.approx(5.0, rel=1e-9)
    theta = math.atan2(p.pt, p.pz)
    assert p.eta == pytest.approx(-math.log(math.tan(theta / 2)))
    assert FourMomentum(-1.0, -0.0, 0, 1).phi == math.pi
    # slightly negative m2 from rounding reports zero mass
    assert FourMomentum(3.0, 4.0, 0.0, 5.0 - 1e-15).m == 0.0
    assert FourMomentum(0, 0, 2, 2).eta == math.inf
    s = p.scaled(2.0)
    assert (s.eta, s.phi) == pytest.approx((p.eta, p.phi)) and s.E == 2 * p.E


def test_candidate_invariants():
    m = FourMomentum(1, 0, 0, 1)
    with pytest.raises(ValueError):
        Candidate(m, charge=3)
    with pytest.raises(ValueError):
        Candidate(m, flags=frozenset({"shiny"}))
    c = Candidate(m).with_flag("isolated")
    assert "isolated" in c.flags


def test_charges():
    assert charge_of(11) == -1 and charge_of(-11) == 1
    assert charge_of(211) == 1 and charge_of(-211) == -1
    assert charge_of(22) == 0 and charge_of(999999) == 0
