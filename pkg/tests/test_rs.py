import math

import numpy as np
import pytest

from hardyz import rs
from hardyz.errors import DomainError, RangeError, UnsupportedOrderError

from oracles import psi_oracle, z_oracle


def test_psi0_values():
    assert abs(rs.psi0(0.0) - math.cos(math.pi / 8)) < 1e-15
    assert rs.psi0(0.25) == 0.5  # removable singularity, analytic limit
    assert abs(rs.psi0(0.5) - math.cos(-5 * math.pi / 8) / math.cos(math.pi)) < 1e-15
    assert abs(rs.psi0(0.75) - 0.5) < 1e-15


def test_psi0_near_singularity_accuracy():
    # exact removable points against the analytic limits; nearby points
    # against the high-precision oracle
    assert rs.psi0(0.25) == 0.5
    assert abs(rs.psi0(0.75) - 0.5) < 1e-14
    for h in [1e-9, 1e-6, 5e-5, 2e-4, 1e-3]:
        for centre in (0.25, 0.75):
            for sgn in (+1, -1):
                p = centre + sgn * h
                assert abs(rs.psi0(p) - psi_oracle(p)) < 1e-10, (p,)


def test_psi0_domain():
    with pytest.raises(DomainError):
        rs.psi0(-0.1)
    with pytest.raises(DomainError):
        rs.psi0(1.0)


def test_psi_derivs_match_finite_differences():
    # analytic derivatives validated against central differences of psi0
    # at 1e-6 step (and the high-precision oracle for the higher orders)
    rng = np.random.default_rng(5)
    for p in rng.uniform(0.02, 0.98, 10):
        p = float(p)
        d = rs.psi_derivs(p, 6)
        h = 1e-6
        fd1 = (rs.psi0(p + h) - rs.psi0(p - h)) / (2 * h)
        assert abs(d[1] - fd1) < 5e-4 * max(1.0, abs(d[1]))
        fd2 = (rs.psi0(p + h) - 2 * rs.psi0(p) + rs.psi0(p - h)) / (h * h)
        assert abs(d[2] - fd2) < 5e-3 * max(1.0, abs(d[2]))
        for k in range(7):
            exact = psi_oracle(p, k)
            assert abs(d[k] - exact) < 1e-6 * max(1.0, abs(exact)), (p, k)


def test_rs_main_sum_contracts():
    assert rs.rs_main_sum(1e4, 5, 4) == 0.0
    t = 5000.0
    from hardyz.theta import theta
    single = rs.rs_main_sum(t, 1, 1)
    # the bare-double theta in the expectation carries ~1e-12 rounding
    assert abs(single - 2 * math.cos(theta(t))) < 5e-12
    with pytest.raises(RangeError):
        rs.rs_main_sum(1e4, 1, 10**6)
    with pytest.raises(DomainError):
        rs.rs_main_sum(1e4, 0, 5)


def test_rs_main_sum_deterministic_and_parallel():
    a = rs.rs_main_sum(1e7, 1, 1261)
    b = rs.rs_main_sum(1e7, 1, 1261)
    c = rs.rs_main_sum(1e7, 1, 1261, workers=8)
    assert a == b == c


def test_rs_correction_orders():
    with pytest.raises(UnsupportedOrderError):
        rs.rs_correction(1e4, 3)
    t = 12345.0
    c0 = rs.rs_correction(t, 0)
    c1 = rs.rs_correction(t, 1)
    c2 = rs.rs_correction(t, 2)
    q = (t / (2 * math.pi)) ** -0.5
    assert abs(c1 - c0) < 2.0 * (t / (2 * math.pi)) ** -0.25 * q
    assert abs(c2 - c1) < 2.0 * (t / (2 * math.pi)) ** -0.25 * q * q


def test_correction_order_gap_bound():
    # |corr(m=2) - corr(m=1)| <= (t/2pi)^(-5/4) * max|C2| with max|C2| ~ 1
    rng = np.random.default_rng(11)
    worst_c2 = 1.05  # grid bound on |C2| over [0,1): max is ~1.046 at p=0
    grid = np.linspace(0, 1, 2001, endpoint=False)
    d = rs.psi_derivs(grid, 6)
    c2 = d[2] / (64 * math.pi**2) + d[6] / (18432 * math.pi**4)
    assert np.max(np.abs(c2)) <= worst_c2
    for t in 10 ** rng.uniform(3, 6, 100):
        t = float(t)
        gap = abs(rs.rs_correction(t, 2) - rs.rs_correction(t, 1))
        assert gap <= (t / (2 * math.pi)) ** -1.25 * worst_c2 * 1.0000001


def test_rs_z_table_values():
    cases = [
        (1000.0, 0.99779, 1e-4),
        (17143.803905, 2.153e-3, 5e-6),
        (100000.0, 5.87959, 1e-4),
        (2000000.0, -2.27469, 1e-4),
        (1e7, 14.35255, 2e-4),
    ]
    for t, expect, tol in cases:
        assert abs(rs.rs_z(t).z - expect) <= tol


def test_rs_z_requires_t_above_200():
    with pytest.raises(RangeError):
        rs.rs_z(50.0)


def test_remainder_honesty_vs_euler_maclaurin_oracle():
    # |rs_z - oracle| <= 0.011 t^(-7/4) across [1e3, 1e6]; the oracle is an
    # independently coded Euler-Maclaurin zeta at 30 digits
    rng = np.random.default_rng(2)
    ts = 10 ** np.sort(rng.uniform(3.0, 6.0, 20))
    for t in ts:
        t = float(t)
        ev = rs.rs_z(t)
        zo = z_oracle(t)
        assert abs(ev.z - zo) <= ev.remainder_bound, (t, abs(ev.z - zo), ev.remainder_bound)


def test_rs_evaluation_fields():
    ev = rs.rs_z(1e5)
    assert ev.z == ev.main_sum + ev.correction
    assert 0.0 <= ev.p < 1.0
    assert ev.n_t == 126
    assert ev.order_m == 2
    assert ev.remainder_bound == 0.011 * 1e5 ** -1.75
