import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import sys

import hardyz.theta  # noqa: F401  (package re-exports shadow the submodule attribute)

th = sys.modules["hardyz.theta"]
from hardyz.errors import DomainError


def theta_bisect_root(lo, hi, target=0.0, iters=200):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if th.theta(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_theta_values():
    # direct arithmetic of the four-term expansion at t = 2 pi
    t = 2 * math.pi
    expect = -math.pi - math.pi / 8 + 1 / (96 * math.pi) + 7 / (5760 * (2 * math.pi) ** 3)
    assert abs(th.theta(t) - expect) < 1e-12
    # root of theta near 17.8456 (bisection oracle)
    root = theta_bisect_root(10.0, 30.0)
    assert abs(root - 17.8455995404) < 1e-7
    assert abs(th.theta(17.8455995404)) < 1e-7


def test_theta_domain_and_monotone():
    with pytest.raises(DomainError):
        th.theta(0.0)
    ts = np.linspace(10.5, 1e4, 500)
    vals = th.theta(ts).hi if hasattr(th.theta(ts), "hi") else th.theta(ts)
    assert np.all(np.diff(vals) > 0)


def test_gram_point_examples():
    g0 = th.gram_point(0)
    assert abs(g0 - 17.8455995) < 1e-6
    assert th.gram_point(1747145) > 1e6
    assert th.gram_point(1747144) <= 1e6
    assert th.gram_point(3945951430271) > 1e12


def test_gram_tolerance_and_monotonicity():
    ns = np.array([0, 1, 2, 100, 10**5, 10**9, 3945951430271])
    ts = th.gram_point(ns)
    assert np.all(np.diff(ts) > 0)
    for n, t in zip(ns, ts):
        resid = abs(th.theta(float(t)) - n * math.pi)
        assert resid <= max(1e-9, n * math.pi * 1e-13)
    # consecutive monotonicity in a dense stretch
    dense = th.gram_point(np.arange(5000, 6001))
    assert np.all(np.diff(dense) > 0)


def test_average_gap_matches_theta_derivative():
    for n in [10**5, 10**7]:
        g0 = th.gram_point(n)
        g1 = th.gram_point(n + 1000)
        gap = (g1 - g0) / 1000.0
        assert abs(gap - math.pi / th.theta_deriv(g0)) < 0.01 * gap


def test_odd_floor_nearest_examples():
    assert th.odd_floor(52.92) == 51
    assert th.odd_nearest(52.92) == 53
    assert th.odd_nearest(52.0) == 53  # tie broken upward
    with pytest.raises(DomainError):
        th.odd_floor(0.5)
    # extended-precision path at t = 1e24
    a24 = th.a_dd(1e24)
    assert int(th.odd_floor(a24)) + 2 == 1595769121607


@given(st.floats(1.0, 1e9))
@settings(max_examples=300, deadline=None)
def test_odd_floor_nearest_properties(x):
    f = th.odd_floor(x)
    assert f % 2 == 1
    assert f <= x < f + 2
    n = th.odd_nearest(x)
    assert n % 2 == 1
    assert abs(n - x) <= 1.0


def test_scales():
    s = th.scales(1e6)
    assert abs(s.a - 1595.7691) < 1e-4
    assert s.n_t == 398
    s = th.scales(1100.0)
    assert abs(s.a - 52.9257) < 1e-4
    assert s.transition_zone  # |eps| = 0.074 < 1100^(-1/6) = 0.311
    assert abs(abs(s.eps) - 0.0743) < 1e-3
    s = th.scales(2 * math.pi * (1 + 1e-9) * 25)
    assert s.n_t == 5
    with pytest.raises(DomainError):
        th.scales(30.0)
    # a^2 = 8t/pi to relative 1e-14
    for t in [1e3, 1e7, 9e11]:
        s = th.scales(t)
        assert abs(s.a**2 - 8 * t / math.pi) <= 1e-14 * 8 * t / math.pi
