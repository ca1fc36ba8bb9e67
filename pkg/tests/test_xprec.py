import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyz import xprec as xp
from hardyz.errors import DomainError, RangeError

from oracles import log_oracle, phase_mod_oracle


def test_two_sum_examples():
    r = xp.two_sum(1.0, 2.0)
    assert (r.hi, r.lo) == (3.0, 0.0)
    r = xp.two_sum(1e16, 1.0)
    assert r.hi == 1e16 and r.lo == 1.0  # spacing at 1e16 is 2
    for x in [0.1, -3.7, 1e-300, 2.0**52]:
        r = xp.two_sum(x, 0.0)
        assert (r.hi, r.lo) == (x, 0.0)


def test_two_sum_rejects_non_finite():
    with pytest.raises(DomainError):
        xp.two_sum(math.inf, 1.0)


@given(st.floats(-1e15, 1e15), st.floats(-1e15, 1e15))
@settings(max_examples=300, deadline=None)
def test_two_sum_exact(a, b):
    r = xp.two_sum(a, b)
    assert r.hi == a + b
    # renormalizing is a no-op
    r2 = xp.two_sum(r.hi, r.lo)
    assert (r2.hi, r2.lo) == (r.hi, r.lo)


def test_ext_log_examples():
    r = xp.ext_log(1.0)
    assert (r.hi, r.lo) == (0.0, 0.0)
    # the input is the double nearest e, whose log differs from 1 by the
    # input rounding; the two-word result must match that log to 1e-30
    r = xp.ext_log(math.e)
    import mpmath as mp
    with mp.workdps(50):
        exact = log_oracle(math.e)
        assert abs(mp.mpf(float(r.hi)) + mp.mpf(float(r.lo)) - exact) < mp.mpf("1e-30")
    assert abs((r.hi - 1.0) + r.lo) < 1e-15
    r = xp.ext_log(2.0)
    assert r.hi == 0.6931471805599453
    import mpmath as mp
    with mp.workdps(50):
        lo_exact = mp.log(2) - mp.mpf(r.hi)
        assert abs(mp.mpf(float(r.lo)) - lo_exact) < mp.mpf("1e-30")


def test_ext_log_domain():
    for bad in [0.0, -1.0, math.inf, math.nan]:
        with pytest.raises(DomainError):
            xp.ext_log(bad)


def test_ext_log_accuracy_sweep():
    import mpmath as mp
    rng = np.random.default_rng(42)
    xs = np.concatenate([
        np.exp(rng.uniform(-600, 600, 60)),
        1.0 + rng.uniform(-0.2, 0.2, 30),
        [1e-300, 1e300, 1 + 1e-15, 1 - 1e-15],
    ])
    for x in xs:
        x = float(x)
        r = xp.ext_log(x)
        with mp.workdps(60):
            rel = abs(mp.mpf(float(r.hi)) + mp.mpf(float(r.lo)) - log_oracle(x)) / abs(log_oracle(x))
        assert rel <= 1e-30, (x, rel)


def test_phase_reduce_examples():
    ph = xp.phase_reduce(0.0, xp.ext_log(123.0))
    assert ph.value == 0.0
    for t in [1.0, 1e6, 9.9e11]:
        ph = xp.phase_reduce(t, xp.ext_log(1.0))
        assert ph.value == 0.0
    ph = xp.phase_reduce(1e6, xp.ext_log(2.0))
    assert abs(ph.value - phase_mod_oracle(1e6, 2.0)) < 1e-10


def test_phase_reduce_range_error_and_degraded_mode():
    with pytest.raises(RangeError):
        xp.phase_reduce(1.5e12, xp.ext_log(2.0))
    ph = xp.phase_reduce(1.5e12, xp.ext_log(2.0), strict=False)
    assert 0.0 <= ph.value < 2 * math.pi
    assert ph.abs_err > 1e-6  # flagged as degraded


def test_phase_reduce_oracle_sweep():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        t = 10.0 ** rng.uniform(3, 12)
        n = float(rng.integers(1, 10**7))
        ph = xp.phase_reduce(t, xp.ext_log(n))
        exact = phase_mod_oracle(t, n)
        d = abs(float(ph.value) - exact)
        d = min(d, 2 * math.pi - d)
        assert d <= ph.abs_err
        assert ph.abs_err < 1e-8  # contract ceiling for t <= 1e12
        # round-trip through the cosine stays within budget
        assert abs(math.cos(ph.value) - math.cos(exact)) <= ph.abs_err


def test_reduction_consistency():
    # phases from two logs differing by <=1e-30 differ by <= t*1e-30 + 2 abs_err
    t = 7.7e11
    L = xp.ext_log(12345.678)
    L2 = xp.ExtendedReal(L.hi, L.lo + 1e-30)
    p1 = xp.phase_reduce(t, L)
    p2 = xp.phase_reduce(t, L2)
    d = abs(p1.value - p2.value)
    d = min(d, 2 * math.pi - d)
    assert d <= t * 1e-30 + p1.abs_err + p2.abs_err


def test_vectorized_matches_scalar():
    ns = np.array([2.0, 3.0, 5.0, 1e6])
    L = xp.ext_log(ns)
    ph = xp.phase_reduce(1e9, L)
    for i, n in enumerate(ns):
        ps = xp.phase_reduce(1e9, xp.ext_log(float(n)))
        assert ps.value == ph.value[i]


def test_sincos_atan2_dd():
    import mpmath as mp
    rng = np.random.default_rng(3)
    with mp.workdps(50):
        for _ in range(100):
            v = float(rng.uniform(-1e5, 1e5))
            s, c = xp.sincos_dd(xp.from_float(v))
            assert abs(mp.mpf(float(s.hi)) + mp.mpf(float(s.lo)) - mp.sin(mp.mpf(v))) < 1e-26
            assert abs(mp.mpf(float(c.hi)) + mp.mpf(float(c.lo)) - mp.cos(mp.mpf(v))) < 1e-26
            y, x = float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2))
            a = xp.atan2_dd(xp.from_float(y), xp.from_float(x))
            assert abs(mp.mpf(float(a.hi)) + mp.mpf(float(a.lo)) - mp.atan2(mp.mpf(y), mp.mpf(x))) < 1e-30
