"""Riemann-Siegel evaluation of Hardy's Z(t).

Z(t) = 2 sum_{N=1}^{N_t} cos(theta(t) - t log N)/sqrt(N)
       + (-1)^(N_t-1) (t/2pi)^(-1/4) [C0(p) + C1(p)(t/2pi)^(-1/2) + C2(p)/(t/2pi)]
       + R,            N_t = floor(sqrt(t/2pi)),  p = sqrt(t/2pi) - N_t,

with |R| < 0.011 t^(-7/4) for t > 200 at correction order 2.  The correction
functions are built from derivatives of

    Psi(p) = cos(2pi(p^2 - p - 1/16)) / cos(2pi p):

    C0 = Psi,   C1 = -Psi'''/(96 pi^2),   C2 = Psi''/(64 pi^2) + Psi^(6)/(18432 pi^4).

Psi is entire (the zeros of the denominator at p = 1/4, 3/4 are removable),
so near those points both Psi and its derivatives are evaluated from a
frozen Taylor expansion instead of the catastrophically cancelling ratio.
Derivatives elsewhere come from exact truncated power-series algebra, never
finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import accum
from . import xprec as xp
from .errors import DomainError, RangeError, UnsupportedOrderError
from .theta import scales, theta, theta_dd

TWO_PI = xp.TWO_PI

# Taylor coefficients of Psi at p = 1/4 (generated once by series division
# of the defining ratio; at 3/4 the odd coefficients flip sign because
# Psi(1 - p) = Psi(p)).
_PSI_QTR_TAYLOR = np.array([
    0.5,
    -1.0,
    2.4674011002723395,
    -1.6449340668482264,
    0.27717591495256194,
    4.685670608398414,
    -7.979031066936239,
    8.852130154516512,
    -4.8532567933207345,
    -2.517892298929452,
    8.237078914021716,
    -10.392950799313194,
    6.961298814348567,
    -1.2813930271968206,
    -3.679517726060431,
    5.628065485778375,
    -4.354687407525117,
    1.7075329365169065,
    0.6914754868725503,
    -1.7396231856719035,
    1.5433614429647953,
    -0.7621343844683155,
    0.0242167168351946,
    0.3355349444517636,
    -0.35220167465513214,
    0.199463025408889,
    -0.04285528442878394,
])

_DERIV_WINDOW = 0.05  # switch to the Taylor table this close to 1/4 or 3/4
_PSI0_WINDOW = 1e-4   # psi0 alone needs only a 3-term local expansion


def psi0(p):
    """Psi(p) = cos(2pi(p^2-p-1/16))/cos(2pi p) on [0, 1), singularities removed."""
    p_arr = np.asarray(p, dtype=float)
    if np.any(p_arr < 0.0) or np.any(p_arr >= 1.0):
        raise DomainError("psi0 requires 0 <= p < 1")
    num = np.cos(TWO_PI / 2.0 * (2.0 * (p_arr * p_arr - p_arr) - 0.125))
    den = np.cos(TWO_PI / 2.0 * 2.0 * p_arr)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    h_q = p_arr - 0.25
    h_t = p_arr - 0.75
    pi2_4 = math.pi * math.pi / 4.0
    near_q = np.abs(h_q) < _PSI0_WINDOW
    near_t = np.abs(h_t) < _PSI0_WINDOW
    ratio = np.where(near_q, 0.5 - h_q + pi2_4 * h_q * h_q, ratio)
    ratio = np.where(near_t, 0.5 + h_t + pi2_4 * h_t * h_t, ratio)
    if np.ndim(p) == 0:
        return float(ratio)
    return ratio


def _series_cos(a0_cos, a0_sin, poly):
    """cos(a0 + Q(h)) as series coefficients, Q given by poly (Q(0) = 0)."""
    order = poly.shape[0]
    powers = [None, poly]
    for k in range(2, order):
        powers.append(_poly_mul(powers[-1], poly, order))
    cosq = np.zeros_like(poly)
    cosq[0] = 1.0
    sinq = np.zeros_like(poly)
    fact = 1.0
    for m in range(1, order):
        fact *= m
        coef = (-1.0) ** (m // 2) / fact
        if m % 2 == 0:
            cosq += coef * powers[m]
        else:
            sinq += coef * powers[m]
    return a0_cos * cosq - a0_sin * sinq


def _poly_mul(a, b, order):
    out = np.zeros_like(a)
    for i in range(order):
        ai = a[i]
        if np.all(ai == 0.0):
            continue
        jmax = order - i
        out[i:order] += ai * b[:jmax]
    return out


def psi_derivs(p, kmax: int = 6):
    """Psi and derivatives Psi^(k)(p), k = 0..kmax, vectorized over p.

    Away from 1/4 and 3/4: exact series division of cos(u(p+h))/cos(v(p+h))
    truncated at order kmax.  Inside the window: the frozen Taylor table.
    """
    if kmax > len(_PSI_QTR_TAYLOR) - 8:
        raise UnsupportedOrderError("psi_derivs supports kmax <= 19")
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    order = kmax + 1
    shape = (order,) + p_arr.shape

    # generic branch: series in h about each p
    u0 = TWO_PI * (p_arr * p_arr - p_arr - 0.0625)
    u_poly = np.zeros(shape)
    u_poly[1] = TWO_PI * (2.0 * p_arr - 1.0)
    if order > 2:
        u_poly[2] = TWO_PI
    num = _series_cos(np.cos(u0), np.sin(u0), u_poly)
    v0 = TWO_PI * p_arr
    v_poly = np.zeros(shape)
    v_poly[1] = TWO_PI
    den = _series_cos(np.cos(v0), np.sin(v0), v_poly)
    quot = np.zeros(shape)
    safe_den0 = np.where(np.abs(den[0]) < 1e-30, 1.0, den[0])
    for k in range(order):
        acc = num[k].copy()
        for j in range(k):
            acc -= quot[j] * den[k - j]
        quot[k] = acc / safe_den0
    fact = 1.0
    out = np.zeros(shape)
    for k in range(order):
        if k > 0:
            fact *= k
        out[k] = quot[k] * fact

    # windowed branch: shifted evaluation of the frozen table
    for centre, flip in ((0.25, 1.0), (0.75, -1.0)):
        h = (p_arr - centre) * flip
        mask = np.abs(h) < _DERIV_WINDOW
        if not np.any(mask):
            continue
        hm = h[mask]
        coeffs = _PSI_QTR_TAYLOR
        for k in range(order):
            # Psi^(k)(centre + h) = sum_j c_j * j!/(j-k)! * h^(j-k)
            val = np.zeros_like(hm)
            for j in range(len(coeffs) - 1, k - 1, -1):
                fc = math.factorial(j) / math.factorial(j - k)
                val = val * hm + coeffs[j] * fc
            # derivative w.r.t. p picks up flip^k from the reflection
            out[k][mask] = val * (flip**k)
    if np.ndim(p) == 0:
        return out[:, 0]
    return out


@dataclass(frozen=True)
class RsEvaluation:
    """Result of a full Riemann-Siegel evaluation."""

    z: float
    main_sum: float
    correction: float
    n_t: int
    p: float
    order_m: int
    remainder_bound: float


_LOG_CACHE: dict = {}


def _int_logs(n_lo: int, n_hi: int) -> xp.ExtendedReal:
    key = (n_lo, n_hi)
    hit = _LOG_CACHE.get(key)
    if hit is None:
        ns = np.arange(n_lo, n_hi + 1, dtype=float)
        hit = xp.ext_log(ns)
        if len(_LOG_CACHE) > 8:
            _LOG_CACHE.clear()
        _LOG_CACHE[key] = hit
    return hit


def rs_main_sum(t: float, n_lo: int, n_hi: int, workers: int = 1,
                precision: str = "extended") -> float:
    """2 sum_{N=n_lo}^{n_hi} cos(theta(t) - t log N)/sqrt(N).

    precision="extended" (default) carries every phase in two-word
    arithmetic; "fast" uses plain-double phases (~1e-16 relative on the raw
    product t log N), adequate for error sweeps and timing comparisons.
    """
    if not t > 30.0:
        raise DomainError("rs_main_sum requires t > 30")
    if n_lo < 1:
        raise DomainError("rs_main_sum requires n_lo >= 1")
    if n_lo > n_hi:
        return 0.0
    n_t = scales(t).n_t
    if n_hi > n_t:
        raise RangeError(f"n_hi = {n_hi} exceeds N_t = {n_t} at t = {t:g}")

    if precision == "fast":
        th_f = theta(t)

        def make_terms(lo: int, hi: int) -> np.ndarray:
            ns = np.arange(n_lo + lo, n_lo + hi, dtype=float)
            return 2.0 * np.cos(th_f - t * np.log(ns)) / np.sqrt(ns)

    elif precision == "extended":
        th = theta_dd(t)
        logs = _int_logs(n_lo, n_hi)

        def make_terms(lo: int, hi: int) -> np.ndarray:
            lg = xp.ExtendedReal(logs.hi[lo:hi], logs.lo[lo:hi])
            p, e = xp._two_prod_raw(float(t), lg.hi)
            prod = xp.add(xp.ExtendedReal(p, e), xp.from_float(float(t) * lg.lo))
            ph = xp.reduce_mod_2pi(xp.sub(th, prod), extra_err=np.abs(p) * 1e-30)
            ns = np.arange(n_lo + lo, n_lo + hi, dtype=float)
            return 2.0 * np.cos(ph.value) / np.sqrt(ns)

    else:
        raise ValueError("precision must be 'extended' or 'fast'")

    return accum.sum_chunked(make_terms, n_hi - n_lo + 1, workers=workers)


def rs_correction(t: float, m: int = 2) -> float:
    """Correction series through order m in {0, 1, 2}; analytic derivatives."""
    if m not in (0, 1, 2):
        raise UnsupportedOrderError("rs_correction supports m in {0, 1, 2}")
    if not t > TWO_PI:
        raise DomainError("rs_correction requires t > 2*pi")
    s_dd = xp.sqrt(xp.div(xp.from_float(t), xp.TWO_PI_DD))
    n_t = int(xp.floor_dd(s_dd))
    p = float(xp.to_float(xp.sub(s_dd, xp.from_float(float(n_t)))))
    p = min(max(p, 0.0), np.nextafter(1.0, 0.0))
    d = psi_derivs(p, 6)
    c0 = d[0]
    c1 = -d[3] / (96.0 * math.pi**2)
    c2 = d[2] / (64.0 * math.pi**2) + d[6] / (18432.0 * math.pi**4)
    x = (t / TWO_PI) ** -0.25
    q = (t / TWO_PI) ** -0.5
    series = c0
    if m >= 1:
        series = series + c1 * q
    if m >= 2:
        series = series + c2 * q * q
    return float((-1.0) ** (n_t - 1) * x * series)


def rs_z(t: float, m: int = 2, workers: int = 1) -> RsEvaluation:
    """Full Riemann-Siegel Z(t) for t > 200 with the order-2 remainder bound."""
    if not t > 200.0:
        raise RangeError("rs_z requires t > 200 (remainder bound validity)")
    sc = scales(t)
    main = rs_main_sum(t, 1, sc.n_t, workers=workers)
    corr = rs_correction(t, m)
    s_dd = xp.sqrt(xp.div(xp.from_float(t), xp.TWO_PI_DD))
    p = float(xp.to_float(xp.sub(s_dd, xp.from_float(float(sc.n_t)))))
    return RsEvaluation(
        z=main + corr,
        main_sum=main,
        correction=corr,
        n_t=sc.n_t,
        p=p,
        order_m=m,
        remainder_bound=0.011 * t**-1.75 if m == 2 else math.nan,
    )
