"""Riemann-Siegel theta function, Gram points, and shared scale quantities.

theta(t) = (t/2) log(t/2pi) - t/2 - pi/8 + 1/(48t) + 7/(5760 t^3), truncated
after the t^-3 term (the next one is O(t^-5) and negligible for t > 30).
Gram points solve theta(g_n) = n*pi; they are the classical sampling grid
for sign checks of Z(t).  The log runs in two-word arithmetic so theta is
usable as a phase up to t = 1e12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import lambertw

from . import xprec as xp
from .errors import DomainError, NumericError

TWO_PI = xp.TWO_PI


def _theta_dd_raw(t) -> xp.ExtendedReal:
    t_arr = np.multiply(t, 1.0)
    half_t = 0.5 * t_arr  # exact
    L = xp.log_dd(xp.div(xp.from_float(t_arr), xp.TWO_PI_DD))
    out = xp.mul_d(L, half_t)
    out = xp.add(out, xp.from_float(-half_t))
    out = xp.sub(out, xp.PI_8_DD)
    small = 1.0 / (48.0 * t_arr) + 7.0 / (5760.0 * t_arr**3)
    return xp.add(out, xp.from_float(small))


@lru_cache(maxsize=1024)
def _theta_dd_scalar(t: float):
    v = _theta_dd_raw(t)
    return float(v.hi), float(v.lo)


def theta_dd(t) -> xp.ExtendedReal:
    """theta(t) as a two-word value; t > 0 (scalar or array)."""
    if not np.all(np.greater(t, 0.0)):
        raise DomainError("theta requires t > 0")
    if np.ndim(t) == 0:
        hi, lo = _theta_dd_scalar(float(t))
        return xp.ExtendedReal(hi, lo)
    return _theta_dd_raw(t)


def theta(t) -> float:
    """theta(t) collapsed to a machine real."""
    v = theta_dd(t)
    return v.hi + v.lo


def theta_deriv(t):
    """d theta/dt = (1/2) log(t/2pi) - 1/(48 t^2) - 7/(1920 t^4)."""
    t_arr = np.multiply(t, 1.0)
    return 0.5 * np.log(t_arr / TWO_PI) - 1.0 / (48.0 * t_arr**2) - 7.0 / (1920.0 * t_arr**4)


def gram_point(n, max_iter: int = 64):
    """Gram point g_n with |theta(g_n) - n*pi| <= max(1e-9, |n*pi|*1e-13).

    Newton iteration on theta, seeded by inverting the leading term
    (t/2)(log(t/2pi) - 1) = n*pi + pi/8 through the Lambert W function.
    """
    n_in = np.asarray(n)
    if np.any(np.less(n_in, 0)):
        raise DomainError("gram_point requires n >= 0")
    scalar = n_in.ndim == 0
    n_arr = np.atleast_1d(n_in).astype(float)
    z = (n_arr + 0.125) / math.e
    t = TWO_PI * (n_arr + 0.125) / np.real(lambertw(z))
    target = xp.mul_d(xp.PI_DD, n_arr)
    tol = np.maximum(1e-9, n_arr * math.pi * 1e-13)
    converged = False
    for _ in range(max_iter):
        resid = xp.to_float(xp.sub(theta_dd(t), target))
        if np.all(np.abs(resid) <= 0.25 * tol):
            converged = True
            break
        t = t - resid / theta_deriv(t)
    if not converged:
        resid = xp.to_float(xp.sub(theta_dd(t), target))
        if np.any(np.abs(resid) > tol):
            raise NumericError("gram_point Newton iteration did not converge")
    return float(t[0]) if scalar else t


def odd_floor(x):
    """Largest odd integer <= x (x >= 1); accepts ExtendedReal for large x."""
    f = xp.floor_dd(x) if isinstance(x, xp.ExtendedReal) else np.floor(np.multiply(x, 1.0))
    if np.any(np.less(f, 1.0)):
        raise DomainError("odd_floor requires x >= 1")
    odd = np.where(np.mod(f, 2.0) == 1.0, f, f - 1.0)
    if np.ndim(odd) == 0:
        return int(odd)
    return odd.astype(np.int64)


def odd_nearest(x):
    """Odd integer nearest to x; ties (x an even integer) broken upward."""
    if isinstance(x, xp.ExtendedReal):
        k = xp.floor_dd(xp.mul_d(xp.add(x, xp.ExtendedReal(1.0, 0.0)), 0.5))
        below = 2.0 * k - 1.0  # the odd integer in (x-2, x]
        gap_below = xp.to_float(xp.sub(x, xp.from_float(below)))
    else:
        xv = np.multiply(x, 1.0)
        if np.any(np.less(xv, 1.0)):
            raise DomainError("odd_nearest requires x >= 1")
        below = 2.0 * np.floor((xv + 1.0) / 2.0) - 1.0
        gap_below = xv - below
    # distance up is 2 - gap_below; the tie (gap exactly 1) breaks upward
    out = np.where(gap_below >= 1.0, below + 2.0, below)
    if np.ndim(out) == 0:
        return int(out)
    return out.astype(np.int64)


@dataclass(frozen=True)
class ScaleSet:
    """Scale quantities attached to an evaluation height t."""

    t: float
    a: float
    n_t: int
    eps: float  # a - nearest odd integer
    transition_zone: bool


@lru_cache(maxsize=1024)
def _a_dd_scalar(t: float):
    v = xp.sqrt(xp.div(xp.mul_d(xp.from_float(t), 8.0), xp.PI_DD))
    return float(v.hi), float(v.lo)


def a_dd(t) -> xp.ExtendedReal:
    """a = sqrt(8 t / pi) as a two-word value."""
    if np.ndim(t) == 0:
        hi, lo = _a_dd_scalar(float(t))
        return xp.ExtendedReal(hi, lo)
    return xp.sqrt(xp.div(xp.mul_d(xp.from_float(t), 8.0), xp.PI_DD))


@lru_cache(maxsize=4096)
def scales(t: float) -> ScaleSet:
    """Populate a, N_t = floor(sqrt(t/2pi)), eps and the transition flag."""
    t = float(t)
    if not t > 30.0:
        raise DomainError("scales requires t > 30")
    a = a_dd(t)
    # a/4 = sqrt(t/2pi) exactly, so N_t = floor(a/4)
    n_t = int(xp.floor_dd(xp.mul_d(a, 0.25)))
    near = odd_nearest(a)
    eps = float(xp.to_float(xp.sub(a, xp.from_float(float(near)))))
    return ScaleSet(
        t=float(t),
        a=float(xp.to_float(a)),
        n_t=n_t,
        eps=eps,
        transition_zone=bool(abs(eps) < t ** (-1.0 / 6.0)),
    )
