"""Direct and asymptotic evaluation of the Riemann-Siegel integral

    RSI = (1/2i) int e^{-i pi z^2} z^{-1/2-it} / sin(pi z) dz

along the slope -1 line through z = 1/2 (z = 1/2 + q e^{-i pi/4}).

The direct quadrature is delicate: the scaled integrand peaks near
e^{(pi t^2/32)^{1/3}} while the integral itself is smaller than the peak by
a factor e^{-sqrt(pi t/2)}-ish, i.e. the oscillation cancels 16+ decimal
digits by t = 30.  Every integrand value is therefore computed in two-word
(double-double) complex arithmetic and panel sums are accumulated in
two-word form; magnitudes are tracked scaled by e^{-3 pi t/4} throughout
and rescaled once at the end.

The asymptotic form packages the two dominant contributions into
hyperbolic ratios,

    RSI ~ i e^{pi t/2} e^{-i theta} / (1 + e^{-2 pi t}) *
          [ (pi/2t)^{1/4} S1/C2
            - pi^{7/4}/(48 (2t)^{3/4} C2) {2 S1 T2 (24/C2^2 - 7)
                                           + C1 (1 + 12 (S2^2-1)/C2^2)} ],

S1, C1 = sinh, cosh sqrt(pi t/2); S2, C2, T2 = sinh, cosh, tanh
sqrt(2 pi t), evaluated through exponential ratios since cosh sqrt(2 pi t)
overflows beyond t ~ 1e4.  e^{i theta} * RSI is purely imaginary for this
form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import xprec as xp
from .errors import NumericError, RangeError
from .theta import theta

# e^{pi t/2} and the quadrature noise floor both cap the asymptotic range
_T_ASYMPTOTIC_MAX = 440.0

_INV_SQRT2 = (
    float.fromhex("0x1.6a09e667f3bcdp-1"),
    float.fromhex("-0x1.bdd3413b26456p-55"),
)


@dataclass(frozen=True)
class RsiValue:
    value: complex
    method: str  # "numeric" or "asymptotic"
    est_err: float  # relative


class _CDD:
    """A complex value with two-word real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: xp.ExtendedReal, im: xp.ExtendedReal):
        self.re = re
        self.im = im

    def approx(self) -> np.ndarray:
        return (self.re.hi + self.re.lo) + 1j * (self.im.hi + self.im.lo)


def _cdd_mul(a: _CDD, b: _CDD) -> _CDD:
    return _CDD(
        xp.sub(xp.mul(a.re, b.re), xp.mul(a.im, b.im)),
        xp.add(xp.mul(a.re, b.im), xp.mul(a.im, b.re)),
    )


def _cdd_div(a: _CDD, b: _CDD) -> _CDD:
    den = xp.add(xp.mul(b.re, b.re), xp.mul(b.im, b.im))
    re = xp.div(xp.add(xp.mul(a.re, b.re), xp.mul(a.im, b.im)), den)
    im = xp.div(xp.sub(xp.mul(a.im, b.re), xp.mul(a.re, b.im)), den)
    return _CDD(re, im)


def _cdd_exp(re: xp.ExtendedReal, im: xp.ExtendedReal) -> _CDD:
    mag = xp.exp_dd(re)
    s, c = xp.sincos_dd(im)
    return _CDD(xp.mul(mag, c), xp.mul(mag, s))


def _integrand_dd(t: float, scale: float):
    """Scaled integrand values on the contour, in two-word complex form."""
    isq_hi, isq_lo = _INV_SQRT2
    isq = xp.ExtendedReal(isq_hi, isq_lo)
    t_dd = xp.from_float(float(t))
    half = xp.ExtendedReal(0.5, 0.0)
    pi_dd = xp.PI_DD

    def f(q: np.ndarray) -> _CDD:
        q = np.asarray(q, dtype=float)
        qq = xp.ExtendedReal(q, np.zeros_like(q))
        xr = xp.add(half, xp.mul(qq, isq))      # Re z
        yi = xp.ExtendedReal(0.0, 0.0)
        yi = xp.mul(qq, xp.ExtendedReal(-isq_hi, -isq_lo))  # Im z
        # -i pi z^2 = 2 pi x y - i pi (x^2 - y^2)
        xy = xp.mul(xr, yi)
        x2my2 = xp.mul(xp.sub(xr, yi), xp.add(xr, yi))
        ex_re = xp.mul_d(xp.mul(pi_dd, xy), 2.0)
        ex_im = xp.mul(xp.ExtendedReal(-pi_dd.hi, -pi_dd.lo), x2my2)
        # (-1/2 - i t) log z
        mod2 = xp.add(xp.mul(xr, xr), xp.mul(yi, yi))
        L = xp.mul_d(xp.log_dd(mod2), 0.5)
        A = xp.atan2_dd(yi, xr)
        ex_re = xp.add(ex_re, xp.add(xp.mul_d(L, -0.5), xp.mul(t_dd, A)))
        ex_im = xp.add(ex_im, xp.sub(xp.mul_d(A, -0.5), xp.mul(t_dd, L)))
        ex_re = xp.add(ex_re, xp.ExtendedReal(-scale, 0.0))
        num = _cdd_exp(ex_re, ex_im)
        # denominator 2 i sin(pi z):
        # sin(pi z) = sin(pi x) cosh(pi y) + i cos(pi x) sinh(pi y)
        px = xp.mul(pi_dd, xr)
        py = xp.mul(pi_dd, yi)
        spx, cpx = xp.sincos_dd(px)
        ep = xp.exp_dd(py)
        em = xp.div(xp.ExtendedReal(1.0, 0.0), ep)
        ch = xp.mul_d(xp.add(ep, em), 0.5)
        sh = xp.mul_d(xp.sub(ep, em), 0.5)
        sin_re = xp.mul(spx, ch)
        sin_im = xp.mul(cpx, sh)
        den = _CDD(xp.mul_d(sin_im, -2.0), xp.mul_d(sin_re, 2.0))  # 2 i sin(pi z)
        val = _cdd_div(num, den)
        # direction factor e^{-i pi/4} = (1 - i)/sqrt(2)
        dirc = _CDD(isq, xp.ExtendedReal(-isq_hi, -isq_lo))
        return _cdd_mul(val, dirc)

    return f


# 15-point Kronrod / 7-point Gauss constants (see transition module)
from .transition import _NODES, _WG_FULL, _WK_FULL  # noqa: E402


def _panel_edges(t: float, q_max: float) -> np.ndarray:
    """Nonuniform panels resolving the local oscillation rate."""
    edges = [0.0]
    q = 0.0
    while q < q_max:
        rate = t / max(0.4, q) + 2.0 * math.pi * max(1.0, q)
        q = min(q_max, q + max(1e-3, 1.5 * math.pi / rate))
        edges.append(q)
    pos = np.array(edges)
    return np.concatenate([-pos[::-1], pos[1:]])


def rsi_numeric(t: float, rel_tol: float = 1e-9) -> RsiValue:
    """Adaptive two-word quadrature of the contour integral, 5 <= t <= 60."""
    if not 5.0 <= t <= 60.0:
        raise RangeError("rsi_numeric supports 5 <= t <= 60 (binary64 dynamic range)")
    scale = 3.0 * math.pi * t / 4.0
    f = _integrand_dd(t, scale)
    q_max = math.sqrt(t) + 15.0
    probe = np.abs(f(np.linspace(-q_max, q_max, 301)).approx())
    peak = float(probe.max())
    while float(np.abs(f(np.array([q_max])).approx())[0]) > 1e-20 * peak:
        q_max *= 1.25

    lows = _panel_edges(t, q_max)
    highs = lows[1:]
    lows = lows[:-1]

    def rule(lo, hi):
        mid = 0.5 * (lo[:, None] + hi[:, None])
        half = 0.5 * (hi[:, None] - lo[:, None])
        pts = mid + half * _NODES[None, :]
        vals = f(pts.ravel())
        shape = pts.shape

        def panel_dot(part: xp.ExtendedReal, w) -> xp.ExtendedReal:
            prod = xp.mul_d(xp.ExtendedReal(part.hi.reshape(shape), part.lo.reshape(shape)), w[None, :])
            acc = xp.ExtendedReal(np.zeros(shape[0]), np.zeros(shape[0]))
            for j in range(shape[1]):
                acc = xp.add(acc, xp.ExtendedReal(prod.hi[:, j], prod.lo[:, j]))
            return xp.mul_d(acc, half[:, 0])

        ik_re = panel_dot(vals.re, _WK_FULL)
        ik_im = panel_dot(vals.im, _WK_FULL)
        ig_re = panel_dot(vals.re, _WG_FULL)
        ig_im = panel_dot(vals.im, _WG_FULL)
        bracket = np.hypot(
            (ik_re.hi - ig_re.hi) + (ik_re.lo - ig_re.lo),
            (ik_im.hi - ig_im.hi) + (ik_im.lo - ig_im.lo),
        )
        # the published rule weights carry ~1e-16 relative rounding; below
        # this per-panel floor the bracket measures noise, not truncation
        absval = np.abs(vals.approx()).reshape(shape)
        floor = (absval * _WK_FULL[None, :]).sum(axis=1) * half[:, 0] * 3e-16
        return ik_re, ik_im, bracket, floor

    ik_re, ik_im, bracket, floor = rule(lows, highs)
    history: list = []
    stalled = False
    for _ in range(40):
        tot_re = math.fsum(ik_re.hi) + math.fsum(ik_re.lo)
        tot_im = math.fsum(ik_im.hi) + math.fsum(ik_im.lo)
        eff = np.maximum(bracket - floor, 0.0)
        tol = rel_tol * max(math.hypot(tot_re, tot_im), 1e-300)
        history.append(eff.sum())
        if history[-1] <= tol or lows.size >= 24576:
            break
        if len(history) >= 5 and history[-1] > 0.75 * history[-5]:
            # brackets no longer shrink: the remaining spread is the
            # incoherent per-panel rounding noise, not truncation
            stalled = True
            break
        worst = np.argsort(eff)[-max(1, lows.size // 8):]
        keep = np.setdiff1d(np.arange(lows.size), worst)
        mid = 0.5 * (lows[worst] + highs[worst])
        nlo = np.concatenate([lows[worst], mid])
        nhi = np.concatenate([mid, highs[worst]])
        r_re, r_im, r_brk, r_flr = rule(nlo, nhi)
        lows = np.concatenate([lows[keep], nlo])
        highs = np.concatenate([highs[keep], nhi])
        ik_re = xp.ExtendedReal(
            np.concatenate([ik_re.hi[keep], r_re.hi]), np.concatenate([ik_re.lo[keep], r_re.lo])
        )
        ik_im = xp.ExtendedReal(
            np.concatenate([ik_im.hi[keep], r_im.hi]), np.concatenate([ik_im.lo[keep], r_im.lo])
        )
        bracket = np.concatenate([bracket[keep], r_brk])
        floor = np.concatenate([floor[keep], r_flr])

    tot_re = math.fsum(ik_re.hi) + math.fsum(ik_re.lo)
    tot_im = math.fsum(ik_im.hi) + math.fsum(ik_im.lo)
    total = complex(tot_re, tot_im)
    eff = np.maximum(bracket - floor, 0.0)
    rms = math.sqrt(float(np.sum(floor * floor)))
    if stalled:
        # zero-mean panel noise adds in quadrature in the total
        est = eff.sum() / math.sqrt(max(lows.size, 1)) + rms
    else:
        est = eff.sum() + rms
    rel = est / max(abs(total), 1e-300)
    if rel > 1e-4:
        raise NumericError("rsi quadrature did not converge")
    return RsiValue(value=total * math.exp(scale), method="numeric", est_err=float(rel))


def rsi_asymptotic(t: float) -> RsiValue:
    """Closed asymptotic form; t > 5 (overflow-capped near t ~ 440)."""
    if not t > 5.0:
        raise RangeError("rsi_asymptotic requires t > 5")
    if t > _T_ASYMPTOTIC_MAX:
        raise RangeError(
            f"rsi_asymptotic overflows binary64 beyond t = {_T_ASYMPTOTIC_MAX:g}"
        )
    b1 = math.sqrt(math.pi * t / 2.0)
    b2 = math.sqrt(2.0 * math.pi * t)
    e1 = math.exp(b1 - b2)
    d2 = 1.0 + math.exp(-2.0 * b2)
    s1c2 = e1 * (1.0 - math.exp(-2.0 * b1)) / d2
    c1c2 = e1 * (1.0 + math.exp(-2.0 * b1)) / d2
    t2 = (1.0 - math.exp(-2.0 * b2)) / d2
    inv_c2_sq = 4.0 * math.exp(-2.0 * b2) / (d2 * d2)
    bracket = (
        (math.pi / (2.0 * t)) ** 0.25 * s1c2
        - math.pi**1.75
        / (48.0 * (2.0 * t) ** 0.75)
        * (2.0 * s1c2 * t2 * (24.0 * inv_c2_sq - 7.0) + c1c2 * (13.0 - 24.0 * inv_c2_sq))
    )
    th = theta(t)
    amp = bracket * math.exp(math.pi * t / 2.0) / (1.0 + math.exp(-2.0 * math.pi * t))
    value = 1j * amp * complex(math.cos(th), -math.sin(th))
    return RsiValue(value=value, method="asymptotic", est_err=0.13 / t)
