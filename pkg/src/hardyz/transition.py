"""Transition-zone handling: the special term when a = sqrt(8t/pi) sits
within t^(-1/6) of an odd integer.

Each odd-integer term of the new zeta-sum is the real projection of the
Euler integral

    E(alpha) = B + e^{i pi alpha^2/4} conj(B),
    B = int_1^inf exp[i pi alpha^2/(4(w+1)) + i(t/2) Log w] / (w^{1/4} (w+1)^{3/2}) dw.

B has a zero-level saddle on the real axis at w = pc(alpha) when alpha > a.
Away from a the saddle estimate collapses to the familiar closed-form term;
inside the transition zone it degenerates and the package either uses the
two-term closed form (Airy-like scaling, valid for varrho in [0, 0.25]) or
integrates B numerically along the steepest-descent ray.  The contour runs
from the unit circle (or from -(pc+1)/sqrt(2) along the incoming branch when
pc > sqrt(2)) through the saddle and out at pi/4 to infinity; unit-circle
arcs never contribute to E and are skipped.

Everything is phased so the integrand is O(1): the huge phase at the saddle
is pulled out exactly (two-word reduced) and only smooth differences are
exponentiated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import xprec as xp
from .errors import DomainError, NumericError
from .newsum_phase import phase_inner_hyperbolic  # circular-safe import helper
from .theta import a_dd, odd_nearest

TWO_PI = xp.TWO_PI
_SQRT2 = math.sqrt(2.0)
_DIR = complex(math.cos(math.pi / 4), math.sin(math.pi / 4))

GAMMA_13 = math.gamma(1.0 / 3.0)
GAMMA_23 = math.gamma(2.0 / 3.0)
# amplitude of the closed-form transition term at varrho = 0
ENVELOPE_COEFF = 2.0**0.75 * GAMMA_13 / (3.0 ** (2.0 / 3.0) * math.pi**0.25)


class Regime(Enum):
    CLOSED_FORM = "closed_form"
    NUMERIC = "numeric"
    NONE = "none"


@dataclass(frozen=True)
class TransitionParams:
    """Classification of the height t relative to the nearest odd integer.

    eps follows the convention eps = a - NINT_O(a); varrho is signed so that
    positive values mean the nearest odd integer lies above a (the side on
    which the closed form is valid), i.e. varrho = (NINT_O(a) - a) t^(1/6).
    """

    eps: float
    varrho: float
    regime: Regime


def classify(t: float) -> TransitionParams:
    a = a_dd(t)
    near = odd_nearest(a)
    eps = float(xp.to_float(xp.sub(a, xp.from_float(float(near)))))
    varrho = -eps * t ** (1.0 / 6.0)
    if 0.0 <= varrho <= 0.25:
        regime = Regime.CLOSED_FORM
    elif -1.0 < varrho < 1.0:
        regime = Regime.NUMERIC
    else:
        regime = Regime.NONE
    return TransitionParams(eps=eps, varrho=varrho, regime=regime)


def hfactor(t: float) -> float:
    """Prefactor common to all Z contributions, 1 + 1/(32 t^2)."""
    return 1.0 + 1.0 / (32.0 * t * t)


def transition_term(t: float, varrho: float) -> float:
    """Two-term closed form of the transition contribution, varrho in [0, 0.25]."""
    if not 0.0 <= varrho <= 0.25:
        raise DomainError("closed form is valid for varrho in [0, 0.25]; use transition_numeric")
    env = math.exp(-((32.0 * math.pi**3) ** 0.25) * varrho**1.5 / 3.0)
    pref = hfactor(t) * 2.0**0.75 * env / (3.0 ** (2.0 / 3.0) * math.pi**0.25 * t ** (1.0 / 12.0))
    shift = math.sqrt(math.pi / 2.0) * t ** (1.0 / 3.0) * varrho
    base = xp.reduce_mod_2pi(xp.add(xp.from_float(float(t)), xp.from_float(shift)))
    arg = base.value
    return pref * (
        GAMMA_13 * math.cos(arg + math.pi / 24.0)
        + GAMMA_23 * 3.0 ** (1.0 / 3.0) * math.sqrt(math.pi) * varrho * math.cos(arg - math.pi / 24.0)
    )


# 15-point Kronrod / 7-point Gauss rule (standard QUADPACK constants)
_XGK = np.array([
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
])
_WGK = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
])
_WG = np.array([0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469])
_NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[6::-1]])  # 15 ascending nodes
_WK_FULL = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[6::-1]])
_WG_FULL = np.zeros(15)
_WG_FULL[1:14:2] = np.concatenate([_WG[:3], [_WG[3]], _WG[2::-1]])


def _adaptive_qk15(f, a: float, b: float, rel_tol: float = 1e-9, max_intervals: int = 512):
    """Adaptive Gauss-Kronrod for a complex integrand on [a, b]."""
    lows = np.array([a])
    highs = np.array([b])

    def rule(lo, hi):
        mid = 0.5 * (lo[:, None] + hi[:, None])
        half = 0.5 * (hi[:, None] - lo[:, None])
        pts = mid + half * _NODES[None, :]
        vals = f(pts.ravel()).reshape(pts.shape)
        ik = (vals * _WK_FULL[None, :]).sum(axis=1) * half[:, 0]
        ig = (vals * _WG_FULL[None, :]).sum(axis=1) * half[:, 0]
        return ik, np.abs(ik - ig)

    ik, err = rule(lows, highs)
    for _ in range(64):
        total = ik.sum()
        tol = rel_tol * max(abs(total), 1e-300)
        if err.sum() <= tol or lows.size >= max_intervals:
            break
        worst = np.argsort(err)[-max(1, lows.size // 4):]
        keep = np.setdiff1d(np.arange(lows.size), worst)
        mid = 0.5 * (lows[worst] + highs[worst])
        new_lo = np.concatenate([lows[keep], lows[worst], mid])
        new_hi = np.concatenate([highs[keep], mid, highs[worst]])
        ik_keep, err_keep = ik[keep], err[keep]
        ik_new, err_new = rule(np.concatenate([lows[worst], mid]), np.concatenate([mid, highs[worst]]))
        lows, highs = new_lo, new_hi
        ik = np.concatenate([ik_keep, ik_new])
        err = np.concatenate([err_keep, err_new])
    return ik.sum(), err.sum()


def _pc_of(alpha: float, t: float) -> float:
    x = math.pi * alpha * alpha / (4.0 * t)
    return x - 1.0 + x * math.sqrt(max(0.0, 1.0 - (8.0 * t / math.pi) / (alpha * alpha)))


def euler_term(alpha: float, t: float, rel_tol: float = 1e-6) -> float:
    """Z contribution of the term at alpha via numeric contour quadrature.

    Valid for any real alpha > 0 near or beyond a; for alpha well below a
    the result is exponentially small.  The smooth odd-integer extension is
    used for the front phase, so at odd alpha this reproduces the series
    term and at alpha ~ a it reproduces the closed-form transition term.
    """
    t = float(t)
    alpha = float(alpha)
    a2w = a_dd(t)
    a = float(xp.to_float(a2w))
    rho = alpha / a
    alpha_dd = xp.from_float(alpha)

    if rho >= 1.0:
        pc = _pc_of(alpha, t)
        w0 = complex(pc, 0.0)
        if pc <= _SQRT2:
            u_start = _SQRT2 * (math.cos(math.acos(pc / _SQRT2) - math.pi / 4.0) - pc)
        else:
            u_start = -(pc + 1.0) / _SQRT2
        extra_real = 0.0
        # front phase: Phi(alpha) - pi/4 mod 2pi, two-word
        rho_dd = xp.div(alpha_dd, a2w)
        inner = phase_inner_hyperbolic(rho_dd)
        ph = xp.add(xp.mul_d(inner, t), xp.add(xp.from_float(t), xp.PI_8_DD))
        rot = xp.reduce_mod_2pi(xp.sub(ph, xp.mul_d(xp.PI_8_DD, 2.0))).value
        d2 = t * (pc - 1.0) / (4.0 * pc * pc * (pc + 1.0))
        d3 = t / (24.0 * _SQRT2)
        u_end = 1.3 * max(math.sqrt(45.0 / d2) if d2 > 0 else 0.0, (45.0 / d3) ** (1.0 / 3.0))
    else:
        if rho <= 0.75:
            return 0.0  # integrand bounded by exp(-0.22 t); zero at machine scale
        phi = math.acos(2.0 * rho * rho - 1.0)
        w0 = complex(math.cos(phi), math.sin(phi))
        u_start = 0.0
        extra_real = t * (rho * math.sqrt(1.0 - rho * rho) - 0.5 * phi)
        # front phase: pi alpha^2/8 - pi/8 mod 2pi, two-word (alpha^2 exact)
        asq = xp.mul(alpha_dd, alpha_dd)
        rot = xp.reduce_mod_2pi(xp.mul(xp.sub(asq, xp.ExtendedReal(1.0, 0.0)), xp.PI_8_DD)).value
        d3 = t / (24.0 * _SQRT2)
        u_end = 2.6 * (45.0 / d3) ** (1.0 / 3.0)

    a2_quarter = math.pi * alpha * alpha / 4.0

    def integrand(u):
        w = w0 + u * _DIR
        delta = (
            1j * a2_quarter * (w0 - w) / ((w + 1.0) * (w0 + 1.0))
            + 1j * (t / 2.0) * np.log(w / w0)
            + extra_real
        )
        return np.exp(delta) / (w**0.25 * (w + 1.0) ** 1.5) * _DIR

    # extend the ray until the integrand is 1e-16 of its saddle-scale peak
    peak = max(abs(integrand(np.array([0.0]))[0]), 1e-300)
    while abs(integrand(np.array([u_end]))[0]) > 1e-16 * peak and u_end < 1e6:
        u_end *= 1.6
    S, err = _adaptive_qk15(integrand, u_start, u_end, rel_tol=rel_tol)
    if err > 1e-4 * max(abs(S), 1e-280):
        raise NumericError("transition quadrature did not converge")
    pref = hfactor(t) * (math.pi / 2.0) ** 0.25 * alpha / (2.0 * t**0.25)
    return pref * 2.0 * (complex(math.cos(rot), math.sin(rot)) * S).real


def transition_numeric(t: float, eps: float) -> float:
    """Numeric transition contribution at the point a - eps (|varrho| < 1)."""
    varrho = -eps * t ** (1.0 / 6.0)
    if not abs(varrho) < 1.0:
        raise DomainError("transition_numeric requires |varrho| < 1")
    a = float(xp.to_float(a_dd(t)))
    return euler_term(a - eps, t)


def transition_value(t: float, params: TransitionParams | None = None) -> float:
    """Transition contribution at NINT_O(a) per the regime classification."""
    params = params or classify(t)
    if params.regime is Regime.NONE:
        return 0.0
    if params.regime is Regime.CLOSED_FORM:
        return transition_term(t, params.varrho)
    return transition_numeric(t, params.eps)
