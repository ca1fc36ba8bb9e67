"""Shared phase kernel for the odd-integer zeta-sum.

The per-term cosine argument is t*[b(b - rho) + log(b + rho)] + t + pi/8
with rho = alpha/a and b = sqrt(rho^2 - 1).  Since (b + rho)(rho - b) = 1,
the cancellation-prone product b(b - rho) is evaluated as -b/(b + rho);
with pc = (b + rho)^2 the same inner value equals (log pc + 1/pc)/2 - 1/2
... shifted, which is how the two published phase forms coincide.
"""

from __future__ import annotations

import numpy as np

from . import xprec as xp


def rho_b_dd(rho_dd: xp.ExtendedReal):
    """b = sqrt(rho^2 - 1) in two-word arithmetic, via (rho-1)(rho+1).

    A representation-level hair below 1 (|rho - 1| within a few ulps)
    clamps to zero; anything genuinely below raises.
    """
    one = xp.ExtendedReal(1.0, 0.0)
    b2 = xp.mul(xp.sub(rho_dd, one), xp.add(rho_dd, one))
    if np.any(np.less(b2.hi, -1e-12)):
        raise ValueError("rho must be >= 1")
    if np.any(np.less(b2.hi, 0.0)):
        hi = np.maximum(b2.hi, 0.0)
        b2 = xp.ExtendedReal(hi, np.where(np.less(b2.hi, 0.0), 0.0 * hi, b2.lo))
    return xp.sqrt(b2)


def phase_inner_hyperbolic(rho_dd: xp.ExtendedReal) -> xp.ExtendedReal:
    """b(b - rho) + log(b + rho) = log(b + rho) - b/(b + rho), two-word."""
    b = rho_b_dd(rho_dd)
    s = xp.add(b, rho_dd)
    return xp.sub(xp.log_dd(s), xp.div(b, s))


def phase_inner_pc(rho_dd: xp.ExtendedReal) -> xp.ExtendedReal:
    """(log pc + 1/pc)/2 - 1/2 with pc = (b + rho)^2; equals the hyperbolic
    inner value analytically, but follows the pc-form evaluation order."""
    b = rho_b_dd(rho_dd)
    s = xp.add(b, rho_dd)
    pc = xp.mul(s, s)
    one = xp.ExtendedReal(1.0, 0.0)
    half = xp.mul_d(xp.add(xp.log_dd(pc), xp.div(one, pc)), 0.5)
    return xp.sub(half, xp.ExtendedReal(0.5, 0.0))
