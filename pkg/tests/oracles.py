"""High-precision reference implementations used only by the tests.

The Z oracle evaluates zeta(1/2+it) by classical Euler-Maclaurin summation
in mpmath arbitrary precision -- a route that shares nothing with the
Riemann-Siegel machinery under test -- and rotates by the exact theta from
the log-gamma form.
"""

from __future__ import annotations

import mpmath as mp


def em_zeta(s, M: int | None = None, K: int = 25, dps: int = 30):
    """zeta(s) by Euler-Maclaurin: main sum to M, half term, integral term,
    and K Bernoulli corrections.  M must exceed |Im s|/(2 pi) for the
    Bernoulli series to converge; M ~ |Im s|/3 keeps it fast."""
    with mp.workdps(dps):
        s = mp.mpc(s)
        if M is None:
            M = max(50, int(abs(mp.im(s)) / 3) + 50)
        main = mp.fsum(mp.power(n, -s) for n in range(1, M))
        Mm = mp.mpf(M)
        total = main + mp.power(Mm, -s) / 2 + mp.power(Mm, 1 - s) / (s - 1)
        poch = s  # s (s+1) ... (s+2k-2)
        for k in range(1, K + 1):
            term = mp.bernoulli(2 * k) / mp.factorial(2 * k) * poch * mp.power(Mm, -s - 2 * k + 1)
            total += term
            poch *= (s + 2 * k - 1) * (s + 2 * k)
        return total


def z_oracle(t, dps: int = 30):
    """Hardy Z(t) = Re[e^{i theta(t)} zeta(1/2+it)], theta exact."""
    with mp.workdps(dps):
        t_mp = mp.mpf(float(t))
        zeta_val = em_zeta(mp.mpf("0.5") + 1j * t_mp, dps=dps)
        return float(mp.re(mp.exp(1j * mp.siegeltheta(t_mp)) * zeta_val))


def phase_mod_oracle(t, x, dps: int = 50):
    """(t * log x) mod 2 pi at 50 digits."""
    with mp.workdps(dps):
        return float(mp.fmod(mp.mpf(float(t)) * mp.log(mp.mpf(float(x))), 2 * mp.pi))


def log_oracle(x, dps: int = 50):
    with mp.workdps(dps):
        return mp.log(mp.mpf(float(x)))


def psi_oracle(p, k: int = 0, dps: int = 30):
    """Psi(p) = cos(2pi(p^2-p-1/16))/cos(2pi p) or its k-th derivative."""
    with mp.workdps(dps):
        def f(pv):
            return mp.cos(2 * mp.pi * (pv * pv - pv - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * pv)
        if k == 0:
            return float(f(mp.mpf(float(p))))
        return float(mp.diff(f, mp.mpf(float(p)), k))
