"""Hybrid evaluator: leading Riemann-Siegel terms plus the odd-integer
series for the rest, with cutoff optimization.

With per-term cost ratio Omega (new-series term vs RS term), total cost

    S(pc) = sqrt(t/(2 pi pc)) + [sqrt(t/2pi)(pc+1)/sqrt(pc) - (INT_O(a)+2)/2] * Omega

is minimized at pc_CO = 1 + 1/Omega, giving cutoffs

    N_CO = sqrt(t/(2 pi pc_CO)),   L_CO = sqrt(2t/pi) (pc_CO+1)/sqrt(pc_CO),

and normalized cost X(Omega) = 2[1 + Omega(1 - sqrt(1+1/Omega))]/sqrt(1+1/Omega);
X(1) = 2 sqrt(2) - 2, a 17.16% term-count saving.  The practical error
ceiling of the split is (32 Omega (1+Omega) pi / t)^(1/4): the size of the
series terms adjacent to the cut.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import xprec as xp
from .errors import DegenerateRangeError, DomainError, RangeError
from .newsum import (
    NUMERIC_VARRHO_MAX,
    TWO_SQRT2,
    classify_first_terms,
    first_term_value,
    ms_sum,
)
from .newsum_phase import rho_b_dd
from .rs import rs_correction, rs_main_sum
from .theta import a_dd, gram_point, odd_floor, odd_nearest, scales, theta_dd
from .transition import euler_term, hfactor, transition_term

TWO_PI = xp.TWO_PI


def x_of_omega(omega: float) -> float:
    """Normalized hybrid cost X(Omega); 1 - X is the fractional CPU saving."""
    if not omega >= 1.0:
        raise DomainError("x_of_omega requires Omega >= 1")
    r = math.sqrt(1.0 + 1.0 / omega)
    return 2.0 * (1.0 + omega * (1.0 - r)) / r


def practical_bound(t: float, omega: float) -> float:
    """(32 Omega (1+Omega) pi / t)^(1/4); at Omega = 1 this is (64 pi/t)^(1/4)."""
    if not (t > 200.0 and omega >= 1.0):
        raise DomainError("practical_bound requires t > 200 and Omega >= 1")
    return (32.0 * omega * (1.0 + omega) * math.pi / t) ** 0.25


def saddle_map(n, t: float):
    """alpha(N) = sqrt(t^2/(N^2 pi^2) + 4t/pi + 4N^2), the term correspondence."""
    n_arr = np.multiply(n, 1.0)
    if np.any(n_arr < 1) or np.any(n_arr > scales(t).n_t):
        raise DomainError("saddle_map requires 1 <= N <= N_t")
    return np.sqrt(t * t / (n_arr * n_arr * math.pi * math.pi) + 4.0 * t / math.pi + 4.0 * n_arr * n_arr)


def total_cost(t: float, pc: np.ndarray, omega: float) -> np.ndarray:
    """Term-cost of the hybrid as a function of the cut location pc."""
    pc = np.asarray(pc, dtype=float)
    a = float(xp.to_float(a_dd(t)))
    first = float(odd_floor(a)) + 2.0
    return np.sqrt(t / (TWO_PI * pc)) + (np.sqrt(t / TWO_PI) * (pc + 1.0) / np.sqrt(pc) - first / 2.0) * omega


@dataclass(frozen=True)
class HybridConfig:
    omega: float
    pc_co: float
    n_co: int
    l_co: int
    rounding: str  # "floor_ceil" or "nearest"
    include_transition: bool = True


def cutoffs(t: float, omega: float = 1.0, rounding: str = "floor_ceil",
            include_transition: bool = True) -> HybridConfig:
    """Cutoff pair (N_CO, L_CO) for the hybrid at the given Omega.

    floor_ceil takes N_CO = floor and L_CO = largest odd below the continuum
    values.  nearest rounds N_CO to the nearest integer and moves L_CO the
    opposite way by one odd step, which preserves the total term count
    (each series term trades one-for-one with an RS term at the cut);
    rounding the two cutoffs independently de-synchronizes the cut and
    roughly doubles the mean error.
    """
    if not t > 200.0:
        raise DomainError("cutoffs requires t > 200")
    if not omega >= 1.0:
        raise DomainError("cutoffs requires Omega >= 1")
    if rounding not in ("floor_ceil", "nearest"):
        raise ValueError("rounding must be 'floor_ceil' or 'nearest'")
    pc_co = 1.0 + 1.0 / omega
    n_cont = math.sqrt(t / (TWO_PI * pc_co))
    l_cont = math.sqrt(2.0 * t / math.pi) * (pc_co + 1.0) / math.sqrt(pc_co)
    if rounding == "floor_ceil":
        n_co = int(math.floor(n_cont))
        l_co = int(odd_floor(l_cont))
    else:
        n_co = int(round(n_cont))
        l_co = int(odd_floor(l_cont)) - 2 * (n_co - int(math.floor(n_cont)))
    a = float(xp.to_float(a_dd(t)))
    if l_co <= int(odd_floor(a)) + 2:
        raise DegenerateRangeError(
            f"L_CO = {l_co} does not clear the series start at t = {t:g}"
        )
    return HybridConfig(omega=omega, pc_co=pc_co, n_co=n_co, l_co=l_co,
                        rounding=rounding, include_transition=include_transition)


@dataclass(frozen=True)
class EvalResult:
    """A hybrid evaluation: value, method, and per-series term counts."""

    z: float
    method: str
    rs_terms: int
    new_terms: int
    transition_used: bool
    error_budget: float


def hybrid_z(t: float, config: HybridConfig | None = None, omega: float = 1.0,
             rounding: str = "nearest", workers: int = 1) -> EvalResult:
    """Z(t) by the hybrid formula at the configured cutoffs.

    The first series terms straddling a follow the same policy as the
    standalone evaluator: closed transition form at the smallest offsets,
    contour quadrature out to the zone edge, the plain series term beyond.
    include_transition=False drops all of that and starts the raw series at
    odd_floor(a) + 2.
    """
    cfg = config if config is not None else cutoffs(t, omega, rounding)
    sc = scales(t)
    if cfg.n_co > sc.n_t:
        raise RangeError("N_CO exceeds N_t")
    if cfg.include_transition:
        first = classify_first_terms(t)
        start = first.bulk_start
        specials = first.specials
    else:
        start = int(odd_floor(sc.a)) + 2
        specials = ()
    if cfg.l_co < start:
        raise DegenerateRangeError("empty new-series range; t too small for these cutoffs")
    lead = rs_main_sum(t, 1, cfg.n_co, workers=workers)
    series = hfactor(t) * ms_sum(t, start, cfg.l_co, workers=workers, precision="fast")
    trans = sum(first_term_value(al, how, t) for al, how in specials)
    corr = rs_correction(t, 2)
    z = lead + series + trans + corr
    budget = practical_bound(t, cfg.omega) + 0.011 * t**-1.75
    above_special = sum(1 for al, _ in specials if al > sc.a)
    return EvalResult(
        z=float(z),
        method="hybrid",
        rs_terms=cfg.n_co,
        new_terms=(cfg.l_co - start) // 2 + 1 + above_special,
        transition_used=bool(specials),
        error_budget=budget,
    )


@dataclass(frozen=True)
class ErrorStats:
    """Aggregate of a Gram-point error sweep."""

    count: int
    mean_abs_error: float
    mean_exponent_s: float
    max_abs_error: float
    max_at_gram: int
    bound: float
    violations: int


@dataclass(frozen=True)
class SweepRecords:
    gram_index: np.ndarray
    t: np.ndarray
    rs_tail: np.ndarray
    new_series_value: np.ndarray
    transition_flag: np.ndarray
    error: np.ndarray
    bound: float


def _sweep_block(ns: np.ndarray, omega: float, rounding: str, include_transition: bool):
    """Per-point tail comparison for a block of Gram indices."""
    t = gram_point(ns)
    th = theta_dd(t)
    a2w = a_dd(t)
    a = xp.to_float(a2w)
    n_t = xp.floor_dd(xp.mul_d(a2w, 0.25)).astype(np.int64)
    pc_co = 1.0 + 1.0 / omega
    n_cont = np.sqrt(t / (TWO_PI * pc_co))
    l_cont = np.sqrt(2.0 * t / math.pi) * (pc_co + 1.0) / math.sqrt(pc_co)
    if rounding == "floor_ceil":
        n_co = np.floor(n_cont).astype(np.int64)
        l_co = odd_floor(l_cont)
    else:
        n_co = np.round(n_cont).astype(np.int64)
        l_co = odd_floor(l_cont) - 2 * (n_co - np.floor(n_cont).astype(np.int64))

    # --- RS tail over (n_co, n_t], ragged rows padded to a fixed width
    n_lo_g = int(n_co.min()) + 1
    n_hi_g = int(n_t.max())
    logs = xp.ext_log(np.arange(n_lo_g, n_hi_g + 1, dtype=float))
    widths = (n_t - n_co).astype(np.int64)
    wmax = int(widths.max())
    j = np.arange(wmax)
    n_mat = (n_co[:, None] + 1 + j[None, :]).astype(np.int64)
    mask = j[None, :] < widths[:, None]
    idx = np.clip(n_mat - n_lo_g, 0, n_hi_g - n_lo_g)
    lg = xp.ExtendedReal(logs.hi[idx], logs.lo[idx])
    t_col = t[:, None]
    p, e = xp._two_prod_raw(t_col, lg.hi)
    prod = xp.add(xp.ExtendedReal(p, e), xp.from_float(t_col * lg.lo))
    th_mat = xp.ExtendedReal(np.broadcast_to(th.hi[:, None], n_mat.shape).copy(),
                             np.broadcast_to(th.lo[:, None], n_mat.shape).copy())
    ph = xp.reduce_mod_2pi(xp.sub(th_mat, prod))
    terms = np.where(mask, 2.0 * np.cos(ph.value) / np.sqrt(n_mat.astype(float)), 0.0)
    rs_tail = terms.sum(axis=1)

    # --- new-series segment; terms straddling a are handled separately
    near = odd_nearest(a2w)
    eps = xp.to_float(xp.sub(a2w, xp.from_float(near.astype(float))))
    zone = np.abs(eps) < t ** (-1.0 / 6.0)
    al_below = odd_floor(a2w)
    al_above = al_below + 2
    t16 = t ** (1.0 / 6.0)
    vr_above = (al_above.astype(float) - a) * t16
    special_above = include_transition & (vr_above < NUMERIC_VARRHO_MAX)
    start = np.where(special_above, al_above + 2, al_above)
    widths_s = ((l_co - start) // 2 + 1).astype(np.int64)
    if np.any(widths_s < 1):
        raise DegenerateRangeError("empty new-series range in sweep block")
    wmax_s = int(widths_s.max())
    js = np.arange(wmax_s)
    al_mat = start[:, None].astype(float) + 2.0 * js[None, :]
    mask_s = js[None, :] < widths_s[:, None]
    a_mat = xp.ExtendedReal(np.broadcast_to(a2w.hi[:, None], al_mat.shape).copy(),
                            np.broadcast_to(a2w.lo[:, None], al_mat.shape).copy())
    rho_dd = xp.div(xp.from_float(al_mat), a_mat)
    b_dd = rho_b_dd(rho_dd)
    s_dd = xp.add(b_dd, rho_dd)
    inner = xp.sub(xp.log_dd(s_dd), xp.div(b_dd, s_dd))
    phs = xp.add(xp.mul_d(inner, t_col), xp.add(xp.from_float(t_col), xp.PI_8_DD))
    phase = xp.reduce_mod_2pi(phs)
    d = xp.to_float(xp.mul(xp.sub(xp.from_float(al_mat), a_mat), xp.add(xp.from_float(al_mat), a_mat)))
    d = np.where(mask_s, d, 1.0)
    terms_s = np.where(mask_s, TWO_SQRT2 * np.cos(phase.value) * d**-0.25, 0.0)
    series = hfactor(t) * terms_s.sum(axis=1)

    # --- straddling terms by quadrature out to the zone edge; the below-a
    # term only where its exponential scale matters
    trans = np.zeros_like(t)
    if include_transition:
        for i in np.nonzero(special_above)[0]:
            trans[i] += euler_term(float(al_above[i]), float(t[i]))
        rho_b = al_below.astype(float) / a
        with np.errstate(invalid="ignore"):
            phi_b = np.arccos(np.clip(2.0 * rho_b * rho_b - 1.0, -1.0, 1.0))
        expo = t * (phi_b - np.sin(phi_b)) / 2.0
        for i in np.nonzero((rho_b > 0.75) & (expo < 8.0))[0]:
            trans[i] += euler_term(float(al_below[i]), float(t[i]))

    new_val = series + trans
    err = rs_tail - new_val
    return t, rs_tail, new_val, zone, err


def error_sweep(start_gram: int, count: int, omega: float = 1.0,
                rounding: str = "floor_ceil", include_transition: bool = True,
                workers: int = 1, collect: bool = False):
    """Tail-vs-series error over `count` Gram points from g_start.

    error_i = (RS tail over (N_CO, N_t]) - (series segment + transition).
    Returns ErrorStats, or (ErrorStats, SweepRecords) when collect=True.
    """
    if count < 1:
        raise DomainError("error_sweep requires count >= 1")
    ns = np.arange(start_gram, start_gram + count, dtype=np.int64)
    blocks = [ns[lo : lo + 2048] for lo in range(0, count, 2048)]

    def run(block):
        return _sweep_block(block, omega, rounding, include_transition)

    if workers <= 1 or len(blocks) == 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    t = np.concatenate([p[0] for p in parts])
    rs_tail = np.concatenate([p[1] for p in parts])
    new_val = np.concatenate([p[2] for p in parts])
    zone = np.concatenate([p[3] for p in parts])
    err = np.concatenate([p[4] for p in parts])
    bound = practical_bound(float(t[0]), omega)
    abs_err = np.abs(err)
    imax = int(np.argmax(abs_err))
    stats = ErrorStats(
        count=count,
        mean_abs_error=float(np.mean(abs_err)),
        mean_exponent_s=float(np.mean(np.log(np.maximum(abs_err, 1e-300)) / np.log(t))),
        max_abs_error=float(abs_err[imax]),
        max_at_gram=int(ns[imax]),
        bound=bound,
        violations=int(np.count_nonzero(abs_err > bound)),
    )
    if not collect:
        return stats
    records = SweepRecords(
        gram_index=ns, t=t, rs_tail=rs_tail, new_series_value=new_val,
        transition_flag=zone, error=err, bound=bound,
    )
    return stats, records
