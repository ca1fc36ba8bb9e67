"""Per-term cost measurement for the two series and realized CPU savings.

Omega is the average cost of one odd-series term relative to one RS-sum
term; it drives the cutoff optimum pc_CO = 1 + 1/Omega.  The harness times
the production evaluators over equal-length ranges (call overhead then
cancels in the ratio), discards warmup runs, and reports the median over
repetitions with an IQR/median dispersion; noisy measurements are rejected
rather than reported.  Timing never participates in correctness checks --
only term counts and the X(Omega) algebra are asserted exactly.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import UnstableMeasurementError
from .hybrid import cutoffs, hybrid_z, x_of_omega
from .newsum import ms_sum
from .rs import rs_main_sum, rs_z
from .theta import odd_floor, scales

_MIN_REP_SECONDS = 1e-4  # below this the timer floor dominates


@dataclass(frozen=True)
class OmegaMeasurement:
    omega: float
    rs_ns_per_term: float
    new_ns_per_term: float
    reps: int
    dispersion: float  # IQR/median of the per-rep ratios


@dataclass(frozen=True)
class SavingReport:
    omega: float
    predicted_pct: float  # 100 (1 - X(omega))
    realized_pct: float
    rs_seconds: float
    hybrid_seconds: float


def _median(xs):
    return float(np.median(np.asarray(xs)))


def measure_pair(run_a, run_b, terms_per_call: int, calls: int, reps: int):
    """Median per-term times (ns) for two callables, interleaved reps."""
    sink = 0.0
    for _ in range(2):  # warmup, also populates caches
        sink += run_a() + run_b()
    times_a, times_b = [], []
    for _ in range(reps):
        t0 = time.perf_counter()
        for _ in range(calls):
            sink += run_a()
        t1 = time.perf_counter()
        for _ in range(calls):
            sink += run_b()
        t2 = time.perf_counter()
        if (t1 - t0) < _MIN_REP_SECONDS or (t2 - t1) < _MIN_REP_SECONDS:
            raise UnstableMeasurementError(
                "term budget too small: rep duration under the timer floor"
            )
        times_a.append((t1 - t0) / (calls * terms_per_call) * 1e9)
        times_b.append((t2 - t1) / (calls * terms_per_call) * 1e9)
    # keep the sink alive so the work cannot be elided
    if not math.isfinite(sink):
        raise UnstableMeasurementError("timed evaluations produced non-finite values")
    return times_a, times_b


def measure_omega(t: float, term_budget: int = 1_000_000, reps: int = 7) -> OmegaMeasurement:
    """Measured per-term cost ratio Omega = tau_new / tau_RS at height t."""
    if term_budget < 1_000_000:
        raise UnstableMeasurementError(
            "term budget below the timer floor; at least 1e6 terms are needed"
        )
    if reps < 7:
        raise ValueError("reps must be at least 7")
    sc = scales(t)
    cfg = cutoffs(t, 1.0, "floor_ceil")
    start = int(odd_floor(sc.a)) + 2
    new_terms = (cfg.l_co - start) // 2 + 1
    # equal per-call term counts so call overhead cancels in the ratio
    chunk = min(sc.n_t, new_terms)
    rs_hi = chunk
    new_hi = start + 2 * (chunk - 1)
    calls = max(1, int(math.ceil(term_budget / chunk)))

    def run_rs():
        return rs_main_sum(t, 1, rs_hi, precision="fast")

    def run_new():
        return ms_sum(t, start, new_hi, precision="fast")

    times_rs, times_new = measure_pair(run_rs, run_new, chunk, calls, reps)
    ratios = [b / a for a, b in zip(times_rs, times_new)]
    med = _median(ratios)
    q1, q3 = np.percentile(ratios, [25, 75])
    dispersion = float((q3 - q1) / med)
    if dispersion > 0.2:
        raise UnstableMeasurementError(
            f"omega measurement dispersion {dispersion:.3f} > 0.2; rerun advised"
        )
    return OmegaMeasurement(
        omega=med,
        rs_ns_per_term=_median(times_rs),
        new_ns_per_term=_median(times_new),
        reps=reps,
        dispersion=dispersion,
    )


def realized_saving(t: float, measurement: OmegaMeasurement, reps: int = 5) -> SavingReport:
    """End-to-end rs_z vs hybrid_z timing at cutoffs from the measured Omega."""
    omega = max(1.0, measurement.omega)
    cfg = cutoffs(t, omega, "nearest")
    rs_z(t)
    hybrid_z(t, config=cfg)  # warmup both paths
    t_rs, t_hy = [], []
    sink = 0.0
    for _ in range(reps):
        t0 = time.perf_counter()
        sink += rs_z(t).z
        t1 = time.perf_counter()
        sink += hybrid_z(t, config=cfg).z
        t2 = time.perf_counter()
        t_rs.append(t1 - t0)
        t_hy.append(t2 - t1)
    if not math.isfinite(sink):
        raise UnstableMeasurementError("timed evaluations produced non-finite values")
    rs_med, hy_med = _median(t_rs), _median(t_hy)
    return SavingReport(
        omega=omega,
        predicted_pct=100.0 * (1.0 - x_of_omega(omega)),
        realized_pct=100.0 * (1.0 - hy_med / rs_med),
        rs_seconds=rs_med,
        hybrid_seconds=hy_med,
    )
