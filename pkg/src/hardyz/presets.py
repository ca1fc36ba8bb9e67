"""Reference evaluations of the standalone odd-integer series at eleven
documented heights, with the exact per-row handling of the terms that
straddle a (closed transition form where a sits on an odd integer,
contour quadrature where it sits just off one) and the row's own series
cutoff.

Columns reported per row: the explicit main sum (in plain series units),
the Bernoulli sum, the half term f(pc(K))/2, the tail integral I, the
resulting Z estimate H * 2*sqrt(2) * (main + tail), and the full
Riemann-Siegel value for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import xprec as xp
from .newsum import TWO_SQRT2, classify_first_terms, em_tail, first_term_value, ms_sum
from .rs import rs_z
from .theta import a_dd, odd_floor
from .transition import hfactor


@dataclass(frozen=True)
class PresetRow:
    key: str
    t: float
    n_alpha_policy: str  # "0.35t", "t/2"
    # explicit straddling-term treatment: tuple of (alpha, method); None
    # means use the default classification
    first_terms: tuple | None = None
    note: str = ""


PRESETS = {
    "1000": PresetRow("1000", 1000.0, "0.35t",
                      first_terms=((49, "numeric"), (51, "numeric")),
                      note="terms either side of a evaluated by quadrature"),
    "1100": PresetRow("1100", 1100.0, "0.35t",
                      first_terms=((51, "numeric"), (53, "series")),
                      note="first term above a left on the closed series form"),
    "1100b": PresetRow("1100b", 1100.0, "0.35t",
                       first_terms=((51, "numeric"), (53, "numeric")),
                       note="first term above a by quadrature"),
    "1103.091720": PresetRow("1103.091720", 1103.091720, "0.35t",
                             first_terms=((53, "a65"),),
                             note="a sits on an odd integer; closed transition form"),
    "17143.803905": PresetRow("17143.803905", 17143.803905, "t/2",
                              first_terms=((207, "numeric"), (209, "numeric")),
                              note="tiny extremum; extended Bernoulli cutoff"),
    "100000": PresetRow("100000", 100000.0, "0.35t"),
    "100148.083310": PresetRow("100148.083310", 100148.083310, "0.35t",
                               first_terms=((505, "a65"),),
                               note="a sits on an odd integer"),
    "2000000": PresetRow("2000000", 2000000.0, "0.35t"),
    "1e7": PresetRow("1e7", 1.0e7, "0.35t"),
    # the published three decimals truncate the close-zeros extremum
    # height; the refined value below sits on the negative extremum
    "388858886.002": PresetRow("388858886.002", 388858886.0023395, "t/2",
                               note="tiny extremum; ~1e8 series terms"),
    "1e9": PresetRow("1e9", 1.0e9, "0.35t"),
}


@dataclass(frozen=True)
class PresetResult:
    key: str
    t: float
    alpha_lo: int
    n_alpha: int
    main_sum: float
    bern_sum: float
    half_term: float
    integral_i: float
    z_estimate: float
    z_actual: float


def n_alpha_of(row: PresetRow) -> int:
    if row.n_alpha_policy == "0.35t":
        return int(odd_floor(0.35 * row.t)) + 2
    if row.n_alpha_policy == "t/2":
        return int(odd_floor(row.t / 2.0)) + 2
    raise ValueError(f"unknown cutoff policy {row.n_alpha_policy!r}")


def run_preset(key: str, workers: int = 1) -> PresetResult:
    if key not in PRESETS:
        valid = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {key!r}; valid presets: {valid}")
    row = PRESETS[key]
    t = row.t
    n_alpha = n_alpha_of(row)
    h = hfactor(t)

    if row.first_terms is None:
        first = classify_first_terms(t)
        specials = [(al, how) for al, how in first.specials]
        bulk_start = first.bulk_start
    else:
        specials = [(al, how) for al, how in row.first_terms if how != "series"]
        alphas = [al for al, _ in row.first_terms]
        bulk_start = max(alphas) + 2
        # a "series" marker keeps that term on the closed form inside the bulk
        for al, how in row.first_terms:
            if how == "series":
                bulk_start = al
    label_lo = min([al for al, _ in (row.first_terms or ())] + [bulk_start])

    bulk = ms_sum(t, bulk_start, n_alpha, workers=workers,
                  precision="extended" if (n_alpha - bulk_start) // 2 + 1 <= 2_000_000 else "fast")
    special_z = sum(first_term_value(al, how, t) for al, how in specials)
    main_units = bulk / TWO_SQRT2 + special_z / (TWO_SQRT2 * h)
    tail = em_tail(t, n_alpha + 2, l=60)
    z_est = h * TWO_SQRT2 * (main_units + tail.tail)
    z_act = rs_z(t, workers=workers).z
    return PresetResult(
        key=key,
        t=t,
        alpha_lo=int(label_lo),
        n_alpha=int(n_alpha),
        main_sum=float(main_units),
        bern_sum=tail.bern_sum,
        half_term=tail.half_term,
        integral_i=tail.integral_i,
        z_estimate=float(z_est),
        z_actual=float(z_act),
    )
