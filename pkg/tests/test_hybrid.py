import math

import numpy as np
import pytest

from hardyz import hybrid as hy
from hardyz import rs
from hardyz.errors import DegenerateRangeError, DomainError
from hardyz.theta import gram_point, scales


def test_x_of_omega_values():
    assert abs(hy.x_of_omega(1.0) - (2 * math.sqrt(2) - 2)) < 1e-12
    assert abs(100 * (1 - hy.x_of_omega(1.30)) - 14.2) < 0.1
    assert abs(100 * (1 - hy.x_of_omega(1.17)) - 15.3) < 0.1
    assert abs(hy.x_of_omega(1e6) - 1.0) < 1e-5
    with pytest.raises(DomainError):
        hy.x_of_omega(0.9)


def test_saving_curve_shape():
    omegas = np.linspace(1.0, 3.0, 40)
    vals = np.array([100 * (1 - hy.x_of_omega(w)) for w in omegas])
    assert np.all(np.diff(vals) < 0)  # decreasing in Omega
    assert np.all(vals > 0)           # still positive through Omega = 3


def test_practical_bound():
    assert abs(hy.practical_bound(1e6, 1.0) - 1.191e-1) < 5e-5
    assert abs(hy.practical_bound(1e12, 1.0) - 3.766e-3) < 5e-7
    assert hy.practical_bound(1e6, 1.0) == (64 * math.pi / 1e6) ** 0.25
    # decreasing in t, increasing in Omega
    assert hy.practical_bound(1e8, 1.0) < hy.practical_bound(1e6, 1.0)
    assert hy.practical_bound(1e6, 2.0) > hy.practical_bound(1e6, 1.0)


def test_cutoffs():
    cfg = hy.cutoffs(1e6, 1.0, "floor_ceil")
    assert cfg.n_co == 282 and cfg.l_co == 1691
    assert cfg.pc_co == 2.0
    # saddle consistency: n_co ~ a/(4 sqrt(pc_co))
    sc = scales(1e6)
    assert abs(cfg.n_co - round(sc.a / (4 * math.sqrt(cfg.pc_co)))) <= 1
    with pytest.raises(DegenerateRangeError):
        hy.cutoffs(220.0, 1.0)  # L_CO cannot clear the series start


def test_cutoffs_nearest_preserves_count():
    rng = np.random.default_rng(3)
    for t in 10 ** rng.uniform(4, 9, 50):
        f = hy.cutoffs(float(t), 1.0, "floor_ceil")
        n = hy.cutoffs(float(t), 1.0, "nearest")
        start = int(np.floor(scales(float(t)).a))
        start = start if start % 2 == 1 else start - 1
        count_f = f.n_co + (f.l_co - start - 2) // 2
        count_n = n.n_co + (n.l_co - start - 2) // 2
        assert count_f == count_n


def test_saddle_map():
    t = 1e6
    assert abs(hy.saddle_map(1, t) - (t / math.pi + 2.0)) < 1e-9 * t
    # substitution identity alpha(sqrt(t/2pi)) = a (algebra, outside the
    # integer domain gate)
    n_star = math.sqrt(t / (2 * math.pi))
    alpha_star = math.sqrt(t * t / (n_star * n_star * math.pi**2) + 4 * t / math.pi + 4 * n_star * n_star)
    assert abs(alpha_star - math.sqrt(8 * t / math.pi)) < 1e-9
    vals = hy.saddle_map(np.arange(1, scales(t).n_t + 1), t)
    assert np.all(np.diff(vals) < 0)  # monotone decreasing on [1, N_t]
    with pytest.raises(DomainError):
        hy.saddle_map(0, t)


def test_cost_grid_minimizes_at_pc_co():
    t = 1e6
    grid = np.linspace(1.05, 4.0, 60)
    for omega in (1.0, 1.17, 1.3, 2.0):
        cost = hy.total_cost(t, grid, omega)
        k = int(np.argmin(cost))
        step = grid[1] - grid[0]
        assert abs(grid[k] - (1.0 + 1.0 / omega)) <= step + 1e-12


def test_hybrid_z_matches_rs():
    for n in range(1747145, 1747145 + 40 * 211, 211):
        t = float(gram_point(n))
        ev = hy.hybrid_z(t, rounding="nearest")
        zr = rs.rs_z(t).z
        assert abs(ev.z - zr) <= hy.practical_bound(t, 1.0)


def test_hybrid_term_counts():
    cfg = hy.cutoffs(1e6, 1.0, "floor_ceil")
    ev = hy.hybrid_z(1e6, config=cfg)
    total = ev.rs_terms + ev.new_terms
    expect = (2 * math.sqrt(2) - 2) * math.sqrt(1e6 / (2 * math.pi))
    assert abs(total - expect) <= 2.0
    # count identity against the explicit formula
    sc = scales(1e6)
    start = int(np.floor(sc.a))
    start = start if start % 2 == 1 else start - 1
    s_formula = cfg.n_co + (cfg.l_co - start - 2) / 2
    assert abs(total - (s_formula + 1)) <= 1.0


def test_hybrid_degenerate_range():
    cfg = hy.HybridConfig(omega=1.0, pc_co=2.0, n_co=5, l_co=1595,
                          rounding="floor_ceil", include_transition=True)
    with pytest.raises(DegenerateRangeError):
        hy.hybrid_z(1e6, config=cfg)


def test_error_sweep_single_point():
    stats = hy.error_sweep(1747145, 1)
    assert stats.count == 1
    assert stats.mean_abs_error == stats.max_abs_error
    assert stats.max_at_gram == 1747145
    with pytest.raises(DomainError):
        hy.error_sweep(1747145, 0)


def test_error_sweep_statistics():
    stats_f = hy.error_sweep(1747145, 400, rounding="floor_ceil", workers=4)
    stats_n = hy.error_sweep(1747145, 400, rounding="nearest", workers=4)
    assert stats_f.bound == hy.practical_bound(float(gram_point(1747145)), 1.0)
    # nearest never degrades the mean by more than 5% on the same sweep
    assert stats_n.mean_abs_error <= 1.05 * stats_f.mean_abs_error
    assert stats_f.mean_abs_error < 0.08
    assert stats_f.violations == int(stats_f.count - np.count_nonzero(
        np.abs(hy.error_sweep(1747145, 400, rounding="floor_ceil", collect=True)[1].error) <= stats_f.bound))


def test_error_sweep_collect_consistency():
    stats, rec = hy.error_sweep(1747200, 64, collect=True)
    assert np.allclose(rec.error, rec.rs_tail - rec.new_series_value)
    assert rec.gram_index[0] == 1747200 and rec.gram_index.size == 64
    assert stats.max_abs_error == float(np.max(np.abs(rec.error)))
