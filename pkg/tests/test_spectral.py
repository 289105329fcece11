import numpy as np
import pytest

from fmrabi.analytics import resonance_position
from fmrabi.hilbert import HilbertSpace
from fmrabi.spectral import (SpectralError, crossing_near_resonance,
                             effective_at, gap_function, locate_crossing,
                             loglog_slope, scan_spectrum, splitting_vs_lambda)

SPACE = HilbertSpace(2, 15)


def test_scan_far_from_resonance_has_large_gap():
    scan = scan_spectrum(0.01, 0.5, np.array([0.30, 0.32, 0.36]), space=SPACE)
    gaps = scan.energies[:, 1] - scan.energies[:, 0]
    assert np.all(gaps > 1e-2)


def test_bare_levels_cross_exactly_at_one_third():
    report = locate_crossing(0.0, 0.5, space=SPACE)
    assert report.omega_c_star == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert report.splitting <= 1e-10


def test_reference_point_crossing():
    report = crossing_near_resonance(0.01, 0.5, space=SPACE)
    assert report.omega_c_star == pytest.approx(0.3335153, abs=5e-6)
    assert report.splitting == pytest.approx(2.35e-6, rel=0.02)


def test_crossing_overlaps_nearly_one():
    report = crossing_near_resonance(0.01, 0.5, space=SPACE)
    assert report.F_B >= 0.99
    assert report.F_C >= 0.99


def test_overlaps_decrease_with_coupling():
    values = [crossing_near_resonance(lam, 0.5, space=SPACE)
              for lam in (0.01, 0.05, 0.1)]
    fbs = [r.F_B for r in values]
    fcs = [r.F_C for r in values]
    assert fbs[0] > fbs[1] > fbs[2]
    assert fcs[0] > fcs[1] > fcs[2]


def test_crossing_eigenvectors_orthogonal():
    from fmrabi.hamiltonians import anisotropic_rabi
    from fmrabi.linalg import eig_hermitian
    report = crossing_near_resonance(0.01, 0.5, space=SPACE)
    dec = eig_hermitian(anisotropic_rabi(
        effective_at(report.omega_c_star, 0.01, 0.5), SPACE))
    overlap = np.vdot(dec.vectors[:, 3], dec.vectors[:, 4])
    assert abs(overlap) <= 1e-10


def test_gap_symmetric_around_minimum():
    report = crossing_near_resonance(0.01, 0.5, space=SPACE)
    gap = gap_function(0.01, 0.5, SPACE)
    h = 1e-5
    left = gap(report.omega_c_star - h)
    right = gap(report.omega_c_star + h)
    assert abs(left - right) / report.splitting <= 0.1


def test_no_interior_minimum_rejected():
    with pytest.raises(SpectralError, match="interior"):
        locate_crossing(0.01, 0.5, bracket=(0.30, 0.31), space=SPACE)


def test_sweep_domain_guard():
    with pytest.raises(SpectralError):
        scan_spectrum(0.01, 0.5, np.array([0.5, 1.5]), space=SPACE)


def test_splitting_comparison_below_three_percent():
    comp = splitting_vs_lambda([0.01, 0.02, 0.04], 0.5, space=SPACE)
    assert np.all(comp.percent_difference < 3.0)


def test_cubic_scaling_of_splitting():
    comp = splitting_vs_lambda([0.002, 0.005, 0.01], 0.5, space=SPACE)
    slope = loglog_slope(comp.lam_values, comp.numeric)
    assert slope == pytest.approx(3.0, abs=0.05)


def test_analytic_column_monotone():
    comp = splitting_vs_lambda([0.005, 0.01, 0.02, 0.03], 0.5, space=SPACE)
    assert np.all(np.diff(comp.analytic) > 0)


def test_coupling_range_guard():
    with pytest.raises(SpectralError):
        splitting_vs_lambda([0.2], 0.5, space=SPACE)


def test_numeric_resonance_matches_formula():
    report = crossing_near_resonance(0.01, 0.5, space=SPACE)
    assert report.omega_c_star == pytest.approx(
        resonance_position(0.01, 0.5), rel=1e-5)
