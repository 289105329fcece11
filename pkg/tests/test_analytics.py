import numpy as np
import pytest

from fmrabi.analytics import (AnalyticsError, analytic_report,
                              rabi_frequency_eff, resonance_position)
from fmrabi.frames import bessel_j
from fmrabi.spectral import effective_at


def test_exchange_rate_reference_point():
    # splitting 2 Omega_eff at lam = 0.01, x = 0.5 is about 2.35e-6
    wc = resonance_position(0.01, 0.5)
    omega = rabi_frequency_eff(effective_at(wc, 0.01, 0.5))
    assert 2.0 * omega == pytest.approx(2.35e-6, rel=0.01)


def test_cubic_homogeneity():
    wc = 1.0 / 3.0
    base = rabi_frequency_eff(effective_at(wc, 0.01, 0.5))
    doubled = rabi_frequency_eff(effective_at(wc, 0.02, 0.5))
    assert doubled / base == pytest.approx(8.0, rel=1e-12)


def test_zero_at_first_bessel_j1_zero():
    # J_1 vanishes near x = 3.8317; the exchange rate must vanish with it
    x_zero = 3.8317059702075125
    omega = rabi_frequency_eff(effective_at(1.0 / 3.0, 0.01, x_zero))
    assert abs(omega) <= 1e-12


def test_resonance_position_values():
    j0 = bessel_j(0, 0.5)
    j1 = bessel_j(-1, 0.5)
    expected = 1.0 / 3.0 + 2.0 * (j0 ** 2 + 0.5 * j1 ** 2) * 1e-4
    assert resonance_position(0.01, 0.5) == pytest.approx(expected, abs=1e-15)
    assert resonance_position(0.01, 0.5) == pytest.approx(0.3335153, abs=5e-7)


def test_resonance_position_zero_coupling():
    assert resonance_position(0.0, 0.5) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_resonance_shift_quadratic_in_coupling():
    shifts = [resonance_position(lam, 0.5) - 1.0 / 3.0
              for lam in (0.01, 0.02, 0.04)]
    assert shifts[1] / shifts[0] == pytest.approx(4.0, rel=1e-12)
    assert shifts[2] / shifts[1] == pytest.approx(4.0, rel=1e-12)


def test_range_guards():
    with pytest.raises(AnalyticsError):
        resonance_position(0.2, 0.5)
    with pytest.raises(AnalyticsError):
        rabi_frequency_eff(effective_at(1.2, 0.01, 0.5))


def test_exchange_rate_matches_effective_hamiltonian_element():
    from fmrabi.hamiltonians import build_effective
    from fmrabi.hilbert import HilbertSpace, basis_state
    space = HilbertSpace(2, 15)
    eff = effective_at(resonance_position(0.01, 0.5), 0.01, 0.5)
    h = build_effective(eff, space)
    e0 = basis_state(space, ("e", 0))
    g3 = basis_state(space, ("g", 3))
    element = np.vdot(g3, h @ e0)
    assert abs(abs(element) - rabi_frequency_eff(eff)) <= 1e-14


def test_analytic_report_fields():
    rep = analytic_report(0.01, 0.5)
    assert rep.splitting == pytest.approx(2.0 * rep.omega_eff, rel=1e-15)
    assert rep.omega_c_prime_ratio > 1.0 / 3.0
