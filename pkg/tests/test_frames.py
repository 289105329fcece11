import math

import numpy as np
import pytest

from fmrabi.frames import (FrameError, LabFrameParams, bessel_j,
                           from_effective, rwa_validity, to_effective)


def bessel_series(n, x, terms=60):
    """Independent power-series oracle for small orders."""
    total = 0.0
    for k in range(terms):
        total += ((-1) ** k / (math.factorial(k) * math.factorial(k + n))
                  * (x / 2.0) ** (2 * k + n))
    return total


def test_bessel_at_zero():
    assert bessel_j(0, 0.0) == 1.0
    for n in (1, 2, 7):
        assert bessel_j(n, 0.0) == 0.0


def test_bessel_parity_identity():
    for x in (0.1, 0.5, 1.7, 4.2):
        assert bessel_j(-1, x) == -bessel_j(1, x)
        assert bessel_j(-2, x) == bessel_j(2, x)
        assert bessel_j(-3, x) == -bessel_j(3, x)


def test_bessel_against_series_oracle():
    for n in (0, 1, 2):
        for x in (0.05, 0.5, 1.0, 2.0, 5.0, 9.5):
            assert abs(bessel_j(n, x) - bessel_series(n, x)) <= 1e-12


def test_bessel_j0_at_half():
    assert bessel_j(0, 0.5) == pytest.approx(bessel_series(0, 0.5), abs=1e-12)


def test_bessel_completeness():
    for x in (0.0, 0.3, 0.5, 1.0, 1.5, 2.0):
        total = sum(bessel_j(n, x) ** 2 for n in range(-30, 31))
        assert abs(total - 1.0) <= 1e-12


def test_bessel_range_guard():
    with pytest.raises(FrameError):
        bessel_j(0, 11.0)


def test_to_effective_reference_point():
    p = LabFrameParams(Omega0=100.0, Omega_c=99.3335153, lam=0.01,
                       A=99.0, omega_f=198.0)
    eff = to_effective(p)
    assert eff.delta == pytest.approx(0.6664847, abs=1e-12)
    assert eff.Delta == pytest.approx(1.3335153, abs=1e-12)
    assert eff.omega0 == pytest.approx(1.0, abs=1e-12)
    assert eff.omega_c == pytest.approx(0.3335153, abs=1e-12)
    assert eff.lambda2 == pytest.approx(0.01 * bessel_j(0, 0.5))
    assert eff.lambda1 == pytest.approx(-0.01 * bessel_j(1, 0.5))


def test_x_ratio():
    p = LabFrameParams(Omega0=100.0, Omega_c=99.0, lam=0.01,
                       A=0.5 * 198.0, omega_f=198.0)
    assert p.x == pytest.approx(0.5, abs=1e-15)


def test_modulation_off_needs_flag_not_zero_frequency():
    with pytest.raises(FrameError):
        LabFrameParams(Omega0=100.0, Omega_c=99.0, lam=0.01, A=0.0,
                       omega_f=0.0)


def test_from_effective_inverts_definitions():
    p = from_effective(1.0, 0.3335153, 0.5, 100.0, 0.01)
    assert p.omega_f == pytest.approx(198.0, abs=1e-12)
    assert p.Omega_c == pytest.approx(99.3335153, abs=1e-12)
    assert p.A == pytest.approx(99.0, abs=1e-12)


def test_round_trip_exact():
    p = from_effective(1.0, 0.3335153, 0.5, 100.0, 0.01)
    eff = to_effective(p)
    p2 = from_effective(eff.omega0, eff.omega_c, eff.x, p.Omega0, p.lam)
    for name in ("Omega0", "Omega_c", "lam", "A", "omega_f"):
        assert getattr(p2, name) == pytest.approx(getattr(p, name),
                                                  abs=1e-12 * 200)


def test_one_third_condition_gives_delta_ratio():
    p = from_effective(1.0, 1.0 / 3.0, 0.5, 100.0, 0.01)
    eff = to_effective(p)
    assert eff.Delta == pytest.approx(2.0 * eff.delta, rel=1e-12)


def test_from_effective_guards():
    with pytest.raises(FrameError):
        from_effective(0.3, 1.0, 0.5, 100.0, 0.01)
    with pytest.raises(FrameError):
        from_effective(1.0, 0.3, 0.5, 0.9, 0.01)


def test_rwa_validity_reference_point():
    p = from_effective(1.0, 0.3335153, 0.5, 100.0, 0.01)
    rep = rwa_validity(p)
    assert rep.passed
    assert rep.ratio_delta > 100
    assert rep.ratio_Delta > 100
    assert rep.ratio_coupling > 100


def test_rwa_validity_fails_for_slow_drive():
    # omega_f = 3*delta: far below the x20 threshold
    p = LabFrameParams(Omega0=10.0, Omega_c=9.0, lam=0.01, A=1.5, omega_f=3.0)
    assert not rwa_validity(p).passed


def test_rwa_validity_decoupled_limit():
    p = LabFrameParams(Omega0=100.0, Omega_c=99.0, lam=0.0, A=99.0,
                       omega_f=198.0)
    rep = rwa_validity(p)
    assert rep.ratio_coupling == np.inf
