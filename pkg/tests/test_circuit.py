import math

import numpy as np
import pytest

from fmrabi.circuit import (SEC6_CIRCUIT, CircuitError, CircuitParams,
                            derive_energies, map_to_model,
                            quartic_taylor_coefficient, to_ghz, to_mhz)


def test_sec6_fixture_hits_targets():
    m = map_to_model(SEC6_CIRCUIT)
    assert to_ghz(m.Omega_c) == pytest.approx(5.0, rel=1e-6)
    assert to_ghz(m.Omega0) == pytest.approx(5.066, rel=1e-6)
    assert to_mhz(m.lam) == pytest.approx(0.198, rel=1e-6)
    assert to_ghz(m.omega_f) == pytest.approx(9.93, rel=1e-12)
    assert to_ghz(m.A) == pytest.approx(0.5 * 9.93, rel=1e-6)


def test_flux_phase_rate_is_twice_modulation_frequency():
    assert SEC6_CIRCUIT.flux_phase_rate == pytest.approx(
        2.0 * SEC6_CIRCUIT.modulation_frequency)


def test_zero_coupling_capacitor_decouples():
    c = CircuitParams(E_J=SEC6_CIRCUIT.E_J, C_J=SEC6_CIRCUIT.C_J,
                      E_JK=SEC6_CIRCUIT.E_JK, C_JK=SEC6_CIRCUIT.C_JK,
                      N=SEC6_CIRCUIT.N, L_res=SEC6_CIRCUIT.L_res,
                      C_res=SEC6_CIRCUIT.C_res, C_i=0.0)
    d = derive_energies(c)
    m = map_to_model(c)
    assert d.E_C_int == 0.0
    assert m.lam == 0.0


def test_zero_squid_energy_kills_modulation():
    c = CircuitParams(E_J=1e-40, C_J=SEC6_CIRCUIT.C_J,
                      E_JK=SEC6_CIRCUIT.E_JK, C_JK=SEC6_CIRCUIT.C_JK,
                      N=SEC6_CIRCUIT.N, L_res=SEC6_CIRCUIT.L_res,
                      C_res=SEC6_CIRCUIT.C_res, C_i=SEC6_CIRCUIT.C_i)
    m = map_to_model(c)
    assert to_ghz(m.A) <= 1e-15


def test_large_array_suppresses_anharmonicity():
    base = map_to_model(SEC6_CIRCUIT)
    bigger = CircuitParams(E_J=SEC6_CIRCUIT.E_J, C_J=SEC6_CIRCUIT.C_J,
                           E_JK=SEC6_CIRCUIT.E_JK, C_JK=SEC6_CIRCUIT.C_JK,
                           N=4 * SEC6_CIRCUIT.N, L_res=SEC6_CIRCUIT.L_res,
                           C_res=SEC6_CIRCUIT.C_res, C_i=SEC6_CIRCUIT.C_i)
    m = map_to_model(bigger)
    # delta_b = E_C_phi / (hbar N^2): larger array, smaller anharmonicity
    assert m.delta_b < base.delta_b


def test_interaction_energy_symmetric_in_mode_roles():
    d = derive_energies(SEC6_CIRCUIT)
    # swap the roles of the two capacitance combinations: denominator is
    # symmetric, so E_C_int is unchanged
    scale = (SEC6_CIRCUIT.Phi0 / (2 * math.pi)) ** 2
    c_kpo = scale * (2 * SEC6_CIRCUIT.C_J + SEC6_CIRCUIT.C_JK / SEC6_CIRCUIT.N
                     + SEC6_CIRCUIT.C_i)
    c_an = scale * (SEC6_CIRCUIT.C_res + SEC6_CIRCUIT.C_i)
    c_int = scale * SEC6_CIRCUIT.C_i
    hb2 = SEC6_CIRCUIT.hbar ** 2
    swapped = hb2 * c_int / (8.0 * (c_an * c_kpo - c_int ** 2))
    assert d.E_C_int == pytest.approx(swapped, rel=1e-15)


def test_canonical_zero_point_products():
    d = derive_energies(SEC6_CIRCUIT)
    assert d.N0_phi * d.phi_0 == pytest.approx(0.5, rel=1e-12)
    assert d.N0_theta * d.theta_0 == pytest.approx(0.5, rel=1e-12)


def test_kpo_frequency_dimensional_oracle():
    """sqrt(8 E_C E_JK / N)/hbar must equal 1/sqrt(L_eff C_eff) where the
    array gives the inductance and the loaded phi-mode the capacitance."""
    c = SEC6_CIRCUIT
    d = derive_energies(c)
    l_eff = (c.Phi0 / (2 * math.pi)) ** 2 * c.N / c.E_JK
    c_eff = (2 * c.C_J + c.C_JK / c.N + c.C_i) \
        - c.C_i ** 2 / (c.C_res + c.C_i)
    assert d.omega_KPO * math.sqrt(l_eff * c_eff) == pytest.approx(
        1.0, rel=1e-10)


def test_scale_covariance():
    c = SEC6_CIRCUIT
    s = 2.0
    scaled = CircuitParams(E_J=c.E_J, C_J=s * c.C_J, E_JK=c.E_JK,
                           C_JK=s * c.C_JK, N=c.N, L_res=c.L_res,
                           C_res=s * c.C_res, C_i=s * c.C_i,
                           flux_phase_rate=c.flux_phase_rate)
    base = derive_energies(c)
    new = derive_energies(scaled)
    # all capacitances x s: charging energies / s, phi frequency / sqrt(s)
    assert new.E_C_phi == pytest.approx(base.E_C_phi / s, rel=1e-12)
    assert new.omega_KPO == pytest.approx(base.omega_KPO / math.sqrt(s),
                                          rel=1e-12)
    assert new.omega_LC == pytest.approx(base.omega_LC / math.sqrt(s),
                                         rel=1e-12)
    m_base = map_to_model(c)
    m_new = map_to_model(scaled)
    assert m_new.lam == pytest.approx(m_base.lam / math.sqrt(s), rel=1e-12)


def test_quartic_coefficient_oracle():
    c4 = quartic_taylor_coefficient(np.cos)
    assert abs(c4 - 1.0 / 24.0) <= 1e-12


def test_kinetic_form_positive_definite_for_physical_inputs():
    """The determinant C_KPO C_an - C_int^2 reduces to
    (2C_J + C_JK/N)(C_res + C_i) + C_i C_res and so stays positive for any
    positive capacitances; the guard in derive_energies only fires on
    degenerate (underflowed) input."""
    rng = np.random.default_rng(8)
    for _ in range(50):
        c = CircuitParams(
            E_J=10.0 ** rng.uniform(-24, -21),
            C_J=10.0 ** rng.uniform(-16, -12),
            E_JK=10.0 ** rng.uniform(-23, -20),
            C_JK=10.0 ** rng.uniform(-16, -12),
            N=int(rng.integers(1, 30)),
            L_res=10.0 ** rng.uniform(-10, -7),
            C_res=10.0 ** rng.uniform(-15, -12),
            C_i=10.0 ** rng.uniform(-19, -13),
        )
        d = derive_energies(c)
        assert d.C_KPO * d.C_an - d.C_int ** 2 > 0.0
        assert d.E_C_phi > 0.0 and d.E_C_theta > 0.0 and d.E_L > 0.0


def test_parameter_guards():
    with pytest.raises(CircuitError):
        CircuitParams(E_J=-1.0, C_J=1e-15, E_JK=1e-22, C_JK=1e-15, N=1,
                      L_res=1e-9, C_res=1e-15, C_i=0.0)
    with pytest.raises(CircuitError):
        CircuitParams(E_J=1e-23, C_J=1e-15, E_JK=1e-22, C_JK=1e-15, N=0,
                      L_res=1e-9, C_res=1e-15, C_i=0.0)
