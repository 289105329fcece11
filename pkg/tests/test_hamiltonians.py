import numpy as np
import pytest

from fmrabi.frames import bessel_j, from_effective, to_effective
from fmrabi.hamiltonians import (HamiltonianError, HamiltonianSpec,
                                 ThreeLevelParams, TimeDependentOperator,
                                 aligned_rotating_picture, anisotropic_rabi,
                                 build, build_effective, effective_2x2,
                                 lab_full, rotating_frame, rwa_two_tone,
                                 static_rabi, three_level_lab,
                                 three_level_rwa, three_level_unmodulated)
from fmrabi.hilbert import (HilbertSpace, annihilation, atom_operator,
                            basis_state, number_operator)
from fmrabi.linalg import eigvals_hermitian

SPACE = HilbertSpace(2, 15)
LAB = from_effective(1.0, 0.3335153, 0.5, 100.0, 0.01)
EFF = to_effective(LAB)


def hermiticity(m):
    return np.max(np.abs(m - m.conj().T))


def test_all_forms_hermitian_at_random_times():
    rng = np.random.default_rng(0)
    space3 = HilbertSpace(3, 7)
    tp = ThreeLevelParams.from_anharmonicity(
        Omega0=LAB.Omega0, Omega_c=LAB.Omega_c, lam=LAB.lam,
        delta_b=30.0, A=LAB.A, omega_f=LAB.omega_f)
    operators = [
        lab_full(LAB, SPACE),
        rotating_frame(LAB, SPACE, 8),
        rwa_two_tone(EFF, SPACE),
        three_level_lab(tp, space3),
        three_level_rwa(tp, space3),
        three_level_unmodulated(tp, space3),
    ]
    for op in operators:
        for t in rng.uniform(0.0, 20.0, 25):
            assert hermiticity(op(t)) <= 1e-12 * max(1.0, np.max(np.abs(op(t))))


def test_static_forms_time_independent():
    op = build(HamiltonianSpec("static_rabi", LAB), SPACE)
    assert op.is_static
    assert np.array_equal(op(0.0), op(17.3))


def test_anisotropic_decoupled_limit_diagonal():
    eff0 = to_effective(from_effective(1.0, 0.4, 0.5, 100.0, 0.0))
    h = anisotropic_rabi(eff0, SPACE)
    assert np.allclose(h, np.diag(np.diag(h)))
    for atom, sign in (("g", -1), ("e", +1)):
        for n in (0, 3, 7):
            k = SPACE.index(atom, n)
            assert h[k, k] == pytest.approx(0.4 * n + sign * 0.5)


def test_rwa_two_tone_matrix_elements_at_t0():
    h0 = rwa_two_tone(EFF, SPACE)(0.0)
    e0 = basis_state(SPACE, ("e", 0))
    g1 = basis_state(SPACE, ("g", 1))
    e1 = basis_state(SPACE, ("e", 1))
    g0 = basis_state(SPACE, ("g", 0))
    assert np.vdot(e0, h0 @ g1) == pytest.approx(EFF.lambda2, abs=1e-15)
    assert np.vdot(e1, h0 @ g0) == pytest.approx(EFF.lambda1, abs=1e-15)


def test_lab_full_with_modulation_off_equals_static():
    p0 = from_effective(1.0, 0.3335153, 0.0, 100.0, 0.01)
    assert np.max(np.abs(lab_full(p0, SPACE)(0.0)
                         - static_rabi(p0, SPACE))) <= 1e-15


def test_rotating_frame_matches_direct_frame_transform():
    """Primary correctness oracle: conjugating the lab Hamiltonian with the
    explicit modulated-frame unitary must reproduce the sideband expansion."""
    h1 = lab_full(LAB, SPACE)
    h2 = rotating_frame(LAB, SPACE, 8)
    n_diag = np.real(np.diag(number_operator(SPACE)))
    sz_diag = np.real(np.diag(atom_operator(SPACE, "sigma_z")))
    rng = np.random.default_rng(1)
    for t in rng.uniform(0.0, 10.0, 20):
        g = (LAB.Omega_c * t * n_diag
             + (LAB.Omega0 * t / 2 + (LAB.x / 2) * np.sin(LAB.omega_f * t))
             * sz_diag)
        u = np.exp(-1j * g)
        conj = (u.conj()[:, None] * h1(t)) * u[None, :]
        gdot = (LAB.Omega_c * n_diag
                + (LAB.Omega0 / 2 + (LAB.A / 2) * np.cos(LAB.omega_f * t))
                * sz_diag)
        direct = conj - np.diag(gdot)
        assert np.max(np.abs(h2(t) - direct)) <= 1e-8


def test_rwa_two_tone_is_restriction_of_sideband_expansion():
    a = annihilation(SPACE)
    sp = atom_operator(SPACE, "sigma_plus")
    restricted = TimeDependentOperator(SPACE.dim)
    restricted.add_oscillating(LAB.lam * bessel_j(-1, LAB.x) * (a.conj().T @ sp),
                               LAB.Delta)
    restricted.add_oscillating(LAB.lam * bessel_j(0, LAB.x) * (a @ sp),
                               LAB.delta)
    full = rwa_two_tone(EFF, SPACE)
    for t in (0.0, 0.31, 4.7, 11.0):
        assert np.max(np.abs(full(t) - restricted(t))) <= 1e-15


def test_effective_three_photon_element():
    h = build_effective(EFF, SPACE)
    e0 = basis_state(SPACE, ("e", 0))
    g3 = basis_state(SPACE, ("g", 3))
    target = -np.sqrt(6.0) * EFF.lambda2 ** 2 * EFF.lambda1 / EFF.delta ** 2
    assert np.vdot(g3, h @ e0) == pytest.approx(target, rel=1e-14)


def test_effective_zero_coupling_is_free_hamiltonian():
    eff0 = to_effective(from_effective(1.0, 0.3335153, 0.5, 100.0, 0.0))
    h = build_effective(eff0, SPACE)
    free = (eff0.omega_c * number_operator(SPACE)
            + 0.5 * eff0.omega0 * atom_operator(SPACE, "sigma_z"))
    assert np.max(np.abs(h - free)) <= 1e-15


def test_effective_diagonals_match_two_by_two():
    h = build_effective(EFF, SPACE)
    m = effective_2x2(EFF)
    e0 = basis_state(SPACE, ("e", 0))
    g3 = basis_state(SPACE, ("g", 3))
    assert np.vdot(e0, h @ e0) == pytest.approx(m[0, 0], rel=1e-14)
    assert np.vdot(g3, h @ g3) == pytest.approx(m[1, 1], rel=1e-14)
    assert np.vdot(g3, h @ e0) == pytest.approx(m[0, 1], rel=1e-14)


def test_two_by_two_decoupled_diagonals():
    eff0 = to_effective(from_effective(1.0, 0.4, 0.5, 100.0, 0.0))
    m = effective_2x2(eff0)
    assert m[0, 0] == pytest.approx(0.5)
    assert m[1, 1] == pytest.approx(3 * 0.4 - 0.5)
    assert m[0, 1] == 0.0


def test_equal_diagonals_root_matches_resonance_formula():
    """Root of the diagonal difference vs the second-order closed form."""
    from fmrabi.analytics import resonance_position
    from fmrabi.spectral import effective_at

    lam, x = 0.01, 0.5

    def diag_diff(wc):
        m = effective_2x2(effective_at(wc, lam, x))
        return float(np.real(m[1, 1] - m[0, 0]))

    lo, hi = 0.333, 0.334
    flo = diag_diff(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if diag_diff(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    # closed form truncates at fourth order in the coupling
    assert root == pytest.approx(resonance_position(lam, x), abs=50 * lam ** 4)


def test_aligned_picture_is_drive_periodic_and_exact():
    hp, g = aligned_rotating_picture(LAB, SPACE, 8)
    assert hp.modulation_period() == pytest.approx(2 * np.pi / LAB.omega_f)
    h2 = rotating_frame(LAB, SPACE, 8)
    rng = np.random.default_rng(4)
    for t in rng.uniform(0.0, 5.0, 10):
        v = np.exp(1j * g * t)
        expected = (v[:, None] * h2(t)) * v.conj()[None, :] - np.diag(g)
        assert np.max(np.abs(hp(t) - expected)) <= 1e-10


def test_three_level_lab_limits():
    space3 = HilbertSpace(3, 7)
    tp = ThreeLevelParams.from_anharmonicity(
        Omega0=15.0, Omega_c=14.3, lam=0.05, delta_b=33.0, A=14.0,
        omega_f=28.0)
    h = three_level_lab(tp, space3)
    e0 = basis_state(space3, ("e", 0))
    f0 = basis_state(space3, ("f", 0))
    assert np.vdot(e0, h(0.0) @ e0) == pytest.approx(tp.Omega0 + tp.A)
    assert np.vdot(f0, h(0.0) @ f0) == pytest.approx(tp.Omega_b + 2 * tp.A)
    quarter = np.pi / (2.0 * tp.omega_f)
    assert np.vdot(e0, h(quarter) @ e0) == pytest.approx(tp.Omega0, abs=1e-10)


def test_three_level_anharmonicity_invariant():
    tp = ThreeLevelParams.from_anharmonicity(Omega0=1.0, Omega_c=0.34,
                                             lam=0.05, delta_b=-0.66)
    assert tp.Omega_b - 2 * tp.Omega0 == pytest.approx(tp.delta_b, abs=1e-12)


def test_rotating_frame_guards():
    with pytest.raises(HamiltonianError):
        rotating_frame(LAB, SPACE, 0)
    space3 = HilbertSpace(3, 5)
    with pytest.raises(HamiltonianError):
        rotating_frame(LAB, space3, 8)


def test_build_dispatch_unknown_form():
    with pytest.raises(HamiltonianError):
        build(HamiltonianSpec("nonsense", LAB), SPACE)


def test_bare_crossing_of_tracked_levels_at_one_third():
    eff0 = to_effective(from_effective(1.0, 1.0 / 3.0, 0.5, 100.0, 0.0))
    ev = eigvals_hermitian(anisotropic_rabi(eff0, SPACE))
    assert ev[4] - ev[3] == pytest.approx(0.0, abs=1e-12)
