import numpy as np
import pytest

from fmrabi.hilbert import (HilbertError, HilbertSpace, annihilation,
                            atom_operator, atom_projector, basis_state,
                            number_operator, superposition)


@pytest.fixture
def space():
    return HilbertSpace(2, 15)


@pytest.fixture
def space3():
    return HilbertSpace(3, 5)


def test_dimensions(space, space3):
    assert space.dim == 32
    assert space3.dim == 18


def test_index_label_roundtrip(space3):
    for k in range(space3.dim):
        atom, n = space3.label(k)
        assert space3.index(atom, n) == k


def test_label_validation(space):
    with pytest.raises(HilbertError):
        space.index("f", 0)
    with pytest.raises(HilbertError):
        space.index("g", 16)
    with pytest.raises(HilbertError):
        space.label(32)


def test_annihilation_elements(space):
    a = annihilation(space)
    g0 = basis_state(space, ("g", 0))
    g1 = basis_state(space, ("g", 1))
    assert np.vdot(g0, a @ g1) == pytest.approx(1.0)
    g2 = basis_state(space, ("g", 2))
    g3 = basis_state(space, ("g", 3))
    assert np.vdot(g2, a @ g3) == pytest.approx(np.sqrt(3.0))


def test_commutator_below_cutoff(space):
    a = annihilation(space)
    comm = a @ a.conj().T - a.conj().T @ a
    # identity except the last Fock level of each atom branch
    for atom in ("g", "e"):
        for n in range(space.fock_cutoff):
            k = space.index(atom, n)
            assert comm[k, k] == pytest.approx(1.0)
        top = space.index(atom, space.fock_cutoff)
        assert comm[top, top] == pytest.approx(-space.fock_cutoff)


def test_pauli_identities(space):
    sz = atom_operator(space, "sigma_z")
    sx = atom_operator(space, "sigma_x")
    sp = atom_operator(space, "sigma_plus")
    sm = atom_operator(space, "sigma_minus")
    g0 = basis_state(space, ("g", 0))
    assert np.allclose(sz @ g0, -g0)
    assert np.allclose(sp @ sm, atom_projector(space, "e", "e"))
    assert np.allclose(sx @ sx, np.eye(space.dim))
    assert np.allclose(sp, sm.conj().T)
    assert np.allclose(sz, sz.conj().T)
    assert np.allclose(sx, sx.conj().T)


def test_pauli_requires_two_levels(space3):
    with pytest.raises(HilbertError):
        atom_operator(space3, "sigma_z")


def test_f_projector_requires_three_levels(space, space3):
    with pytest.raises(HilbertError):
        atom_projector(space, "f", "e")
    proj = atom_projector(space3, "f", "e")
    e0 = basis_state(space3, ("e", 0))
    f0 = basis_state(space3, ("f", 0))
    assert np.allclose(proj @ e0, f0)


def test_basis_states(space):
    g0 = basis_state(space, ("g", 0))
    assert g0[0] == 1.0 and np.linalg.norm(g0) == pytest.approx(1.0)
    e0 = basis_state(space, ("e", 0))
    g3 = basis_state(space, ("g", 3))
    assert np.vdot(e0, g3) == 0.0
    for label in (("g", 5), ("e", 15)):
        assert np.linalg.norm(basis_state(space, label)) == pytest.approx(1.0)


def test_superposition_normalized(space):
    b = superposition(space, (1.0, ("e", 0)), (1.0, ("g", 3)))
    assert np.linalg.norm(b) == pytest.approx(1.0)
    assert np.vdot(basis_state(space, ("e", 0)), b) == pytest.approx(1 / np.sqrt(2))


def test_number_operator(space):
    n_op = number_operator(space)
    e7 = basis_state(space, ("e", 7))
    assert np.vdot(e7, n_op @ e7) == pytest.approx(7.0)
