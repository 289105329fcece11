"""Truncated atom (x) Fock composite spaces and their elementary operators.

Tensor ordering is fixed everywhere in the package: the atom index is the
slow index and the photon number the fast one, i.e. basis index
``atom * (n_max + 1) + n``.  Atom levels are ordered g < e < f.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOM_LEVELS = ("g", "e", "f")

#: Minimum composite dimension accepted by the propagators.
MIN_DYNAMICS_DIM = 8


class HilbertError(ValueError):
    """Raised for invalid space construction or label lookups."""


@dataclass(frozen=True)
class HilbertSpace:
    """Two- or three-level atom tensored with a Fock mode truncated at n_max."""

    atom_levels: int
    fock_cutoff: int

    def __post_init__(self):
        if self.atom_levels not in (2, 3):
            raise HilbertError(f"atom_levels must be 2 or 3, got {self.atom_levels}")
        if self.fock_cutoff < 1:
            raise HilbertError(f"fock_cutoff must be >= 1, got {self.fock_cutoff}")

    @property
    def n_photon_states(self) -> int:
        return self.fock_cutoff + 1

    @property
    def dim(self) -> int:
        return self.atom_levels * self.n_photon_states

    def index(self, atom: str, photons: int) -> int:
        """Basis index of |atom, photons>."""
        if atom not in ATOM_LEVELS[: self.atom_levels]:
            raise HilbertError(
                f"atom level {atom!r} not available in a {self.atom_levels}-level space")
        if not 0 <= photons <= self.fock_cutoff:
            raise HilbertError(
                f"photon number {photons} outside 0..{self.fock_cutoff}")
        return ATOM_LEVELS.index(atom) * self.n_photon_states + photons

    def label(self, index: int) -> tuple[str, int]:
        """Inverse of index(); returns (atom, photons)."""
        if not 0 <= index < self.dim:
            raise HilbertError(f"basis index {index} outside 0..{self.dim - 1}")
        atom, n = divmod(index, self.n_photon_states)
        return ATOM_LEVELS[atom], n

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=np.complex128)


def annihilation(space: HilbertSpace) -> np.ndarray:
    """Mode annihilation operator a (x) 1_atom; a|n> = sqrt(n)|n-1>.

    The top Fock row is truncated, so [a, a^dagger] = 1 holds exactly on
    photon numbers below the cutoff only.
    """
    n = space.n_photon_states
    a_mode = np.zeros((n, n), dtype=np.complex128)
    for k in range(1, n):
        a_mode[k - 1, k] = np.sqrt(k)
    return np.kron(np.eye(space.atom_levels), a_mode)


def number_operator(space: HilbertSpace) -> np.ndarray:
    """a^dagger a on the composite space."""
    a = annihilation(space)
    return a.conj().T @ a


def atom_projector(space: HilbertSpace, bra: str, ket: str) -> np.ndarray:
    """|bra><ket| on the atom factor, identity on the mode."""
    for level in (bra, ket):
        if level not in ATOM_LEVELS[: space.atom_levels]:
            raise HilbertError(
                f"projector level {level!r} needs a {ATOM_LEVELS.index(level) + 1}-level"
                f" atom, space has {space.atom_levels}")
    op = np.zeros((space.atom_levels, space.atom_levels), dtype=np.complex128)
    op[ATOM_LEVELS.index(bra), ATOM_LEVELS.index(ket)] = 1.0
    return np.kron(op, np.eye(space.n_photon_states))


def atom_operator(space: HilbertSpace, kind: str) -> np.ndarray:
    """Pauli-type atomic operator (x) mode identity.

    kind is one of sigma_z, sigma_x, sigma_plus, sigma_minus; all four act
    on the g/e doublet and require a two-level space.  Projectors between
    arbitrary level pairs are built with atom_projector.
    """
    if space.atom_levels != 2:
        raise HilbertError(f"{kind} requires a 2-level atom, space has "
                           f"{space.atom_levels} levels")
    if kind == "sigma_z":
        return atom_projector(space, "e", "e") - atom_projector(space, "g", "g")
    if kind == "sigma_x":
        return atom_projector(space, "e", "g") + atom_projector(space, "g", "e")
    if kind == "sigma_plus":
        return atom_projector(space, "e", "g")
    if kind == "sigma_minus":
        return atom_projector(space, "g", "e")
    raise HilbertError(f"unknown atomic operator kind {kind!r}")


def basis_state(space: HilbertSpace, label: tuple[str, int]) -> np.ndarray:
    """Unit basis vector |atom, photons>."""
    atom, photons = label
    psi = np.zeros(space.dim, dtype=np.complex128)
    psi[space.index(atom, photons)] = 1.0
    return psi


def superposition(space: HilbertSpace, *parts: tuple[complex, tuple[str, int]]) -> np.ndarray:
    """Normalized sum of weighted basis states, e.g. (|e,0> + |g,3>)/sqrt(2)."""
    psi = np.zeros(space.dim, dtype=np.complex128)
    for amplitude, label in parts:
        psi += amplitude * basis_state(space, label)
    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise HilbertError("superposition of weight zero")
    return psi / norm
