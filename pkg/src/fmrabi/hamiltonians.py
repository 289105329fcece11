"""Hamiltonian builders for the modulated Rabi model and its reductions.

Every time-dependent Hamiltonian is represented as a term list

    H(t) = sum_k M_k exp(i w_k t)

with constant complex matrices M_k.  Hermiticity is enforced structurally:
non-static terms are always added together with their conjugate partner
(M_k^dagger, -w_k).  The representation supports direct evaluation, term-wise
analysis (the propagators read the largest term frequency off the list), and
exact interaction-picture shifts generated by diagonal operators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frames import EffectiveParams, LabFrameParams, bessel_j
from .hilbert import (HilbertSpace, annihilation, atom_operator, atom_projector,
                      number_operator)
from .linalg import require_hermitian

DEFAULT_BESSEL_TRUNCATION = 8

_UNIFORMITY_TOL = 1e-12


class HamiltonianError(ValueError):
    pass


class TimeDependentOperator:
    """Hermitian-valued H(t) stored as (matrix, frequency) terms."""

    def __init__(self, dim: int):
        self.dim = dim
        self.terms: list[tuple[np.ndarray, float]] = []
        self._stack = None
        self._freqs = None

    def add_static(self, m: np.ndarray) -> "TimeDependentOperator":
        m = require_hermitian(m, what="static term")
        self._append(m, 0.0)
        return self

    def add_oscillating(self, m: np.ndarray, freq: float) -> "TimeDependentOperator":
        """Add m*exp(i*freq*t) together with its conjugate partner."""
        m = np.asarray(m, dtype=np.complex128)
        if freq == 0.0:
            # A zero-frequency pair collapses to the Hermitian combination.
            self._append(m + m.conj().T, 0.0)
            return self
        self._append(m, freq)
        self._append(m.conj().T, -freq)
        return self

    def _append(self, m: np.ndarray, freq: float) -> None:
        if m.shape != (self.dim, self.dim):
            raise HamiltonianError(
                f"term shape {m.shape} does not match dimension {self.dim}")
        self.terms.append((m, float(freq)))
        self._stack = None
        self._freqs = None

    def _ensure_cache(self):
        if self._stack is None:
            self._stack = np.stack([m for m, _ in self.terms]).reshape(
                len(self.terms), self.dim * self.dim)
            self._freqs = np.array([w for _, w in self.terms])
        return self._stack, self._freqs

    def __call__(self, t: float) -> np.ndarray:
        stack, freqs = self._ensure_cache()
        phases = np.exp(1j * freqs * t)
        return (phases @ stack).reshape(self.dim, self.dim)

    @property
    def frequencies(self) -> np.ndarray:
        _, freqs = self._ensure_cache()
        return freqs

    @property
    def omega_max(self) -> float:
        """Largest term frequency; 0 for a static operator."""
        if not self.terms:
            return 0.0
        return float(np.max(np.abs(self.frequencies)))

    @property
    def is_static(self) -> bool:
        return self.omega_max == 0.0

    def static_matrix(self) -> np.ndarray:
        if not self.is_static:
            raise HamiltonianError("operator is time dependent")
        return self(0.0)

    def norm_scale(self) -> float:
        """Row-sum bound on max|eigenvalue| of H(t), for step-size choice."""
        total = np.zeros((self.dim, self.dim))
        for m, _ in self.terms:
            total += np.abs(m)
        return float(np.max(total.sum(axis=1)))

    def modulation_period(self, rel_tol: float = 1e-9) -> float | None:
        """Period 2*pi/base if all frequencies are integer multiples of the
        smallest nonzero one; None otherwise (or when static)."""
        freqs = np.abs(self.frequencies)
        nonzero = np.sort(np.unique(freqs[freqs > 0.0]))
        if len(nonzero) == 0:
            return None
        base = nonzero[0]
        ratios = nonzero / base
        if np.max(np.abs(ratios - np.round(ratios))) > rel_tol:
            return None
        return 2.0 * np.pi / base

    def shifted_by_diagonal_generator(self, g: np.ndarray) -> "TimeDependentOperator":
        """Exact picture change psi' = exp(i*diag(g)*t) psi.

        Returns H'(t) = V H V^dagger - G for V = exp(i G t), G = diag(g).
        Requires every term to be ladder-homogeneous with respect to g (all
        nonzero entries share the same g_row - g_col), which holds for the
        single-ladder operators built in this module.
        """
        g = np.asarray(g, dtype=float)
        if g.shape != (self.dim,):
            raise HamiltonianError("generator diagonal has wrong length")
        out = TimeDependentOperator(self.dim)
        for m, w in self.terms:
            rows, cols = np.nonzero(np.abs(m) > 0.0)
            if len(rows) == 0:
                continue
            shifts = g[rows] - g[cols]
            if np.max(np.abs(shifts - shifts[0])) > _UNIFORMITY_TOL * max(
                    1.0, np.max(np.abs(g))):
                raise HamiltonianError(
                    "term is not ladder-homogeneous under the requested generator")
            out._append(m, w + shifts[0])
        out._append(np.diag(-g).astype(np.complex128), 0.0)
        return out


@dataclass(frozen=True)
class ThreeLevelParams:
    """Three-level atom (g, e, f) coupled to the mode, optional modulation.

    delta_b = Omega_b - 2*Omega0 is the anharmonicity of the second
    transition; delta_prime = Omega0 - Omega_c is the detuning used by the
    unmodulated form (where Omega_c plays the role of the near-one-third
    cavity frequency).
    """

    Omega0: float
    Omega_b: float
    Omega_c: float
    lam: float
    A: float
    omega_f: float

    def __post_init__(self):
        if self.lam < 0.0:
            raise HamiltonianError("coupling lam must be >= 0")
        if self.A != 0.0 and self.omega_f <= 0.0:
            raise HamiltonianError("modulated parameters need omega_f > 0")

    @property
    def delta_b(self) -> float:
        return self.Omega_b - 2.0 * self.Omega0

    @property
    def delta_prime(self) -> float:
        return self.Omega0 - self.Omega_c

    @property
    def x(self) -> float:
        return self.A / self.omega_f if self.omega_f > 0.0 else 0.0

    @classmethod
    def from_anharmonicity(cls, Omega0: float, Omega_c: float, lam: float,
                           delta_b: float, A: float = 0.0,
                           omega_f: float = 0.0) -> "ThreeLevelParams":
        return cls(Omega0=Omega0, Omega_b=2.0 * Omega0 + delta_b,
                   Omega_c=Omega_c, lam=lam, A=A, omega_f=omega_f)


def _require_levels(space: HilbertSpace, levels: int, form: str):
    if space.atom_levels != levels:
        raise HamiltonianError(
            f"{form} needs a {levels}-level atom, space has {space.atom_levels}")


def static_rabi(p: LabFrameParams, space: HilbertSpace) -> np.ndarray:
    """Unmodulated Rabi Hamiltonian Omega_c a^dag a + Omega0/2 sigma_z
    + lam (a^dag + a) sigma_x."""
    _require_levels(space, 2, "static_rabi")
    a = annihilation(space)
    h = (p.Omega_c * number_operator(space)
         + 0.5 * p.Omega0 * atom_operator(space, "sigma_z")
         + p.lam * (a.conj().T + a) @ atom_operator(space, "sigma_x"))
    return h


def lab_full(p: LabFrameParams, space: HilbertSpace) -> TimeDependentOperator:
    """Lab-frame Hamiltonian: static Rabi part plus the sigma_z modulation
    (A/2) cos(omega_f t)."""
    _require_levels(space, 2, "lab_full")
    op = TimeDependentOperator(space.dim)
    op.add_static(static_rabi(p, space))
    # m e^{iwt} + m^dag e^{-iwt} with Hermitian m = (A/4) sigma_z gives
    # (A/2) cos(w t) sigma_z.
    op.add_oscillating(0.25 * p.A * atom_operator(space, "sigma_z"), p.omega_f)
    return op


def rotating_frame(p: LabFrameParams, space: HilbertSpace,
                   bessel_truncation: int = DEFAULT_BESSEL_TRUNCATION
                   ) -> TimeDependentOperator:
    """Modulated interaction picture with Bessel sidebands |n| <= K.

    Counter-rotating ladder a^dag sigma_+ appears at frequencies
    Delta + (n+1) omega_f with weight lam*J_n(x); the co-rotating ladder
    a sigma_+ at delta + m omega_f with weight lam*J_m(x).
    """
    _require_levels(space, 2, "rotating_frame")
    k = bessel_truncation
    if k < 1:
        raise HamiltonianError("bessel_truncation must be >= 1")
    a = annihilation(space)
    sp = atom_operator(space, "sigma_plus")
    cr = a.conj().T @ sp  # a^dag sigma_+
    co = a @ sp           # a sigma_+
    x = p.x
    op = TimeDependentOperator(space.dim)
    for n in range(-k, k + 1):
        jn = p.lam * bessel_j(n, x)
        op.add_oscillating(jn * cr, p.Delta + (n + 1) * p.omega_f)
        op.add_oscillating(jn * co, p.delta + n * p.omega_f)
    return op


def rwa_two_tone(eff: EffectiveParams, space: HilbertSpace) -> TimeDependentOperator:
    """Leading two-tone interaction: lambda_1 a^dag sigma_+ e^{i Delta t}
    + lambda_2 a sigma_+ e^{i delta t} + h.c."""
    _require_levels(space, 2, "rwa_two_tone")
    a = annihilation(space)
    sp = atom_operator(space, "sigma_plus")
    op = TimeDependentOperator(space.dim)
    op.add_oscillating(eff.lambda1 * (a.conj().T @ sp), eff.Delta)
    op.add_oscillating(eff.lambda2 * (a @ sp), eff.delta)
    return op


def anisotropic_rabi(eff: EffectiveParams, space: HilbertSpace) -> np.ndarray:
    """Static anisotropic Rabi Hamiltonian with independent co-/counter-
    rotating couplings lambda_2 / lambda_1."""
    _require_levels(space, 2, "anisotropic_rabi")
    a = annihilation(space)
    sp = atom_operator(space, "sigma_plus")
    coupling = eff.lambda1 * (a.conj().T @ sp) + eff.lambda2 * (a @ sp)
    return (eff.omega_c * number_operator(space)
            + 0.5 * eff.omega0 * atom_operator(space, "sigma_z")
            + coupling + coupling.conj().T)


def build_effective(eff: EffectiveParams, space: HilbertSpace,
                    stark_warn_ratio: float = 0.1) -> np.ndarray:
    """Static effective Hamiltonian through third order in the couplings.

    Free part plus the photon-number-dependent Stark shifts
    (lambda_2^2/delta)(a^dag a sigma_z + sigma_+ sigma_-)
    + (lambda_1^2/Delta)(a^dag a sigma_z - sigma_- sigma_+)
    and the three-photon exchange
    -(lambda_2^2 lambda_1/delta^2)[a^3 sigma_+ + (a^dag)^3 sigma_-].
    """
    _require_levels(space, 2, "effective Hamiltonian")
    if eff.delta <= 0.0:
        raise HamiltonianError("effective Hamiltonian needs delta > 0")
    if abs(eff.lambda2) / eff.delta > stark_warn_ratio:
        import warnings
        warnings.warn(
            f"perturbative couplings not small: |lambda_2|/delta = "
            f"{abs(eff.lambda2) / eff.delta:.3f}", stacklevel=2)
    a = annihilation(space)
    ad = a.conj().T
    n_op = number_operator(space)
    sz = atom_operator(space, "sigma_z")
    sp = atom_operator(space, "sigma_plus")
    sm = atom_operator(space, "sigma_minus")
    h = (eff.omega_c * n_op + 0.5 * eff.omega0 * sz
         + (eff.lambda2 ** 2 / eff.delta) * (n_op @ sz + sp @ sm)
         + (eff.lambda1 ** 2 / eff.Delta) * (n_op @ sz - sm @ sp))
    a3 = np.linalg.matrix_power(a, 3)
    g3 = eff.lambda2 ** 2 * eff.lambda1 / eff.delta ** 2
    h -= g3 * (a3 @ sp + a3.conj().T @ sm)
    return h


def effective_2x2(eff: EffectiveParams) -> np.ndarray:
    """Effective Hamiltonian restricted to the {|e,0>, |g,3>} pair.

    Diagonals omega0/2 + lambda_2^2/delta and
    3*omega_c - omega0/2 - 3*lambda_2^2/delta - 4*lambda_1^2/Delta;
    off-diagonal -sqrt(6)*lambda_2^2*lambda_1/delta^2.  Equating the
    diagonals reproduces the shifted one-third resonance condition.
    """
    if eff.delta <= 0.0:
        raise HamiltonianError("effective Hamiltonian needs delta > 0")
    stark2 = eff.lambda2 ** 2 / eff.delta
    stark1 = eff.lambda1 ** 2 / eff.Delta
    coupling = -np.sqrt(6.0) * eff.lambda2 ** 2 * eff.lambda1 / eff.delta ** 2
    return np.array([
        [0.5 * eff.omega0 + stark2, coupling],
        [coupling, 3.0 * eff.omega_c - 0.5 * eff.omega0 - 3.0 * stark2 - 4.0 * stark1],
    ], dtype=np.complex128)


def three_level_lab(tp: ThreeLevelParams, space: HilbertSpace) -> TimeDependentOperator:
    """Lab-frame three-level Hamiltonian with the e and f levels modulated
    at one and two quanta of the drive respectively."""
    _require_levels(space, 3, "three_level_lab")
    a = annihilation(space)
    pe = atom_projector(space, "e", "e")
    pf = atom_projector(space, "f", "f")
    ladder = atom_projector(space, "e", "g") + atom_projector(space, "f", "e")
    coupling = (a.conj().T + a) @ (ladder + ladder.conj().T)
    op = TimeDependentOperator(space.dim)
    op.add_static(tp.Omega0 * pe + tp.Omega_b * pf
                  + tp.Omega_c * number_operator(space)
                  + tp.lam * coupling)
    if tp.A != 0.0:
        # Hermitian pair sums to A cos(w t) (|e><e| + 2 |f><f|).
        op.add_oscillating(0.5 * tp.A * (pe + 2.0 * pf), tp.omega_f)
    return op


def three_level_rwa(tp: ThreeLevelParams, space: HilbertSpace) -> TimeDependentOperator:
    """Leading two-tone reduction of the modulated three-level model.

    Identical in form to the two-level rwa_two_tone; the f level drops out
    entirely once its sidebands are far detuned.
    """
    _require_levels(space, 3, "three_level_rwa")
    a = annihilation(space)
    eg = atom_projector(space, "e", "g")
    x = tp.x
    delta = tp.Omega0 - tp.Omega_c
    big_delta = tp.Omega0 + tp.Omega_c - tp.omega_f
    op = TimeDependentOperator(space.dim)
    op.add_oscillating(tp.lam * bessel_j(-1, x) * (a.conj().T @ eg), big_delta)
    op.add_oscillating(tp.lam * bessel_j(0, x) * (a @ eg), delta)
    return op


def three_level_unmodulated(tp: ThreeLevelParams, space: HilbertSpace
                            ) -> TimeDependentOperator:
    """Rotating-frame unmodulated three-level Rabi model.

    All four ladder processes stay with their bare detunings; with
    delta_b comparable to delta_prime none of the f-level terms can be
    dropped, which is the failure mode this form exists to exhibit.
    """
    _require_levels(space, 3, "three_level_unmodulated")
    a = annihilation(space)
    ad = a.conj().T
    eg = atom_projector(space, "e", "g")
    fe = atom_projector(space, "f", "e")
    dp = tp.delta_prime
    big_delta = tp.Omega0 + tp.Omega_c
    op = TimeDependentOperator(space.dim)
    op.add_oscillating(tp.lam * (ad @ eg), big_delta)
    op.add_oscillating(tp.lam * (a @ eg), dp)
    op.add_oscillating(tp.lam * (ad @ fe), big_delta + tp.delta_b)
    op.add_oscillating(tp.lam * (a @ fe), dp + tp.delta_b)
    return op


@dataclass(frozen=True)
class HamiltonianSpec:
    """Named-form dispatcher mirroring the package's model catalogue."""

    form: str
    params: object
    bessel_truncation: int = DEFAULT_BESSEL_TRUNCATION


_STATIC_FORMS = {
    "static_rabi": static_rabi,
    "anisotropic_rabi": anisotropic_rabi,
    "effective_3rd_order": build_effective,
}

_TIME_DEPENDENT_FORMS = {
    "lab_full": lab_full,
    "rwa_two_tone": rwa_two_tone,
    "three_level_lab": three_level_lab,
    "three_level_rwa": three_level_rwa,
    "three_level_unmodulated": three_level_unmodulated,
}


def build(spec: HamiltonianSpec, space: HilbertSpace) -> TimeDependentOperator:
    """Build any named form as a TimeDependentOperator over space."""
    if spec.form == "rotating_frame":
        return rotating_frame(spec.params, space, spec.bessel_truncation)
    if spec.form == "effective_2x2":
        raise HamiltonianError("effective_2x2 lives on its own 2x2 space; "
                               "call effective_2x2(params) directly")
    if spec.form in _STATIC_FORMS:
        op = TimeDependentOperator(space.dim)
        op.add_static(_STATIC_FORMS[spec.form](spec.params, space))
        return op
    if spec.form in _TIME_DEPENDENT_FORMS:
        return _TIME_DEPENDENT_FORMS[spec.form](spec.params, space)
    raise HamiltonianError(f"unknown Hamiltonian form {spec.form!r}")


def aligned_rotating_picture(p: LabFrameParams, space: HilbertSpace,
                             bessel_truncation: int = DEFAULT_BESSEL_TRUNCATION
                             ) -> tuple[TimeDependentOperator, np.ndarray]:
    """Drive-periodic picture of the sideband Hamiltonian.

    Shifting rotating_frame() by the diagonal generator
    g = -(omega_c_eff n + omega0_eff sigma_z / 2) turns the leading two-tone
    pair into the static anisotropic Rabi model while every residual sideband
    oscillates at an exact integer multiple of omega_f.  The result is
    strictly periodic with period 2*pi/omega_f, which the propagators exploit
    via a one-period propagator.  Returns (H', g); basis-state probabilities
    are identical in both pictures because exp(i*diag(g)*t) is diagonal.
    """
    from .frames import to_effective
    eff = to_effective(p)
    n_diag = np.real(np.diag(number_operator(space)))
    sz_diag = np.real(np.diag(atom_operator(space, "sigma_z")))
    g = -(eff.omega_c * n_diag + 0.5 * eff.omega0 * sz_diag)
    shifted = rotating_frame(p, space, bessel_truncation).shifted_by_diagonal_generator(g)
    return shifted, g
