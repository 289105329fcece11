"""Dressed-basis Lindblad dynamics and the cavity output photon flux.

The jump operators are built once from the eigenstates of the static Rabi
Hamiltonian: X1 collects the (a + a^dag) matrix elements and X2 the sigma_x
matrix elements, both restricted to strictly downward transitions
(E_n > E_m).  This dressed construction keeps the counter-rotating terms in
the dissipators; with the coupling off it reduces to the textbook pair
(a, sigma_-).  The observable is the output flux kappa * Tr[rho X1^dag X1].
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .hamiltonians import TimeDependentOperator
from .hilbert import HilbertSpace, annihilation, atom_operator
from .linalg import eig_hermitian, eigvals_hermitian, require_hermitian

TRACE_DRIFT_LIMIT = 1e-8
HERMITICITY_DRIFT_LIMIT = 1e-10
POSITIVITY_ABORT = -1e-6
_DEGENERACY_REL_TOL = 1e-10


class OpenSystemError(RuntimeError):
    pass


@dataclass(frozen=True)
class DissipationParams:
    """Cavity (kappa) and atomic (gamma) decay rates, same units as H."""

    kappa: float
    gamma: float

    def __post_init__(self):
        if self.kappa < 0.0 or self.gamma < 0.0:
            raise ValueError("decay rates must be >= 0")


def validate_density_matrix(rho: np.ndarray, trace_tol: float = 1e-8,
                            herm_tol: float = HERMITICITY_DRIFT_LIMIT,
                            positivity_tol: float = -1e-8) -> np.ndarray:
    rho = require_hermitian(rho, tol=herm_tol, what="density matrix")
    tr = float(np.real(np.trace(rho)))
    if abs(tr - 1.0) > trace_tol:
        raise OpenSystemError(f"density matrix trace {tr} deviates from 1")
    min_eig = float(eigvals_hermitian(rho)[0])
    if min_eig < positivity_tol:
        raise OpenSystemError(f"density matrix has eigenvalue {min_eig:.3e} < 0")
    return rho


def dressed_jump_operators(h_static: np.ndarray, space: HilbertSpace
                           ) -> tuple[np.ndarray, np.ndarray]:
    """Downward-transition jump operators in the dressed basis of h_static.

    Returns (X1, X2) built from (a + a^dag) and sigma_x respectively.
    Transition pairs closer in energy than 1e-10 * max(1, |H|) are excluded
    from the sums and reported with a warning: a dressed-basis rate is not
    well defined across a degeneracy.
    """
    h_static = require_hermitian(h_static, what="static Hamiltonian")
    dec = eig_hermitian(h_static)
    scale = max(1.0, float(np.max(np.abs(dec.values))))
    a = annihilation(space)
    quad = a + a.conj().T
    sx = atom_operator(space, "sigma_x")
    gaps = dec.values[np.newaxis, :] - dec.values[:, np.newaxis]  # E_n - E_m
    keep = gaps > _DEGENERACY_REL_TOL * scale
    near = (gaps > 0.0) & ~keep
    if np.any(near):
        pairs = np.argwhere(near)
        warnings.warn(
            f"excluded {len(pairs)} near-degenerate transition pair(s) from the "
            f"jump operators (|E_n - E_m| < {_DEGENERACY_REL_TOL:g} * scale)",
            stacklevel=2)
    v = dec.vectors
    x1 = v @ ((v.conj().T @ quad @ v) * keep) @ v.conj().T
    x2 = v @ ((v.conj().T @ sx @ v) * keep) @ v.conj().T
    return x1, x2


def lindblad_rhs(rho: np.ndarray, h_matrix: np.ndarray, x1: np.ndarray,
                 x2: np.ndarray, d: DissipationParams) -> np.ndarray:
    """d(rho)/dt = -i[H, rho] + kappa D[X1] rho + gamma D[X2] rho."""
    if rho.shape != h_matrix.shape:
        raise OpenSystemError("shape mismatch between rho and H")
    hr = h_matrix @ rho
    out = -1j * (hr - hr.conj().T)
    for rate, x in ((d.kappa, x1), (d.gamma, x2)):
        if rate == 0.0:
            continue
        xdx = x.conj().T @ x
        anti = xdx @ rho
        out += rate * (x @ rho @ x.conj().T - 0.5 * (anti + anti.conj().T))
    return out


@dataclass
class FluxTrajectory:
    """Sampled output flux with the density-matrix health columns."""

    times: np.ndarray
    flux: np.ndarray
    trace: np.ndarray
    min_eigenvalue: np.ndarray
    rho_final: np.ndarray
    period: float | None = None

    def late_window_mean(self, fraction: float = 0.2) -> float:
        k = max(1, int(len(self.flux) * fraction))
        return float(np.mean(self.flux[-k:]))

    def period_means(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-drive-period averages of the flux (micromotion removed)."""
        if self.period is None:
            raise OpenSystemError("trajectory has no drive period")
        edges = np.arange(0.0, self.times[-1] + 0.5 * self.period, self.period)
        centers, means = [], []
        for lo, hi in zip(edges[:-1], edges[1:]):
            mask = (self.times >= lo) & (self.times < hi)
            if np.any(mask):
                centers.append(0.5 * (lo + hi))
                means.append(float(np.mean(self.flux[mask])))
        return np.array(centers), np.array(means)


def _make_rho_rhs(h, x1, x2, xdx1, xdx2, d):
    """Fused Lindblad right-hand side.

    Uses (H rho)^dag = rho H and (M rho)^dag = rho M for Hermitian H, M and
    Hermitian rho, halving the matmul count; rho stays Hermitian to
    round-off because every RK4 stage is built from these combinations.
    """
    x1d = x1.conj().T
    x2d = x2.conj().T
    m_half = 0.5 * (d.kappa * xdx1 + d.gamma * xdx2)
    with_kappa = d.kappa != 0.0
    with_gamma = d.gamma != 0.0

    def rhs(t, r):
        # -i[H, r] - {m_half, r} from one product: hr = (H - i m_half) r.
        hr = (h(t) - 1j * m_half) @ r
        out = -1j * (hr - hr.conj().T)
        if with_kappa:
            out += d.kappa * (x1 @ r @ x1d)
        if with_gamma:
            out += d.gamma * (x2 @ r @ x2d)
        return out

    return rhs


def _rk4_rho_step(rhs, t, rho, dt):
    k1 = rhs(t, rho)
    k2 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, rho + 0.5 * dt * k2)
    k4 = rhs(t + dt, rho + dt * k3)
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate_master(h: TimeDependentOperator, rho0: np.ndarray,
                     x1: np.ndarray, x2: np.ndarray, d: DissipationParams,
                     t_final: float, dt: float | None = None,
                     samples: int = 800) -> FluxTrajectory:
    """RK4 master-equation propagation with flux and health sampling.

    The step resolves the fastest Hamiltonian term frequency, the spectral
    scale of H, and the dissipation rates.  Trace and Hermiticity are
    asserted at every sample; a positivity violation beyond -1e-6 aborts.
    """
    rho0 = validate_density_matrix(rho0)
    if h.dim < 8:
        raise OpenSystemError(
            f"dynamics requires dimension >= 8, got {h.dim}")
    if dt is not None and dt <= 0.0:
        raise OpenSystemError("dt must be positive")
    if t_final <= 0.0:
        raise OpenSystemError("t_final must be positive")
    xdx1 = x1.conj().T @ x1
    xdx2 = x2.conj().T @ x2
    if dt is None:
        # Resolve the drive with 40 samples per cycle; separately respect the
        # RK4 stability bound for the Liouvillian spectral radius (commutator
        # spans 2|H|, dissipators add the rate scales).
        drive = (2.0 * math.pi / h.omega_max) / 40.0 if h.omega_max > 0.0 else np.inf
        radius = (2.0 * h.norm_scale()
                  + (d.kappa * np.max(np.abs(xdx1)).real if d.kappa else 0.0)
                  + (d.gamma * np.max(np.abs(xdx2)).real if d.gamma else 0.0))
        stability = 2.2 / radius if radius > 0.0 else np.inf
        dt = min(drive, stability)
        if not np.isfinite(dt):
            dt = t_final / 1000.0
    n_steps = max(1, int(math.ceil(t_final / dt)))
    dt = t_final / n_steps
    stride = max(1, n_steps // samples)
    rho = rho0.astype(np.complex128).copy()
    times, flux, trace, mineig = [], [], [], []

    def record(t, r):
        herm_defect = float(np.max(np.abs(r - r.conj().T)))
        if herm_defect > HERMITICITY_DRIFT_LIMIT:
            raise OpenSystemError(
                f"Hermiticity drift {herm_defect:.3e} at t={t:.6g}")
        tr = float(np.real(np.trace(r)))
        if abs(tr - 1.0) > TRACE_DRIFT_LIMIT:
            raise OpenSystemError(
                f"trace drift {abs(tr - 1.0):.3e} at t={t:.6g}; "
                f"step dt={dt:.3e} too coarse")
        sym = 0.5 * (r + r.conj().T)
        emin = float(eigvals_hermitian(sym)[0])
        if emin < POSITIVITY_ABORT:
            raise OpenSystemError(
                f"positivity violation {emin:.3e} at t={t:.6g}; "
                f"step dt={dt:.3e} too coarse")
        times.append(t)
        flux.append(d.kappa * float(np.real(np.trace(sym @ xdx1))))
        trace.append(tr)
        mineig.append(emin)

    rhs = _make_rho_rhs(h, x1, x2, xdx1, xdx2, d)
    record(0.0, rho)
    t = 0.0
    for step in range(1, n_steps + 1):
        rho = _rk4_rho_step(rhs, t, rho, dt)
        t = step * dt
        if step % stride == 0 or step == n_steps:
            record(t, rho)
    return FluxTrajectory(
        times=np.array(times),
        flux=np.array(flux),
        trace=np.array(trace),
        min_eigenvalue=np.array(mineig),
        rho_final=rho,
        period=h.modulation_period(),
    )


@dataclass(frozen=True)
class SteadyFluxReport:
    flux: float
    relative_drift: float
    converged: bool
    window_fraction: float


def steady_flux(traj: FluxTrajectory, window_fraction: float = 0.2,
                drift_limit: float = 0.05) -> SteadyFluxReport:
    """Long-time flux average over the final window.

    Drift is the relative change between the means of the final window and
    the window preceding it, which measures the secular trend while
    averaging out the drive-synchronized micromotion; relative drift above
    drift_limit marks the report as non-converged.
    """
    k = max(2, int(len(traj.flux) * window_fraction))
    window = traj.flux[-k:]
    previous = traj.flux[-2 * k:-k] if len(traj.flux) >= 2 * k else window
    mean = float(np.mean(window))
    mean_prev = float(np.mean(previous))
    scale = max(abs(mean), abs(mean_prev))
    drift = abs(mean - mean_prev) / scale if scale > 0.0 else 0.0
    converged = drift < drift_limit
    if not converged:
        warnings.warn(
            f"steady flux not converged: relative drift {drift:.3f} between "
            f"the final two {window_fraction:.0%} windows", stacklevel=2)
    return SteadyFluxReport(flux=mean, relative_drift=drift,
                            converged=converged,
                            window_fraction=window_fraction)
