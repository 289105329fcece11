"""State-vector propagation under the built Hamiltonians.

Three complementary drivers:

* propagate()          fixed-step RK4 (default) or step-doubling adaptive
                       RK4, for any term-list Hamiltonian.
* propagate_static()   exact evolution of a time-independent Hamiltonian
                       through its eigendecomposition, vectorized over the
                       requested sample times.
* propagate_periodic() stroboscopic evolution for drive-periodic
                       Hamiltonians: one high-resolution RK4 pass builds the
                       one-period propagator, whose repeated application
                       covers arbitrarily long horizons at one matrix-vector
                       product per period.

The default RK4 step resolves the fastest term frequency with 40 samples per
cycle and additionally respects the spectral scale of the matrix itself, so
the same rule covers both rapidly oscillating coefficients and stiff static
parts.  Norm drift is tracked on every run; more than 1e-4 aborts with a
step-size diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hamiltonians import TimeDependentOperator
from .hilbert import MIN_DYNAMICS_DIM, HilbertSpace, basis_state
from .linalg import eig_hermitian

SAMPLES_PER_CYCLE = 40
NORM_DRIFT_LIMIT = 1e-6
NORM_ABORT_LIMIT = 1e-4


class PropagationError(RuntimeError):
    pass


@dataclass(frozen=True)
class PropagationConfig:
    """Integrator selection and step control.

    dt = None lets the fixed-step integrator pick
    (2*pi/omega_max)/SAMPLES_PER_CYCLE from the Hamiltonian's term list;
    tolerance drives the adaptive integrator's local error control.
    """

    integrator: str = "rk4_fixed"
    dt: float | None = None
    tolerance: float = 1e-10
    t_final: float = 1.0
    sample_stride: int = 1

    def __post_init__(self):
        if self.integrator not in ("rk4_fixed", "rk_adaptive"):
            raise ValueError(f"unknown integrator {self.integrator!r}")
        if self.dt is not None and self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if not 1e-14 < self.tolerance < 1e-6:
            raise ValueError("tolerance must lie in (1e-14, 1e-6)")
        if self.t_final <= 0.0:
            raise ValueError("t_final must be positive")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")


@dataclass
class TrajectoryRecord:
    """Sampled times, named channel probabilities, and the state norm."""

    times: np.ndarray
    probabilities: dict[str, np.ndarray]
    norm: np.ndarray
    final_state: np.ndarray | None = None

    def max_probability(self, channel: str) -> float:
        return float(np.max(self.probabilities[channel]))

    def channel_names(self) -> list[str]:
        return list(self.probabilities)


def resolve_channels(space: HilbertSpace, channels) -> list[tuple[str, object]]:
    """Normalize channel requests to (name, projector-spec) pairs.

    A channel is a basis label tuple, the string "f_total" (total
    second-excited-level population), or (name, vector) for an arbitrary
    reference state.
    """
    resolved = []
    for ch in channels:
        if isinstance(ch, tuple) and len(ch) == 2 and isinstance(ch[0], str) \
                and isinstance(ch[1], (int, np.integer)):
            atom, n = ch
            name = f"P({atom},{n})"
            resolved.append((name, basis_state(space, ch)))
        elif ch == "f_total":
            idx = [space.index("f", n) for n in range(space.n_photon_states)]
            resolved.append(("P_f_total", idx))
        elif isinstance(ch, tuple) and len(ch) == 2 and isinstance(ch[1], np.ndarray):
            resolved.append((ch[0], ch[1]))
        else:
            raise ValueError(f"unrecognized channel spec {ch!r}")
    return resolved


def _channel_values(psi: np.ndarray, resolved) -> dict[str, float]:
    out = {}
    for name, spec in resolved:
        if isinstance(spec, list):
            out[name] = float(np.sum(np.abs(psi[spec]) ** 2))
        else:
            out[name] = float(abs(np.vdot(spec, psi)) ** 2)
    return out


def default_timestep(h: TimeDependentOperator) -> float:
    """Step resolving both term oscillations and the matrix's own scale."""
    scale = max(h.omega_max, h.norm_scale())
    if scale <= 0.0:
        return 1.0
    return (2.0 * math.pi / scale) / SAMPLES_PER_CYCLE


def _rhs(h: TimeDependentOperator, t: float, psi: np.ndarray) -> np.ndarray:
    return -1j * (h(t) @ psi)


def _rk4_step(h, t, psi, dt):
    k1 = _rhs(h, t, psi)
    k2 = _rhs(h, t + 0.5 * dt, psi + 0.5 * dt * k1)
    k3 = _rhs(h, t + 0.5 * dt, psi + 0.5 * dt * k2)
    k4 = _rhs(h, t + dt, psi + dt * k3)
    return psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _check_norm(norm: float, t: float, dt: float):
    drift = abs(1.0 - norm)
    if drift > NORM_ABORT_LIMIT:
        raise PropagationError(
            f"norm drift {drift:.3e} at t={t:.6g} exceeds {NORM_ABORT_LIMIT}; "
            f"step dt={dt:.3e} is too coarse for this Hamiltonian")


def propagate(h: TimeDependentOperator, psi0: np.ndarray,
              cfg: PropagationConfig, channels, space: HilbertSpace
              ) -> TrajectoryRecord:
    """Integrate i d|psi>/dt = H(t)|psi> and record channel probabilities."""
    if space.dim < MIN_DYNAMICS_DIM:
        raise PropagationError(
            f"dynamics requires dimension >= {MIN_DYNAMICS_DIM}, got {space.dim}")
    psi0 = np.asarray(psi0, dtype=np.complex128)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-10:
        raise PropagationError("initial state must be normalized")
    if psi0.shape != (h.dim,):
        raise PropagationError("state dimension does not match Hamiltonian")
    resolved = resolve_channels(space, channels)
    if cfg.integrator == "rk_adaptive":
        return _propagate_adaptive(h, psi0, cfg, resolved)
    dt = cfg.dt if cfg.dt is not None else default_timestep(h)
    n_steps = max(1, int(math.ceil(cfg.t_final / dt)))
    dt = cfg.t_final / n_steps
    times = [0.0]
    rows = [_channel_values(psi0, resolved)]
    norms = [1.0]
    psi = psi0.copy()
    t = 0.0
    for step in range(1, n_steps + 1):
        psi = _rk4_step(h, t, psi, dt)
        t = step * dt
        if step % cfg.sample_stride == 0 or step == n_steps:
            norm = float(np.linalg.norm(psi))
            _check_norm(norm, t, dt)
            times.append(t)
            rows.append(_channel_values(psi, resolved))
            norms.append(norm)
    return _assemble(times, rows, norms, resolved, psi)


def _propagate_adaptive(h, psi0, cfg, resolved) -> TrajectoryRecord:
    """Step-doubling RK4 with local error control (order-5 extrapolation)."""
    tol = cfg.tolerance
    dt = cfg.dt if cfg.dt is not None else default_timestep(h)
    t = 0.0
    psi = psi0.copy()
    times = [0.0]
    rows = [_channel_values(psi0, resolved)]
    norms = [1.0]
    accepted = 0
    while t < cfg.t_final:
        dt = min(dt, cfg.t_final - t)
        full = _rk4_step(h, t, psi, dt)
        half = _rk4_step(h, t, psi, 0.5 * dt)
        half = _rk4_step(h, t + 0.5 * dt, half, 0.5 * dt)
        err = float(np.linalg.norm(full - half)) / 15.0
        if err <= tol or dt <= 1e-14:
            psi = half + (half - full) / 15.0
            t += dt
            accepted += 1
            if accepted % cfg.sample_stride == 0 or t >= cfg.t_final:
                norm = float(np.linalg.norm(psi))
                _check_norm(norm, t, dt)
                times.append(t)
                rows.append(_channel_values(psi, resolved))
                norms.append(norm)
        factor = 0.9 * (tol / err) ** 0.2 if err > 0.0 else 5.0
        dt *= min(5.0, max(0.2, factor))
    return _assemble(times, rows, norms, resolved, psi)


def _assemble(times, rows, norms, resolved, final_state) -> TrajectoryRecord:
    probabilities = {name: np.array([r[name] for r in rows])
                     for name, _ in resolved}
    return TrajectoryRecord(
        times=np.array(times),
        probabilities=probabilities,
        norm=np.array(norms),
        final_state=final_state,
    )


def propagate_static(h_const: np.ndarray, psi0: np.ndarray, times: np.ndarray,
                     channels, space: HilbertSpace) -> TrajectoryRecord:
    """Exact evolution under a constant Hamiltonian via eigendecomposition.

    Cost is one diagonalization plus O(dim) work per sample, so very long
    horizons are free; used for every static-model reproduction.
    """
    if space.dim < MIN_DYNAMICS_DIM:
        raise PropagationError(
            f"dynamics requires dimension >= {MIN_DYNAMICS_DIM}, got {space.dim}")
    times = np.asarray(times, dtype=float)
    dec = eig_hermitian(h_const)
    coeff = dec.vectors.conj().T @ np.asarray(psi0, dtype=np.complex128)
    resolved = resolve_channels(space, channels)
    # amplitudes[k, j] = <basis_k | psi(t_j)>
    phases = np.exp(-1j * np.outer(dec.values, times))
    amplitudes = dec.vectors @ (phases * coeff[:, None])
    probabilities = {}
    for name, spec in resolved:
        if isinstance(spec, list):
            probabilities[name] = np.sum(np.abs(amplitudes[spec, :]) ** 2, axis=0)
        else:
            probabilities[name] = np.abs(spec.conj() @ amplitudes) ** 2
    norms = np.linalg.norm(amplitudes, axis=0)
    return TrajectoryRecord(
        times=times,
        probabilities=probabilities,
        norm=norms,
        final_state=amplitudes[:, -1] if len(times) else None,
    )


def one_period_propagator(h: TimeDependentOperator, substeps: int | None = None,
                          refine_tol: float = 1e-12,
                          confirm: bool = True) -> tuple[np.ndarray, float]:
    """RK4-integrated propagator over one modulation period.

    Requires a drive-periodic term list (all frequencies integer multiples
    of a base).  With confirm=True the substep count is doubled until the
    propagator changes by less than refine_tol; confirm=False trusts the
    a-priori step estimate (with a safety factor) and is meant for repeated
    builds inside a resonance search, where an eigenphase bias well below
    the gap is sufficient.
    """
    period = h.modulation_period()
    if period is None:
        raise PropagationError("Hamiltonian is not drive-periodic")
    if substeps is None:
        # Two requirements: resolve the fastest coefficient oscillation, and
        # keep the accumulated RK4 phase error of the stiffest matrix mode
        # below refine_tol over the period (error ~ n (|H| T / n)^5 / 120).
        n_drive = SAMPLES_PER_CYCLE * period * h.omega_max / (2.0 * math.pi)
        stiff = h.norm_scale() * period
        n_stiff = (stiff ** 5 / (120.0 * refine_tol)) ** 0.25 if stiff > 0 else 0.0
        substeps = max(256, int(n_drive), int(n_stiff))
        if not confirm:
            substeps *= 2
        substeps = 2 ** int(math.ceil(math.log2(substeps)))

    def build(n_sub: int) -> np.ndarray:
        dt = period / n_sub
        u = np.eye(h.dim, dtype=np.complex128)
        t = 0.0
        for k in range(n_sub):
            u = _rk4_step(h, t, u, dt)
            t = (k + 1) * dt
        return u

    u = build(substeps)
    if not confirm:
        return u, period
    while True:
        u2 = build(substeps * 2)
        if np.max(np.abs(u2 - u)) < refine_tol or substeps >= 2 ** 20:
            return u2, period
        substeps *= 2
        u = u2


def floquet_pair_gap(u: np.ndarray, period: float, state_a: np.ndarray,
                     state_b: np.ndarray) -> float:
    """Quasi-energy splitting of the dressed pair hosting two basis states.

    The one-period propagator u is normal, so the Hermitian combination
    (u + u^dag)/2 + eps (u - u^dag)/(2i) shares its eigenvectors; the two
    eigenvectors with the largest weight on span{state_a, state_b} span the
    resonant pair exactly, and the 2x2 restriction of u to that invariant
    subspace yields the pair's eigenphases in closed form.
    """
    herm = 0.5 * (u + u.conj().T) + (0.05 / 2j) * (u - u.conj().T)
    dec = eig_hermitian(herm, tol=1e-8)
    weights = (np.abs(state_a.conj() @ dec.vectors) ** 2
               + np.abs(state_b.conj() @ dec.vectors) ** 2)
    pair = np.argsort(weights)[-2:]
    w = dec.vectors[:, pair]
    block = w.conj().T @ u @ w
    tr = block[0, 0] + block[1, 1]
    disc = np.sqrt(tr * tr - 4.0 * (block[0, 0] * block[1, 1]
                                    - block[0, 1] * block[1, 0]))
    mu_plus = 0.5 * (tr + disc)
    mu_minus = 0.5 * (tr - disc)
    dphi = np.angle(mu_plus / mu_minus)
    dphi = abs((dphi + math.pi) % (2.0 * math.pi) - math.pi)
    return dphi / period


def resolve_periodic_resonance(build_hamiltonian, bracket: tuple[float, float],
                               state_a: np.ndarray, state_b: np.ndarray,
                               rel_tol: float = 1e-6,
                               propagator_tol: float = 1e-8) -> float:
    """Tune a swept parameter to the avoided crossing of Floquet phases.

    build_hamiltonian(value) must return a drive-periodic
    TimeDependentOperator; the returned value minimizes the quasi-energy
    gap of the pair hosting state_a/state_b, i.e. the resonance point of
    the full periodically driven model rather than of its static reduction.
    rel_tol needs to deliver a residual detuning small against the gap
    itself; the scan propagators are built without the doubling
    confirmation, which an eigenphase bias below the gap does not need.
    """
    golden = (math.sqrt(5.0) - 1.0) / 2.0

    def gap(value: float) -> float:
        h = build_hamiltonian(value)
        u, period = one_period_propagator(h, refine_tol=propagator_tol,
                                          confirm=False)
        return floquet_pair_gap(u, period, state_a, state_b)

    a, b = bracket
    c = b - golden * (b - a)
    d = a + golden * (b - a)
    fc, fd = gap(c), gap(d)
    while (b - a) > rel_tol * max(abs(a), abs(b)):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - golden * (b - a)
            fc = gap(c)
        else:
            a, c, fc = c, d, fd
            d = a + golden * (b - a)
            fd = gap(d)
    return 0.5 * (a + b)


def propagate_periodic(h: TimeDependentOperator, psi0: np.ndarray,
                       n_periods: int, channels, space: HilbertSpace,
                       sample_every: int = 1,
                       propagator: tuple[np.ndarray, float] | None = None
                       ) -> TrajectoryRecord:
    """Stroboscopic propagation by repeated one-period propagator products.

    Samples are taken every `sample_every` periods; between samples the
    state advances by a pre-squared block propagator so round-off growth
    stays at one matrix-vector product per block.
    """
    if space.dim < MIN_DYNAMICS_DIM:
        raise PropagationError(
            f"dynamics requires dimension >= {MIN_DYNAMICS_DIM}, got {space.dim}")
    u, period = propagator if propagator is not None else one_period_propagator(h)
    block = np.linalg.matrix_power(u, sample_every)
    resolved = resolve_channels(space, channels)
    psi = np.asarray(psi0, dtype=np.complex128).copy()
    n_samples = n_periods // sample_every
    times = np.empty(n_samples + 1)
    rows = []
    norms = np.empty(n_samples + 1)
    times[0] = 0.0
    rows.append(_channel_values(psi, resolved))
    norms[0] = float(np.linalg.norm(psi))
    for k in range(1, n_samples + 1):
        psi = block @ psi
        times[k] = k * sample_every * period
        rows.append(_channel_values(psi, resolved))
        norms[k] = float(np.linalg.norm(psi))
    drift = np.max(np.abs(1.0 - norms))
    if drift > NORM_ABORT_LIMIT:
        raise PropagationError(
            f"norm drift {drift:.3e} over {n_periods} periods; "
            "one-period propagator not converged")
    return _assemble(list(times), rows, list(norms), resolved, psi)
