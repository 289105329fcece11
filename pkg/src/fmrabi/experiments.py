"""Named reproduction experiments producing tables and headline scalars.

Each experiment consumes a flat parameter dict (defaults merged with user
overrides by the CLI) and returns an ExperimentResult holding CSV-ready
tables, headline scalars, and free-form notes.  Everything is deterministic
for a fixed parameter set.

Operating points are authored in the effective frame (effective atomic
splitting = 1 frequency unit) and lowered to the lab frame when a lab-frame
model is propagated; the bare atomic frequency then sets the scale
separation between the drive and the effective dynamics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analytics, circuit, spectral
from .dynamics import (PropagationConfig, one_period_propagator, propagate,
                       propagate_periodic, propagate_static,
                       resolve_periodic_resonance)
from .frames import LabFrameParams, from_effective, rwa_validity
from .hamiltonians import (ThreeLevelParams, aligned_rotating_picture,
                           anisotropic_rabi, lab_full, rotating_frame,
                           static_rabi, three_level_lab,
                           three_level_unmodulated)
from .hilbert import HilbertSpace, basis_state
from .open_system import (DissipationParams, dressed_jump_operators,
                          propagate_master, steady_flux)
from .spectral import crossing_near_resonance, effective_at


@dataclass
class Table:
    name: str
    header: tuple[str, ...]
    rows: list[tuple]


@dataclass
class ExperimentResult:
    name: str
    tables: list[Table] = field(default_factory=list)
    scalars: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)


def _trajectory_table(name: str, traj, decimate: int = 1) -> Table:
    channels = traj.channel_names()
    header = ("t", *channels, "norm")
    rows = []
    for k in range(0, len(traj.times), decimate):
        rows.append((traj.times[k],
                     *(traj.probabilities[c][k] for c in channels),
                     traj.norm[k]))
    if (len(traj.times) - 1) % decimate != 0:
        k = len(traj.times) - 1
        rows.append((traj.times[k],
                     *(traj.probabilities[c][k] for c in channels),
                     traj.norm[k]))
    return Table(name, header, rows)


# ---------------------------------------------------------------------------
# spectrum / crossing (avoided-crossing figure and overlap figure)
# ---------------------------------------------------------------------------

def run_spectrum(cfg: dict) -> ExperimentResult:
    """Eigenvalue traces of the tracked pair across the resonance."""
    space = HilbertSpace(2, cfg["fock_cutoff"])
    sweep = np.linspace(cfg["sweep_lo"], cfg["sweep_hi"], cfg["sweep_points"])
    scan = spectral.scan_spectrum(cfg["lam"], cfg["x"], sweep,
                                  levels=(3, 4), space=space)
    report = crossing_near_resonance(cfg["lam"], cfg["x"], space=space)
    res = ExperimentResult("spectrum")
    res.tables.append(Table("spectrum", ("omega_c_ratio", "E3", "E4"),
                            list(scan.as_rows())))
    res.scalars.update(_crossing_scalars(report))
    return res


def _crossing_scalars(report) -> dict:
    return {
        "omega_c_star": report.omega_c_star,
        "splitting": report.splitting,
        "F_B": report.F_B,
        "F_C": report.F_C,
        "b_level": float(report.b_level),
        "c_level": float(report.c_level),
    }


def run_crossing(cfg: dict) -> ExperimentResult:
    """Crossing report at one coupling, plus analytic cross-checks."""
    space = HilbertSpace(2, cfg["fock_cutoff"])
    report = crossing_near_resonance(cfg["lam"], cfg["x"], space=space)
    res = ExperimentResult("crossing")
    res.scalars.update(_crossing_scalars(report))
    ana = analytics.analytic_report(cfg["lam"], cfg["x"])
    res.scalars["omega_c_prime_analytic"] = ana.omega_c_prime_ratio
    res.scalars["splitting_analytic"] = ana.splitting
    res.scalars["omega_eff_analytic"] = ana.omega_eff
    # Convergence guard: doubled Fock cutoff must not move the headline.
    space2 = HilbertSpace(2, 2 * cfg["fock_cutoff"])
    report2 = crossing_near_resonance(cfg["lam"], cfg["x"], space=space2)
    res.scalars["omega_c_star_doubled_cutoff"] = report2.omega_c_star
    res.scalars["splitting_doubled_cutoff"] = report2.splitting
    return res


def run_overlaps(cfg: dict) -> ExperimentResult:
    """Dressed-pair overlaps with (|e,0> +/- |g,3>)/sqrt(2) versus coupling."""
    space = HilbertSpace(2, cfg["fock_cutoff"])
    rows = []
    for lam in cfg["lam_values"]:
        r = crossing_near_resonance(lam, cfg["x"], space=space)
        rows.append((lam, r.F_B, r.F_C, r.omega_c_star, r.splitting))
    res = ExperimentResult("overlaps")
    res.tables.append(Table(
        "overlaps", ("lam", "F_B", "F_C", "omega_c_star", "splitting"), rows))
    res.scalars["F_B_at_smallest_lam"] = rows[0][1]
    res.scalars["F_C_at_smallest_lam"] = rows[0][2]
    res.scalars["F_B_monotone_decreasing"] = float(
        all(rows[k][1] > rows[k + 1][1] for k in range(len(rows) - 1)))
    res.scalars["F_C_monotone_decreasing"] = float(
        all(rows[k][2] > rows[k + 1][2] for k in range(len(rows) - 1)))
    return res


# ---------------------------------------------------------------------------
# closed dynamics (Rabi-oscillation figure)
# ---------------------------------------------------------------------------

def _resolved_operating_point(lam, x, fock_cutoff):
    space = HilbertSpace(2, fock_cutoff)
    report = crossing_near_resonance(lam, x, space=space)
    return space, report


def run_dynamics(cfg: dict, long_run: bool = False) -> ExperimentResult:
    """Three-photon Rabi oscillations: effective model and sideband model.

    The static anisotropic-Rabi run uses exact eigendecomposition stepping at
    the full-scale coupling.  The full sideband model runs at a desk-scale
    coupling by default (the exchange rate grows with the cube of the
    coupling); --long-run switches it to the full-scale coupling.  In both
    cases the cavity frequency is re-solved on the model actually propagated:
    for the periodic sideband Hamiltonian the resonance is the avoided
    crossing of one-period-propagator eigenphases.
    """
    res = ExperimentResult("dynamics")
    lam_eff = cfg["lam_effective"]
    x = cfg["x"]
    space, report = _resolved_operating_point(lam_eff, x, cfg["fock_cutoff"])
    h_eff = anisotropic_rabi(effective_at(report.omega_c_star, lam_eff, x), space)
    omega_rabi = report.splitting / 2.0
    t_final = cfg["periods_shown"] * math.pi / omega_rabi
    times = np.linspace(0.0, t_final, cfg["effective_samples"])
    psi0 = basis_state(space, ("e", 0))
    traj_eff = propagate_static(h_eff, psi0, times, [("e", 0), ("g", 3)], space)
    res.tables.append(_trajectory_table("effective_model", traj_eff))
    res.scalars["max_P_g3_effective"] = traj_eff.max_probability("P(g,3)")
    total = traj_eff.probabilities["P(e,0)"] + traj_eff.probabilities["P(g,3)"]
    res.scalars["min_pair_population_effective"] = float(np.min(total))
    res.scalars["omega_c_star_effective"] = report.omega_c_star

    # Convergence guard at a deeper Fock cutoff.
    space_hi = HilbertSpace(2, cfg["guard_fock_cutoff"])
    rep_hi = crossing_near_resonance(lam_eff, x, space=space_hi)
    h_hi = anisotropic_rabi(effective_at(rep_hi.omega_c_star, lam_eff, x), space_hi)
    traj_hi = propagate_static(h_hi, basis_state(space_hi, ("e", 0)), times,
                               [("e", 0), ("g", 3)], space_hi)
    res.scalars["max_P_g3_effective_guard"] = traj_hi.max_probability("P(g,3)")

    lam_side = cfg["lam_effective"] if long_run else cfg["lam_sideband"]
    side = _sideband_run(lam_side, x, cfg, res)
    res.scalars["max_P_g3_sideband"] = side
    res.scalars["lam_sideband_used"] = lam_side
    if not long_run:
        doubled = dict(cfg)
        doubled["fock_cutoff"] = 2 * cfg["fock_cutoff"]
        probe = ExperimentResult("sideband_doubled")
        res.scalars["max_P_g3_sideband_doubled"] = _sideband_run(
            lam_side, x, doubled, probe)
    return res


def _sideband_run(lam, x, cfg, res: ExperimentResult) -> float:
    space = HilbertSpace(2, cfg["fock_cutoff"])
    report = crossing_near_resonance(lam, x, space=space)
    e0 = basis_state(space, ("e", 0))
    g3 = basis_state(space, ("g", 3))

    def build(omega_c):
        p = from_effective(1.0, omega_c, x, cfg["atom_frequency"], lam)
        h, _ = aligned_rotating_picture(p, space, cfg["bessel_truncation"])
        return h

    width = max(5.0 * report.splitting, 1e-6)
    omega_c = resolve_periodic_resonance(
        build, (report.omega_c_star - width, report.omega_c_star + width),
        e0, g3, rel_tol=report.splitting / 10.0, propagator_tol=1e-8)
    res.scalars["omega_c_star_sideband"] = omega_c
    p = from_effective(1.0, omega_c, x, cfg["atom_frequency"], lam)
    res.scalars["rwa_ratio_drive_over_Delta"] = rwa_validity(p).ratio_Delta
    h = build(omega_c)
    u, period = one_period_propagator(h)
    omega_rabi = report.splitting / 2.0
    n_periods = int(cfg["periods_shown"] * math.pi / omega_rabi / period)
    sample_every = max(1, n_periods // cfg["sideband_samples"])
    traj = propagate_periodic(h, e0, n_periods, [("e", 0), ("g", 3)], space,
                              sample_every=sample_every, propagator=(u, period))
    res.tables.append(_trajectory_table("sideband_model", traj))
    # Refine the maximum on a per-period grid around the coarse peak.
    coarse = traj.probabilities["P(g,3)"]
    k_peak = int(np.argmax(coarse))
    lo = max(0, (k_peak - 2) * sample_every)
    span = 4 * sample_every
    psi_lo = e0
    if lo > 0:
        psi_lo = np.linalg.matrix_power(u, lo) @ e0
    fine = propagate_periodic(h, psi_lo / np.linalg.norm(psi_lo),
                              min(span, n_periods - lo), [("e", 0), ("g", 3)],
                              space, sample_every=1, propagator=(u, period))
    return max(float(np.max(coarse)), fine.max_probability("P(g,3)"))


def run_frame_equivalence(cfg: dict) -> ExperimentResult:
    """Short-window agreement between the lab and sideband pictures.

    The lab-frame model is advanced by its one-period propagator (exact to
    the propagator-build tolerance) and conjugated into the rotating frame;
    the sideband model integrates with fixed-step RK4.  Sample times are
    exact multiples of the drive period in both runs, and all basis-channel
    probabilities are compared pointwise.
    """
    space = HilbertSpace(2, cfg["fock_cutoff"])
    p = from_effective(1.0, cfg["omega_c"], cfg["x"], cfg["atom_frequency"],
                       cfg["lam"])
    channels = [("e", 0), ("g", 3), ("g", 1), ("e", 1)]
    psi0 = basis_state(space, ("e", 0))
    h_lab = lab_full(p, space)
    u, period = one_period_propagator(h_lab, refine_tol=1e-11)
    n_periods = int(cfg["window"] / period)
    traj_lab = propagate_periodic(h_lab, psi0, n_periods, channels, space,
                                  sample_every=max(1, n_periods // 64),
                                  propagator=(u, period))
    h_rot = rotating_frame(p, space, cfg["bessel_truncation"])
    # Integrate the sideband model once to the final sampled time with a
    # step that lands exactly on the lab-side sample times.
    t_final = float(traj_lab.times[-1])
    sample_times = traj_lab.times[1:]
    dt = _dt_landing_on(h_rot, sample_times)
    cfg_rot = PropagationConfig(t_final=t_final, sample_stride=1, dt=dt)
    traj_rot = propagate(h_rot, psi0, cfg_rot, channels, space)
    worst = 0.0
    rows = []
    res = ExperimentResult("frame_equivalence")
    for t_lab, k_lab in zip(traj_lab.times[1:], range(1, len(traj_lab.times))):
        k_rot = int(np.argmin(np.abs(traj_rot.times - t_lab)))
        if abs(traj_rot.times[k_rot] - t_lab) > 1e-9 * max(1.0, t_lab):
            continue
        for ch in traj_lab.probabilities:
            dev = abs(traj_lab.probabilities[ch][k_lab]
                      - traj_rot.probabilities[ch][k_rot])
            worst = max(worst, dev)
        rows.append((t_lab,
                     *(traj_lab.probabilities[c][k_lab] for c in traj_lab.probabilities)))
    res.tables.append(Table("lab_frame_channels",
                            ("t", *traj_lab.probabilities.keys()), rows))
    res.scalars["max_channel_deviation"] = worst
    res.scalars["window"] = t_final
    return res


def _dt_landing_on(h, sample_times) -> float:
    """Fixed step that divides the sample spacing exactly."""
    from .dynamics import default_timestep
    spacing = float(sample_times[0])
    n = max(1, int(math.ceil(spacing / default_timestep(h))))
    return spacing / n


def run_fidelity_sweep(cfg: dict) -> ExperimentResult:
    """Transfer probability at a fixed snapshot time versus drive ratio x.

    The snapshot is the first maximum of the x = x_ref transfer (the
    half-period of the effective exchange), reused for all x; each sweep
    point re-solves its own resonant cavity frequency.
    """
    space = HilbertSpace(2, cfg["fock_cutoff"])
    lam = cfg["lam"]
    x_ref = cfg["x_reference"]
    ref = crossing_near_resonance(lam, x_ref, space=space)
    if cfg["snapshot_time"] > 0.0:
        t_snap = cfg["snapshot_time"]
    else:
        t_snap = _first_maximum_time(ref, lam, x_ref, space)
    rows = []
    psi0 = basis_state(space, ("e", 0))
    for xv in cfg["x_values"]:
        r = crossing_near_resonance(lam, xv, space=space)
        h = anisotropic_rabi(effective_at(r.omega_c_star, lam, xv), space)
        traj = propagate_static(h, psi0, np.array([0.0, t_snap]),
                                [("g", 3)], space)
        rows.append((xv, float(traj.probabilities["P(g,3)"][-1]), r.omega_c_star))
    res = ExperimentResult("fidelity_sweep")
    res.tables.append(Table("fidelity", ("x", "P_g3_at_snapshot", "omega_c_star"),
                            rows))
    res.scalars["snapshot_time"] = t_snap
    values = np.array([r[1] for r in rows])
    xs = np.array([r[0] for r in rows])
    res.scalars["peak_x"] = float(xs[int(np.argmax(values))])
    ix = int(np.argmin(np.abs(xs - x_ref)))
    res.scalars["fidelity_at_reference_x"] = float(values[ix])
    # Cutoff-doubling guard on the headline value.
    space2 = HilbertSpace(2, 2 * cfg["fock_cutoff"])
    r2 = crossing_near_resonance(lam, x_ref, space=space2)
    h2 = anisotropic_rabi(effective_at(r2.omega_c_star, lam, x_ref), space2)
    traj2 = propagate_static(h2, basis_state(space2, ("e", 0)),
                             np.array([0.0, t_snap]), [("g", 3)], space2)
    res.scalars["fidelity_at_reference_x_doubled"] = float(
        traj2.probabilities["P(g,3)"][-1])
    return res


def _first_maximum_time(report, lam, x, space) -> float:
    h = anisotropic_rabi(effective_at(report.omega_c_star, lam, x), space)
    psi0 = basis_state(space, ("e", 0))
    guess = math.pi / report.splitting  # half period of the exchange
    times = np.linspace(0.8 * guess, 1.2 * guess, 2001)
    traj = propagate_static(h, psi0, times, [("g", 3)], space)
    return float(times[int(np.argmax(traj.probabilities["P(g,3)"]))])


def run_splitting_compare(cfg: dict) -> ExperimentResult:
    """Numeric vs analytic splitting plus the cubic-scaling check."""
    space = HilbertSpace(2, cfg["fock_cutoff"])
    comp = spectral.splitting_vs_lambda(cfg["lam_values"], cfg["x"], space=space)
    res = ExperimentResult("splitting_compare")
    res.tables.append(Table(
        "splitting", ("lam", "dE_numeric", "dE_analytic", "percent_difference"),
        list(comp.as_rows())))
    small = spectral.splitting_vs_lambda(cfg["slope_lam_values"], cfg["x"],
                                         space=space)
    res.scalars["loglog_slope"] = spectral.loglog_slope(small.lam_values,
                                                        small.numeric)
    below = [pct for lam, _, _, pct in comp.as_rows() if lam < 0.05]
    res.scalars["max_percent_difference_below_0.05"] = float(np.max(below))
    return res


# ---------------------------------------------------------------------------
# open system (output-flux figure and physical-units operating point)
# ---------------------------------------------------------------------------

def _flux_case(p: LabFrameParams, modulated: bool, kappa: float, gamma: float,
               space: HilbertSpace, t_final: float, samples: int,
               dt: float | None = None):
    h_static = static_rabi(p, space)
    x1, x2 = dressed_jump_operators(h_static, space)
    d = DissipationParams(kappa=kappa, gamma=gamma)
    if modulated:
        h = lab_full(p, space)
    else:
        from .hamiltonians import TimeDependentOperator
        h = TimeDependentOperator(space.dim)
        h.add_static(h_static)
    e0 = basis_state(space, ("e", 0))
    rho0 = np.outer(e0, e0.conj())
    return propagate_master(h, rho0, x1, x2, d, t_final=t_final,
                            samples=samples, dt=dt)


def run_flux_fig9(cfg: dict) -> ExperimentResult:
    """Output flux with the drive off, resonant, and far too fast.

    All three cases share the cavity, coupling, and decay rates; only the
    modulation changes.  The resonant drive sustains a steady flux, the
    other two decay to darkness.  kappa and gamma are given in units of the
    effective splitting (one tenth of it by default): with rates on the
    bare-atom scale instead, the fast-drive case retains a flux about 1% of
    the resonant one and is no longer indistinguishable from the
    undriven cavity.
    """
    space = HilbertSpace(2, cfg["fock_cutoff"])
    kappa = cfg["kappa"]
    gamma = cfg["gamma"]
    dt = cfg["dt"] if cfg["dt"] > 0.0 else None
    omega_c_lab = cfg["omega_c"] + (cfg["atom_frequency"] - 1.0)
    res = ExperimentResult("flux_fig9")
    cases = {
        "off": None,
        "resonant": 2.0 * (cfg["atom_frequency"] - 1.0),
        "fast": cfg["fast_drive_over_atom"] * cfg["atom_frequency"],
    }
    selected = [name.strip() for name in cfg["cases"].split(",") if name.strip()]
    unknown = set(selected) - set(cases)
    if unknown:
        raise ValueError(f"unknown flux cases {sorted(unknown)}")
    for label in selected:
        omega_f = cases[label]
        if omega_f is None:
            p = LabFrameParams(Omega0=cfg["atom_frequency"], Omega_c=omega_c_lab,
                               lam=cfg["lam"], A=0.0, omega_f=1.0)
            traj = _flux_case(p, False, kappa, gamma, space,
                              cfg["t_final"], cfg["samples"], dt)
        else:
            p = LabFrameParams(Omega0=cfg["atom_frequency"], Omega_c=omega_c_lab,
                               lam=cfg["lam"], A=cfg["x"] * omega_f,
                               omega_f=omega_f)
            traj = _flux_case(p, True, kappa, gamma, space,
                              cfg["t_final"], cfg["samples"], dt)
        res.tables.append(Table(
            f"flux_{label}", ("t", "Phi_out", "trace", "min_eigenvalue_estimate"),
            list(zip(traj.times, traj.flux, traj.trace, traj.min_eigenvalue))))
        rep = steady_flux(traj)
        res.scalars[f"steady_flux_{label}"] = rep.flux
        res.scalars[f"flux_drift_{label}"] = rep.relative_drift
        res.scalars[f"max_trace_error_{label}"] = float(
            np.max(np.abs(traj.trace - 1.0)))
        window = max(2, len(traj.flux) // 5)
        res.scalars[f"late_integrated_flux_{label}"] = float(
            np.trapezoid(traj.flux[-window:], traj.times[-window:]))
    for label in selected:
        if label != "resonant" and "resonant" in selected:
            res.scalars[f"{label}_over_resonant"] = (
                res.scalars[f"late_integrated_flux_{label}"]
                / res.scalars["late_integrated_flux_resonant"])
    return res


def run_flux_sec6(cfg: dict) -> ExperimentResult:
    """Steady output flux at the physical-units operating point (GHz)."""
    space = HilbertSpace(2, cfg["fock_cutoff"])
    p = LabFrameParams(Omega0=cfg["Omega0_ghz"], Omega_c=cfg["Omega_c_ghz"],
                       lam=cfg["lam_ghz"], A=cfg["x"] * cfg["omega_f_ghz"],
                       omega_f=cfg["omega_f_ghz"])
    kappa = cfg["kappa_ghz"]
    traj = _flux_case(p, True, kappa, cfg["gamma_ghz"], space,
                      cfg["t_final"], cfg["samples"])
    rep = steady_flux(traj)
    res = ExperimentResult("flux_sec6")
    res.tables.append(Table(
        "flux_sec6", ("t", "Phi_out", "trace", "min_eigenvalue_estimate"),
        list(zip(traj.times, traj.flux, traj.trace, traj.min_eigenvalue))))
    res.scalars["steady_flux_ghz"] = rep.flux
    res.scalars["steady_flux_khz"] = rep.flux * 1e6
    res.scalars["flux_drift"] = rep.relative_drift
    res.scalars["converged"] = float(rep.converged)
    res.scalars["max_trace_error"] = float(np.max(np.abs(traj.trace - 1.0)))
    if cfg["run_cutoff_guard"]:
        space2 = HilbertSpace(2, 2 * cfg["fock_cutoff"])
        traj2 = _flux_case(p, True, kappa, cfg["gamma_ghz"], space2,
                           cfg["t_final"], cfg["samples"])
        rep2 = steady_flux(traj2)
        res.scalars["steady_flux_khz_doubled_cutoff"] = rep2.flux * 1e6
    return res


def run_circuit_map(cfg: dict) -> ExperimentResult:
    """Circuit constants -> derived energies -> model parameter block."""
    c = circuit.SEC6_CIRCUIT
    if cfg.get("C_i_farad", 0.0) > 0.0:
        c = circuit.CircuitParams(
            E_J=cfg["E_J_joule"], C_J=cfg["C_J_farad"], E_JK=cfg["E_JK_joule"],
            C_JK=cfg["C_JK_farad"], N=int(cfg["N_junctions"]),
            L_res=cfg["L_res_henry"], C_res=cfg["C_res_farad"],
            C_i=cfg["C_i_farad"], flux_phase_rate=cfg["flux_phase_rate"])
    d = circuit.derive_energies(c)
    m = circuit.map_to_model(c)
    res = ExperimentResult("circuit_map")
    res.scalars.update({
        "Omega0_ghz": circuit.to_ghz(m.Omega0),
        "Omega_c_ghz": circuit.to_ghz(m.Omega_c),
        "A_ghz": circuit.to_ghz(m.A),
        "lam_mhz": circuit.to_mhz(m.lam),
        "delta_b_mhz": circuit.to_mhz(m.delta_b),
        "omega_f_ghz": circuit.to_ghz(m.omega_f),
        "flux_phase_rate_ghz": circuit.to_ghz(c.flux_phase_rate),
        "omega_KPO_ghz": circuit.to_ghz(d.omega_KPO),
        "omega_LC_ghz": circuit.to_ghz(d.omega_LC),
        "E_C_phi_over_h_ghz": d.E_C_phi / c.hbar / (2 * math.pi) / 1e9,
        "E_L_over_h_ghz": d.E_L / c.hbar / (2 * math.pi) / 1e9,
        "N0_phi": d.N0_phi,
        "phi_0": d.phi_0,
        "N0_theta": d.N0_theta,
        "theta_0": d.theta_0,
    })
    res.notes.append("model block consumable by the frame converters: "
                     "Omega0, Omega_c, lam in one frequency unit; "
                     "x = A/omega_f")
    return res


# ---------------------------------------------------------------------------
# three-level protection / failure comparison
# ---------------------------------------------------------------------------

#: Frozen scenario for the anharmonicity comparison: the unmodulated side
#: uses the transmon-signed anharmonicity (Omega_b = 2*Omega0 - delta'),
#: under which the bare one-third transfer collapses to ~0.0005 of its
#: two-level reference; the positive sign only halves it.
THREE_LEVEL_DEFAULTS = dict(
    lam_modulated=0.05, lam_unmodulated=0.05, x=0.5, fock_cutoff=15,
    atom_frequency=15.0, anharmonicity_over_detuning=50.0,
    unmodulated_anharmonicity_over_detuning=-1.0, periods_shown=1.1,
    samples=400, unmodulated_dt=0.03)


def three_level_leakage(modulated: bool, cfg: dict | None = None):
    """Trajectory of one second-excited-level scenario.

    modulated=True runs the drive-assisted protocol (anharmonicity 50x the
    operating detuning) and returns the record with the P_f_total channel;
    modulated=False runs the bare near-one-third model with the
    anharmonicity on the detuning scale.
    """
    merged = dict(THREE_LEVEL_DEFAULTS)
    if cfg:
        merged.update(cfg)
    res = ExperimentResult("three_level")
    if modulated:
        return _three_level_modulated(merged, res)
    return _three_level_unmodulated(merged, res)


def run_three_level(cfg: dict) -> ExperimentResult:
    """Second-excited-level influence with and without the modulation.

    Modulated: the drive realizes the one-third condition in the effective
    frame while the anharmonicity stays 50x the operating detuning; the
    transfer survives and the f level stays dark.  Unmodulated: the bare
    one-third condition puts the detuning on the scale of the anharmonicity
    and the transfer degrades against its own two-level reference.
    """
    res = ExperimentResult("three_level")
    _three_level_modulated(cfg, res)
    _three_level_unmodulated(cfg, res)
    return res


def _three_level_modulated(cfg: dict, res: ExperimentResult):
    lam = cfg["lam_modulated"]
    x = cfg["x"]
    space2 = HilbertSpace(2, cfg["fock_cutoff"])
    ref = crossing_near_resonance(lam, x, space=space2)
    delta_nominal = 1.0 - ref.omega_c_star
    delta_b = cfg["anharmonicity_over_detuning"] * delta_nominal
    space = HilbertSpace(3, cfg["fock_cutoff"])
    e0 = basis_state(space, ("e", 0))
    g3 = basis_state(space, ("g", 3))

    def build(omega_c_eff):
        lab = from_effective(1.0, omega_c_eff, x, cfg["atom_frequency"], lam)
        tp = ThreeLevelParams.from_anharmonicity(
            Omega0=lab.Omega0, Omega_c=lab.Omega_c, lam=lab.lam,
            delta_b=delta_b, A=lab.A, omega_f=lab.omega_f)
        return three_level_lab(tp, space)

    width = max(5.0 * ref.splitting, 1e-6)
    omega_c = resolve_periodic_resonance(
        build, (ref.omega_c_star - width, ref.omega_c_star + width),
        e0, g3, rel_tol=ref.splitting / 10.0, propagator_tol=1e-7)
    h = build(omega_c)
    u, period = one_period_propagator(h, refine_tol=1e-10)
    omega_rabi = ref.splitting / 2.0
    n_periods = int(cfg["periods_shown"] * math.pi / omega_rabi / period)
    sample_every = max(1, n_periods // cfg["samples"])
    traj = propagate_periodic(h, e0, n_periods,
                              [("e", 0), ("g", 3), "f_total"], space,
                              sample_every=sample_every, propagator=(u, period))
    res.tables.append(_trajectory_table("modulated", traj))
    res.scalars["modulated_max_P_g3"] = traj.max_probability("P(g,3)")
    res.scalars["modulated_max_P_f"] = traj.max_probability("P_f_total")
    res.scalars["modulated_omega_c_star"] = omega_c
    res.scalars["modulated_delta_b"] = delta_b
    return traj


def _three_level_unmodulated(cfg: dict, res: ExperimentResult):
    lam = cfg["lam_unmodulated"]
    space2 = HilbertSpace(2, cfg["fock_cutoff"])
    # Static-model resonance: equal co-/counter-rotating couplings.
    from .frames import EffectiveParams

    def static_eff(omega_c):
        return EffectiveParams(delta=1.0 - omega_c, Delta=1.0 + omega_c,
                               omega_c=omega_c, omega0=1.0,
                               lambda1=lam, lambda2=lam, lam=lam, x=0.0)

    guess = 1.0 / 3.0 + 3.0 * lam ** 2
    # locate_crossing builds Bessel-weighted couplings; for the static model
    # minimize the gap over the equal-coupling Hamiltonian directly.
    from .linalg import eigvals_hermitian

    def gap(omega_c):
        ev = eigvals_hermitian(anisotropic_rabi(static_eff(omega_c), space2))
        return float(ev[4] - ev[3])

    golden = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = guess - 0.005, guess + 0.005
    c_, d_ = b - golden * (b - a), a + golden * (b - a)
    fc, fd = gap(c_), gap(d_)
    while (b - a) > 1e-10:
        if fc < fd:
            b, d_, fd = d_, c_, fc
            c_ = b - golden * (b - a)
            fc = gap(c_)
        else:
            a, c_, fc = c_, d_, fd
            d_ = a + golden * (b - a)
            fd = gap(d_)
    omega_c_prime = 0.5 * (a + b)
    splitting = gap(omega_c_prime)
    res.scalars["unmodulated_omega_c_prime"] = omega_c_prime
    res.scalars["unmodulated_splitting"] = splitting

    # Two-level reference (exact stepping).
    h2 = anisotropic_rabi(static_eff(omega_c_prime), space2)
    t_final = cfg["periods_shown"] * math.pi / (splitting / 2.0)
    times = np.linspace(0.0, t_final, cfg["samples"])
    traj2 = propagate_static(h2, basis_state(space2, ("e", 0)), times,
                             [("e", 0), ("g", 3)], space2)
    p2 = traj2.max_probability("P(g,3)")
    res.tables.append(_trajectory_table("unmodulated_two_level", traj2))
    res.scalars["unmodulated_two_level_max_P_g3"] = p2

    # Three-level run with anharmonicity on the detuning scale.
    space3 = HilbertSpace(3, cfg["fock_cutoff"])
    delta_prime = 1.0 - omega_c_prime
    tp = ThreeLevelParams.from_anharmonicity(
        Omega0=1.0, Omega_c=omega_c_prime, lam=lam,
        delta_b=cfg["unmodulated_anharmonicity_over_detuning"] * delta_prime)
    h3 = three_level_unmodulated(tp, space3)
    cfg3 = PropagationConfig(t_final=t_final, dt=cfg["unmodulated_dt"],
                             sample_stride=max(1, int(
                                 t_final / cfg["unmodulated_dt"] / cfg["samples"])))
    traj3 = propagate(h3, basis_state(space3, ("e", 0)), cfg3,
                      [("e", 0), ("g", 3), "f_total"], space3)
    res.tables.append(_trajectory_table("unmodulated_three_level", traj3))
    p3 = traj3.max_probability("P(g,3)")
    res.scalars["unmodulated_three_level_max_P_g3"] = p3
    res.scalars["unmodulated_max_P_f"] = traj3.max_probability("P_f_total")
    res.scalars["unmodulated_degradation_ratio"] = p3 / p2
    return traj3
