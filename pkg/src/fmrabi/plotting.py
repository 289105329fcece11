"""Figure rendering for the experiment reports.

One PNG per reproduced figure, written next to the CSV tables.  Headless
backend; no styling beyond what keeps the curves readable.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _columns(table, *names):
    idx = [table.header.index(n) for n in names]
    cols = list(zip(*table.rows))
    return [np.asarray(cols[i], dtype=float) for i in idx]


def plot_spectrum(result, path):
    w, e3, e4 = _columns(result.table("spectrum"), "omega_c_ratio", "E3", "E4")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(w, e3, label="E3")
    ax.plot(w, e4, "--", label="E4")
    star = result.scalars.get("omega_c_star")
    if star is not None:
        ax.axvline(star, color="gray", lw=0.8)
    ax.set_xlabel(r"$\omega_c/\omega_0$")
    ax.set_ylabel(r"$E_n/\omega_0$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_overlaps(result, path):
    lam, fb, fc = _columns(result.table("overlaps"), "lam", "F_B", "F_C")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(lam, fb, "o-", label=r"$F_B$")
    ax.plot(lam, fc, "s--", label=r"$F_C$")
    ax.set_xlabel(r"$\lambda/\omega_0$")
    ax.set_ylabel("overlap")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trajectories(result, path, table_names=None):
    tables = [t for t in result.tables
              if table_names is None or t.name in table_names]
    fig, axes = plt.subplots(len(tables), 1, figsize=(6.5, 3 * len(tables)),
                             squeeze=False)
    for ax, table in zip(axes[:, 0], tables):
        t = np.asarray([r[0] for r in table.rows], dtype=float)
        for j, name in enumerate(table.header[1:-1], start=1):
            ax.plot(t, [r[j] for r in table.rows], label=name)
        ax.set_xlabel(r"$t$ (units of $1/\omega_0$)")
        ax.set_ylabel("probability")
        ax.set_title(table.name)
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_fidelity(result, path):
    x, p = _columns(result.table("fidelity"), "x", "P_g3_at_snapshot")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(x, p, "o-")
    ax.set_xlabel(r"$x = A/\omega_f$")
    ax.set_ylabel(r"$P(g,3)$ at snapshot")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_splitting(result, path):
    lam, num, ana = _columns(result.table("splitting"),
                             "lam", "dE_numeric", "dE_analytic")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(lam, num, "o", label="numeric")
    ax.loglog(lam, ana, "-", label="analytic")
    ax.set_xlabel(r"$\lambda/\omega_0$")
    ax.set_ylabel(r"$\Delta E/\omega_0$")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_flux(result, path):
    flux_tables = [t for t in result.tables if t.name.startswith("flux")]
    fig, ax = plt.subplots(figsize=(6.5, 4))
    for table in flux_tables:
        t, phi = _columns(table, "t", "Phi_out")
        ax.plot(t, phi, label=table.name)
    ax.set_xlabel(r"$t$")
    ax.set_ylabel(r"$\Phi_{out}$")
    ax.set_yscale("symlog", linthresh=1e-12)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


PLOTTERS = {
    "spectrum": [("spectrum.png", plot_spectrum)],
    "crossing": [],
    "overlaps": [("overlaps.png", plot_overlaps)],
    "dynamics": [("dynamics.png", plot_trajectories)],
    "frame_equivalence": [],
    "fidelity_sweep": [("fidelity.png", plot_fidelity)],
    "splitting_compare": [("splitting.png", plot_splitting)],
    "flux_fig9": [("flux.png", plot_flux)],
    "flux_sec6": [("flux.png", plot_flux)],
    "circuit_map": [],
    "three_level": [("three_level.png", plot_trajectories)],
}


def render(result, out_dir) -> list[str]:
    written = []
    for filename, plotter in PLOTTERS.get(result.name, []):
        target = out_dir / filename
        plotter(result, target)
        written.append(filename)
    return written
