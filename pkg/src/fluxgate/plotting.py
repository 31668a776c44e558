"""Report figures: pulse shapes, convergence curves, population traces."""
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .hamiltonian import PulseSequence


def plot_pulses(pulses: PulseSequence, gate: str, path):
    fig, axes = plt.subplots(2, 1, sharex=True, figsize=(7, 5))
    t = pulses.times
    for ax, f, label in zip(axes, (pulses.fc1, pulses.fc2),
                            (r"$f_c^{(1)}$", r"$f_c^{(2)}$")):
        ax.plot(t, f, lw=0.7)
        ax.set_ylabel(label)
        ax.axhline(0.0, color="gray", lw=0.4)
    axes[1].set_xlabel("t (ns)")
    axes[0].set_title("%s control fluxes" % gate)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_convergence(history: np.ndarray, gate: str, path):
    """history rows are (iteration, eta, J)."""
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.semilogy(history[:, 0], history[:, 1], label=r"$\eta$")
    ax.semilogy(history[:, 0], history[:, 2], "--", lw=0.8, label="J")
    ax.set_xlabel("iteration")
    ax.set_ylabel("error")
    ax.set_title("%s convergence" % gate)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_population_traces(trace_sets: dict, gate: str, path):
    """trace_sets maps initial-state label -> (times, (n+1, 5) populations)."""
    labels = ["P_gg", "P_ge", "P_eg", "P_ee", "P_leak"]
    fig, axes = plt.subplots(2, 2, sharex=True, sharey=True,
                             figsize=(8, 5.6))
    for ax, (initial, (times, traces)) in zip(axes.flat,
                                              sorted(trace_sets.items())):
        for k, lab in enumerate(labels):
            style = ":" if lab == "P_leak" else "-"
            ax.plot(times, traces[:, k], style, lw=0.9, label=lab)
        ax.set_title("start |%s>" % initial, fontsize=9)
        ax.set_ylim(-0.05, 1.05)
    for ax in axes[1]:
        ax.set_xlabel("t (ns)")
    for ax in axes[:, 0]:
        ax.set_ylabel("population")
    axes[0, 0].legend(fontsize=7, ncol=2)
    fig.suptitle("%s populations" % gate)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
