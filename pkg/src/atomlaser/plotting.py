"""Figure rendering for sweep and distribution reports.

Uses the Agg backend unconditionally: figures always go to files, never
to a display.  The delimited output stays the canonical record; these
plots exist so a sweep can be eyeballed without a separate tool.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402


def sweep_figure(rows) -> "plt.Figure":
    """Two stacked panels over tau: mean photon number and Mandel Q.

    `rows` is a sequence of SweepRow records.  Numeric results are the
    solid gray line, the second-order approximation red long-dash, the
    first-order approximation green short-dash.
    """
    tau = np.array([r.tau for r in rows])
    fig, (ax_n, ax_q) = plt.subplots(2, 1, figsize=(6.0, 7.0), sharex=True)

    series = (
        ("mean_n_numeric", "q_numeric", "numeric", "0.45", "-"),
        ("mean_n_order2", "q_order2", "2nd order", "tab:red", (0, (7, 3))),
        ("mean_n_order1", "q_order1", "1st order", "tab:green", (0, (3, 3))),
    )
    for n_field, q_field, label, color, style in series:
        ax_n.plot(tau, [getattr(r, n_field) for r in rows],
                  color=color, linestyle=style, label=label)
        ax_q.plot(tau, [getattr(r, q_field) for r in rows],
                  color=color, linestyle=style, label=label)

    ax_n.set_ylabel(r"$\langle n \rangle$")
    ax_q.set_ylabel(r"$Q$")
    ax_q.set_xlabel(r"$\tau$")
    ax_q.axhline(0.0, color="0.8", lw=0.8, zorder=0)
    ax_n.legend(frameon=False)
    fig.tight_layout()
    return fig


def distribution_figure(probs, label: str) -> "plt.Figure":
    """Stem plot of a photon-number distribution."""
    probs = np.asarray(probs, dtype=float)
    n = np.arange(probs.size)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    markerline, stemlines, _ = ax.stem(n, probs)
    plt.setp(markerline, markersize=4.0, color="tab:blue")
    plt.setp(stemlines, linewidth=1.0, color="tab:blue")
    ax.set_xlabel(r"$n$")
    ax.set_ylabel(r"$\rho(n)$")
    ax.set_title(label)
    ax.set_ylim(bottom=0.0)
    fig.tight_layout()
    return fig


def save_figure(fig: "plt.Figure", path) -> None:
    """Write a figure to disk and release it."""
    fig.savefig(path, dpi=150)
    plt.close(fig)
