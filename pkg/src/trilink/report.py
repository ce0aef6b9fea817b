"""Figure rendering for simulation reports.

Each function draws one figure and writes it straight to a file next to the
CSV it illustrates.  Rendering is headless (Agg) and uses default styling,
so repeated runs produce identical bytes.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .sim import Trajectory

_DPI = 150
_LINK_COLORS = ("tab:blue", "tab:orange", "tab:green")
_CONTROLLER_COLORS = {"pid": "tab:blue", "pd": "tab:orange",
                      "flc": "tab:green"}


def _save(fig, path):
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_open_loop(traj: Trajectory, path) -> None:
    """Joint angles of an unforced run, one curve per link."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for i in range(3):
        ax.plot(traj.times, traj.q[:, i], color=_LINK_COLORS[i],
                label=f"link {i + 1}")
    ax.set_xlabel("time [s]")
    ax.set_ylabel("joint angle [rad]")
    ax.set_title("open-loop response")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def render_link_comparison(trajectories: dict[str, Trajectory],
                           reference: float, link: int, path) -> None:
    """One link's set-point tracking under every controller."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    t_max = 0.0
    for name, traj in trajectories.items():
        color = _CONTROLLER_COLORS.get(name)
        ax.plot(traj.times, traj.q[:, link], color=color, label=name)
        t_max = max(t_max, float(traj.times[-1]))
    ax.axhline(reference, color="k", linestyle="--", linewidth=1,
               label="set-point")
    ax.set_xlim(0.0, t_max)
    ax.set_xlabel("time [s]")
    ax.set_ylabel(f"joint {link + 1} angle [rad]")
    ax.set_title(f"link {link + 1} step response")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def render_surface(surface: np.ndarray, path) -> None:
    """Fuzzy control surface over the normalized input square."""
    fig, ax = plt.subplots(figsize=(6, 5))
    im = ax.imshow(surface.T, origin="lower", extent=(-1, 1, -1, 1),
                   aspect="auto", cmap="RdBu_r")
    fig.colorbar(im, ax=ax, label="control torque [N m]")
    ax.set_xlabel("scaled error")
    ax.set_ylabel("scaled error rate")
    ax.set_title("fuzzy inference surface")
    fig.tight_layout()
    _save(fig, path)
