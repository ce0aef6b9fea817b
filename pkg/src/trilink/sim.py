"""Fixed-step closed-loop and open-loop simulation.

The loop structure per step k:

    e = reference - q,  edot = -qdot      (constant set-point, qdot_ref = 0)
    tau_k = controller(e, edot)           (evaluated once, held for the step)
    record sample k
    advance one classical RK4 step with tau_k constant

Runs are single-threaded and fully deterministic: the same configuration
always produces a bitwise identical trajectory.  The recorded torque of the
final sample is the controller output at the final state; it is never
applied.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

import numpy as np

from .controllers import PdConfig, PidConfig, pd_control, pid_control
from .dynamics import JointState, ManipulatorParams, forward_dynamics
from .fuzzy import FlcConfig, flc_control

ControllerConfig = Union[PdConfig, PidConfig, FlcConfig]

TRAJECTORY_HEADER = "t,q1,q2,q3,qd1,qd2,qd3,tau1,tau2,tau3"

STATE_LIMIT = 1e6


class NumericalBlowupError(RuntimeError):
    """A state component left the +-1e6 range (unstable configuration).

    Carries the time of failure and the trajectory recorded up to (and
    excluding) the diverged state.
    """

    def __init__(self, time: float, partial: "Trajectory"):
        super().__init__(f"state magnitude exceeded {STATE_LIMIT:g} "
                         f"at t = {time:.6g} s")
        self.time = time
        self.partial = partial


@dataclass(frozen=True)
class SimConfig:
    """One simulation experiment: plant, set-point and controller."""

    params: ManipulatorParams
    reference: np.ndarray
    initial: JointState
    controller: Optional[ControllerConfig]
    dt: float = 1e-3
    t_end: float = 10.0

    def __post_init__(self):
        if not (0.0 < self.dt <= 0.01):
            raise ValueError(f"dt must be in (0, 0.01], got {self.dt}")
        if self.t_end < self.dt:
            raise ValueError(f"t_end must be >= dt, got {self.t_end}")
        n = self.t_end / self.dt
        if abs(n - round(n)) > 1e-6:
            raise ValueError(f"t_end/dt must be an integer step count, "
                             f"got {n}")
        ref = np.asarray(self.reference, dtype=float).reshape(3)
        if not np.isfinite(ref).all():
            raise ValueError("reference must be finite")
        ref.flags.writeable = False
        object.__setattr__(self, "reference", ref)

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled joint trajectory with the applied torques."""

    times: np.ndarray  # (n,)
    q: np.ndarray      # (n, 3)
    qdot: np.ndarray   # (n, 3)
    tau: np.ndarray    # (n, 3)

    def __post_init__(self):
        n = len(self.times)
        for name in ("q", "qdot", "tau"):
            if getattr(self, name).shape != (n, 3):
                raise ValueError(f"{name} must have shape ({n}, 3)")

    def __len__(self) -> int:
        return len(self.times)


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray,
             dt: float) -> np.ndarray:
    """One classical 4th-order Runge-Kutta step of ``dy/dt = f(y)``."""
    k1 = f(y)
    k2 = f(y + (0.5 * dt) * k1)
    k3 = f(y + (0.5 * dt) * k2)
    k4 = f(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(p: ManipulatorParams, q: np.ndarray, qdot: np.ndarray,
             tau: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Advance the manipulator one RK4 step with ``tau`` held constant."""

    def rhs(y: np.ndarray) -> np.ndarray:
        qdd = forward_dynamics(p, y[:3], y[3:], tau)
        return np.concatenate((y[3:], qdd))

    y = rk4_step(rhs, np.concatenate((q, qdot)), dt)
    return y[:3], y[3:]


def _controller_step(cfg: Optional[ControllerConfig], dt: float
                     ) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """Bind a controller config to a per-step ``(e, edot) -> tau`` callable.

    PID integral state lives in the returned closure, so every call to this
    factory starts a fresh controller.
    """
    if cfg is None:
        zero = np.zeros(3)
        return lambda e, edot: zero
    if isinstance(cfg, PdConfig):
        return lambda e, edot: pd_control(cfg, e, edot)
    if isinstance(cfg, PidConfig):
        integral = np.zeros(3)

        def step(e, edot):
            nonlocal integral
            tau, integral = pid_control(cfg, integral, e, edot, dt)
            return tau

        return step
    if isinstance(cfg, FlcConfig):
        return lambda e, edot: flc_control(cfg, e, edot)
    raise TypeError(f"unknown controller config {type(cfg).__name__}")


def run_closed_loop(cfg: SimConfig) -> Trajectory:
    """Simulate set-point tracking over ``[0, t_end]``.

    Returns ``t_end/dt + 1`` samples.  Raises
    :class:`NumericalBlowupError` when any state component leaves the
    +-1e6 range and :class:`~trilink.dynamics.SingularMassError` when the
    plant crosses an inertia-matrix singularity.
    """
    n = cfg.n_steps
    dt = cfg.dt
    ref = cfg.reference
    controller = _controller_step(cfg.controller, dt)

    times = np.arange(n + 1) * dt
    qs = np.empty((n + 1, 3))
    qds = np.empty((n + 1, 3))
    taus = np.empty((n + 1, 3))

    q = cfg.initial.q.copy()
    qdot = cfg.initial.qdot.copy()
    for k in range(n + 1):
        tau = controller(ref - q, -qdot)
        qs[k] = q
        qds[k] = qdot
        taus[k] = tau
        if k == n:
            break
        q, qdot = step_rk4(cfg.params, q, qdot, tau, dt)
        # negated form so NaN (possible through a near-singular solve)
        # also counts as divergence
        if not ((np.abs(q) <= STATE_LIMIT).all()
                and (np.abs(qdot) <= STATE_LIMIT).all()):
            partial = Trajectory(times[:k + 1].copy(), qs[:k + 1].copy(),
                                 qds[:k + 1].copy(), taus[:k + 1].copy())
            raise NumericalBlowupError((k + 1) * dt, partial)
    return Trajectory(times, qs, qds, taus)


def run_open_loop(cfg: SimConfig) -> Trajectory:
    """Simulate the unforced plant (tau = 0) from the initial state."""
    return run_closed_loop(replace(cfg, controller=None))


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Write a trajectory as CSV with 17 significant digits per value."""
    with open(path, "w", newline="") as fh:
        fh.write(TRAJECTORY_HEADER + "\n")
        for k in range(len(traj)):
            row = [traj.times[k], *traj.q[k], *traj.qdot[k], *traj.tau[k]]
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_trajectory_csv(path) -> Trajectory:
    """Read a trajectory written by :func:`write_trajectory_csv`."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 10:
        raise ValueError(f"expected 10 columns, got {data.shape[1]}")
    return Trajectory(times=data[:, 0], q=data[:, 1:4], qdot=data[:, 4:7],
                      tau=data[:, 7:10])
