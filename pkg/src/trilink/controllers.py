"""Per-link PD and PID position control laws.

Both laws act link-wise on the angle error ``e = q_ref - q`` and its
derivative ``edot = qdot_ref - qdot``:

    PD:   u_i = kp_i e_i + kd_i edot_i
    PID:  u_i = kp_i e_i + ki_i I_i + kd_i edot_i,   I_i = integral of e_i dt

The integral is accumulated by the rectangular rule at the caller's step and
is updated *before* the output is formed.  There is no anti-windup, output
saturation or derivative filtering; the laws are exactly as written above.

State handling is functional: :func:`pid_control` returns the updated
integral instead of mutating anything, so distinct simulations can share a
config object safely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PidGains:
    """Gains for one link: proportional [N m/rad], integral [N m/(rad s)]
    and derivative [N m s/rad].  ``ki = 0`` encodes pure PD."""

    kp: float
    ki: float = 0.0
    kd: float = 0.0

    def __post_init__(self):
        for name in ("kp", "ki", "kd"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


def _gain_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).reshape(3)
    if not np.isfinite(arr).all() or (arr < 0).any():
        raise ValueError(f"{name} must be three finite non-negative gains")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PdConfig:
    """PD gains for the three links."""

    kp: np.ndarray
    kd: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kp", _gain_array(self.kp, "kp"))
        object.__setattr__(self, "kd", _gain_array(self.kd, "kd"))


@dataclass(frozen=True)
class PidConfig:
    """PID gains for the three links."""

    kp: np.ndarray
    ki: np.ndarray
    kd: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kp", _gain_array(self.kp, "kp"))
        object.__setattr__(self, "ki", _gain_array(self.ki, "ki"))
        object.__setattr__(self, "kd", _gain_array(self.kd, "kd"))


def pd_control(cfg: PdConfig, e: np.ndarray, edot: np.ndarray) -> np.ndarray:
    """Stateless PD torque, shape (3,)."""
    return cfg.kp * e + cfg.kd * edot


def pid_control(cfg: PidConfig, integral: np.ndarray, e: np.ndarray,
                edot: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """One PID evaluation: returns ``(torque, updated_integral)``.

    ``integral`` is the accumulated error integral carried by the caller;
    it starts at zero and advances by ``e * dt`` per call.
    """
    if dt <= 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    new_integral = integral + e * dt
    tau = cfg.kp * e + cfg.ki * new_integral + cfg.kd * edot
    return tau, new_integral
