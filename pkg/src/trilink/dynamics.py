"""Closed-form rigid-body dynamics of a planar 3-link revolute manipulator.

The model is the fixed set of closed-form expressions for the
configuration-dependent inertia matrix ``M(q)``, the velocity-product
(Coriolis/centrifugal) torque vector ``b(q, qdot)`` and the gravity torque
vector ``G(q)`` that together define the equation of motion

    M(q) qddot + b(q, qdot) + G(q) = tau.

Every term is evaluated exactly as written in the model definition, including
its asymmetries (see notes on :func:`velocity_vector`).  No simplification or
"physical correction" is applied: the expressions are the contract.  One
consequence worth knowing: M(q) is symmetric by construction but is *not*
positive definite everywhere -- it has a negative eigenvalue in a band of
configurations around the stretched-out elbow (|theta2| small).  See the
diagnostic sweep in the test suite for the observed sign profile.

All angles are radians; no wrapping is performed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class SingularMassError(RuntimeError):
    """Inertia matrix is numerically singular at the given configuration."""


@dataclass(frozen=True)
class ManipulatorParams:
    """Physical parameters: link masses [kg], lengths [m], inertias [kg m^2]
    and gravitational acceleration [m/s^2]."""

    m1: float
    m2: float
    m3: float
    L1: float
    L2: float
    L3: float
    J1: float
    J2: float
    J3: float
    g: float = 9.81

    def __post_init__(self):
        for name in ("m1", "m2", "m3", "L1", "L2", "L3"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be finite and > 0, got {v}")
        for name in ("J1", "J2", "J3", "g"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class JointState:
    """Joint angles ``q`` [rad] and angular velocities ``qdot`` [rad/s]."""

    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float).reshape(3)
        qdot = np.asarray(self.qdot, dtype=float).reshape(3)
        if not (np.isfinite(q).all() and np.isfinite(qdot).all()):
            raise ValueError("joint state must be finite")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qdot)


def mass_matrix(p: ManipulatorParams, q: np.ndarray) -> np.ndarray:
    """Inertia matrix M(q), shape (3, 3).

    The upper triangle is computed once and mirrored, so the result is
    bitwise symmetric (the off-diagonal closed forms are textually
    identical pairs).
    """
    t2, t3 = q[1], q[2]
    c2 = math.cos(t2)
    c23 = math.cos(t2 + t3)
    c3 = math.cos(t3)
    m1, m2, m3 = p.m1, p.m2, p.m3
    L1, L2, L3 = p.L1, p.L2, p.L3

    a11 = (m1 * L1 * L1
           + m2 * (L1 * L1 + 2.0 * L1 * L2 * c2 + L2 * L2)
           + m3 * (L1 * L1 + 2.0 * L1 * L2 * c2 + L1 * L3 * c23
                   + L2 * L2 + 4.0 * L2 * L3 * c3 + 2.0 * L3 * L3)
           + p.J1 + p.J2 + p.J3)
    a12 = (m2 * (L1 * L2 * c2 + L2 * L2)
           + m3 * (2.0 * L1 * L2 * c2 + L1 * L3 * c23
                   + L2 * L2 + 4.0 * L2 * L3 * c3 + 2.0 * L3 * L3)
           + p.J2 + p.J3)
    a13 = m3 * (L1 * L3 * c23 + 2.0 * L2 * L3 * c3 + 2.0 * L3 * L3)
    a22 = (m2 * L2 * L2
           + m3 * (L2 * L2 + 4.0 * L2 * L3 * c3 + 2.0 * L3 * L3)
           + p.J2 + p.J3)
    a23 = m3 * (2.0 * L2 * L3 * c3 + 2.0 * L3 * L3) + p.J3
    a33 = 2.0 * m3 * L3 * L3 + p.J3
    return np.array([[a11, a12, a13],
                     [a12, a22, a23],
                     [a13, a23, a33]])


def velocity_vector(p: ManipulatorParams, q: np.ndarray,
                    qdot: np.ndarray) -> np.ndarray:
    """Velocity-product torque vector b(q, qdot), shape (3,).

    Every term is a product of two joint velocities, so b vanishes
    identically at qdot = 0 and scales quadratically with qdot.  The
    expressions are kept term for term as defined, asymmetries included:
    the final L2*L3 group of b1 and b2 carries no mass factor, and b2
    contains sign-opposed term pairs that partially cancel.
    """
    t2, t3 = q[1], q[2]
    d1, d2, d3 = qdot[0], qdot[1], qdot[2]
    s2 = math.sin(t2)
    s23 = math.sin(t2 + t3)
    s3 = math.sin(t3)
    m2, m3 = p.m2, p.m3
    L1, L2, L3 = p.L1, p.L2, p.L3

    b1 = (-m2 * L1 * L2 * (2.0 * d1 * d2 + d2 * d2) * s2
          - m3 * L1 * L2 * (2.0 * d1 * d2 + d2 * d2 + 2.0 * d2 * d3
                            + 2.0 * d1 * d3 + d3 * d3) * s23
          - 2.0 * L2 * L3 * (2.0 * d1 * d3 + 2.0 * d2 * d3 + d3 * d3) * s3)
    b2 = (-m2 * L1 * L2 * (d1 * d2) * s2
          - m3 * L1 * L2 * (d1 * d2) * s2
          - m3 * L1 * L3 * (d1 * d2 + d2 * d3) * s23
          - 2.0 * L2 * L3 * (2.0 * d1 * d3 + 2.0 * d2 * d3 + d3 * d3) * s3
          + m2 * L1 * L2 * (d1 * d1 + d1 * d2) * s2
          + m3 * L1 * L2 * (d1 * d1 + d1 * d2) * s2
          + m3 * L1 * L3 * (d1 * d1 + d1 * d2 + d1 * d3) * s23)
    b3 = (-m3 * L1 * L3 * (d1 * d2 + d1 * d3) * s23
          - 2.0 * m3 * L2 * L3 * (d1 * d3 + d2 * d3) * s3
          + m3 * L1 * L3 * (d1 * d1 + d1 * d2 + d1 * d3) * s23
          + 2.0 * m3 * L2 * L3 * (d1 * d1 + 2.0 * d1 * d2 + d1 * d3
                                  + d2 * d2 + d2 * d3) * s3)
    return np.array([b1, b2, b3])


def gravity_vector(p: ManipulatorParams, q: np.ndarray) -> np.ndarray:
    """Gravity torque vector G(q), shape (3,).  Linear in ``p.g``."""
    t1, t2, t3 = q[0], q[1], q[2]
    c1 = math.cos(t1)
    c12 = math.cos(t1 + t2)
    c123 = math.cos(t1 + t2 + t3)
    g = p.g
    g1 = (p.m1 * p.L1 * g * c1
          + p.m2 * g * (p.L1 * c1 + p.L2 * c12)
          + p.m3 * g * (p.L1 * c1 + p.L2 * c12 + p.L3 * c123))
    g2 = p.m2 * g * (p.L2 * c12) + p.m3 * g * (p.L2 * c12 + p.L3 * c123)
    g3 = p.m3 * p.L3 * g * c123
    return np.array([g1, g2, g3])


def solve_3x3(a: np.ndarray, rhs: np.ndarray,
              pivot_tol: float = 1e-12) -> np.ndarray:
    """Solve a 3x3 linear system by Gaussian elimination with partial
    pivoting.

    Raises :class:`SingularMassError` when a pivot magnitude falls below
    ``pivot_tol``.  No explicit inverse is formed.
    """
    # work on flat python floats; the system is tiny and this keeps the
    # elimination deterministic and allocation-free
    a00, a01, a02 = float(a[0, 0]), float(a[0, 1]), float(a[0, 2])
    a10, a11, a12 = float(a[1, 0]), float(a[1, 1]), float(a[1, 2])
    a20, a21, a22 = float(a[2, 0]), float(a[2, 1]), float(a[2, 2])
    b0, b1, b2 = float(rhs[0]), float(rhs[1]), float(rhs[2])

    # column 0 pivot
    p0, p1, p2 = abs(a00), abs(a10), abs(a20)
    if p1 >= p0 and p1 >= p2:
        a00, a01, a02, a10, a11, a12 = a10, a11, a12, a00, a01, a02
        b0, b1 = b1, b0
    elif p2 >= p0 and p2 >= p1:
        a00, a01, a02, a20, a21, a22 = a20, a21, a22, a00, a01, a02
        b0, b2 = b2, b0
    if abs(a00) < pivot_tol:
        raise SingularMassError(f"pivot {a00!r} below {pivot_tol}")
    f = a10 / a00
    a11 -= f * a01
    a12 -= f * a02
    b1 -= f * b0
    f = a20 / a00
    a21 -= f * a01
    a22 -= f * a02
    b2 -= f * b0

    # column 1 pivot
    if abs(a21) > abs(a11):
        a11, a12, a21, a22 = a21, a22, a11, a12
        b1, b2 = b2, b1
    if abs(a11) < pivot_tol:
        raise SingularMassError(f"pivot {a11!r} below {pivot_tol}")
    f = a21 / a11
    a22 -= f * a12
    b2 -= f * b1

    if abs(a22) < pivot_tol:
        raise SingularMassError(f"pivot {a22!r} below {pivot_tol}")

    x2 = b2 / a22
    x1 = (b1 - a12 * x2) / a11
    x0 = (b0 - a01 * x1 - a02 * x2) / a00
    return np.array([x0, x1, x2])


def forward_dynamics(p: ManipulatorParams, q: np.ndarray, qdot: np.ndarray,
                     tau: np.ndarray) -> np.ndarray:
    """Joint accelerations qddot solving M(q) qddot = tau - b - G.

    Raises :class:`SingularMassError` at configurations where the pivoted
    solve degenerates (M(q) crosses singularity).
    """
    m = mass_matrix(p, q)
    rhs = tau - velocity_vector(p, q, qdot) - gravity_vector(p, q)
    return solve_3x3(m, rhs)
