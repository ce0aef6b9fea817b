"""Zero-order Sugeno fuzzy position controller.

Per link, the angle error and error rate are scaled into the normalized
universe [-1, +1], fuzzified against three piecewise-linear sets
(N egative, Z ero, P ositive) that form a partition of unity, pushed through
a 9-rule base with product rule firing, and defuzzified as the weighted
average of five constant output levels (NB, N, Z, P, PB).  The crisp result
is scaled by a per-link output gain ``ku``, so |u_i| <= ku_i always.

The default rule base:

    e \\ edot |  P   Z   N
    ---------+-------------
          P  |  PB  P   Z
          Z  |  P   Z   N
          N  |  Z   N   NB

Membership shapes default to the full-overlap triangular partition with
vertices (-1, 0, +1); N and P saturate as shoulders beyond their peaks, so
the three degrees sum to one over the whole clamped universe for any valid
vertex triple.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

INPUT_LABELS = ("N", "Z", "P")
OUTPUT_LABELS = ("NB", "N", "Z", "P", "PB")

DEFAULT_RULES: dict[tuple[str, str], str] = {
    ("P", "P"): "PB", ("P", "Z"): "P", ("P", "N"): "Z",
    ("Z", "P"): "P", ("Z", "Z"): "Z", ("Z", "N"): "N",
    ("N", "P"): "Z", ("N", "Z"): "N", ("N", "N"): "NB",
}

DEFAULT_LEVELS: dict[str, float] = {
    "NB": -1.0, "N": -0.5, "Z": 0.0, "P": 0.5, "PB": 1.0,
}

DEFAULT_VERTICES = (-1.0, 0.0, 1.0)


class RuleCoverageError(RuntimeError):
    """No rule fired with meaningful strength (broken membership config)."""


@dataclass(frozen=True)
class RuleTable:
    """Total map from (e label, edot label) to an output label."""

    rules: dict[tuple[str, str], str] = field(
        default_factory=lambda: dict(DEFAULT_RULES))

    def __post_init__(self):
        expected = {(e, d) for e in INPUT_LABELS for d in INPUT_LABELS}
        if set(self.rules) != expected:
            raise ValueError("rule table must cover exactly the 9 "
                             "(e, edot) label pairs")
        bad = {v for v in self.rules.values() if v not in OUTPUT_LABELS}
        if bad:
            raise ValueError(f"unknown output labels: {sorted(bad)}")

    def consequent(self, e_label: str, edot_label: str) -> str:
        return self.rules[(e_label, edot_label)]


def _memberships(x: float, vertices: tuple[float, float, float]
                 ) -> tuple[float, float, float]:
    """Degrees (N, Z, P) at x; sums to 1 for any strictly increasing
    vertex triple."""
    a, b, c = vertices
    if x <= a:
        return 1.0, 0.0, 0.0
    if x >= c:
        return 0.0, 0.0, 1.0
    if x < b:
        n = (b - x) / (b - a)
        return n, 1.0 - n, 0.0
    p = (x - b) / (c - b)
    return 0.0, 1.0 - p, p


def fuzzify(x: float,
            vertices: tuple[float, float, float] = DEFAULT_VERTICES
            ) -> dict[str, float]:
    """Membership degrees of a normalized scalar against the N/Z/P sets."""
    n, z, p = _memberships(x, vertices)
    return {"N": n, "Z": z, "P": p}


@dataclass(frozen=True)
class FlcConfig:
    """Per-link scaling plus the shared inference definition.

    ``ke``/``kde`` scale error and error rate into [-1, +1] (inputs are
    clamped there); ``ku`` scales the normalized crisp output back to a
    torque.  ``levels`` must be antisymmetric around Z so the controller is
    odd; ``vertices`` are the N-peak, Z-peak and P-peak of the membership
    partition.
    """

    ke: np.ndarray
    kde: np.ndarray
    ku: np.ndarray
    vertices: tuple[float, float, float] = DEFAULT_VERTICES
    levels: dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_LEVELS))
    rules: RuleTable = field(default_factory=RuleTable)

    def __post_init__(self):
        for name in ("ke", "kde", "ku"):
            arr = np.asarray(getattr(self, name), dtype=float).reshape(3)
            if not np.isfinite(arr).all():
                raise ValueError(f"{name} must be three finite values")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if (self.ku <= 0).any():
            raise ValueError("ku must be > 0 on every link")
        v = tuple(float(x) for x in self.vertices)
        if len(v) != 3 or not (v[0] < v[1] < v[2]):
            raise ValueError(f"vertices must be strictly increasing, got {v}")
        object.__setattr__(self, "vertices", v)
        if set(self.levels) != set(OUTPUT_LABELS):
            raise ValueError("levels must define exactly NB, N, Z, P, PB")
        lv = self.levels
        if (lv["Z"] != 0.0 or lv["NB"] != -lv["PB"] or lv["N"] != -lv["P"]):
            raise ValueError("output levels must be antisymmetric: "
                             "Z = 0, NB = -PB, N = -P")
        # consequent level indexed [e N/Z/P][edot N/Z/P]; precomputed once,
        # the control loop reads it every step
        object.__setattr__(self, "_grid",
                           [[self.levels[self.rules.consequent(le, ld)]
                             for ld in INPUT_LABELS] for le in INPUT_LABELS])

    def _level_grid(self) -> list[list[float]]:
        return self._grid


def _crisp(x: float, y: float, level_grid: list[list[float]],
           vertices: tuple[float, float, float]) -> float:
    """Normalized Sugeno output for already-clamped inputs, in [-1, +1]."""
    mx = _memberships(x, vertices)
    my = _memberships(y, vertices)
    num = 0.0
    den = 0.0
    for i in range(3):
        wi = mx[i]
        if wi == 0.0:
            continue
        row = level_grid[i]
        for j in range(3):
            w = wi * my[j]
            num += w * row[j]
            den += w
    if den < 1e-9:
        raise RuleCoverageError(
            f"total rule activation {den!r} below 1e-9 at ({x}, {y})")
    return num / den


def flc_control(cfg: FlcConfig, e: np.ndarray, edot: np.ndarray) -> np.ndarray:
    """Fuzzy control torque for the three links, shape (3,)."""
    grid = cfg._level_grid()
    out = np.empty(3)
    for i in range(3):
        x = cfg.ke[i] * e[i]
        y = cfg.kde[i] * edot[i]
        x = -1.0 if x < -1.0 else (1.0 if x > 1.0 else x)
        y = -1.0 if y < -1.0 else (1.0 if y > 1.0 else y)
        out[i] = cfg.ku[i] * _crisp(x, y, grid, cfg.vertices)
    return out


def inference_surface(cfg: FlcConfig, grid_n: int, link: int = 0) -> np.ndarray:
    """Crisp output over the normalized input square, shape
    (grid_n, grid_n).

    Entry [i, j] is the torque at scaled error ``x[i]`` and scaled error
    rate ``y[j]``, where both axes run linearly from -1 to +1, using the
    output gain of ``link``.
    """
    if grid_n < 2:
        raise ValueError(f"grid_n must be >= 2, got {grid_n}")
    grid = cfg._level_grid()
    ku = float(cfg.ku[link])
    axis = np.linspace(-1.0, 1.0, grid_n)
    out = np.empty((grid_n, grid_n))
    for i, x in enumerate(axis):
        for j, y in enumerate(axis):
            out[i, j] = ku * _crisp(float(x), float(y), grid, cfg.vertices)
    return out
