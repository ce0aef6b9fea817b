"""Experiment configuration: plant parameters, set-point protocol and the
named controller bank, loadable from an INI-style file.

The default experiment steps all three joints by +0.5 rad onto the
torque-free pose ``[pi/2, pi, pi]`` (gravity vanishes there, so a pure PD
law has zero steady-state error).  The approach corridor matters: the
model's inertia matrix is positive definite only for sufficiently folded
elbow/wrist angles, and trajectories that enter the indefinite band cross a
singularity of the matrix and diverge.  Both the default initial pose and
the default set-point sit safely inside the positive-definite region; runs
started from the stretched-out zero pose blow up within a fraction of a
second, which the simulator reports as a numerical failure.

Fuzzy output gains ``ku`` are calibration constants: per link, the smallest
power of two from the 8..512 grid for which the default experiment converges
to within 0.01 rad and keeps the fuzzy controller's response slower than
PID's with smaller overshoot (ku1 is one grid notch above the bare minimum,
whose settling time fell within 8% of the horizon end).
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass

import numpy as np

from .controllers import PdConfig, PidConfig
from .dynamics import JointState, ManipulatorParams
from .fuzzy import DEFAULT_LEVELS, DEFAULT_VERTICES, FlcConfig, RuleTable
from .sim import ControllerConfig, SimConfig


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending
    section/key."""


# plant defaults: unit masses and inertias, half-metre links
DEFAULT_PARAMS = dict(m1=1.0, m2=1.0, m3=1.0, L1=0.5, L2=0.5, L3=0.5,
                      J1=0.5, J2=0.5, J3=0.5, g=9.81)

DEFAULT_REFERENCE = (math.pi / 2, math.pi, math.pi)
DEFAULT_STEP = 0.5
DEFAULT_INITIAL_Q = tuple(r - DEFAULT_STEP for r in DEFAULT_REFERENCE)

# hand-tuned per-link feedback gains
PID_GAINS = dict(kp=(90.0, 100.0, 75.0), ki=(1.0, 1.0, 1.0),
                 kd=(90.0, 15.0, 15.0))
PD_GAINS = dict(kp=(76.599, 205.0, 60.795), kd=(21.999, 13.799, 8.549))
FLC_SCALES = dict(ke=(20.0, 67.0, 65.0), kde=(9.275, 13.275, 11.975))
# calibrated output gains, see module docstring
FLC_KU = (32.0, 16.0, 16.0)

_PARAM_KEYS = ("m1", "m2", "m3", "l1", "l2", "l3", "j1", "j2", "j3", "g")
_RULE_KEYS = tuple(f"rule_{e.lower()}{d.lower()}"
                   for e in ("P", "Z", "N") for d in ("P", "Z", "N"))


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one comparison experiment needs."""

    params: ManipulatorParams
    reference: np.ndarray
    initial: JointState
    controllers: dict[str, ControllerConfig]
    dt: float = 1e-3
    t_end: float = 10.0
    output_dir: str = "results"

    def __post_init__(self):
        if not self.controllers:
            raise ConfigError("at least one controller entry is required")
        ref = np.asarray(self.reference, dtype=float).reshape(3)
        ref.flags.writeable = False
        object.__setattr__(self, "reference", ref)

    def sim_config(self, controller: str | None) -> SimConfig:
        """Simulation setup for one named controller (None = open loop)."""
        ctl = None if controller is None else self.controllers[controller]
        return SimConfig(params=self.params, reference=self.reference,
                         initial=self.initial, controller=ctl,
                         dt=self.dt, t_end=self.t_end)


def default_experiment() -> ExperimentConfig:
    """The built-in experiment: plant table, +0.5 rad steps, all three
    controllers with their tuned gains."""
    return ExperimentConfig(
        params=ManipulatorParams(**DEFAULT_PARAMS),
        reference=np.array(DEFAULT_REFERENCE),
        initial=JointState(q=np.array(DEFAULT_INITIAL_Q), qdot=np.zeros(3)),
        controllers={
            "pid": PidConfig(**{k: np.array(v) for k, v in PID_GAINS.items()}),
            "pd": PdConfig(**{k: np.array(v) for k, v in PD_GAINS.items()}),
            "flc": FlcConfig(ke=np.array(FLC_SCALES["ke"]),
                             kde=np.array(FLC_SCALES["kde"]),
                             ku=np.array(FLC_KU)),
        },
    )


def _parse_floats(raw: str, n: int, where: str) -> np.ndarray:
    parts = raw.split()
    if len(parts) != n:
        raise ConfigError(f"{where}: expected {n} values, got {len(parts)}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _parse_float(raw: str, where: str) -> float:
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


class _Section:
    """One config section with required-key accounting."""

    def __init__(self, name: str, items: dict[str, str]):
        self.name = name
        self.items = dict(items)
        self.seen: set[str] = set()

    def take(self, key: str, required: bool = True) -> str | None:
        self.seen.add(key)
        if key not in self.items:
            if required:
                raise ConfigError(f"[{self.name}] is missing key '{key}'")
            return None
        return self.items[key]

    def vector(self, key: str, n: int = 3) -> np.ndarray:
        return _parse_floats(self.take(key), n, f"[{self.name}] {key}")

    def scalar(self, key: str) -> float:
        return _parse_float(self.take(key), f"[{self.name}] {key}")

    def finish(self):
        unknown = set(self.items) - self.seen
        if unknown:
            raise ConfigError(
                f"[{self.name}] has unknown key '{sorted(unknown)[0]}'")


def _parse_flc(sec: _Section) -> FlcConfig:
    ke = sec.vector("ke")
    kde = sec.vector("kde")
    ku = sec.vector("ku")
    raw_vertices = sec.take("vertices", required=False)
    vertices = (DEFAULT_VERTICES if raw_vertices is None else
                tuple(_parse_floats(raw_vertices, 3,
                                    f"[{sec.name}] vertices")))
    rules = dict()
    for key in _RULE_KEYS:
        raw = sec.take(key, required=False)
        e, d = key[-2].upper(), key[-1].upper()
        if raw is None:
            rules[(e, d)] = RuleTable().consequent(e, d)
        elif raw.upper() in ("NB", "N", "Z", "P", "PB"):
            rules[(e, d)] = raw.upper()
        else:
            raise ConfigError(f"[{sec.name}] {key}: unknown label '{raw}'")
    try:
        return FlcConfig(ke=ke, kde=kde, ku=ku, vertices=vertices,
                         levels=dict(DEFAULT_LEVELS),
                         rules=RuleTable(rules))
    except ValueError as exc:
        raise ConfigError(f"[{sec.name}]: {exc}") from None


def load_config(path) -> ExperimentConfig:
    """Parse an experiment file; raises :class:`ConfigError` with the
    offending section/key on any problem."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path) as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None

    sections = {name: _Section(name, dict(parser.items(name)))
                for name in parser.sections()}

    known = {"params", "sim", "output"}
    for name in sections:
        if name not in known and not name.startswith("controller."):
            raise ConfigError(f"unknown section [{name}]")

    if "params" not in sections:
        raise ConfigError("missing section [params]")
    psec = sections["params"]
    raw = {key: psec.scalar(key) for key in _PARAM_KEYS}
    psec.finish()
    try:
        params = ManipulatorParams(
            m1=raw["m1"], m2=raw["m2"], m3=raw["m3"],
            L1=raw["l1"], L2=raw["l2"], L3=raw["l3"],
            J1=raw["j1"], J2=raw["j2"], J3=raw["j3"], g=raw["g"])
    except ValueError as exc:
        raise ConfigError(f"[params]: {exc}") from None

    if "sim" not in sections:
        raise ConfigError("missing section [sim]")
    ssec = sections["sim"]
    dt = ssec.scalar("dt")
    t_end = ssec.scalar("t_end")
    reference = ssec.vector("reference")
    initial_q = ssec.vector("initial_q")
    initial_qdot = ssec.vector("initial_qdot")
    ssec.finish()
    try:
        initial = JointState(q=initial_q, qdot=initial_qdot)
    except ValueError as exc:
        raise ConfigError(f"[sim] initial state: {exc}") from None

    output_dir = "results"
    if "output" in sections:
        osec = sections["output"]
        output_dir = osec.take("dir")
        osec.finish()

    controllers: dict[str, ControllerConfig] = {}
    for name, sec in sections.items():
        if not name.startswith("controller."):
            continue
        kind = name[len("controller."):]
        try:
            if kind == "pid":
                controllers[kind] = PidConfig(kp=sec.vector("kp"),
                                              ki=sec.vector("ki"),
                                              kd=sec.vector("kd"))
            elif kind == "pd":
                controllers[kind] = PdConfig(kp=sec.vector("kp"),
                                             kd=sec.vector("kd"))
            elif kind == "flc":
                controllers[kind] = _parse_flc(sec)
            else:
                raise ConfigError(f"unknown controller section [{name}]")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"[{name}]: {exc}") from None
        sec.finish()
    if not controllers:
        raise ConfigError("no [controller.*] section found")

    try:
        return ExperimentConfig(params=params, reference=reference,
                                initial=initial, controllers=controllers,
                                dt=dt, t_end=t_end, output_dir=output_dir)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
