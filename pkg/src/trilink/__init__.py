"""Planar 3-link manipulator dynamics with PID, PD and Sugeno fuzzy
set-point controllers, a fixed-step simulator and step-response metrics."""

from .controllers import (PdConfig, PidConfig, PidGains, pd_control,
                          pid_control)
from .config import (ConfigError, ExperimentConfig, default_experiment,
                     load_config)
from .dynamics import (JointState, ManipulatorParams, SingularMassError,
                       forward_dynamics, gravity_vector, mass_matrix,
                       solve_3x3, velocity_vector)
from .fuzzy import (DEFAULT_LEVELS, DEFAULT_RULES, DEFAULT_VERTICES,
                    FlcConfig, RuleCoverageError, RuleTable, flc_control,
                    fuzzify, inference_surface)
from .metrics import (EmptySignalError, StepMetrics, step_metrics,
                      write_metrics_csv)
from .sim import (ControllerConfig, NumericalBlowupError, SimConfig,
                  Trajectory, read_trajectory_csv, rk4_step, run_closed_loop,
                  run_open_loop, step_rk4, write_trajectory_csv)

__version__ = "0.1.0"
