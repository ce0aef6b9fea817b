import time

import numpy as np
import pytest

from trilink import default_experiment, run_closed_loop, step_metrics


@pytest.fixture(scope="session")
def experiment():
    return default_experiment()


@pytest.fixture(scope="session")
def params(experiment):
    return experiment.params


@pytest.fixture(scope="session")
def compare_runs(experiment):
    """Closed-loop trajectories, per-link metrics and total wall time of the
    default comparison experiment.  Shared across tests; each run is
    deterministic so sharing is safe."""
    t0 = time.perf_counter()
    trajectories = {name: run_closed_loop(experiment.sim_config(name))
                    for name in experiment.controllers}
    wall = time.perf_counter() - t0
    metrics = {
        name: [step_metrics(traj.times, traj.q[:, i],
                            float(experiment.reference[i]),
                            float(experiment.initial.q[i]))
               for i in range(3)]
        for name, traj in trajectories.items()
    }
    return trajectories, metrics, wall
