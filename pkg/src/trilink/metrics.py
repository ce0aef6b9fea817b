"""Step-response characteristics of a single joint-angle time series.

Conventions (fixed, chosen to match the common control-toolbox defaults):

* step size ``delta = reference - initial``; final value ``y_f`` is the
  *last sample* of the series, not the reference;
* rise time: from the first crossing of ``initial + 0.1 delta`` to the first
  crossing of ``initial + 0.9 delta``, both located by linear interpolation
  between adjacent samples;
* settling time: the last instant at which ``|y - y_f|`` exceeds the 2% band
  ``0.02 |delta|``, measured from t = 0 (interpolated re-entry);
* overshoot: peak excursion beyond ``y_f`` toward the step direction, as a
  percentage of ``|delta|``;
* undershoot: peak excursion below the *initial* value against the step
  direction, as a percentage of ``|delta|``;
* steady-state error: ``reference - y_f``.

Because ``y_f`` is the last sample, a response that creeps toward a biased
final value reports zero overshoot together with a nonzero steady-state
error.  A response that never reaches the 90% threshold has no defined rise
or settling time; both are reported as NaN (and serialized as ``NaN``),
never as a fabricated number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

METRICS_HEADER = ("link,controller,rise_time,settling_time,"
                  "overshoot_pct,undershoot_pct,sse")


class EmptySignalError(ValueError):
    """The input series has no samples."""


@dataclass(frozen=True)
class StepMetrics:
    """Five step-response characteristics; times in seconds, overshoot and
    undershoot in percent of the step size, sse in the signal's unit."""

    rise_time: float
    settling_time: float
    overshoot: float
    undershoot: float
    sse: float


def _first_crossing(t: np.ndarray, y: np.ndarray, threshold: float,
                    sign: float) -> float:
    """Interpolated time of the first sample run reaching ``threshold`` in
    the step direction; NaN when never reached."""
    reached = np.nonzero(sign * (y - threshold) >= 0.0)[0]
    if len(reached) == 0:
        return math.nan
    k = reached[0]
    if k == 0:
        return float(t[0])
    y0, y1 = y[k - 1], y[k]
    if y1 == y0:
        return float(t[k])
    frac = (threshold - y0) / (y1 - y0)
    return float(t[k - 1] + frac * (t[k] - t[k - 1]))


def step_metrics(times: np.ndarray, y: np.ndarray, reference: float,
                 initial: float) -> StepMetrics:
    """Characterize one uniformly sampled step response."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.size == 0 or t.size == 0:
        raise EmptySignalError("signal is empty")
    if t.shape != y.shape:
        raise ValueError("times and signal must have equal length")
    delta = reference - initial
    if delta == 0.0:
        raise ValueError("reference must differ from the initial value")
    sign = 1.0 if delta > 0 else -1.0
    y_f = float(y[-1])

    t10 = _first_crossing(t, y, initial + 0.1 * delta, sign)
    t90 = _first_crossing(t, y, initial + 0.9 * delta, sign)
    if math.isnan(t90):
        rise = math.nan
        settling = math.nan
    else:
        rise = t90 - t10
        dev = np.abs(y - y_f)
        band = 0.02 * abs(delta)
        outside = np.nonzero(dev > band)[0]
        if len(outside) == 0:
            settling = 0.0
        else:
            k = outside[-1]
            if k + 1 >= len(t):
                # last sample is y_f itself (deviation 0 <= band), so an
                # exceeding run always ends before the end; guard anyway
                settling = float(t[k])
            else:
                d0 = dev[k] - band
                d1 = dev[k + 1] - band
                frac = d0 / (d0 - d1) if d0 != d1 else 1.0
                settling = float(t[k] + frac * (t[k + 1] - t[k]))

    overshoot = max(0.0, float(np.max((y - y_f) * sign))) / abs(delta) * 100.0
    undershoot = max(0.0, float(np.max((initial - y) * sign))) / abs(delta) * 100.0
    sse = reference - y_f
    return StepMetrics(rise_time=rise, settling_time=settling,
                       overshoot=overshoot, undershoot=undershoot, sse=sse)


def _fmt(v: float) -> str:
    return "NaN" if math.isnan(v) else f"{v:.17g}"


def write_metrics_csv(rows: list[tuple[int, str, StepMetrics]], path) -> None:
    """Write ``(link, controller, metrics)`` rows as the comparison table."""
    with open(path, "w", newline="") as fh:
        fh.write(METRICS_HEADER + "\n")
        for link, controller, m in rows:
            fh.write(",".join([str(link), controller, _fmt(m.rise_time),
                               _fmt(m.settling_time), _fmt(m.overshoot),
                               _fmt(m.undershoot), _fmt(m.sse)]) + "\n")
