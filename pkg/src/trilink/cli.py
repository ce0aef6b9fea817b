"""Command-line harness.

Three subcommands, all driven by an experiment config file:

* ``openloop``  -- unforced run; writes ``openloop.csv`` (+ figure)
* ``compare``   -- every configured controller against the same step
  set-point; writes one trajectory CSV per controller, a consolidated
  ``comparison.csv`` of step metrics and per-link comparison figures, and
  prints the metric tables
* ``surface``   -- fuzzy inference surface on a 101x101 normalized grid;
  writes ``surface.csv`` (+ figure)

Exit codes: 0 success, 1 configuration error, 2 numerical failure
(state blow-up or inertia-matrix singularity).  A ``compare`` run keeps
going when one controller fails numerically and flags it at the end.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig, load_config
from .dynamics import SingularMassError
from .fuzzy import inference_surface
from .metrics import StepMetrics, step_metrics, write_metrics_csv
from .sim import (NumericalBlowupError, Trajectory, run_closed_loop,
                  run_open_loop, write_trajectory_csv)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

SURFACE_GRID = 101
SURFACE_HEADER = "e_norm,edot_norm,u"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trilink",
        description="planar 3-link manipulator set-point control experiments")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("openloop", "simulate the unforced plant"),
                           ("compare", "compare all configured controllers"),
                           ("surface", "export the fuzzy control surface")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("config", help="experiment config file")
        p.add_argument("--output-dir", help="override the output directory")
        p.add_argument("--dt", type=float, help="override the step size [s]")
        p.add_argument("--t-end", type=float,
                       help="override the horizon [s]")
        p.add_argument("--step-amplitude", type=float,
                       help="set the reference to initial_q plus this "
                            "amplitude on every link [rad]")
        p.add_argument("--no-figures", action="store_true",
                       help="skip figure rendering")
    return parser


def _apply_overrides(cfg: ExperimentConfig,
                     args: argparse.Namespace) -> ExperimentConfig:
    changes = {}
    if args.output_dir is not None:
        changes["output_dir"] = args.output_dir
    if args.dt is not None:
        changes["dt"] = args.dt
    if args.t_end is not None:
        changes["t_end"] = args.t_end
    if args.step_amplitude is not None:
        changes["reference"] = cfg.initial.q + args.step_amplitude
    return replace(cfg, **changes) if changes else cfg


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_openloop(cfg: ExperimentConfig, figures: bool = True) -> int:
    out = _out_dir(cfg)
    try:
        sim = cfg.sim_config(None)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    code = EXIT_OK
    try:
        traj = run_open_loop(sim)
    except NumericalBlowupError as exc:
        print(f"error: open-loop run diverged: {exc}", file=sys.stderr)
        traj = exc.partial
        code = EXIT_NUMERICAL
    except SingularMassError as exc:
        print(f"error: inertia matrix singular: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    write_trajectory_csv(traj, out / "openloop.csv")
    if figures:
        from .report import render_open_loop
        render_open_loop(traj, out / "openloop.png")
    return code


def _metric_rows(results: dict[str, Trajectory | None],
                 cfg: ExperimentConfig
                 ) -> list[tuple[int, str, StepMetrics]]:
    nan = StepMetrics(*(math.nan,) * 5)
    rows = []
    for link in range(3):
        for name, traj in results.items():
            if traj is None:
                rows.append((link + 1, name, nan))
                continue
            m = step_metrics(traj.times, traj.q[:, link],
                             float(cfg.reference[link]),
                             float(cfg.initial.q[link]))
            rows.append((link + 1, name, m))
    return rows


def _print_tables(rows: list[tuple[int, str, StepMetrics]],
                  cfg: ExperimentConfig) -> None:
    names = list(dict.fromkeys(name for _, name, _ in rows))
    fields = (("rise time [s]", "rise_time"),
              ("settling time [s]", "settling_time"),
              ("overshoot [%]", "overshoot"),
              ("undershoot [%]", "undershoot"),
              ("steady-state error [rad]", "sse"))
    for link in range(1, 4):
        per = {name: m for lk, name, m in rows if lk == link}
        step = cfg.reference[link - 1] - cfg.initial.q[link - 1]
        print(f"\nLink {link} (set-point {cfg.reference[link - 1]:.4f} rad, "
              f"step {step:+.4f} rad)")
        header = "  {:<26}".format("characteristic")
        header += "".join(f"{n:>14}" for n in names)
        print(header)
        for label, attr in fields:
            line = f"  {label:<26}"
            for n in names:
                v = getattr(per[n], attr)
                line += f"{'NaN':>14}" if math.isnan(v) else f"{v:>14.6g}"
            print(line)


def cmd_compare(cfg: ExperimentConfig, figures: bool = True) -> int:
    out = _out_dir(cfg)
    results: dict[str, Trajectory | None] = {}
    failed: list[str] = []
    for name in cfg.controllers:
        try:
            sim = cfg.sim_config(name)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        try:
            traj = run_closed_loop(sim)
        except NumericalBlowupError as exc:
            print(f"warning: controller '{name}' diverged: {exc}",
                  file=sys.stderr)
            write_trajectory_csv(exc.partial, out / f"{name}.csv")
            results[name] = None
            failed.append(name)
            continue
        except SingularMassError as exc:
            print(f"warning: controller '{name}' hit a singular inertia "
                  f"matrix: {exc}", file=sys.stderr)
            results[name] = None
            failed.append(name)
            continue
        write_trajectory_csv(traj, out / f"{name}.csv")
        results[name] = traj
    rows = _metric_rows(results, cfg)
    write_metrics_csv(rows, out / "comparison.csv")
    _print_tables(rows, cfg)
    if figures:
        from .report import render_link_comparison
        complete = {n: t for n, t in results.items() if t is not None}
        if complete:
            for link in range(3):
                render_link_comparison(complete, float(cfg.reference[link]),
                                       link, out / f"link{link + 1}_response.png")
    if failed:
        print(f"warning: numerical failure in: {', '.join(failed)}",
              file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_surface(cfg: ExperimentConfig, figures: bool = True) -> int:
    flc = cfg.controllers.get("flc")
    if flc is None:
        print("error: config has no [controller.flc] section",
              file=sys.stderr)
        return EXIT_CONFIG
    out = _out_dir(cfg)
    surface = inference_surface(flc, SURFACE_GRID)
    axis = np.linspace(-1.0, 1.0, SURFACE_GRID)
    with open(out / "surface.csv", "w", newline="") as fh:
        fh.write(SURFACE_HEADER + "\n")
        for i in range(SURFACE_GRID):
            for j in range(SURFACE_GRID):
                fh.write(f"{axis[i]:.17g},{axis[j]:.17g},"
                         f"{surface[i, j]:.17g}\n")
    if figures:
        from .report import render_surface
        render_surface(surface, out / "surface.png")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg = _apply_overrides(cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    figures = not args.no_figures
    if args.command == "openloop":
        return cmd_openloop(cfg, figures)
    if args.command == "compare":
        return cmd_compare(cfg, figures)
    return cmd_surface(cfg, figures)


if __name__ == "__main__":
    sys.exit(main())
