"""Command-line interface: scenario runs, spot checks, and artifacts.

Subcommands:
  simulate        march the state system under a fixed control (zero by
                  default) and write summary/time-series/snapshot artifacts
  optimize        run the forward-backward sweep and write the same artifact
                  set plus the optimized control heatmaps
  ml-eval         evaluate the Mittag-Leffler kernel at one point
  gradient-check  verify the adjoint gradient against central differences

Artifacts: summary.json (always written, also on failure, with a status
field), timeseries.csv (t, total_S, total_I, total_R, max_I, J_running),
and per-snapshot field dumps as ASCII PGM heatmaps plus CSV grids. All
outputs are byte-reproducible for a fixed config.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    ScenarioConfig,
    config_to_dict,
    load_config,
)
from .errors import (
    AccuracyError,
    ConfigError,
    DomainError,
    InstabilityError,
    PositivityBudgetError,
)
from .forward import fractional_stiffness_ratio, solve_forward
from .optimize import evaluate_objective, forward_backward_sweep, gradient_check
from .spatial import Field
from .special import mittag_leffler
from .trajectories import ControlTrajectory


def render_heatmap(f: Field, lo: float, hi: float) -> bytes:
    """ASCII (P2) PGM of a field, 255 gray levels, rows top to bottom.

    Values map through round-half-up of 255 * clamp((f - lo)/(hi - lo), 0, 1).
    """
    if not lo < hi:
        raise DomainError(f"degenerate heatmap range [{lo}, {hi}]")
    scaled = np.clip((f.values - lo) / (hi - lo), 0.0, 1.0)
    pixels = np.floor(255.0 * scaled + 0.5).astype(int)
    lines = ["P2", f"{f.grid.nx} {f.grid.ny}", "255"]
    for row in pixels[::-1]:  # top of the domain first
        lines.append(" ".join(str(v) for v in row))
    return ("\n".join(lines) + "\n").encode("ascii")


def field_to_csv(f: Field) -> str:
    """One CSV row per grid row, top of the domain first."""
    rows = []
    for row in f.values[::-1]:
        rows.append(",".join(repr(float(v)) for v in row))
    return "\n".join(rows) + "\n"


def _timeseries_csv(traj, control, params) -> str:
    setup = traj.setup
    area = traj.grid.cell_area
    tau = setup.tau
    i_sq = (traj.I ** 2).sum(axis=(1, 2)) * area
    u_sq = (control.u ** 2).sum(axis=(1, 2)) * area
    integrand = i_sq + params.theta * u_sq
    # cumulative trapezoid of the running-cost integrand
    j_running = np.concatenate(
        ([0.0], np.cumsum(0.5 * tau * (integrand[1:] + integrand[:-1])))
    )
    lines = ["t,total_S,total_I,total_R,max_I,J_running"]
    for n in range(setup.n_steps + 1):
        lines.append(
            f"{n * tau!r},{float(traj.S[n].sum() * area)!r},"
            f"{float(traj.I[n].sum() * area)!r},{float(traj.R[n].sum() * area)!r},"
            f"{float(traj.I[n].max())!r},{float(j_running[n])!r}"
        )
    return "\n".join(lines) + "\n"


def _write_snapshots(out_dir: Path, traj, control, snapshot_times, label_controls):
    setup = traj.setup
    grid = traj.grid
    hi_pop = max(50.0, float(max(traj.S.max(), traj.I.max(), traj.R.max())))
    for t_snap in snapshot_times:
        n = int(round(t_snap / setup.tau))
        if not 0 <= n <= setup.n_steps:
            continue
        tag = f"t{t_snap:g}"
        for name, arr, hi in (
            ("S", traj.S[n], hi_pop),
            ("I", traj.I[n], hi_pop),
            ("R", traj.R[n], hi_pop),
        ):
            fld = Field(grid, arr.copy())
            (out_dir / f"{name}_{tag}.pgm").write_bytes(render_heatmap(fld, 0.0, hi))
            (out_dir / f"{name}_{tag}.csv").write_text(field_to_csv(fld))
        if label_controls:
            fld = Field(grid, control.u[n].copy())
            (out_dir / f"u_{tag}.pgm").write_bytes(render_heatmap(fld, 0.0, 1.0))
            (out_dir / f"u_{tag}.csv").write_text(field_to_csv(fld))


def _dump_adjoint(out_dir: Path, adj, snapshot_times) -> None:
    setup = adj.setup
    for t_snap in snapshot_times:
        n = int(round(t_snap / setup.tau))
        if not 0 <= n <= setup.n_steps:
            continue
        tag = f"t{t_snap:g}"
        for name, arr in (("p1", adj.p1[n]), ("p2", adj.p2[n]), ("p3", adj.p3[n])):
            fld = Field(adj.grid, arr.copy())
            (out_dir / f"{name}_{tag}.csv").write_text(field_to_csv(fld))


def _write_summary(out_dir: Path, doc: dict) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "summary.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n"
    )


def _base_summary(cfg: ScenarioConfig, command: str) -> dict:
    return {
        "command": command,
        "version": __version__,
        "alpha": cfg.alpha,
        "alpha_requested": cfg.alpha_requested,
        "alpha_note": (
            f"requested order {cfg.alpha_requested} mapped to {cfg.alpha}: "
            "the fractional family is open at 1"
            if cfg.alpha_requested is not None and cfg.alpha_requested != cfg.alpha
            else None
        ),
        "stiffness_ratio": fractional_stiffness_ratio(cfg),
        "config": config_to_dict(cfg),
    }


def _load_cfg(args) -> ScenarioConfig:
    if args.config is not None:
        text = Path(args.config).read_text(encoding="utf-8")
    else:
        text = "{}"
    doc = json.loads(text) if text.strip() else {}
    if getattr(args, "alpha", None) is not None:
        doc["alpha"] = args.alpha
    if getattr(args, "tau", None) is not None:
        doc.setdefault("time", {})["tau"] = args.tau
    if getattr(args, "out", None) is not None:
        doc.setdefault("outputs", {})["directory"] = args.out
    return load_config(json.dumps(doc))


def _cmd_simulate(args) -> int:
    cfg = _load_cfg(args)
    out_dir = Path(cfg.outputs.directory)
    summary = _base_summary(cfg, "simulate")
    t0 = time.perf_counter()
    try:
        grid = cfg.build_grid()
        setup = cfg.build_setup()
        control = ControlTrajectory.constant(grid, setup.n_steps, args.control)
        traj = solve_forward(cfg, control, grid=grid, setup=setup)
        j = evaluate_objective(traj, control, cfg.params)
        summary.update(
            status="ok",
            j_total=j.total,
            j_infection=j.infection,
            j_terminal=j.terminal,
            j_control=j.control,
            iterations=None,
            converged=None,
            clipped_mass=traj.clipped_mass,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "timeseries.csv").write_text(_timeseries_csv(traj, control, cfg.params))
        _write_snapshots(out_dir, traj, control, cfg.outputs.snapshot_times,
                         label_controls=args.control > 0.0)
        summary["wall_clock_seconds"] = time.perf_counter() - t0
        _write_summary(out_dir, summary)
        return 0
    except (InstabilityError, PositivityBudgetError) as exc:
        summary.update(status="failed", error=str(exc),
                       error_type=type(exc).__name__,
                       wall_clock_seconds=time.perf_counter() - t0)
        _write_summary(out_dir, summary)
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 3


def _cmd_optimize(args) -> int:
    cfg = _load_cfg(args)
    out_dir = Path(cfg.outputs.directory)
    summary = _base_summary(cfg, "optimize")
    t0 = time.perf_counter()
    try:
        report = forward_backward_sweep(cfg)
        j = report.j_history[-1]
        summary.update(
            status="ok" if report.converged else "not_converged",
            j_total=j.total,
            j_infection=j.infection,
            j_terminal=j.terminal,
            j_control=j.control,
            j_uncontrolled=report.j_history[0].total,
            iterations=report.iterations,
            converged=report.converged,
            clipped_mass=report.clipped_mass,
            sweep=report.to_json_dict(),
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "timeseries.csv").write_text(
            _timeseries_csv(report.state, report.control, cfg.params)
        )
        _write_snapshots(out_dir, report.state, report.control,
                         cfg.outputs.snapshot_times, label_controls=True)
        if args.dump_adjoint:
            _dump_adjoint(out_dir, report.adjoint, cfg.outputs.snapshot_times)
        summary["wall_clock_seconds"] = time.perf_counter() - t0
        _write_summary(out_dir, summary)
        return 0
    except (InstabilityError, PositivityBudgetError) as exc:
        summary.update(status="failed", error=str(exc),
                       error_type=type(exc).__name__,
                       wall_clock_seconds=time.perf_counter() - t0)
        _write_summary(out_dir, summary)
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 3


def _cmd_ml_eval(args) -> int:
    value = mittag_leffler(args.alpha, args.xi, args.z)
    print(repr(value))
    return 0


def _cmd_gradient_check(args) -> int:
    if args.config is not None:
        cfg = _load_cfg(args)
    else:
        # desk-scale instance: small grid, short horizon, reaction rates in
        # the well-posed band of the fractional operator
        doc = {
            "grid": {"nx": 4, "ny": 4, "h": 1.0},
            "time": {"t_final": 1.0, "tau": 0.02},
            "params": {"beta": 0.02},
            "guards": {"positivity_budget": 1.0},
        }
        if args.alpha is not None:
            doc["alpha"] = args.alpha
        cfg = load_config(json.dumps(doc))
    err = gradient_check(cfg, n_directions=args.directions, epsilon=args.epsilon)
    print(json.dumps({"max_relative_error": err, "tolerance": args.tolerance,
                      "passed": bool(err <= args.tolerance)}))
    return 0 if err <= args.tolerance else 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abcsir",
        description="Optimal vaccination control of a fractional-time SIR "
                    "reaction-diffusion model",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn in (("simulate", _cmd_simulate), ("optimize", _cmd_optimize)):
        sp = sub.add_parser(name)
        sp.add_argument("--config", help="path to a JSON scenario file")
        sp.add_argument("--alpha", type=float,
                        help="override the fractional order (1.0 maps to 0.999)")
        sp.add_argument("--tau", type=float, help="override the time step")
        sp.add_argument("--out", help="override the output directory")
        if name == "simulate":
            sp.add_argument("--control", type=float, default=0.0,
                            help="constant vaccination rate in [0, 1]")
        else:
            sp.add_argument("--dump-adjoint", action="store_true",
                            help="also dump adjoint field snapshots (debug)")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("ml-eval")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--xi", type=float, default=1.0)
    sp.add_argument("--z", type=float, required=True)
    sp.set_defaults(fn=_cmd_ml_eval)

    sp = sub.add_parser("gradient-check")
    sp.add_argument("--config", help="path to a JSON scenario file")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--directions", type=int, default=5)
    sp.add_argument("--epsilon", type=float, default=1e-4)
    sp.add_argument("--tolerance", type=float, default=0.05)
    sp.set_defaults(fn=_cmd_gradient_check)
    return parser


def run_command(argv) -> int:
    """Dispatch one CLI invocation; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ConfigError, DomainError, AccuracyError, FileNotFoundError) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
              file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))
