"""Command-line interface.

Subcommands: generate-field, run, converge, bench, compare.  Exit codes:
0 success, 2 configuration error, 3 CFL violation (strict mode),
4 instability, 5 I/O failure, 6 wall-clock budget exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

import numpy as np

from . import __version__, analysis, config as cfg, fieldio
from .errors import (BudgetExceededError, CflViolationError, ConfigError,
                     InstabilityError)
from .grid import build_axes, rho_nodes_closed
from .turbulence import evaluate_fields, sample_modes
from .analysis import initial_nwave, preset_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CFL = 3
EXIT_INSTABILITY = 4
EXIT_IO = 5
EXIT_BUDGET = 6


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--set", type=int, choices=(1, 2, 3, 4),
                        help="Table-1 grid preset")
    parser.add_argument("--out", help="output directory "
                        "(default: $NWAVE_OUTPUT_ROOT/<command>-<timestamp>)")
    parser.add_argument("--threads", type=int, default=None,
                        help="solver threads (0 = hardware default)")
    parser.add_argument("--seed", type=int, default=None, help="turbulence seed")
    for key in ("Sigma", "rho-min", "rho-max", "theta-min", "theta-max"):
        parser.add_argument(f"--{key}", type=float, default=None,
                            dest=key.replace("-", "_"))
    for key in ("N-sigma", "N-rho", "N-theta", "n-modes"):
        parser.add_argument(f"--{key}", type=int, default=None,
                            dest=key.replace("-", "_"))
    parser.add_argument("--absorption", type=float, default=None,
                        help="absorption coefficient A", dest="A")
    parser.add_argument("--nonlinearity", type=float, default=None,
                        help="nonlinearity coefficient B", dest="B")


def _overrides_from(args: argparse.Namespace) -> dict:
    keys = ("Sigma", "rho_min", "rho_max", "theta_min", "theta_max",
            "N_sigma", "N_rho", "N_theta", "A", "B", "n_modes", "seed",
            "set", "threads")
    out = {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}
    for attr, key in (("solver", "solver"), ("precision", "precision"),
                      ("max_hours", "max_hours"), ("strict_cfl", "strict_cfl")):
        value = getattr(args, attr, None)
        if value is not None and value is not False:
            out[key] = value
    return out


def _resolve(args: argparse.Namespace):
    file_values = cfg.read_config_file(args.config) if args.config else {}
    return cfg.resolve(file_values, _overrides_from(args))


def _outdir(args: argparse.Namespace, command: str) -> str:
    path = args.out or os.path.join(
        cfg.output_root(), f"{command}-{time.strftime('%Y%m%d-%H%M%S')}"
    )
    os.makedirs(path, exist_ok=True)
    return path


def _cmd_generate_field(args) -> int:
    domain, turb, run = _resolve(args)
    outdir = _outdir(args, "field")
    spec = sample_modes(turb)
    sigma, _, _ = build_axes(domain)
    rho = rho_nodes_closed(domain)
    fields = evaluate_fields(spec, spec.lam, sigma, rho)

    spec_path = os.path.join(outdir, "modes.txt")
    with open(spec_path, "w") as fh:
        fh.write("# n |K_n| theta_n phi_n U1 U2\n")
        for n in range(spec.n_modes):
            fh.write(f"{n + 1} {spec.wavenumbers[n]:.17g} {spec.angles[n]:.17g} "
                     f"{spec.phases[n]:.17g} {spec.amp1[n]:.17g} "
                     f"{spec.amp2[n]:.17g}\n")
    outputs = [spec_path]
    for name, arr in (("u_par", fields.u_par), ("u_perp", fields.u_perp),
                      ("du_perp_dsigma", fields.du_perp_dsigma),
                      ("du_perp_drho", fields.du_perp_drho)):
        path = os.path.join(outdir, f"{name}.bin")
        fieldio.write_grid_binary(path, arr, domain.d_sigma, domain.d_rho)
        outputs.append(path)

    manifest = cfg.RunManifest.create(domain, turb, run)
    manifest.outputs = [os.path.basename(p) for p in outputs]
    manifest.finished = time.strftime("%Y-%m-%dT%H:%M:%S")
    manifest.write(os.path.join(outdir, "manifest.json"))
    print(f"velocity fields written to {outdir} "
          f"(max|U| = {fields.max_abs():.4f})")
    return EXIT_OK


def _write_snapshots(outdir, report, domain, rho_nodes, theta_nodes, csv=True):
    outputs = []
    for s, snap in sorted(report.snapshots.items()):
        stem = f"V_sigma{s:08.3f}".replace(".", "p")
        bin_path = os.path.join(outdir, stem + ".bin")
        fieldio.write_field_binary(bin_path, snap, domain.d_rho,
                                   domain.d_theta, s)
        outputs.append(bin_path)
        if csv:
            csv_path = os.path.join(outdir, stem + ".csv")
            fieldio.write_field_csv(csv_path, snap, rho_nodes, theta_nodes)
            outputs.append(csv_path)
    return outputs


def _cmd_run(args) -> int:
    if args.manifest:
        manifest_in = cfg.RunManifest.read(args.manifest)
        domain, turb, run = manifest_in.resolved()
    else:
        domain, turb, run = _resolve(args)
    outdir = _outdir(args, "run")
    solver = run["solver"]
    threads = run.get("threads") or 1
    max_seconds = run["max_hours"] * 3600.0 if run.get("max_hours") else None
    cfl_policy = "error" if run.get("strict_cfl") else "warn"

    spec = sample_modes(turb)
    sigma, rho_open, theta = build_axes(domain)
    rho_closed = rho_nodes_closed(domain)
    fields = evaluate_fields(spec, spec.lam, sigma, rho_closed)
    snaps = (args.snapshots if args.snapshots
             else cfg.default_snapshot_sigmas(domain))

    from .splitting import check_cfl_splitting

    print(check_cfl_splitting(domain, run["v_max_bound"],
                              float(np.max(np.abs(fields.u_perp)))))
    manifest = cfg.RunManifest.create(domain, turb, run)

    if solver == "splitting":
        from .splitting import run_splitting

        v0 = initial_nwave(rho_closed, theta, domain.A, domain.B)
        report = run_splitting(domain, v0, fields, snapshot_sigmas=snaps,
                               threads=threads, guard=run["guard"],
                               max_seconds=max_seconds, cfl=cfl_policy,
                               v_max_bound=run["v_max_bound"])
        rho_nodes = rho_closed
    else:
        from .exprk import run_exprk22

        v0 = initial_nwave(rho_open, theta, domain.A, domain.B)
        scheme = "expeuler" if solver == "expeuler" else "exprk22"
        report = run_exprk22(domain, v0, fields, snapshot_sigmas=snaps,
                             scheme=scheme, precision=run["precision"],
                             threads=threads, guard=run["guard"],
                             max_seconds=max_seconds, cfl=cfl_policy,
                             v_max_bound=run["v_max_bound"])
        rho_nodes = rho_open

    outputs = _write_snapshots(outdir, report, domain, rho_nodes, theta)
    timing_path = os.path.join(outdir, "step_timings.csv")
    with open(timing_path, "w") as fh:
        if report.step_nonlinear is not None:
            fh.write("step,t_nonlinear,t_linear\n")
            for i in range(report.n_steps):
                fh.write(f"{i},{report.step_nonlinear[i]:.9f},"
                         f"{report.step_linear[i]:.9f}\n")
        else:
            fh.write("step,t_step\n")
            for i in range(report.n_steps):
                fh.write(f"{i},{report.step_seconds[i]:.9f}\n")
    outputs.append(timing_path)

    manifest.outputs = [os.path.basename(p) for p in outputs]
    manifest.finished = time.strftime("%Y-%m-%dT%H:%M:%S")
    manifest.write(os.path.join(outdir, "manifest.json"))
    print(f"{solver}: {report.n_steps} steps in {report.wall_seconds:.1f} s, "
          f"max|V| = {report.max_abs_v:.3f}; outputs in {outdir}")
    return EXIT_OK


def _cmd_converge(args) -> int:
    domain, turb, run = _resolve(args)
    outdir = _outdir(args, "converge")
    n_list = [int(x) for x in args.n_list.split(",")]
    n_ref = args.n_ref
    import dataclasses as _dc

    domain = _dc.replace(domain, Sigma=args.sigma_end,
                         N_sigma=n_ref) if args.sigma_end else domain
    spec = sample_modes(turb)
    sigma_ref = np.arange(n_ref + 1) * (domain.Sigma / n_ref)
    fields = evaluate_fields(spec, spec.lam, sigma_ref, rho_nodes_closed(domain))
    rows = analysis.convergence_study(domain, n_list, n_ref,
                                      solver=run["solver"],
                                      fields_master=fields,
                                      threads=run.get("threads") or 1)
    path = os.path.join(outdir, "convergence.csv")
    with open(path, "w") as fh:
        fh.write("N_sigma,err,beta\n")
        for row in rows:
            beta = "" if row.beta is None else f"{row.beta:.3f}"
            fh.write(f"{row.n_sigma},{row.err:.6e},{beta}\n")
            print(f"N_sigma={row.n_sigma:5d}  err={row.err:.3e}  beta={beta}")
    print(f"table written to {path}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    domain, turb, run = _resolve(args)
    outdir = _outdir(args, "bench")
    sets = [int(s) for s in args.sets.split(",")]
    rows = analysis.cost_scaling_study(sets, solver=run["solver"],
                                       steps=args.steps, reps=args.reps,
                                       threads=run.get("threads") or 1,
                                       seed=turb.seed)
    path = os.path.join(outdir, "bench.csv")
    with open(path, "w") as fh:
        fh.write("set,solver,per_step_s,growth,exponent,"
                 "per_step_nonlinear_s,per_step_linear_s,total_extrapolated_s,"
                 "variance_flagged\n")
        for row in rows:
            t = row.timing
            growth = "" if row.growth_vs_previous is None else f"{row.growth_vs_previous:.2f}"
            expo = "" if row.growth_exponent is None else f"{row.growth_exponent:.2f}"
            fh.write(f"{row.set_id},{row.solver},{row.per_step_seconds:.6f},"
                     f"{growth},{expo},{t.per_step_nonlinear:.6f},"
                     f"{t.per_step_linear:.6f},{t.total_seconds:.1f},"
                     f"{t.variance_flagged}\n")
            print(f"set {row.set_id} {row.solver:9s} {row.per_step_seconds:.4f} s/step"
                  + (f"  growth x{growth}" if growth else ""))
    print(f"table written to {path}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    domain, turb, run = _resolve(args)
    outdir = _outdir(args, "compare")
    spec = sample_modes(turb)
    sigma, _, theta = build_axes(domain)
    fields = evaluate_fields(spec, spec.lam, sigma, rho_nodes_closed(domain))
    checkpoints = ([float(s) for s in args.sigma_checkpoints.split(",")]
                   if args.sigma_checkpoints else [domain.Sigma])
    report = analysis.compare_solvers(domain, fields, checkpoints,
                                      trace_sigma=args.trace_sigma,
                                      trace_rho=args.trace_rho,
                                      threads=run.get("threads") or 1,
                                      guard=run["guard"])
    path = os.path.join(outdir, "compare.csv")
    with open(path, "w") as fh:
        fh.write("sigma,rel_l2_roi,amplitude_ratio\n")
        for cp in report.checkpoints:
            fh.write(f"{cp.sigma},{cp.rel_l2_roi:.6e},{cp.amplitude_ratio:.4f}\n")
            print(f"sigma={cp.sigma:8.2f}  rel diff={cp.rel_l2_roi:.3e}  "
                  f"amplitude ratio={cp.amplitude_ratio:.3f}")
    if report.overshoot_splitting is not None:
        print(f"max-overshoot at (sigma={args.trace_sigma}, rho={args.trace_rho}): "
              f"splitting={report.overshoot_splitting:.4e} "
              f"exprk22={report.overshoot_exprk22:.4e}")
    print(f"table written to {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nwave",
        description="Sonic-boom N-wave propagation through turbulent media",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-field", help="sample and write velocity fields")
    _add_common(p)

    p = sub.add_parser("run", help="march one solver and write snapshots")
    _add_common(p)
    p.add_argument("--solver", choices=("splitting", "exprk22", "expeuler"))
    p.add_argument("--precision", choices=("double", "single"))
    p.add_argument("--snapshots", type=lambda s: [float(x) for x in s.split(",")],
                   help="comma-separated sigma stations")
    p.add_argument("--max-hours", type=float, default=None)
    p.add_argument("--strict-cfl", action="store_true", default=False)
    p.add_argument("--manifest", help="re-run from a manifest file")

    p = sub.add_parser("converge", help="sigma-convergence study")
    _add_common(p)
    p.add_argument("--solver", choices=("splitting", "exprk22", "expeuler"))
    p.add_argument("--n-list", default="100,150,200,300")
    p.add_argument("--n-ref", type=int, default=1200)
    p.add_argument("--sigma-end", type=float, default=30.0)

    p = sub.add_parser("bench", help="per-step cost across grid sets")
    _add_common(p)
    p.add_argument("--solver", choices=("splitting", "exprk22", "both"),
                   default=None)
    p.add_argument("--sets", default="1,2")
    p.add_argument("--steps", type=int, default=4)
    p.add_argument("--reps", type=int, default=3)

    p = sub.add_parser("compare", help="run both solvers and compare")
    _add_common(p)
    p.add_argument("--sigma-checkpoints", default=None)
    p.add_argument("--trace-sigma", type=float, default=None)
    p.add_argument("--trace-rho", type=float, default=None)
    return parser


_COMMANDS = {
    "generate-field": _cmd_generate_field,
    "run": _cmd_run,
    "converge": _cmd_converge,
    "bench": _cmd_bench,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CflViolationError as exc:
        print(f"CFL violation: {exc}", file=sys.stderr)
        return EXIT_CFL
    except InstabilityError as exc:
        print(f"instability: {exc}", file=sys.stderr)
        return EXIT_INSTABILITY
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
