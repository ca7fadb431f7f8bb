"""Command-line entry point: ``shequid-witness <subcommand> [options]``."""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

from . import io
from .analysis import lockin, null_calibration, witness_decision
from .config import ConfigError, ExperimentConfig, SweepSpec, load_config, parse_sweep
from .noise_sim import run_seed, simulate_run
from .summary import format_compensation, format_formfactor, format_phase_table, phase_summary

log = logging.getLogger("shequid_witness")


def _common(p):
    p.add_argument("--config", help="TOML config file (defaults used when omitted)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output path (stdout when omitted, where applicable)")
    p.add_argument("--model", choices=["qg", "cg"])
    p.add_argument("--heater", choices=["on", "off"])
    p.add_argument("--duration", type=float, help="simulated time (s)")
    p.add_argument("--rate", type=float, help="sample rate (Hz)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shequid-witness", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in [
        ("phase", "print masses, timing, form factor and branch phases"),
        ("formfactor", "closed-form and quadrature form factor"),
        ("compensate", "electrostatic field cancelling the gravitational phase"),
        ("simulate", "write a simulated detector time series as CSV"),
    ]:
        _common(sub.add_parser(name, help=helptext))

    p = sub.add_parser("analyze", help="lock-in + null calibration + verdict for a time-series CSV")
    _common(p)
    p.add_argument("series", help="time-series CSV (heater on)")
    p.add_argument("--heater-off", dest="heater_off", help="matching heater-off CSV for the A/B delta")
    p.add_argument("--null-runs", type=int, default=200)
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--cg-threshold", type=float, default=0.05)
    p.add_argument("--harmonics", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--summary-csv", help="also write a one-row machine-readable summary")

    p = sub.add_parser("sweep", help="evaluate summary quantities over one swept parameter")
    _common(p)
    p.add_argument("--spec", help="sweep file (path, values or start/stop/count/scale)")
    p.add_argument("--param", help="dotted parameter path, e.g. geometry.d")
    p.add_argument("--values", type=float, nargs="+")
    p.add_argument("--range", type=float, nargs=3, metavar=("MIN", "MAX", "COUNT"))
    p.add_argument("--scale", choices=["linear", "log"], default="linear")
    p.add_argument("--simulate", action="store_true", help="also simulate + lock-in each point")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def resolve_config(args, base: ExperimentConfig | None = None) -> ExperimentConfig:
    cfg = load_config(args.config) if getattr(args, "config", None) else (base or ExperimentConfig())
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.model is not None:
        changes["model"] = args.model
    if args.heater is not None:
        changes["heater_on"] = args.heater == "on"
    run = {}
    if args.duration is not None:
        run["duration"] = args.duration
    if args.rate is not None:
        run["sample_rate"] = args.rate
    if run:
        changes["run"] = dataclasses.replace(cfg.run, **run)
    return dataclasses.replace(cfg, **changes).validate() if changes else cfg


def _emit(text: str, out, config=None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if config is not None:
                fh.write("\n".join(io.config_comment_lines(config)) + "\n")
    else:
        sys.stdout.write(text)


def cmd_phase(args):
    cfg = resolve_config(args)
    _emit(format_phase_table(cfg), args.out, cfg)


def cmd_formfactor(args):
    cfg = resolve_config(args)
    _emit(format_formfactor(cfg), args.out, cfg)


def cmd_compensate(args):
    cfg = resolve_config(args)
    _emit(format_compensation(cfg), args.out, cfg)


def cmd_simulate(args):
    cfg = resolve_config(args)
    series = simulate_run(cfg)
    if not args.out:
        raise ConfigError("simulate requires --out")
    io.write_timeseries(series, args.out)
    print(f"wrote {len(series)} samples ({cfg.model}, heater {'on' if cfg.heater_on else 'off'}) to {args.out}")


def cmd_analyze(args):
    series = io.read_timeseries(args.series)
    base = series.config
    if args.config:
        base = load_config(args.config)
    if base is None:
        raise ConfigError(f"{args.series} carries no config; pass --config")
    cfg = resolve_config(argparse.Namespace(**{**vars(args), "config": None}), base)
    # the null must match the measured record length and rate
    cfg = dataclasses.replace(cfg, run=dataclasses.replace(cfg.run, duration=series.duration,
                                                           sample_rate=series.sample_rate))
    measured = lockin(series, cfg.drive.f_m, args.harmonics)
    off = None
    if args.heater_off:
        off = lockin(io.read_timeseries(args.heater_off), cfg.drive.f_m, args.harmonics)
    null = null_calibration(cfg, n_runs=args.null_runs, seed=run_seed(cfg.seed, 1_000_003), n_jobs=args.jobs)
    report = witness_decision(measured, null, args.alpha, args.cg_threshold, heater_off=off, config=cfg)
    meta = {"seed": series.seed, "model": series.model, "heater_on": str(series.heater_on).lower()}
    _emit(io.format_report(report, meta), args.out)
    if args.summary_csv:
        io.write_rows_csv(args.summary_csv, io.REPORT_FIELDS, [io.report_row(report, meta)], cfg)


SWEEP_FIELDS = ["index", "value", "rho_s", "mass", "form_factor", "phi_grav", "delta_phi",
                "visibility", "concurrence", "seed", "harmonic1"]


def sweep_point(job):
    """One sweep row; depends only on (index, value, config, master seed)."""
    index, value, cfg, master, simulate = job
    s = phase_summary(cfg)
    seed = run_seed(master, index)
    row = {"index": index, "value": repr(value), "seed": seed, "harmonic1": ""}
    for key in SWEEP_FIELDS[2:9]:
        row[key] = repr(float(s[key]))
    if simulate:
        series = simulate_run(cfg, seed=seed)
        row["harmonic1"] = repr(lockin(series, cfg.drive.f_m, 1).statistic)
    return row


def cmd_sweep(args):
    base = resolve_config(args)
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            spec = parse_sweep(fh.read(), base)
    else:
        if not args.param:
            raise ConfigError("sweep needs --spec or --param")
        if args.range:
            lo, hi, count = args.range
            spec = SweepSpec(args.param, start=lo, stop=hi, count=int(count), scale=args.scale, base=base)
        else:
            spec = SweepSpec(args.param, values=args.values, base=base)
    jobs = [(i, v, c, base.seed, args.simulate) for i, (v, c) in enumerate(zip(spec.points(), spec.configs()))]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_point, jobs))
    else:
        rows = [sweep_point(j) for j in jobs]
    rows.sort(key=lambda r: r["index"])
    fields = ["parameter"] + SWEEP_FIELDS
    for r in rows:
        r["parameter"] = spec.path
    if args.out:
        io.write_rows_csv(args.out, fields, rows, base)
    else:
        import csv
        sys.stdout.write("\n".join(io.config_comment_lines(base)) + "\n")
        w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


COMMANDS = {
    "phase": cmd_phase,
    "formfactor": cmd_formfactor,
    "compensate": cmd_compensate,
    "simulate": cmd_simulate,
    "analyze": cmd_analyze,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
