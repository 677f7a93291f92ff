"""Command-line front end of the bench."""

from __future__ import annotations

import argparse
import csv
import sys

import yaml

from . import kernels
from .config import BenchConfig, load_config
from .errors import BenchError
from .mppt import identify_params, mpp_locus, optimal_load_constant, optimal_tsr
from .reference import REFERENCE_WIND_SPEEDS
from .runtime import report_table, run_scenario
from .server import serve
from .turbine import RADS_TO_RPM, power_curve


def _add_config_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        metavar="FILE",
        default=None,
        help="bench config file (YAML); defaults apply when omitted",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="windbench",
        description="Software laboratory bench for a wind energy conversion system.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a configured scenario to completion")
    _add_config_arg(p_run)
    p_run.add_argument("scenario", help="scenario name from the config")
    p_run.add_argument("--log", metavar="FILE", help="write the full-rate CSV log here")
    p_run.add_argument("--summary", metavar="FILE", help="write the YAML summary here")

    p_table = sub.add_parser(
        "table", help="maximum-power table with the bundled measured column"
    )
    _add_config_arg(p_table)
    p_table.add_argument(
        "--speeds",
        type=float,
        nargs="+",
        metavar="V",
        help="wind speeds in m/s (default: the nine recorded speeds)",
    )
    p_table.add_argument(
        "--eta", type=float, default=None, help="conversion efficiency override"
    )
    p_table.add_argument(
        "--format", choices=("text", "csv"), default="text", help="output format"
    )

    p_curve = sub.add_parser("curve", help="power curve at fixed wind speed")
    _add_config_arg(p_curve)
    p_curve.add_argument("--wind", type=float, required=True, help="wind speed in m/s")
    p_curve.add_argument("--points", type=int, default=25, help="grid size")
    p_curve.add_argument(
        "--omega-max",
        type=float,
        default=None,
        help="grid upper bound in rad/s (default: twice the optimal speed)",
    )
    p_curve.add_argument(
        "--format", choices=("text", "csv"), default="text", help="output format"
    )

    p_mppt = sub.add_parser("mppt", help="optimal TSR, peak Cp and the MPP locus")
    _add_config_arg(p_mppt)

    p_ident = sub.add_parser(
        "identify", help="recover rotor radius from (v, p, omega) samples"
    )
    _add_config_arg(p_ident)
    p_ident.add_argument("samples", help="CSV file with columns v, p, omega")

    p_serve = sub.add_parser("serve", help="run the live bench service")
    _add_config_arg(p_serve)
    p_serve.add_argument(
        "--listen",
        default="127.0.0.1:8765",
        metavar="HOST:PORT",
        help="listen address (default 127.0.0.1:8765)",
    )
    p_serve.add_argument(
        "--scenario", default="const8", help="scenario to load at startup"
    )
    p_serve.add_argument(
        "--free-run",
        action="store_true",
        help="step as fast as possible instead of pacing to wall time",
    )
    return parser


def _cmd_run(args, config: BenchConfig) -> int:
    scenario = config.scenario(args.scenario)
    result = run_scenario(
        scenario, config, log_path=args.log, summary_path=args.summary
    )
    print(f"scenario {args.scenario!r}: {result.summary.steps} steps "
          f"at dt={result.summary.dt} ({kernels.backend_name()} kernel)")
    print(yaml.safe_dump(result.summary.as_dict(), sort_keys=True), end="")
    if args.log:
        print(f"log written to {args.log}")
    if args.summary:
        print(f"summary written to {args.summary}")
    return 0


def _cmd_table(args, config: BenchConfig) -> int:
    speeds = args.speeds if args.speeds else list(REFERENCE_WIND_SPEEDS)
    rows = report_table(config, speeds=speeds, eta_conv=args.eta)
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(
            ["v", "p_wt", "omega", "rpm", "p_est", "p_gen_ref", "exceeds_estimate"]
        )
        for r in rows:
            ref = "" if r.p_gen_ref is None else f"{r.p_gen_ref:.2f}"
            flag = "" if r.p_gen_ref is None else str(int(r.exceeds_estimate))
            writer.writerow(
                [r.wind_speed, f"{r.p_wt:.2f}", f"{r.omega:.2f}", f"{r.rpm:.2f}",
                 f"{r.p_est:.2f}", ref, flag]
            )
        return 0
    print(f"{'v (m/s)':>8} {'P_wt (W)':>10} {'omega':>8} {'n (rpm)':>9} "
          f"{'P_est (W)':>10} {'P_gen (W)':>10}")
    any_exceeds = False
    for r in rows:
        ref = "-" if r.p_gen_ref is None else f"{r.p_gen_ref:.2f}"
        mark = ""
        if r.exceeds_estimate:
            mark = " *"
            any_exceeds = True
        print(f"{r.wind_speed:>8.2f} {r.p_wt:>10.2f} {r.omega:>8.2f} "
              f"{r.rpm:>9.2f} {r.p_est:>10.2f} {ref:>10}{mark}")
    if any_exceeds:
        print("* measured P_gen exceeds the efficiency estimate; the bench")
        print("  reports this hardware effect but does not model it")
    return 0


def _cmd_curve(args, config: BenchConfig) -> int:
    if args.wind <= 0.0:
        print("wind speed must be positive", file=sys.stderr)
        return 2
    if args.points < 2:
        print("need at least 2 grid points", file=sys.stderr)
        return 2
    lam_star, _ = optimal_tsr(config.turbine)
    omega_star = lam_star * args.wind / config.turbine.rotor_radius
    omega_hi = args.omega_max if args.omega_max is not None else 2.0 * omega_star
    grid = [omega_hi * (i + 1) / args.points for i in range(args.points)]
    points = power_curve(args.wind, grid, config.turbine)
    if args.format == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(["omega", "tsr", "power", "torque"])
        for p in points:
            writer.writerow(
                [f"{p.rotor_speed:.4f}", f"{p.tsr:.4f}", f"{p.power:.2f}",
                 f"{p.torque:.2f}"]
            )
        return 0
    print(f"power curve at v = {args.wind} m/s "
          f"(optimum: omega = {omega_star:.2f} rad/s)")
    print(f"{'omega':>8} {'tsr':>7} {'P (W)':>10} {'T (N·m)':>9}")
    for p in points:
        print(f"{p.rotor_speed:>8.2f} {p.tsr:>7.3f} {p.power:>10.2f} {p.torque:>9.2f}")
    return 0


def _cmd_mppt(args, config: BenchConfig) -> int:
    result = mpp_locus(list(REFERENCE_WIND_SPEEDS), config.turbine)
    k_opt = optimal_load_constant(config.turbine)
    print(f"lambda* = {result.lambda_star:.4f}")
    print(f"Cp*     = {result.cp_star:.4f}")
    print(f"k_opt   = {k_opt:.4f} N·m·s²/rad² (T_load = k_opt·omega²)")
    print(f"{'v (m/s)':>8} {'omega*':>8} {'n* (rpm)':>9} {'P* (W)':>10} {'T* (N·m)':>9}")
    for p in result.points:
        print(f"{p.wind_speed:>8.2f} {p.rotor_speed:>8.2f} "
              f"{p.rotor_speed * RADS_TO_RPM:>9.2f} {p.power:>10.2f} {p.torque:>9.2f}")
    return 0


def _cmd_identify(args, config: BenchConfig) -> int:
    samples = []
    with open(args.samples, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = set(reader.fieldnames or ())
        if not {"v", "p", "omega"} <= fields:
            print("samples CSV needs columns v, p, omega", file=sys.stderr)
            return 2
        for row in reader:
            samples.append((float(row["v"]), float(row["p"]), float(row["omega"])))
    result = identify_params(samples, config.turbine.air_density, config.turbine)
    print(f"rotor_radius = {result.rotor_radius:.4f} m")
    print(f"cp_star      = {result.cp_star:.4f}")
    print(f"lambda_star  = {result.lambda_star:.4f}")
    print(f"residuals    = (tsr {result.tsr_residual:.2e}, cp {result.cp_residual:.2e})")
    return 0


def _cmd_serve(args, config: BenchConfig) -> int:
    host, sep, port_text = args.listen.rpartition(":")
    if not sep or not host:
        print(f"--listen must be HOST:PORT, got {args.listen!r}", file=sys.stderr)
        return 2
    try:
        port = int(port_text)
    except ValueError:
        print(f"invalid port {port_text!r}", file=sys.stderr)
        return 2
    serve(config, host=host, port=port, scenario=args.scenario, pace=not args.free_run)
    return 0


_HANDLERS = {
    "run": _cmd_run,
    "table": _cmd_table,
    "curve": _cmd_curve,
    "mppt": _cmd_mppt,
    "identify": _cmd_identify,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return _HANDLERS[args.command](args, config)
    except BenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
