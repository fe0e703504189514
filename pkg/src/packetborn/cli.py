"""Command-line front end: ``packetborn <subcommand> ...``.

Exit status: 0 on success, 1 on usage or configuration errors, 2 when any
integral failed to converge (all rows are still written).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

import numpy as np

from . import __version__
from .born import born_gaussian, born_hydrogen, born_numeric
from .model import CustomRadial, GaussianWell, HydrogenGround, PacketSpec, validate_regime
from .scan import (
    INF_SIGMA,
    ConfigError,
    ScanConfig,
    default_threads,
    run_figure,
    run_scan,
    _compile_expr,
)


EXIT_OK, EXIT_USAGE, EXIT_UNCONVERGED = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def _sigma_label(x) -> str:
    return "inf" if x == INF_SIGMA else fmt(x)


def write_csv(stream, columns, rows, config, formatters=None):
    """CSV with ``#`` comment header: tool version and effective config."""
    formatters = formatters or {}
    stream.write(f"# packetborn {__version__}\n")
    stream.write("# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        cells = [formatters.get(c, fmt)(v) for c, v in zip(columns, row)]
        stream.write(",".join(cells) + "\n")


def _floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _add_output(p):
    p.add_argument("-o", "--output", help="write CSV here instead of stdout")
    p.add_argument("--manifest", help="write a JSON run manifest to this path")


def _add_packet(p, defaults=True):
    d = (lambda v: v) if defaults else (lambda v: None)
    p.add_argument("--model", choices=("gauss-gauss", "hydrogen", "custom"), default=d("gauss-gauss"))
    p.add_argument("--pa", type=float, default=d(10.0), help="p_i a")
    p.add_argument("--sigma", type=float, default=d(1.0), help="sigma_perp / a")
    p.add_argument("--sigma-z", dest="sigma_z", type=float, default=d(10.0), help="sigma_z / a")
    p.add_argument("--b", type=float, default=d(0.0), help="impact parameter b / a")
    p.add_argument("--n-e", dest="n_e", type=float, default=d(1.0), help="particles per packet")
    p.add_argument("--v", type=float, default=d(1.0), help="Gaussian well depth in 1/(m a^2)")
    p.add_argument("--potential-expr", dest="potential_expr", default=None,
                   help="custom U(r) as a numpy expression in r (units of a)")
    p.add_argument("--r-cut", dest="r_cut", type=float, default=d(20.0))
    p.add_argument("--kinematics", choices=("exact", "small-angle"), default=d("exact"))
    p.add_argument("--tol", type=float, default=d(1e-8))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="packetborn", description="Born scattering of Gaussian wave packets")
    parser.add_argument("--version", action="version", version=f"packetborn {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("amplitude", help="tabulate the plane-wave Born amplitude f(q)")
    p.add_argument("--model", choices=("gauss-gauss", "hydrogen", "custom"), default="gauss-gauss")
    p.add_argument("--v", type=float, default=1.0)
    p.add_argument("--potential-expr", dest="potential_expr")
    p.add_argument("--r-cut", dest="r_cut", type=float, default=20.0)
    p.add_argument("--q-min", type=float, default=0.0)
    p.add_argument("--q-max", type=float, default=10.0)
    p.add_argument("--count", type=int, default=21)
    p.add_argument("--numeric", action="store_true", help="use the numeric radial transform")
    p.add_argument("--tol", type=float, default=1e-10)
    _add_output(p)

    for name, doc in (("events", "differential number of events"), ("avg-xsec", "averaged cross section")):
        p = sub.add_parser(name, help=doc)
        _add_packet(p)
        p.add_argument("--theta", type=_floats, default=(0.0,), help="comma-separated polar angles")
        p.add_argument("--phi", type=_floats, default=(0.0,), help="comma-separated azimuths")
        p.add_argument("--threads", type=int, default=None)
        _add_output(p)

    p = sub.add_parser("scan", help="run a JSON-configured scan")
    p.add_argument("--config", required=True, help="path to the JSON scan config")
    _add_packet(p, defaults=False)
    p.add_argument("--theta", type=_floats, default=None)
    p.add_argument("--phi", type=_floats, default=None)
    p.add_argument("--quantity", choices=("events", "avg-xsec", "ratio-to-standard", "total-ratio", "B2"))
    p.add_argument("--normalize", choices=("none", "theta0", "phi0"))
    p.add_argument("--threads", type=int, default=None)
    _add_output(p)

    p = sub.add_parser("figure", help="regenerate the data behind a figure")
    p.add_argument("number", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--model", choices=("gauss-gauss", "hydrogen"))
    p.add_argument("--kinematics", choices=("exact", "small-angle"))
    p.add_argument("--threads", type=int, default=None)
    _add_output(p)

    p = sub.add_parser("validate", help="report the approximation-regime ratios")
    _add_packet(p)
    p.add_argument("--threshold", type=float, default=0.3)
    _add_output(p)
    return parser


def _config_from_args(args, base: ScanConfig | None = None) -> ScanConfig:
    overrides = {}
    for key in ("model", "pa", "sigma", "sigma_z", "b", "n_e", "v", "potential_expr", "r_cut",
                "kinematics", "tol", "theta", "phi", "quantity", "normalize"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    if base is None:
        return ScanConfig(**overrides)
    return base.replace(**overrides)


def _cmd_amplitude(args):
    qs = np.linspace(args.q_min, args.q_max, args.count)
    if args.model == "gauss-gauss":
        pot = GaussianWell(args.v, 1.0)
    elif args.model == "hydrogen":
        pot = HydrogenGround(1.0)
    else:
        if not args.potential_expr:
            raise ConfigError("potential_expr", "required for the custom model")
        pot = CustomRadial(_compile_expr(args.potential_expr), args.r_cut, 1.0)
    rows, ok = [], True
    for q in qs:
        if args.numeric or args.model == "custom":
            r = born_numeric(pot, float(q), 1.0, args.tol)
            rows.append((q, r.value, r.error_estimate, r.converged))
            ok = ok and r.converged
        elif args.model == "gauss-gauss":
            rows.append((q, born_gaussian(q, args.v, 1.0), 0.0, True))
        else:
            rows.append((q, born_hydrogen(q, 1.0), 0.0, True))
    cfg = {"model": args.model, "q_min": args.q_min, "q_max": args.q_max, "count": args.count,
           "numeric": bool(args.numeric), "v": args.v, "tol": args.tol}
    return ("q", "f", "error", "converged"), rows, cfg, ok


def _scan_rows(table):
    cfg = table.config
    rows = []
    for r in table.rows:
        p = r.params
        rows.append((cfg.model, cfg.quantity, p["pa"], p["sigma"], p["sigma_z"], p["b"], p["n_e"], p["v"],
                     r.theta, r.phi, r.value, r.error_estimate, r.converged))
    cols = ("model", "quantity", "pa", "sigma", "sigma_z", "b", "n_e", "v",
            "theta", "phi", "value", "error", "converged")
    return cols, rows


def _cmd_point(args):
    quantity = "events" if args.command == "events" else "avg-xsec"
    base = ScanConfig(quantity=quantity)
    args.quantity = quantity
    cfg = _config_from_args(args, base)
    table = run_scan(cfg, args.threads)
    cols, rows = _scan_rows(table)
    return cols, rows, cfg.to_dict(), table.all_converged


def _cmd_scan(args):
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError("--config", str(exc)) from None
    cfg = _config_from_args(args, ScanConfig.from_json(text))
    table = run_scan(cfg, args.threads)
    cols, rows = _scan_rows(table)
    return cols, rows, cfg.to_dict(), table.all_converged


def _cmd_figure(args):
    ft = run_figure(args.number, args.model, args.kinematics, args.threads)
    cfg = {"figure": args.number, "scans": [c.to_dict() for c in ft.configs]}
    return ft.columns, ft.rows, cfg, ft.all_converged


def _cmd_validate(args):
    packet = PacketSpec(args.sigma, args.sigma_z, args.pa, args.b, args.n_e)
    if args.model == "hydrogen":
        pot = HydrogenGround(1.0)
    elif args.model == "gauss-gauss":
        pot = GaussianWell(args.v, 1.0)
    else:
        pot = CustomRadial(lambda r: np.zeros_like(r), args.r_cut, 1.0)
    report = validate_regime(packet, pot, args.threshold)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    rows = [(name, value, report.threshold, report.flags[name]) for name, value in report.as_dict().items()]
    cfg = {"model": args.model, "pa": args.pa, "sigma": args.sigma, "sigma_z": args.sigma_z,
           "b": args.b, "v": args.v, "threshold": args.threshold}
    return ("check", "value", "threshold", "ok"), rows, cfg, True


_COMMANDS = {
    "amplitude": _cmd_amplitude,
    "events": _cmd_point,
    "avg-xsec": _cmd_point,
    "scan": _cmd_scan,
    "figure": _cmd_figure,
    "validate": _cmd_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if getattr(args, "threads", None) is None and hasattr(args, "threads"):
        args.threads = default_threads()

    start = time.perf_counter()
    try:
        columns, rows, config, converged = _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed = time.perf_counter() - start

    formatters = {"sigma_ratio": _sigma_label}
    if args.output:
        with open(args.output, "w", newline="") as fh:
            write_csv(fh, columns, rows, config, formatters)
    else:
        write_csv(sys.stdout, columns, rows, config, formatters)

    if args.manifest:
        manifest = {
            "tool": "packetborn",
            "version": __version__,
            "command": args.command,
            "argv": argv,
            "config": config,
            "rows": len(rows),
            "converged": bool(converged),
            "threads": getattr(args, "threads", 1),
            "elapsed_s": elapsed,
            "output": args.output,
        }
        with open(args.manifest, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")

    if not converged:
        print("warning: some integrals did not converge (rows flagged converged=false)", file=sys.stderr)
        return EXIT_UNCONVERGED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
