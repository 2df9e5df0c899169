"""pluckerdss command line.

Exit status: 0 on success, 1 when a scenario assertion/step or a sweep
fails, 2 on usage, configuration or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .codec import encode_store
from .config import load_config
from .errors import DSSError
from .fileio import EncodingError, bytes_to_symbols, dump_snapshot, required_bytes
from .goodmatrix import build_good_matrix
from .scenario import load_scenario
from .simnet import resilience_sweep, run_scenario


def _common(p):
    p.add_argument("--field", help="override the configured field, e.g. gf(16)")
    p.add_argument("--b", type=int, help="override the configured dimension b")
    p.add_argument("--seed", type=int, help="override the configured seed")
    p.add_argument("--output", "-o", help="write the machine-readable result here")


def _load(args):
    cfg = load_config(args.config).with_overrides(args.field, args.b, args.seed)
    config, assignment = cfg.build()
    return cfg, config, assignment


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def cmd_store(args) -> int:
    cfg, config, assignment = _load(args)
    data = Path(args.file).read_bytes()
    try:
        x = bytes_to_symbols(config.field, data, config.B)
    except EncodingError as exc:
        need = required_bytes(config.field, config.B)
        print(f"error: {exc} (B = {config.B} symbols = {need} bytes)", file=sys.stderr)
        return 2
    nodes = encode_store(config.field, x, assignment.vectors)
    _write(args.output, dump_snapshot(config.field, config.b, nodes))
    return 0


def cmd_run(args) -> int:
    cfg, config, assignment = _load(args)
    scenario = load_scenario(args.scenario)
    report = run_scenario(config, assignment, scenario, cfg.seed, cfg.locality_cap)
    if not args.quiet:
        sys.stdout.write(report.to_text())
    if args.output:
        _write(args.output, report.to_json())
    if args.figures:
        from .plotting import plot_ledger

        plot_ledger(report, Path(args.figures) / "ledger.png")
    return 0 if report.ok else 1


def cmd_goodmatrix(args) -> int:
    N = build_good_matrix(args.b_size)
    _write(args.output, N.to_text())
    return 0


def cmd_verify_assignment(args) -> int:
    cfg, config, assignment = _load(args)
    t = args.t if args.t is not None else assignment.resilience
    if t is None:
        print("error: give --t (the assignment claims no resilience)", file=sys.stderr)
        return 2
    sweep = resilience_sweep(config, assignment, t, cfg.locality_cap, cfg.seed,
                             verify=not args.no_verify)
    if not args.quiet:
        sys.stdout.write(sweep.to_text())
    if args.output:
        _write(args.output, sweep.to_json())
    if args.figures:
        from .plotting import plot_sweep

        plot_sweep(sweep, Path(args.figures) / "sweep.png")
    return 0 if sweep.ok else 1


def cmd_gen_assignment(args) -> int:
    cfg, config, assignment = _load(args)
    header = (f"# {assignment.provenance} assignment over {config.field.spec_string()}, "
              f"b = {config.b}, n = {config.n}")
    if assignment.resilience is not None:
        header += f", resilience {assignment.resilience}"
    if assignment.locality is not None:
        header += f", locality {assignment.locality}"
    _write(args.output, header + "\n" + assignment.to_text())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pluckerdss", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("store", help="encode a byte file into a cluster snapshot")
    p.add_argument("config")
    p.add_argument("file")
    _common(p)
    p.set_defaults(func=cmd_store)

    p = sub.add_parser("run", help="execute a scenario and report the ledger")
    p.add_argument("config")
    p.add_argument("scenario")
    p.add_argument("--figures", help="directory for the ledger figure")
    p.add_argument("--quiet", "-q", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("goodmatrix", help="print the b x b download schedule")
    p.add_argument("b_size", metavar="B", type=int)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_goodmatrix)

    p = sub.add_parser("verify-assignment", help="exhaustive failure sweep")
    p.add_argument("config")
    p.add_argument("--t", type=int, help="failure count (default: claimed resilience)")
    p.add_argument("--no-verify", action="store_true", help="skip executing repairs on data")
    p.add_argument("--figures", help="directory for the sweep figure")
    p.add_argument("--quiet", "-q", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_verify_assignment)

    p = sub.add_parser("gen-assignment", help="write the configured assignment as a matrix file")
    p.add_argument("config")
    _common(p)
    p.set_defaults(func=cmd_gen_assignment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DSSError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
