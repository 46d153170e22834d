"""Command-line front end.

    qlandauer sweep CONFIG [-o PATH] [--format csv|json] [--workers N]
    qlandauer verify CONFIG [--report PATH] [--workers N]
    qlandauer preset {fig1b,fig1c,fig2} [--jt JT] [-o PATH] [--print-config]

Exit status: 0 success, 1 usage or configuration error, 2 invariant
failure (verify), 3 I/O error.
"""
import argparse
import json
import sys

from .errors import QLandauerError
from .sweep import PRESETS, ConfigError, config_from_dict, emit, parse_config, preset_document, run_sweep, verify

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser():
    parser = _Parser(prog="qlandauer", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("-o", "--output", help="output path (default: config value, else stdout)")
        p.add_argument("--format", choices=("csv", "json"), help="output format override")
        p.add_argument("--workers", type=int, default=1, help="worker processes")

    p = sub.add_parser("sweep", help="run a configured parameter sweep")
    p.add_argument("config", help="JSON config path, or - for stdin")
    add_output(p)

    p = sub.add_parser("verify", help="check numerical invariants over a configured grid")
    p.add_argument("config", help="JSON config path, or - for stdin")
    p.add_argument("--report", help="also write the report as JSON to this path")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("preset", help="run a figure-reproduction sweep")
    p.add_argument("name", choices=PRESETS)
    p.add_argument("--jt", type=float, default=1.0, help="Jt for the alpha-sweep presets (default 1.0)")
    p.add_argument("--print-config", action="store_true", help="print the preset config and exit")
    add_output(p)
    return parser


def _read_config(path):
    if path == "-":
        return parse_config(sys.stdin.read())
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def _emit(records, cfg, args):
    fmt = args.format or cfg.output_format
    dest = args.output or cfg.output_path
    emit(records, dest if dest else sys.stdout, fmt)


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "preset":
            doc = preset_document(args.name, args.jt)
            if args.print_config:
                json.dump(doc, sys.stdout, indent=2)
                sys.stdout.write("\n")
                return EXIT_OK
            cfg = config_from_dict(doc)
        else:
            cfg = _read_config(args.config)

        if args.command == "verify":
            report = verify(cfg, workers=args.workers)
            sys.stdout.write(report.text())
            if args.report:
                with open(args.report, "w", encoding="utf-8") as fh:
                    json.dump(report.as_dict(), fh, indent=2)
            return EXIT_OK if report.passed else EXIT_INVARIANT

        _emit(run_sweep(cfg, workers=args.workers), cfg, args)
        return EXIT_OK
    except ConfigError as exc:
        print(f"qlandauer: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qlandauer: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QLandauerError as exc:
        print(f"qlandauer: error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
