"""Command-line entry point: ``klein <command> [options]``.

Exit codes: 0 every entry verified/computed/skipped, 1 some entry failed,
2 bad configuration or unparsable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .report import RunConfig
from .runner import COMMANDS, ConfigError, run

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="klein", description="Exact verification workbench for the Klein group of order 168.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--json", action="store_true", help="emit JSON instead of markdown")
    p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, help="random seed (required for sampling commands)")
    p.add_argument("--samples", type=int, default=50, help="sample count for point certificates (default 50)")
    p.add_argument("--n", type=int, help="degree of alpha and beta for the fibration")
    p.add_argument("--model", choices=("prime", "toric"), default="toric")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--def", dest="deffile", metavar="FILE", help="fibration data in the alpha/beta language")
    src.add_argument("--data", metavar="TEXT", help="the same data given inline")
    p.add_argument("--certify", action="store_true", help="run the sampled certificates of the chain")
    p.add_argument("--all", action="store_true", help="with 'report': run the whole pipeline (the default)")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    dsl = args.data
    if args.deffile:
        try:
            dsl = Path(args.deffile).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {args.deffile}: {exc.strerror}") from exc
    if args.all and args.command != "report":
        raise ConfigError("--all only applies to the report command")
    return RunConfig(
        command=args.command,
        n=args.n,
        dsl=dsl,
        samples=args.samples,
        seed=args.seed,
        output="json" if args.json else "markdown",
        model=args.model,
        certify=args.certify,
        out=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run(config)
    except ConfigError as exc:
        print(f"klein: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    text = report.render()
    if config.out:
        Path(config.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for e in report.failed:
        print(f"klein: FAILED {e.claim}: {e.message or e.counterexample}", file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
