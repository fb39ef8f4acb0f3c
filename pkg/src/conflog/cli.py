"""Command-line entry point: ``conflog mine`` and ``conflog tune``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .config import ConfigError, ToolConfig, load_config
from .lexicon import LexiconError, load_lexicon, read_name_list
from .pipeline import UsageError, run
from .report import FORMATS, render
from .tuning import TuningError, read_labels, tune_threshold

EXIT_OK, EXIT_USAGE, EXIT_DEGRADED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors with status 1 here, not 2."""

    def error(self, message: str):  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threshold(value: str) -> float:
    try:
        mu = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 <= mu <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must be within [0, 1], got {value}")
    return mu


def _slot(value: str) -> tuple[str, str]:
    slot, sep, path = value.partition("=")
    if not sep or not slot or not path:
        raise argparse.ArgumentTypeError(f"expected SLOT=FILE, got {value!r}")
    return slot, path


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conflog", description="Infer configuration constraints from log messages in C/C++ code.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("mine", help="mine constraint findings from a source tree")
    m.add_argument("--src", required=True, type=Path, help="directory of C/C++ sources")
    m.add_argument("--options", required=True, type=Path, help="option names, one per line")
    m.add_argument("--threshold", type=_threshold, help="similarity threshold (default 0.63)")
    m.add_argument("--error-lexicon", type=Path, help="error word list replacing the bundled one")
    m.add_argument("--slot-lexicon", type=_slot, action="append", default=[], metavar="SLOT=FILE",
                   help="replace a pattern slot word list (modal, aux, accept, validity, comparative)")  # fmt: skip
    m.add_argument("--getters", type=Path, help="getter function names, one per line")
    m.add_argument("--comparison-fns", type=Path, help="string comparison function names, one per line")
    m.add_argument("--log-fns", type=Path, help="logging function names, one per line")
    m.add_argument("--min-words", type=int, help="minimum words in a candidate message (default 2)")
    m.add_argument("--config", type=Path, help="TOML file with tool settings")
    m.add_argument("--format", choices=FORMATS, default="json")
    m.add_argument("--out", type=Path, help="write the report here instead of stdout")

    t = sub.add_parser("tune", help="pick the similarity threshold with the best F1")
    t.add_argument("--labels", required=True, type=Path, help="TSV of option, variable, 0/1")
    t.add_argument("--options", required=True, type=Path, help="option names, one per line")
    t.add_argument("--out", type=Path, help="write the JSON result here instead of stdout")
    return p


def _names(path: Path | None) -> tuple[str, ...] | None:
    if path is None:
        return None
    if not path.is_file():
        raise UsageError(f"file does not exist: {path}")
    return tuple(read_name_list(path))


def _config(args: argparse.Namespace) -> ToolConfig:
    config = load_config(args.config) if args.config else ToolConfig()
    slots = dict(config.slot_lexicons)
    slots.update(dict(args.slot_lexicon))
    return config.with_(
        threshold=args.threshold,
        min_words=args.min_words,
        getters=_names(args.getters),
        comparison_functions=_names(args.comparison_fns),
        log_functions=_names(args.log_fns),
        error_lexicon=str(args.error_lexicon) if args.error_lexicon else None,
        slot_lexicons=slots or None,
    )


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _mine(args: argparse.Namespace) -> int:
    report = run(args.src, args.options, config=_config(args))
    _emit(render(report, args.format), args.out)
    if report.degraded:
        c = report.corpus_stats
        print(f"conflog: {c['unparseable']} of {c['files']} files could not be parsed", file=sys.stderr)
        return EXIT_DEGRADED
    return EXIT_OK


def _tune(args: argparse.Namespace) -> int:
    for path in (args.labels, args.options):
        if not path.is_file():
            raise UsageError(f"file does not exist: {path}")
    result = tune_threshold(read_labels(args.labels), load_lexicon(args.options))
    _emit(json.dumps(result.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return _mine(args) if args.command == "mine" else _tune(args)
    except (UsageError, ConfigError, LexiconError, TuningError, OSError) as exc:
        print(f"conflog: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
