import argparse
import logging
import sys

import config
from frontend.runner import PreludeError, RunOptions, run_file
from utils.trace_stats import summarize_trace

logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="elab", description="Elaborate a source file against the prelude."
    )
    parser.add_argument("file", help="source file to elaborate")
    parser.add_argument(
        "--trace-elab", action="store_true", help="write solver trace events to stderr"
    )
    parser.add_argument(
        "--max-steps", type=int, default=None, help=f"solver step budget (default {config.MAX_STEPS})"
    )
    parser.add_argument("--no-color", action="store_true", help="plain diagnostics")
    parser.add_argument(
        "--stats", action="store_true", help="print a summary of solver events to stderr"
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return config.EXIT_OK if exit_.code == 0 else config.EXIT_USAGE
    if args.max_steps is not None and args.max_steps <= 0:
        print("elab: --max-steps must be positive", file=sys.stderr)
        return config.EXIT_USAGE

    options = RunOptions(
        trace=args.trace_elab,
        max_steps=args.max_steps,
        color=False if args.no_color else None,
        stats=args.stats,
    )
    try:
        result = run_file(args.file, options, out=sys.stdout)
    except OSError as error:
        print(f"elab: cannot read {args.file}: {error.strerror}", file=sys.stderr)
        return config.EXIT_USAGE
    except PreludeError as error:
        print(f"elab: prelude failed: {error}", file=sys.stderr)
        return config.EXIT_USAGE

    if options.stats:
        print(summarize_trace(result.events).to_string(index=False), file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.setrecursionlimit(config.RECURSION_LIMIT)
    logging.basicConfig(level=config.LOG_LEVEL, format=config.LOG_FORMAT)
    sys.exit(main())
