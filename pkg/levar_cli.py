#!/usr/bin/env python3
"""
Command-line harness for leveled arrays

Commands read and write levar-v1 documents. Without ``-o`` the resulting
document is written to stdout exactly as ``array_io.encode_array`` produces
it; diagnostics go to stderr.

Exit codes: 0 success, 1 usage error, 2 shape/bounds/cut error,
3 format error, 4 self-test failures.
"""

import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, TextIO

from array_io import encode_array, generate, load_array, parse_fill, save_array
from arrays import Array, sum_array, reshape, sel, tabulate, to_buffer
from config_validation import LevarConfig, get_default_config, load_config, set_active_config
from exceptions import (
    ArrayError,
    ConfigurationError,
    CutError,
    FormatError,
    ShapeError,
    UsageError,
)
from kernels import avgp_direct, avgp_nested, matmul, plus
from nesting import cut_count, nest, parse_cut, ranked_cut
from performance_utils import DebugMode, profiler
from selftest import SUITES, run_selftest
from shapes import Shape, enumerate_indices, shape_from_json, shape_to_json

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SHAPE = 2
EXIT_FORMAT = 3
EXIT_SELFTEST_FAILED = 4


class _ArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that reports problems as UsageError instead of exiting"""

    def error(self, message):
        raise UsageError(message, self.prog)


def _compact(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _json_flag(text: str, flag: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"{flag} is not valid JSON: {e}") from e


def _shape_flag(text: str) -> Shape:
    try:
        return shape_from_json(_json_flag(text, "--shape"))
    except FormatError as e:
        raise UsageError(f"--shape: {e}") from e


# ===============================================================================
# COMMANDS
# ===============================================================================

class CommandContext:
    """Everything a command needs besides its parsed arguments"""

    def __init__(self, config: LevarConfig, out: TextIO):
        self.config = config
        self.out = out

    def emit(self, a: Array[int], output: Optional[str]) -> None:
        """Save to ``output`` or print the canonical document"""
        if output:
            save_array(a, output)
        else:
            self.out.write(encode_array(a).decode("utf-8"))
            self.out.flush()

    def print(self, line: str = "") -> None:
        print(line, file=self.out)


def cmd_show(args, ctx: CommandContext) -> int:
    a = load_array(args.file)
    data = list(to_buffer(a))
    limit = ctx.config.display.preview_elements
    preview = ", ".join(str(v) for v in data[:limit])
    if len(data) > limit:
        preview += f", ... ({len(data) - limit} more)"
    ctx.print(f"level: {a.level}")
    ctx.print(f"shape: {_compact(shape_to_json(a.shape))}")
    ctx.print(f"prod: {a.prod}")
    ctx.print(f"data: [{preview}]")
    return EXIT_OK


def cmd_gen(args, ctx: CommandContext) -> int:
    shape = _shape_flag(args.shape)
    try:
        fill = parse_fill(args.fill)
    except ValueError as e:
        raise UsageError(f"--fill: {e}") from e
    ctx.emit(generate(shape, fill), args.output)
    return EXIT_OK


def cmd_add(args, ctx: CommandContext) -> int:
    a = load_array(args.a)
    b = load_array(args.b)
    ctx.emit(plus(a, b), args.output)
    return EXIT_OK


def cmd_sum(args, ctx: CommandContext) -> int:
    ctx.print(str(sum_array(load_array(args.file))))
    return EXIT_OK


def cmd_reshape(args, ctx: CommandContext) -> int:
    target = _shape_flag(args.shape)
    a = load_array(args.file)
    ctx.emit(reshape(a, target), args.output)
    return EXIT_OK


def cmd_cut(args, ctx: CommandContext) -> int:
    fragment = _json_flag(args.cut, "--cut")
    a = load_array(args.file)
    c = parse_cut(fragment, a.shape)
    left, right = ranked_cut(a.shape, c)
    ctx.print(f"left: {_compact(shape_to_json(left))}")
    ctx.print(f"right: {_compact(shape_to_json(right))}")
    ctx.print(f"cut_count: {cut_count(a.shape)}")
    return EXIT_OK


def cmd_nest(args, ctx: CommandContext) -> int:
    fragment = _json_flag(args.cut, "--cut")
    a = load_array(args.file)
    c = parse_cut(fragment, a.shape)
    nested = tabulate(nest(a, c))
    left, right = ranked_cut(a.shape, c)
    ctx.print(f"outer: {_compact(shape_to_json(left))}")
    ctx.print(f"inner: {_compact(shape_to_json(right))}")
    outer_indices = enumerate_indices(nested.shape)
    limit = ctx.config.display.max_blocks
    for ov in outer_indices[:limit]:
        block = sel(nested, ov)
        ctx.print(f"{list(ov.values)}: {list(to_buffer(block))}")
    if len(outer_indices) > limit:
        ctx.print(f"... ({len(outer_indices) - limit} more blocks)")
    return EXIT_OK


def cmd_pool(args, ctx: CommandContext) -> int:
    a = load_array(args.file)
    kernel = avgp_direct if args.direct else avgp_nested
    ctx.emit(kernel(a), args.output)
    return EXIT_OK


def cmd_matmul(args, ctx: CommandContext) -> int:
    a = load_array(args.a)
    b = load_array(args.b)
    ctx.emit(matmul(a, b), args.output)
    return EXIT_OK


def cmd_selftest(args, ctx: CommandContext) -> int:
    report = run_selftest(ctx.config.selftest, seed=args.seed, only=args.suite or None)
    for suite in report.suites:
        status = "PASS" if suite.ok else "FAIL"
        ctx.print(f"{status} {suite.name}: {suite.passed} passed, {suite.failed} failed")
        for failure in suite.failures:
            logger.error(f"{suite.name}: {failure}")
    ctx.print(
        f"{'ok' if report.ok else 'FAILED'}: {report.passed} passed, {report.failed} failed "
        f"in {report.elapsed:.1f}s"
    )
    return EXIT_OK if report.ok else EXIT_SELFTEST_FAILED


COMMANDS: Dict[str, Callable[[argparse.Namespace, CommandContext], int]] = {
    "show": cmd_show,
    "gen": cmd_gen,
    "add": cmd_add,
    "sum": cmd_sum,
    "reshape": cmd_reshape,
    "cut": cmd_cut,
    "nest": cmd_nest,
    "pool": cmd_pool,
    "matmul": cmd_matmul,
    "selftest": cmd_selftest,
}


# ===============================================================================
# ARGUMENT PARSING
# ===============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="levar",
        description="Arrays with levels: reshape, ranked nesting and worked kernels"
    )
    parser.add_argument('--config', type=str, default=None,
                        help='Configuration file (.json, or .yaml with PyYAML)')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='Log INFO (-v) or DEBUG (-vv) messages to stderr')
    parser.add_argument('--profile', action='store_true',
                        help='Print timing of kernels and tabulation to stderr')
    parser.add_argument('--workers', type=int, default=None,
                        help='Worker threads for tabulating large delayed arrays')
    parser.add_argument('--debug-checks', action='store_true',
                        help='Enable strict runtime invariant checks')

    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    show = commands.add_parser('show', help='Print level, shape, prod and a data preview')
    show.add_argument('file')

    gen = commands.add_parser('gen', help='Generate an array')
    gen.add_argument('--shape', required=True, help='Shape as a JSON fragment')
    gen.add_argument('--fill', required=True, help='iota, const:V or rand:SEED')
    gen.add_argument('-o', '--output', default=None)

    for name, text in (('add', 'Element-wise sum of two arrays'),
                       ('matmul', 'Matrix product of two level-2 arrays')):
        binary = commands.add_parser(name, help=text)
        binary.add_argument('a')
        binary.add_argument('b')
        binary.add_argument('-o', '--output', default=None)

    total = commands.add_parser('sum', help='Print the sum of all elements')
    total.add_argument('file')

    reshape_cmd = commands.add_parser('reshape', help='Reshape keeping row-major order')
    reshape_cmd.add_argument('file')
    reshape_cmd.add_argument('--shape', required=True, help='Target shape as a JSON fragment')
    reshape_cmd.add_argument('-o', '--output', default=None)

    for name, text in (('cut', 'Print the shapes produced by a ranked cut'),
                       ('nest', 'Print the blocks of a nested array')):
        cut_cmd = commands.add_parser(name, help=text)
        cut_cmd.add_argument('file')
        cut_cmd.add_argument('--cut', required=True,
                             help='null, {"side":k} or {"slot":i,"split":k}')

    pool = commands.add_parser('pool', help='2x2 average pooling (nested by default)')
    pool.add_argument('file')
    pool.add_argument('--direct', action='store_true', help='Use the direct formulation')
    pool.add_argument('-o', '--output', default=None)

    selftest = commands.add_parser('selftest', help='Run the property suites')
    selftest.add_argument('--seed', type=int, default=None)
    selftest.add_argument('--suite', action='append', default=None, choices=sorted(SUITES),
                          help='Run only this suite (repeatable)')

    return parser


def _configure(args: argparse.Namespace) -> LevarConfig:
    config = load_config(args.config) if args.config else get_default_config()
    if args.workers is not None:
        if args.workers < 1:
            raise UsageError(f"--workers must be at least 1, got {args.workers}")
        config = config.model_copy(
            update={"tabulation": config.tabulation.model_copy(update={"max_workers": args.workers})}
        )
    if getattr(args, "seed", None) is not None and args.seed < 0:
        raise UsageError(f"--seed must be non-negative, got {args.seed}", args.command)
    set_active_config(config)
    if args.debug_checks:
        DebugMode.enable(strict=True)
    if args.profile:
        profiler.enable()
    return config


def run(argv: List[str], out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """
    Execute one command.

    Args:
        argv: Arguments without the program name
        out: Stream for payload output (stdout by default)
        err: Stream for error messages (stderr by default)

    Returns:
        Process exit code
    """
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(
            level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
            format="%(levelname)s %(name)s: %(message)s",
            stream=err,
        )
        config = _configure(args)
        return COMMANDS[args.command](args, CommandContext(config, out))
    except (UsageError, ConfigurationError) as e:
        print(f"usage error: {type(e).__name__}: {e}", file=err)
        return EXIT_USAGE
    except (ShapeError, ArrayError, CutError) as e:
        print(f"error: {type(e).__name__}: {e}", file=err)
        return EXIT_SHAPE
    except FormatError as e:
        print(f"format error: {type(e).__name__}: {e}", file=err)
        return EXIT_FORMAT
    except OSError as e:
        print(f"usage error: {type(e).__name__}: {e}", file=err)
        return EXIT_USAGE
    finally:
        if profiler.enabled:
            profiler.print_stats(stream=err)
            profiler.disable()
            profiler.reset()
        DebugMode.disable()
        set_active_config(None)


def main():
    """Console entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
