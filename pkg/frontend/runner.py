"""Batch processing of a source file against the prelude."""
import logging
import sys
from dataclasses import dataclass, field

import config
from elaborator.errors import ElaborationError
from frontend.commands import CommandProcessor
from frontend.diagnostics import from_error, render_diagnostic
from frontend.parser import ParseError, parse_file
from kernel.environment import Environment
from kernel.errors import KernelError
from solver.trace import TraceRecorder

logger = logging.getLogger(__name__)


class PreludeError(Exception):
    """The prelude itself failed to elaborate."""


@dataclass
class RunOptions:
    trace: bool = False
    max_steps: int | None = None
    color: bool | None = None  # None: only when the output is a terminal
    stats: bool = False
    prelude: str | None = config.PRELUDE_PATH


@dataclass
class RunResult:
    env: Environment
    diagnostics: list = field(default_factory=list)
    events: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        if any(d.severity == config.SEVERITY_ERROR for d in self.diagnostics):
            return config.EXIT_DIAGNOSTICS
        return config.EXIT_OK


def run_commands(processor, commands, source="", out=None, color=False) -> list:
    """Process ``commands`` in order; a failing command leaves the environment untouched."""
    diagnostics = []
    for cmd in commands:
        try:
            processor.process(cmd)
        except (ElaborationError, ParseError) as error:
            diagnostics.append(from_error(error, source))
        except KernelError as error:
            diagnostics.append(from_error(ElaborationError(cmd.span, str(error)), source))
        else:
            continue
        if out is not None:
            print(render_diagnostic(diagnostics[-1], color), file=out)
    return diagnostics


def run_text(text, source="", options=None, out=None, env=None) -> RunResult:
    options = options or RunOptions()
    color = options.color if options.color is not None else _is_terminal(out)
    recorder = TraceRecorder(sys.stderr if options.trace else None)
    if env is None:
        env = load_prelude(options.prelude, options.max_steps)
    processor = CommandProcessor(env, out, options.max_steps, recorder)
    try:
        commands = parse_file(text)
    except ParseError as error:
        diagnostic = from_error(error, source)
        if out is not None:
            print(render_diagnostic(diagnostic, color), file=out)
        return RunResult(processor.env, [diagnostic], recorder.events)
    diagnostics = run_commands(processor, commands, source, out, color)
    logger.info("%s: %d commands, %d diagnostics", source or "<input>", len(commands), len(diagnostics))
    return RunResult(processor.env, diagnostics, recorder.events)


def _is_terminal(out) -> bool:
    isatty = getattr(out, "isatty", None)
    return bool(isatty and isatty())


def load_prelude(path=config.PRELUDE_PATH, max_steps=None) -> Environment:
    """Environment after the prelude; an empty one when ``path`` is None."""
    if path is None:
        return Environment()
    with open(path, encoding="utf-8") as f:
        text = f.read()
    result = run_text(text, path, RunOptions(max_steps=max_steps, prelude=None), env=Environment())
    if result.diagnostics:
        first = result.diagnostics[0]
        raise PreludeError(f"{path}:{first.span}: {first.message}")
    return result.env


def run_file(path, options=None, out=None) -> RunResult:
    """Elaborate the file at ``path``; raises OSError when it cannot be read."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return run_text(text, path, options, out)
