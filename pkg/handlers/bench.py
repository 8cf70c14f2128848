"""
Command line entry point of the benchmark.

    python -m handlers.bench list
    python -m handlers.bench run --example ex3 --m 8,16,32 --format md

Exit codes: 0 on success, 1 on usage errors, 2 when a solve did not converge.
"""

import argparse
import os
import sys
from pathlib import Path

from pydantic import BaseModel, ValidationError

from app.exceptions.bench import UnknownExampleError
from app.exceptions.boundary import CurveFileError, InvalidSmoothingExponentError
from app.exceptions.quadrature import InvalidRuleOrderError
from app.helpers.environment import env
from app.middlewares.logging import standard_logging_middleware
from app.requests.bench import RunExampleRequest
from app.services.bench import BenchService, emit_table
from app.services.examples import REGISTRY
from app.services.logging import StandardLoggerService

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NON_CONVERGENCE = 2
VERSION = "0.1.0"

logger = StandardLoggerService()

USAGE_ERRORS = (
    ValidationError,
    UnknownExampleError,
    InvalidRuleOrderError,
    InvalidSmoothingExponentError,
    CurveFileError,
)


class UsageError(Exception):
    """Raised by the argument parser instead of exiting."""


class InvocationContext(BaseModel):
    command: str
    version: str = VERSION
    pid: int


class BenchArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = BenchArgumentParser(
        prog="bench", description="Nystrom solver convergence tables"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("list", help="show the example registry")

    run = commands.add_parser("run", help="solve an example for several m")
    run.add_argument("--example", required=True, help="registry id, e.g. ex1")
    run.add_argument("--m", default=None, help="comma-separated rule orders")
    run.add_argument("--format", default="md", help="csv or md")
    run.add_argument("--q", type=float, default=None, help="smoothing exponent")
    run.add_argument("--seed", type=int, default=env().BENCH_SEED)
    run.add_argument("--ref-m", dest="ref_m", type=int, default=env().BENCH_REF_M)
    run.add_argument("--out", default=None, help="write the table to FILE")
    run.add_argument("--solver", default="newton", help="newton or hybr")
    return parser


def list_examples() -> str:
    lines = []
    for spec in REGISTRY.values():
        lines.append(f"{spec.id:5} {spec.kind:9} {spec.title}")
        for q, targets in spec.targets.items():
            published = ", ".join(
                f"m={m}: " + "/".join(f"{value:.2e}" for value in errors)
                for m, errors in targets.items()
            )
            label = f"q={q:g} " if spec.kind == "boundary" else ""
            lines.append(f"      {label}{published}")
    return "\n".join(lines) + "\n"


@standard_logging_middleware
def main(event, context):
    """
    Execute one parsed command.

    Args:
        event (dict): Parsed arguments, including the "command" key.
        context (InvocationContext): Invocation metadata for the logs.

    Returns:
        dict: Exit code, rendered output and, for runs, the report metadata.
    """
    if event["command"] == "list":
        return {"exit_code": EXIT_OK, "output": list_examples()}

    fields = {key: value for key, value in event.items() if key != "command"}
    request = RunExampleRequest(**{k: v for k, v in fields.items() if v is not None})
    report = BenchService(logger).run(request)
    output = emit_table(report, request.format)

    if request.out:
        path = Path(request.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(output)
        output = ""

    return {
        "exit_code": EXIT_OK if report.converged else EXIT_NON_CONVERGENCE,
        "output": output,
        "metadata": report.metadata,
    }


def cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        context = InvocationContext(command=args.command, pid=os.getpid())
        response = main(vars(args), context)
    except UsageError as e:
        sys.stderr.write(f"{parser.format_usage()}bench: error: {e}\n")
        return EXIT_USAGE
    except USAGE_ERRORS as e:
        sys.stderr.write(f"bench: error: {e}\n")
        return EXIT_USAGE

    sys.stdout.write(response["output"])
    return response["exit_code"]


if __name__ == "__main__":
    sys.exit(cli())
