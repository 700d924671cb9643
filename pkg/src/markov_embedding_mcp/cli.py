"""markov-embed: decide embeddability of Markov matrices from the shell.

Exit codes: 0 embeddable or success, 1 not embeddable, 2 undecided,
64 input error. Errors are written to stdout as a JSON document.
"""

import argparse
import json
import sys
from pathlib import Path

from loguru import logger
from pydantic import BaseModel, ValidationError

from .config import OutputFormat, get_settings, setup_logging
from .documents import SCHEMAS, FlowDocument, GReportDocument, MatrixDocument, VerdictDocument
from .embedder import HyperbolaOptions
from .exceptions import (
    DocumentError,
    IllConditioned,
    MarkovEmbeddingError,
    NotConverged,
    SpectrumOnCut,
)
from .linalg import Tolerances
from .service import (
    EXIT_INPUT_ERROR,
    EXIT_NOT_EMBEDDABLE,
    EXIT_OK,
    EXIT_UNDECIDED,
    ModelKind,
    classify_document,
    embed_document,
    exit_code,
    exp_document,
    gcheck_document,
    log_document,
    model_document,
    simulate_document,
)
from .utils import (
    dump_document,
    format_flow_as_markdown,
    format_greport_as_markdown,
    format_matrix_document_as_markdown,
    format_verdict_as_markdown,
    load_matrix_document,
    load_schedule_document,
)

_TOLERANCE_FIELDS = ("spec_cluster", "nonneg", "rowsum", "residual", "rank")


class _CliArgumentError(Exception):
    def __init__(self, message: str, status: int = EXIT_INPUT_ERROR, emitted: bool = False) -> None:
        super().__init__(message)
        self.status = status
        self.emitted = emitted


class _ArgumentParser(argparse.ArgumentParser):
    def _emit_error(self, message: str, status: int) -> None:
        cleaned = " ".join(str(message).split()) or "invalid arguments"
        _emit_error(cleaned)
        raise _CliArgumentError(cleaned, status=status, emitted=True)

    def error(self, message: str) -> None:
        self._emit_error(message, status=EXIT_INPUT_ERROR)

    def exit(self, status: int = 0, message: str | None = None) -> None:
        if status == 0:
            if message:
                sys.stdout.write(message)
            raise _CliArgumentError("", status=EXIT_OK, emitted=True)
        self._emit_error(message or "invalid arguments", status=EXIT_INPUT_ERROR)


def _emit_error(message: str) -> None:
    sys.stdout.write(json.dumps({"error": message}, indent=2) + "\n")


def _emit(doc: BaseModel, table: bool) -> None:
    if not table:
        sys.stdout.write(dump_document(doc) + "\n")
        return
    if isinstance(doc, VerdictDocument):
        text = format_verdict_as_markdown(doc)
    elif isinstance(doc, GReportDocument):
        text = format_greport_as_markdown(doc)
    elif isinstance(doc, FlowDocument):
        text = format_flow_as_markdown(doc)
    else:
        text = format_matrix_document_as_markdown(doc)
    sys.stdout.write(text + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from exc


def _read_matrix(path: str) -> MatrixDocument:
    return load_matrix_document(_read(path))


def _tolerances(args: argparse.Namespace, base: Tolerances) -> Tolerances:
    overrides = {
        name: getattr(args, f"tol_{name}")
        for name in _TOLERANCE_FIELDS
        if getattr(args, f"tol_{name}", None) is not None
    }
    return Tolerances(**{**base.model_dump(), **overrides})


def _model_params(pairs: list[str]) -> dict[str, float]:
    params: dict[str, float] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise DocumentError(f"expected name=value, got {pair!r}")
        try:
            params[name.strip()] = float(value)
        except ValueError as exc:
            raise DocumentError(f"parameter {name}: not a number: {value!r}") from exc
    return params


def _add_common(p: argparse.ArgumentParser, *, tolerances: bool = True) -> None:
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="table", action="store_false", default=None, help="Emit the JSON document")
    fmt.add_argument("--table", dest="table", action="store_true", default=None, help="Emit a markdown table")
    if tolerances:
        for name in _TOLERANCE_FIELDS:
            flag = name.replace("_", "-")
            p.add_argument(f"--tol-{flag}", dest=f"tol_{name}", type=float, metavar="X", help=f"Override the {name} tolerance")


def _build_parser() -> _ArgumentParser:
    parser = _ArgumentParser(prog="markov-embed", description=__doc__)
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        type=str.upper,
        default=None,
        help="stderr log level (default: MARKOV_EMBEDDING_MCP__LOGGING_LEVEL)",
    )
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = commands.add_parser("classify", help="Case tag and necessary conditions")
    p.add_argument("input", help="Matrix document path, or - for stdin")
    _add_common(p)

    p = commands.add_parser("embed", help="Decide embeddability")
    p.add_argument("input", help="Matrix document path, or - for stdin")
    p.add_argument(
        "--all-branches",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Enumerate every admissible logarithm branch",
    )
    p.add_argument("--timing", action="store_true", help="Report wall time in the verdict")
    _add_common(p)

    p = commands.add_parser("exp", help="Matrix exponential")
    p.add_argument("input", help="Matrix document path, or - for stdin")
    _add_common(p, tolerances=False)

    p = commands.add_parser("log", help="Principal matrix logarithm")
    p.add_argument("input", help="Matrix document path, or - for stdin")
    _add_common(p)

    p = commands.add_parser("model", help="Build and decide a phylogenetic model matrix")
    p.add_argument("kind", choices=[k.value for k in ModelKind])
    p.add_argument("params", nargs="*", metavar="NAME=VALUE", help="Model parameters")
    _add_common(p)

    p = commands.add_parser("simulate", help="Transition matrix of a generator schedule")
    p.add_argument("input", help="Schedule document path, or - for stdin")
    p.add_argument("--t", type=float, default=None, help="Evaluation time (default: full span)")
    method = p.add_mutually_exclusive_group()
    method.add_argument("--pbs", dest="method", action="store_const", const="pbs", help="Peano-Baker series (default)")
    method.add_argument("--product", dest="method", action="store_const", const="product", help="Product of exponentials")
    p.add_argument("--det-check", action="store_true", help="Compare det with exp(integral of trace)")
    _add_common(p)

    p = commands.add_parser("gcheck", help="g-embeddability of a 3x3 matrix")
    p.add_argument("input", help="Matrix document path, or - for stdin")
    _add_common(p)

    p = commands.add_parser("schema", help="Print the JSON schema of a document")
    p.add_argument("document", choices=sorted(SCHEMAS))
    return parser


def _dispatch(args: argparse.Namespace) -> int:
    settings = get_settings()
    if args.command == "schema":
        schema = SCHEMAS[args.document].model_json_schema()
        sys.stdout.write(json.dumps(schema, indent=2) + "\n")
        return EXIT_OK

    table = args.table if args.table is not None else settings.default_output_format is OutputFormat.MARKDOWN
    tol = _tolerances(args, settings.tolerances)

    if args.command == "classify":
        doc = classify_document(_read_matrix(args.input), tol)
    elif args.command == "embed":
        all_branches = settings.search_all_branches if args.all_branches is None else args.all_branches
        options = HyperbolaOptions(grid=settings.hyperbola_grid, extent=settings.hyperbola_extent)
        doc = embed_document(
            _read_matrix(args.input), tol, all_branches=all_branches, options=options, timing=args.timing
        )
    elif args.command == "exp":
        doc = exp_document(_read_matrix(args.input))
    elif args.command == "log":
        doc = log_document(_read_matrix(args.input), tol)
    elif args.command == "model":
        doc = model_document(ModelKind(args.kind), _model_params(args.params), tol)
    elif args.command == "simulate":
        doc = simulate_document(
            load_schedule_document(_read(args.input)),
            tol,
            t=args.t,
            method=args.method or "pbs",
            det_check=args.det_check,
            max_terms=settings.pbs_max_terms,
            pbs_tol=settings.pbs_tol,
        )
    else:
        doc = gcheck_document(_read_matrix(args.input), tol)

    _emit(doc, table)
    code = exit_code(getattr(doc, "verdict", None))
    logger.info("Command finished", command=args.command, exit_code=code)
    return code


def main(argv: list[str] | None = None, *, configure_logging: bool = False) -> int:
    """Run one command and return its exit code.

    The console entry point sets ``configure_logging`` to install the
    stderr sink at the requested level.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _CliArgumentError as exc:
        if not exc.emitted:
            _emit_error(str(exc))
        return exc.status

    if configure_logging:
        setup_logging(args.log_level, component="cli")

    try:
        return _dispatch(args)
    except DocumentError as exc:
        logger.warning("Input rejected", error=str(exc), line=exc.line)
        _emit_error(str(exc))
        return EXIT_INPUT_ERROR
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "input"
        _emit_error(f"{where}: {first['msg']}")
        return EXIT_INPUT_ERROR
    except SpectrumOnCut as exc:
        _emit_error(f"no real principal logarithm: {exc}")
        return EXIT_NOT_EMBEDDABLE
    except (IllConditioned, NotConverged) as exc:
        logger.warning("Numerical failure", error=str(exc))
        _emit_error(str(exc))
        return EXIT_UNDECIDED
    except (MarkovEmbeddingError, ValueError) as exc:
        _emit_error(str(exc))
        return EXIT_INPUT_ERROR
    except Exception as exc:
        logger.exception("Unexpected failure")
        _emit_error(str(exc) or "unexpected error")
        return EXIT_UNDECIDED


def run() -> None:
    """Console entry point."""
    raise SystemExit(main(configure_logging=True))


if __name__ == "__main__":
    run()
