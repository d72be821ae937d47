"""Command-line entry point: eval, check, trace, gen and fuzz.

Data goes to stdout, diagnostics to stderr. Exit codes: 0 success (all
properties hold, chain preserved or trivially consistent, counterexample
found), 1 some property fails or the chain breaks, 2 usage or input error,
3 fuzz found no counterexample.
"""

import argparse
import json
import logging
import sys
from typing import Callable, Dict, Optional, Sequence, TextIO, Tuple, Union

from . import __version__, settings
from .core_model import Model, StateSpace, classify_correspondence
from .dlr_trace import Verdict, trace_revised_chain, trace_standard_chain
from .errors import EpistemicError
from .fuzzing import search_chain, search_property, seeded_models
from .model_io import (
    Family,
    GeneratorParams,
    decode_model_bytes,
    enumerate_correspondences,
    generate_model,
    parse_document,
    parse_event,
    render_counterexample,
    render_eval,
    render_model,
    render_model_document,
    render_report,
)
from .operators import (
    OperatorKind,
    core_unawareness,
    know,
    not_know,
    resolvable_unawareness,
    unaware,
)
from .properties import Budget, PropertyId, check_all

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2
EXIT_NOT_FOUND = 3

_KINDS = {"std": OperatorKind.STANDARD, "rev": OperatorKind.REVISED}

# op name -> (operator, kind)
_EVENT_OPS: Dict[str, Tuple[str, OperatorKind]] = {
    "K": ("know", OperatorKind.STANDARD),
    "K'": ("know", OperatorKind.REVISED),
    "Krev": ("know", OperatorKind.REVISED),
    "negK": ("not_know", OperatorKind.STANDARD),
    "negK'": ("not_know", OperatorKind.REVISED),
    "negKrev": ("not_know", OperatorKind.REVISED),
    "U": ("unaware", OperatorKind.STANDARD),
    "U'": ("unaware", OperatorKind.REVISED),
    "Urev": ("unaware", OperatorKind.REVISED),
    "resolvable": ("resolvable", OperatorKind.REVISED),
}
_MODEL_OPS = ("core", "classify")


class _UsageError(Exception):
    """Flag combination argparse cannot express."""


class _RejectedInput(Exception):
    """Model file diagnostics were already written to stderr."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unawareness-check",
        description="Finite model checker for knowledge and unawareness operators.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "structured"], default="text", help="output format")

    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="apply one operator to an event")
    ev.add_argument("model", help="model file, or - for standard input")
    ev.add_argument("--op", required=True, choices=sorted(_EVENT_OPS) + list(_MODEL_OPS))
    ev.add_argument("--event", help='event literal, e.g. "{a,b}"')
    ev.add_argument("--verbose", action="store_true", help="print the fixpoint iterates of U/U'")

    ck = sub.add_parser("check", parents=[common], help="check catalog properties")
    ck.add_argument("model", help="model file, or - for standard input")
    ck.add_argument("--kind", required=True, choices=sorted(_KINDS))
    ck.add_argument("--property", action="append", choices=[p.value for p in PropertyId], help="repeatable; default all")
    _add_budget_flags(ck, "--seed", "--sample-seed")

    tr = sub.add_parser("trace", parents=[common], help="trace the impossibility chain")
    tr.add_argument("model", help="model file, or - for standard input")
    tr.add_argument("--chain", required=True, choices=["dlr", "rdlr"])
    tr.add_argument("--event", help="starting event (dlr only)")

    gen = sub.add_parser("gen", parents=[common], help="generate a random model file")
    _add_generator_flags(gen)

    fz = sub.add_parser("fuzz", parents=[common], help="search generated models for a counterexample")
    _add_generator_flags(fz)
    fz.add_argument("--models", type=int, default=1000, help="number of generated models")
    fz.add_argument("--kind", required=True, choices=sorted(_KINDS))
    target = fz.add_mutually_exclusive_group(required=True)
    target.add_argument("--property", choices=[p.value for p in PropertyId])
    target.add_argument("--chain", choices=["dlr"], help="models satisfying the chain's assumptions with U nonempty")
    fz.add_argument(
        "--exhaustive-models", action="store_true", help="iterate every correspondence over --states states instead"
    )
    _add_budget_flags(fz)
    return parser


def _add_budget_flags(parser: argparse.ArgumentParser, *seed_flags: str) -> None:
    mode = parser.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", dest="mode", action="store_const", const="exhaustive")
    mode.add_argument("--sampled", dest="mode", action="store_const", const="sampled")
    parser.set_defaults(mode="auto")
    parser.add_argument("--samples", type=int, default=settings.DEFAULT_SAMPLES)
    flags = seed_flags or ("--sample-seed",)
    parser.add_argument(*flags, dest="sample_seed", type=int, default=settings.DEFAULT_SEED, help="seed for sampled checks")


def _add_generator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--states", type=int, required=True)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED)
    parser.add_argument("--density", type=float, default=0.5)
    parser.add_argument("--p-empty", type=float, default=0.0)
    parser.add_argument("--family", choices=[f.value for f in Family], default=Family.GENERAL.value)


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(mode=args.mode, samples=args.samples, seed=args.sample_seed)


def _generator_params(args: argparse.Namespace) -> GeneratorParams:
    return GeneratorParams(
        n_states=args.states, density=args.density, p_empty=args.p_empty, family=Family(args.family), seed=args.seed
    )


def _read_model(path: str, stdin: TextIO) -> Model:
    data: Union[bytes, str]
    if path == "-":
        # test harnesses hand in a StringIO with no byte buffer
        buffer = getattr(stdin, "buffer", None)
        data = buffer.read() if buffer is not None else stdin.read()
    else:
        with open(path, "rb") as handle:
            data = handle.read()
    text = decode_model_bytes(data) if isinstance(data, bytes) else data
    document = parse_document(text)
    if document.model is None:
        print(document.format_diagnostics(), file=sys.stderr)
        raise _RejectedInput(len(document.diagnostics))
    return document.model


def _cmd_eval(args: argparse.Namespace, model: Model, out: TextIO) -> int:
    space = model.space
    if args.op == "classify":
        flags = classify_correspondence(model)
        if args.format == "structured":
            body = {"reflexive": flags.reflexive, "partitional": flags.partitional, "has_empty_image": flags.has_empty_image}
            print(json.dumps({"format": settings.STRUCTURED_FORMAT_VERSION, "class": body}, indent=2), file=out)
        else:
            for name in ("reflexive", "partitional", "has_empty_image"):
                print(f"{name}: {str(getattr(flags, name)).lower()}", file=out)
        return EXIT_OK
    if args.op == "core":
        print(render_eval(space, core_unawareness(model), args.format), file=out)
        return EXIT_OK

    if args.event is None:
        raise _UsageError(f"--op {args.op} needs --event")
    event = parse_event(space, args.event)
    operator, kind = _EVENT_OPS[args.op]
    trace = None
    if operator == "know":
        result = know(model, kind, event)
    elif operator == "not_know":
        result = not_know(model, kind, event)
    elif operator == "unaware":
        result, fixpoint = unaware(model, kind, event)
        trace = fixpoint if args.verbose else None
    else:
        result = resolvable_unawareness(model, event)
    print(render_eval(space, result, args.format, trace), file=out)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace, model: Model, out: TextIO) -> int:
    reports = check_all(model, _KINDS[args.kind], _budget(args), args.property)
    print(render_report(model.space, reports, args.format), file=out)
    return EXIT_OK if all(report.holds for report in reports) else EXIT_FAILED


def _cmd_trace(args: argparse.Namespace, model: Model, out: TextIO) -> int:
    if args.chain == "dlr":
        if args.event is None:
            raise _UsageError("--chain dlr needs --event")
        trace = trace_standard_chain(model, parse_event(model.space, args.event))
    else:
        if args.event is not None:
            raise _UsageError("--chain rdlr takes no --event")
        trace = trace_revised_chain(model)
    print(render_report(model.space, trace, args.format), file=out)
    ok = (Verdict.PRESERVED, Verdict.TRIVIALLY_CONSISTENT)
    return EXIT_OK if trace.verdict in ok else EXIT_FAILED


def _cmd_gen(args: argparse.Namespace, out: TextIO) -> int:
    model = generate_model(_generator_params(args))
    if args.format == "structured":
        print(render_model_document(model), file=out)
    else:
        out.write(render_model(model))
    return EXIT_OK


def _cmd_fuzz(args: argparse.Namespace, out: TextIO) -> int:
    kind = _KINDS[args.kind]
    params = _generator_params(args)
    if args.exhaustive_models:
        models = enumerate_correspondences(StateSpace.numbered(args.states))
    else:
        if args.models <= 0:
            raise _UsageError("--models must be positive")
        models = seeded_models(params, args.models)

    if args.chain:
        hit = search_chain(models, kind)
    else:
        hit = search_property(models, kind, args.property, _budget(args))

    if hit is None:
        print("no counterexample found", file=sys.stderr)
        if args.format == "structured":
            print(json.dumps({"format": settings.STRUCTURED_FORMAT_VERSION, "counterexample": None}), file=out)
        return EXIT_NOT_FOUND
    print(render_counterexample(hit.model, hit.reports, args.format, hit.index, hit.unaware), file=out)
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, stdin: Optional[TextIO] = None, stdout: Optional[TextIO] = None) -> int:
    """Run one invocation and return its exit code."""
    stdin = stdin or sys.stdin
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    settings.configure_logging(args.log_level)
    logger.debug("running %s", args.command)

    handlers: Dict[str, Callable[[argparse.Namespace, Model, TextIO], int]] = {
        "eval": _cmd_eval,
        "check": _cmd_check,
        "trace": _cmd_trace,
    }
    try:
        if args.command in handlers:
            model = _read_model(args.model, stdin)
            return handlers[args.command](args, model, out)
        if args.command == "gen":
            return _cmd_gen(args, out)
        return _cmd_fuzz(args, out)
    except _RejectedInput:
        pass
    except (EpistemicError, _UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


def main() -> None:
    sys.exit(run())
