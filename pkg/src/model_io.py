"""Model files, report rendering, and seeded model generation.

Model-file grammar, one statement per line ('#' starts a comment):

    states: a b c
    P(a) = {a}
    P(c) = {a, b c}
    P(b) = {}

Each line is parsed on its own so that one pass reports every problem in the
file rather than stopping at the first.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

import pandas as pd
from lark import Lark, Token, Transformer, UnexpectedInput

from . import settings
from .core_model import Event, Model, StateSpace
from .dlr_trace import DerivationTrace
from .errors import Diagnostic, EnumerationRefused, InvalidParams, ModelParseError
from .operators import FixpointTrace
from .properties import PropertyReport, Witness
from .splitmix import SplitMix64

logger = logging.getLogger(__name__)

GRAMMAR = r"""
line: states_decl | image_decl
states_decl: "states" ":" IDENT*
image_decl: "P" "(" IDENT ")" "=" event_literal
event_literal: "{" members? "}"
members: IDENT (","? IDENT)*

IDENT: /[A-Za-z0-9_]+/

%import common.WS_INLINE
%ignore WS_INLINE
"""

_PARSER = Lark(GRAMMAR, parser="lalr", start=["line", "event_literal"])


class _LineTransformer(Transformer):
    def line(self, children):
        return children[0]

    def states_decl(self, children):
        return ("states", list(children))

    def image_decl(self, children):
        owner, members = children
        return ("image", owner, members)

    def members(self, children):
        return list(children)

    def event_literal(self, children):
        return children[0] if children else []


_TRANSFORMER = _LineTransformer()


@dataclass(frozen=True)
class ModelDocument:
    """A parsed model file: the model (when valid), its diagnostics, and where each state's P-line sits."""

    source: str
    model: Optional[Model]
    diagnostics: Tuple[Diagnostic, ...]
    image_lines: Dict[str, int] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.model is not None

    def source_line(self, number: int) -> Optional[str]:
        lines = self.source.splitlines()
        return lines[number - 1] if 0 < number <= len(lines) else None

    def format_diagnostics(self) -> str:
        return "\n".join(d.format(self.source_line(d.line)) for d in self.diagnostics)


def _syntax_diagnostic(number: int, text: str, error: UnexpectedInput) -> Diagnostic:
    column = getattr(error, "column", None)
    if not isinstance(column, int) or column < 1:
        column = len(text) + 1
    token = getattr(error, "token", None)
    if token is not None and getattr(token, "type", None) != "$END":
        found = f"unexpected {str(token)!r}"
    elif column <= len(text):
        found = f"unexpected {text[column - 1]!r}"
    else:
        found = "unexpected end of line"
    return Diagnostic(number, column, f"syntax error: {found}")


def _strip_comment(text: str) -> str:
    return text.split("#", 1)[0].rstrip()


def decode_model_bytes(data: bytes) -> str:
    """Decode a model file as UTF-8, dropping a leading byte-order mark."""
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as error:
        raw = error.object
        head = raw[: error.start]
        line = head.count(b"\n") + 1
        column = error.start - (head.rfind(b"\n") + 1) + 1
        bad = raw[error.start]
        raise ModelParseError([Diagnostic(line, column, f"invalid UTF-8 byte 0x{bad:02x}")]) from None


def parse_document(text: str) -> ModelDocument:
    """Parse a model file, collecting every diagnostic in one pass."""
    text = text[1:] if text.startswith("\ufeff") else text
    diagnostics: List[Diagnostic] = []
    states: Optional[List[Token]] = None
    states_line = 0
    images: List[Tuple[int, Token, List[Token]]] = []

    for number, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        try:
            statement = _TRANSFORMER.transform(_PARSER.parse(body, start="line"))
        except UnexpectedInput as error:
            diagnostics.append(_syntax_diagnostic(number, body, error))
            continue
        if statement[0] == "states":
            if states is not None:
                diagnostics.append(Diagnostic(number, 1, f"duplicate states declaration (first on line {states_line})"))
                continue
            states, states_line = statement[1], number
        else:
            if states is None:
                diagnostics.append(Diagnostic(number, 1, "P-line before the states declaration"))
                continue
            images.append((number, statement[1], statement[2]))

    if states is None:
        if not diagnostics:
            diagnostics.append(Diagnostic(1, 1, "missing states declaration"))
        return ModelDocument(text, None, tuple(diagnostics))

    labels: List[str] = []
    for token in states:
        if str(token) in labels:
            diagnostics.append(Diagnostic(states_line, token.column, f"duplicate state {str(token)!r}"))
        else:
            labels.append(str(token))
    if not states:
        diagnostics.append(Diagnostic(states_line, 1, "empty state list"))
    if len(labels) > settings.MAX_STATES:
        diagnostics.append(Diagnostic(states_line, 1, f"too many states ({len(labels)} > {settings.MAX_STATES})"))

    declared = {label: position for position, label in enumerate(labels)}
    bits: Dict[str, int] = {}
    image_lines: Dict[str, int] = {}
    for number, owner, members in images:
        name = str(owner)
        if name not in declared:
            diagnostics.append(Diagnostic(number, owner.column, f"unknown state {name!r}"))
        elif name in bits:
            first = image_lines[name]
            diagnostics.append(Diagnostic(number, owner.column, f"duplicate P-line for state {name!r} (first on line {first})"))
        image = 0
        for member in members:
            if str(member) not in declared:
                diagnostics.append(Diagnostic(number, member.column, f"unknown state {str(member)!r}"))
            else:
                image |= 1 << declared[str(member)]
        if name in declared and name not in bits:
            bits[name] = image
            image_lines[name] = number

    reported = set()
    for token in states:
        if str(token) not in bits and str(token) not in reported:
            reported.add(str(token))
            diagnostics.append(Diagnostic(states_line, token.column, f"missing P-line for state {str(token)!r}"))

    if diagnostics:
        logger.info("model file has %d diagnostics", len(diagnostics))
        return ModelDocument(text, None, tuple(diagnostics), image_lines)
    space = StateSpace(tuple(labels))
    model = Model(space, tuple(bits[label] for label in labels))
    return ModelDocument(text, model, (), image_lines)


def parse_model(text: str) -> Model:
    """Parse a model file; raises ModelParseError listing every diagnostic."""
    document = parse_document(text)
    if document.model is None:
        raise ModelParseError(document.diagnostics)
    return document.model


def parse_event(space: StateSpace, text: str) -> Event:
    """Parse an event literal such as "{a, b}" over `space`."""
    try:
        members = _TRANSFORMER.transform(_PARSER.parse(text.strip(), start="event_literal"))
    except UnexpectedInput as error:
        raise ModelParseError([_syntax_diagnostic(1, text.strip(), error)]) from None
    unknown = [Diagnostic(1, m.column, f"unknown state {str(m)!r}") for m in members if str(m) not in space]
    if unknown:
        raise ModelParseError(unknown)
    return space.event(str(m) for m in members)


def render_event(space: StateSpace, event: Event) -> str:
    """Event as a brace literal in declaration order, e.g. "{a b}"."""
    return "{" + " ".join(space.labels_of(event)) + "}"


def render_model(model: Model) -> str:
    """Canonical model file: declaration order, space-separated members, LF endings."""
    space = model.space
    lines = ["states: " + " ".join(space.labels)]
    for label in space.labels:
        lines.append(f"P({label}) = {render_event(space, model.possibility(label))}")
    return "\n".join(lines) + "\n"


def render_model_document(model: Model) -> str:
    """Structured form of a model: states, each image, and the model-file text."""
    space = model.space
    images = {label: _labels(space, model.possibility(label)) for label in space.labels}
    return _document(model={"states": list(space.labels), "possibility": images, "text": render_model(model)})


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


class Family(str, Enum):
    GENERAL = "general"
    PARTITIONAL = "partitional"
    REFLEXIVE = "reflexive"
    AWARE_PARTITIONAL = "aware_partitional"


@dataclass(frozen=True)
class GeneratorParams:
    n_states: int
    density: float = 0.5
    p_empty: float = 0.0
    family: Family = Family.GENERAL
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not 1 <= self.n_states <= settings.MAX_STATES:
            raise InvalidParams(f"n_states must be in 1..{settings.MAX_STATES}, got {self.n_states}")
        for name in ("density", "p_empty"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParams(f"{name} must be in [0, 1], got {value}")
        if not 0 <= self.seed < 1 << 64:
            raise InvalidParams(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def _blocks(rng: SplitMix64, members: Sequence[int]) -> Dict[int, int]:
    """Random equivalence relation over `members`: each gets a block id in 1..ceil(m/2)."""
    count = max(1, math.ceil(len(members) / 2))
    block_of = {member: rng.below(count) + 1 for member in members}
    masks: Dict[int, int] = {}
    for member, block in block_of.items():
        masks[block] = masks.get(block, 0) | 1 << member
    return {member: masks[block] for member, block in block_of.items()}


def generate_model(params: GeneratorParams) -> Model:
    """Deterministic random model for the given parameters."""
    n = params.n_states
    rng = SplitMix64(params.seed)
    space = StateSpace.numbered(n)
    images = [0] * n

    if params.family is Family.PARTITIONAL:
        images = [mask for _, mask in sorted(_blocks(rng, range(n)).items())]
    elif params.family is Family.AWARE_PARTITIONAL:
        aware = [i for i in range(n) if not rng.chance(params.p_empty)]
        for member, mask in _blocks(rng, aware).items():
            images[member] = mask
    else:
        p_empty = 0.0 if params.family is Family.REFLEXIVE else params.p_empty
        for i in range(n):
            if rng.chance(p_empty):
                continue
            image = 0
            for j in range(n):
                if rng.chance(params.density):
                    image |= 1 << j
            images[i] = image
        if params.family is Family.REFLEXIVE:
            images = [image | 1 << i for i, image in enumerate(images)]
    return Model(space, tuple(images))


def enumerate_correspondences(space: StateSpace) -> Iterator[Model]:
    """Every correspondence over `space`; state 0's image is the lowest digit."""
    n = space.size
    if n > settings.CORRESPONDENCE_CAP:
        raise EnumerationRefused(n, settings.CORRESPONDENCE_CAP, what="correspondences")
    full = space.full_mask
    return (Model(space, tuple((code >> (i * n)) & full for i in range(n))) for code in range(1 << (n * n)))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

REPORT_COLUMNS = ["property", "kind", "verdict", "quantification", "witness"]
TRACE_COLUMNS = ["step", "label", "expression", "value", "relation"]


def _labels(space: StateSpace, event: Event) -> List[str]:
    return space.labels_of(event)


def _witness_text(space: StateSpace, witness: Optional[Witness]) -> str:
    if witness is None:
        return ""
    subject = f"E={render_event(space, witness.event)}"
    if witness.other is not None:
        subject += f" F={render_event(space, witness.other)}"
    return f"{subject}: {render_event(space, witness.lhs)} vs {render_event(space, witness.rhs)}"


def _witness_tree(space: StateSpace, witness: Optional[Witness]) -> Optional[Dict[str, Any]]:
    if witness is None:
        return None
    tree: Dict[str, Any] = {"event": _labels(space, witness.event)}
    if witness.other is not None:
        tree["other"] = _labels(space, witness.other)
    tree["lhs"] = _labels(space, witness.lhs)
    tree["rhs"] = _labels(space, witness.rhs)
    return tree


def _quantification_tree(report: PropertyReport) -> Union[str, Dict[str, Any]]:
    q = report.quantification
    if q.exhaustive:
        return "exhaustive"
    return {"mode": "sampled", "samples": q.samples, "seed": q.seed}


def _table(rows: List[Dict[str, Any]], columns: List[str]) -> str:
    if not rows:
        return "  ".join(columns)
    return pd.DataFrame(rows, columns=columns).to_string(index=False, justify="left")


def _document(**body: Any) -> str:
    return json.dumps({"format": settings.STRUCTURED_FORMAT_VERSION, **body}, indent=2)


def render_reports(space: StateSpace, reports: Sequence[PropertyReport], fmt: str = "text") -> str:
    """Property reports as a table, one row per property, or a structured document."""
    if fmt == "structured":
        entries = [
            {
                "property": r.property.value,
                "kind": r.kind.value,
                "holds": r.holds,
                "quantification": _quantification_tree(r),
                "witness": _witness_tree(space, r.witness),
            }
            for r in reports
        ]
        return _document(reports=entries)
    rows = [
        {
            "property": r.property.value,
            "kind": r.kind.value,
            "verdict": "holds" if r.holds else "fails",
            "quantification": r.quantification.describe(),
            "witness": _witness_text(space, r.witness),
        }
        for r in reports
    ]
    return _table(rows, REPORT_COLUMNS)


def render_trace(space: StateSpace, trace: DerivationTrace, fmt: str = "text") -> str:
    """Derivation steps as a table followed by the verdict line, or a structured document."""
    if fmt == "structured":
        steps = [
            {
                "label": step.label,
                "expression": step.expression,
                "value": _labels(space, step.value),
                "relation": step.relation.value,
            }
            for step in trace.steps
        ]
        verdict: Dict[str, Any] = {"verdict": trace.verdict.value}
        if trace.broken_step is not None:
            verdict["broken_step"] = trace.broken_step
        return _document(trace={"chain": trace.chain, "steps": steps, **verdict})
    rows = [
        {
            "step": i,
            "label": step.label,
            "expression": step.expression,
            "value": render_event(space, step.value),
            "relation": step.relation.value,
        }
        for i, step in enumerate(trace.steps, start=1)
    ]
    return _table(rows, TRACE_COLUMNS) + f"\nverdict: {trace.describe_verdict()}"


def render_report(space: StateSpace, subject: Union[Sequence[PropertyReport], DerivationTrace], fmt: str = "text") -> str:
    """Render a report list or a derivation trace as a text table or a structured document."""
    if isinstance(subject, DerivationTrace):
        return render_trace(space, subject, fmt)
    return render_reports(space, subject, fmt)


def render_eval(
    space: StateSpace, result: Event, fmt: str = "text", trace: Optional[FixpointTrace] = None
) -> str:
    """Operator result, with the U iterates when a fixpoint trace is given."""
    if fmt == "structured":
        body: Dict[str, Any] = {"event": _labels(space, result)}
        if trace is not None:
            body["fixpoint"] = {
                "terms": [_labels(space, term) for term in trace.terms],
                "partials": [_labels(space, partial) for partial in trace.partials],
                "cycle_start": trace.cycle_start,
                "repeat_of": trace.repeat_of,
            }
        return _document(**body)
    lines = [render_event(space, result)]
    if trace is not None:
        for i, (term, partial) in enumerate(zip(trace.terms, trace.partials), start=1):
            lines.append(f"T{i} = {render_event(space, term)}  partial = {render_event(space, partial)}")
        lines.append(f"cycle: T{trace.cycle_start + 1} repeats T{trace.repeat_of + 1}")
    return "\n".join(lines)


def render_counterexample(
    model: Model,
    reports: Sequence[PropertyReport],
    fmt: str = "text",
    index: Optional[int] = None,
    unaware: Optional[Tuple[Event, Event]] = None,
) -> str:
    """A fuzz hit: the model as a model file, the reports, and any nonempty unawareness found."""
    space = model.space
    if fmt == "structured":
        body: Dict[str, Any] = {
            "index": index,
            "model": render_model(model),
            "reports": json.loads(render_reports(space, reports, "structured"))["reports"],
        }
        if unaware is not None:
            body["unaware"] = {"event": _labels(space, unaware[0]), "value": _labels(space, unaware[1])}
        return _document(**body)
    parts = [render_model(model).rstrip("\n"), "", render_reports(space, reports, "text")]
    if unaware is not None:
        parts.append(f"U({render_event(space, unaware[0])}) = {render_event(space, unaware[1])}")
    return "\n".join(parts)
