"""Catalog of epistemic properties, checked against one model and operator kind.

Each property is a statement quantified over no event, every event, or every
pair of events. Quantification is exhaustive within the caps in `settings`
and drawn from a seeded SplitMix64 stream beyond them. A failed report always
carries the first violating input together with both computed sides.

`core` below is U'(Omega), the empty-image states, for the revised kind and
the empty event for the standard kind.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from . import settings
from .core_model import Event, Model, StateSpace, classify_correspondence, enumerate_events
from .errors import BudgetInfeasible, UnknownProperty
from .operators import OperatorKind, OperatorView, core_unawareness
from .splitmix import SplitMix64

logger = logging.getLogger(__name__)


class PropertyId(str, Enum):
    NECESSITATION = "necessitation"
    R_NECESSITATION = "r_necessitation"
    MONOTONICITY = "monotonicity"
    TRUTH = "truth"
    POSITIVE_INTROSPECTION = "positive_introspection"
    NEGATIVE_INTROSPECTION = "negative_introspection"
    KU_INTROSPECTION = "ku_introspection"
    AU_INTROSPECTION_CORE = "au_introspection_core"
    AU_INTROSPECTION_ALL = "au_introspection_all"
    REVERSE_AU_INTROSPECTION = "reverse_au_introspection"
    PLAUSIBILITY = "plausibility"
    SYMMETRY = "symmetry"
    ABSORPTION = "absorption"
    PARTITION_NO_UNAWARENESS = "partition_no_unawareness"

    @classmethod
    def parse(cls, name: Union[str, "PropertyId"]) -> "PropertyId":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise UnknownProperty(str(name)) from None


# Items the revised operators satisfy on every correspondence.
ALWAYS_REVISED = (
    PropertyId.R_NECESSITATION,
    PropertyId.MONOTONICITY,
    PropertyId.PLAUSIBILITY,
    PropertyId.AU_INTROSPECTION_CORE,
    PropertyId.SYMMETRY,
)

# The nine items listed for the revised operators; items 3, 4, 6 and 8 need
# structure on the aware states (an awareness partition provides it).
PROPOSITION_SUITE = (
    PropertyId.R_NECESSITATION,
    PropertyId.MONOTONICITY,
    PropertyId.TRUTH,
    PropertyId.POSITIVE_INTROSPECTION,
    PropertyId.PLAUSIBILITY,
    PropertyId.KU_INTROSPECTION,
    PropertyId.AU_INTROSPECTION_CORE,
    PropertyId.REVERSE_AU_INTROSPECTION,
    PropertyId.SYMMETRY,
)


@dataclass(frozen=True)
class Budget:
    """Quantification policy: auto picks exhaustive within caps, sampled beyond."""

    mode: str = "auto"
    samples: int = settings.DEFAULT_SAMPLES
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self):
        if self.mode not in ("auto", "exhaustive", "sampled"):
            raise BudgetInfeasible(f"unknown quantification mode {self.mode!r}")
        if self.samples <= 0:
            raise BudgetInfeasible(f"sample count must be positive, got {self.samples}")


@dataclass(frozen=True)
class Quantification:
    exhaustive: bool
    samples: Optional[int] = None
    seed: Optional[int] = None

    def describe(self) -> str:
        if self.exhaustive:
            return "exhaustive"
        return f"sampled({self.samples}, seed={self.seed})"


EXHAUSTIVE = Quantification(exhaustive=True)


@dataclass(frozen=True)
class Witness:
    """Inputs that violate a statement and the two sides computed on them."""

    event: Event
    lhs: Event
    rhs: Event
    other: Optional[Event] = None


@dataclass(frozen=True)
class PropertyReport:
    property: PropertyId
    kind: OperatorKind
    holds: bool
    quantification: Quantification
    witness: Optional[Witness] = None


class _Semantics:
    """Operators of one (model, kind) pair at the bit level, plus the core set."""

    def __init__(self, model: Model, kind: OperatorKind):
        kind = OperatorKind.parse(kind)
        self.view = OperatorView(model, kind)
        self.full = model.space.full_mask
        self.core = core_unawareness(model).bits if kind is OperatorKind.REVISED else 0
        self.partitional = classify_correspondence(model).partitional

    def k(self, bits: int) -> int:
        return self.view.know(bits)

    def nk(self, bits: int) -> int:
        return self.view.not_know(bits)

    def u(self, bits: int) -> int:
        return self.view.unaware(bits)


def _subset(a: int, b: int) -> bool:
    return a & ~b == 0


# A statement returns (holds, lhs, rhs). Nullary statements get e = f = 0,
# unary ones f = 0; their witness event is the statement's own subject.
Statement = Callable[[_Semantics, int, int], Tuple[bool, int, int]]


def _necessitation(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs = s.k(s.full)
    return lhs == s.full, lhs, s.full


def _r_necessitation(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs, rhs = s.k(s.full), s.full & ~s.core
    return lhs == rhs, lhs, rhs


def _monotonicity(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs, rhs = s.k(e), s.k(f)
    return not _subset(e, f) or _subset(lhs, rhs), lhs, rhs


def _truth(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs = s.k(e)
    return _subset(lhs, e), lhs, e


def _positive_introspection(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs = s.k(e)
    rhs = s.k(lhs)
    return _subset(lhs, rhs), lhs, rhs


def _negative_introspection(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs = s.nk(e)
    rhs = s.k(lhs)
    return _subset(lhs, rhs), lhs, rhs


def _ku_introspection(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs = s.k(s.u(e))
    return lhs == 0, lhs, 0


def _au_introspection_core(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    rhs = s.u(s.core)
    return _subset(s.core, rhs), s.core, rhs


def _au_introspection_all(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs = s.u(e)
    rhs = s.u(lhs)
    return _subset(lhs, rhs), lhs, rhs


def _reverse_au_introspection(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    rhs = s.u(e)
    lhs = s.u(rhs)
    return _subset(lhs, rhs), lhs, rhs


def _plausibility(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    middle = s.u(e)
    if not _subset(s.core, middle):
        return False, s.core, middle
    not_known = s.nk(e)
    bound = not_known & s.nk(not_known)
    return _subset(middle, bound), middle, bound


def _symmetry(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    rhs = s.u(0)
    return s.core == rhs, s.core, rhs


def _absorption(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    lhs, rhs = s.k(e | s.core), s.k(e)
    return lhs == rhs, lhs, rhs


def _partition_no_unawareness(s: _Semantics, e: int, f: int) -> Tuple[bool, int, int]:
    if not s.partitional:
        return True, 0, 0
    lhs = s.u(e)
    return lhs == 0, lhs, 0


@dataclass(frozen=True)
class _Entry:
    arity: int
    statement: Statement
    # Subject of a nullary statement, reported as its witness event.
    subject: Optional[Callable[[_Semantics], int]] = None


_CATALOG: Dict[PropertyId, _Entry] = {
    PropertyId.NECESSITATION: _Entry(0, _necessitation, lambda s: s.full),
    PropertyId.R_NECESSITATION: _Entry(0, _r_necessitation, lambda s: s.full),
    PropertyId.MONOTONICITY: _Entry(2, _monotonicity),
    PropertyId.TRUTH: _Entry(1, _truth),
    PropertyId.POSITIVE_INTROSPECTION: _Entry(1, _positive_introspection),
    PropertyId.NEGATIVE_INTROSPECTION: _Entry(1, _negative_introspection),
    PropertyId.KU_INTROSPECTION: _Entry(1, _ku_introspection),
    PropertyId.AU_INTROSPECTION_CORE: _Entry(0, _au_introspection_core, lambda s: s.core),
    PropertyId.AU_INTROSPECTION_ALL: _Entry(1, _au_introspection_all),
    PropertyId.REVERSE_AU_INTROSPECTION: _Entry(1, _reverse_au_introspection),
    PropertyId.PLAUSIBILITY: _Entry(1, _plausibility),
    PropertyId.SYMMETRY: _Entry(0, _symmetry, lambda s: 0),
    PropertyId.ABSORPTION: _Entry(1, _absorption),
    PropertyId.PARTITION_NO_UNAWARENESS: _Entry(1, _partition_no_unawareness),
}


def _quantify(arity: int, size: int, budget: Budget) -> Quantification:
    cap = settings.PAIR_CAP if arity == 2 else settings.UNARY_CAP
    within = size <= cap
    if budget.mode == "exhaustive" and not within:
        raise BudgetInfeasible(f"exhaustive quantification over {size} states exceeds the cap of {cap}")
    if budget.mode == "sampled" or not within:
        if not within:
            logger.info("%d states exceed the cap of %d, sampling %d draws", size, cap, budget.samples)
        return Quantification(exhaustive=False, samples=budget.samples, seed=budget.seed)
    return EXHAUSTIVE


def _inputs(arity: int, space: StateSpace, quantification: Quantification) -> Iterator[Tuple[int, int]]:
    size = space.size
    if arity == 1:
        if quantification.exhaustive:
            return ((e.bits, 0) for e in enumerate_events(space))
        rng = SplitMix64(quantification.seed or 0)
        return ((rng.bits(size), 0) for _ in range(quantification.samples or 0))
    if quantification.exhaustive:
        events = [e.bits for e in enumerate_events(space, cap=settings.PAIR_CAP)]
        return ((e, f) for e in events for f in events)
    rng = SplitMix64(quantification.seed or 0)
    return _sampled_pairs(rng, size, quantification.samples or 0)


def _sampled_pairs(rng: SplitMix64, size: int, count: int) -> Iterator[Tuple[int, int]]:
    # E is drawn inside F so the implication's premise never holds vacuously.
    for _ in range(count):
        f = rng.bits(size)
        yield rng.bits(size) & f, f


def check_property(
    model: Model,
    kind: Union[OperatorKind, str],
    property: Union[PropertyId, str],
    budget: Optional[Budget] = None,
    semantics: Optional[_Semantics] = None,
) -> PropertyReport:
    """Evaluate one catalog property; a failure carries its witness."""
    prop = PropertyId.parse(property)
    kind = OperatorKind.parse(kind)
    budget = budget or Budget()
    entry = _CATALOG[prop]
    s = semantics or _Semantics(model, kind)
    size = model.space.size

    def event(bits: int) -> Event:
        return Event(bits, size)

    if entry.arity == 0:
        holds, lhs, rhs = entry.statement(s, 0, 0)
        subject = entry.subject(s) if entry.subject else 0
        witness = None if holds else Witness(event=event(subject), lhs=event(lhs), rhs=event(rhs))
        return PropertyReport(prop, kind, holds, EXHAUSTIVE, witness)

    quantification = _quantify(entry.arity, size, budget)
    for e, f in _inputs(entry.arity, model.space, quantification):
        holds, lhs, rhs = entry.statement(s, e, f)
        if not holds:
            other = event(f) if entry.arity == 2 else None
            witness = Witness(event=event(e), lhs=event(lhs), rhs=event(rhs), other=other)
            logger.debug("%s fails under %s at %#x", prop.value, kind.value, e)
            return PropertyReport(prop, kind, False, quantification, witness)
    return PropertyReport(prop, kind, True, quantification)


def check_all(
    model: Model,
    kind: Union[OperatorKind, str],
    budget: Optional[Budget] = None,
    properties: Optional[Iterable[Union[PropertyId, str]]] = None,
) -> List[PropertyReport]:
    """One report per property, in catalog order."""
    kind = OperatorKind.parse(kind)
    wanted = list(PropertyId) if properties is None else [PropertyId.parse(p) for p in properties]
    order = [p for p in PropertyId if p in wanted]
    semantics = _Semantics(model, kind)
    return [check_property(model, kind, prop, budget, semantics) for prop in order]


def failing(reports: Sequence[PropertyReport]) -> List[PropertyId]:
    """Ids of the reports that do not hold, in report order."""
    return [report.property for report in reports if not report.holds]
