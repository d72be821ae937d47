"""Step-by-step evaluation of the impossibility chain and its revised counterpart.

Standard chain, for an event E:

    UE  subset of  U(UE)        AU introspection
        subset of  ~K~K(UE)     iterated not-knowing
        equals     ~K(Omega)    KU introspection
        equals     {}           necessitation

Revised chain, closed over the model by taking E := Omega in the middle step:

    U'(Omega)  subset of  U'(U'(Omega))       AU introspection
               subset of  ~K'~K'(U'(Omega))   plausibility
               equals     ~K'(Omega)          KU introspection
               equals     U'(Omega)           R necessitation

Every value is produced by an operators-module call. Each step records
whether the claimed relation to the previous value actually holds.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .core_model import Event, Model
from .operators import OperatorKind, core_unawareness, not_know, unaware

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    SUBSET_HOLDS = "subset_holds"
    EQUALS_HOLDS = "equals_holds"
    VIOLATED = "violated"


class Verdict(str, Enum):
    CONTRADICTION = "contradiction"
    PRESERVED = "preserved"
    TRIVIALLY_CONSISTENT = "trivially_consistent"
    BROKEN_AT = "broken_at"


@dataclass(frozen=True)
class TraceStep:
    label: str
    expression: str
    value: Event
    relation: Relation


@dataclass(frozen=True)
class DerivationTrace:
    chain: str
    steps: Tuple[TraceStep, ...]
    verdict: Verdict
    broken_step: Optional[int] = None

    @property
    def broken_label(self) -> Optional[str]:
        if self.broken_step is None:
            return None
        return self.steps[self.broken_step - 1].label

    def describe_verdict(self) -> str:
        if self.verdict is Verdict.BROKEN_AT:
            return f"broken_at(step {self.broken_step}: {self.broken_label})"
        return self.verdict.value


def _relate(claim: str, previous: Event, value: Event) -> Relation:
    if claim == "subset":
        return Relation.SUBSET_HOLDS if previous.issubset(value) else Relation.VIOLATED
    return Relation.EQUALS_HOLDS if previous == value else Relation.VIOLATED


def _assemble(chain: str, plan: Sequence[Tuple[str, str, str, Event]]) -> DerivationTrace:
    steps: List[TraceStep] = []
    previous: Optional[Event] = None
    for label, expression, claim, value in plan:
        relation = Relation.SUBSET_HOLDS if previous is None else _relate(claim, previous, value)
        steps.append(TraceStep(label, expression, value, relation))
        previous = value

    first, last = steps[0].value, steps[-1].value
    broken = next((i for i, step in enumerate(steps, start=1) if step.relation is Relation.VIOLATED), None)
    if broken is not None:
        verdict = Verdict.BROKEN_AT
    elif first.is_empty:
        verdict = Verdict.TRIVIALLY_CONSISTENT
    elif last.is_empty:
        verdict = Verdict.CONTRADICTION
    elif last == first:
        verdict = Verdict.PRESERVED
    else:
        # The standard chain ends at {} and the revised one at U'(Omega) again.
        raise AssertionError("chain relations hold but its endpoints differ")
    logger.debug("%s chain: verdict %s", chain, verdict.value)
    return DerivationTrace(chain=chain, steps=tuple(steps), verdict=verdict, broken_step=broken)


def trace_standard_chain(model: Model, event: Event) -> DerivationTrace:
    """Follow the standard chain from U(E) and report where it stops holding."""
    kind = OperatorKind.STANDARD
    space = model.space
    ue, _ = unaware(model, kind, event)
    uue, _ = unaware(model, kind, ue)
    nknk = not_know(model, kind, not_know(model, kind, ue))
    nk_full = not_know(model, kind, space.full())
    plan = [
        ("non-trivial unawareness", "U(E)", "subset", ue),
        ("AU introspection", "U(U(E))", "subset", uue),
        ("iterated not-knowing", "~K~K(U(E))", "subset", nknk),
        ("KU introspection", "~K(Omega)", "equals", nk_full),
        ("necessitation", "{}", "equals", space.empty()),
    ]
    return _assemble("dlr", plan)


def trace_revised_chain(model: Model) -> DerivationTrace:
    """Follow the revised chain from U'(Omega); it ends where it started."""
    kind = OperatorKind.REVISED
    space = model.space
    core, _ = unaware(model, kind, space.full())
    ucore, _ = unaware(model, kind, core)
    nknk = not_know(model, kind, not_know(model, kind, core))
    nk_full = not_know(model, kind, space.full())
    plan = [
        ("core unawareness", "U'(Omega)", "subset", core),
        ("AU introspection", "U'(U'(Omega))", "subset", ucore),
        ("plausibility", "~K'~K'(U'(Omega))", "subset", nknk),
        ("KU introspection", "~K'(Omega)", "equals", nk_full),
        ("R necessitation", "U'(Omega)", "equals", core_unawareness(model)),
    ]
    return _assemble("rdlr", plan)
