"""Counterexample search over generated or enumerated models."""

import logging
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Tuple, Union

from .core_model import Event, Model, enumerate_events
from .model_io import GeneratorParams, generate_model
from .operators import OperatorKind, OperatorView
from .properties import Budget, PropertyId, PropertyReport, check_property
from .splitmix import SplitMix64

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 1000


@dataclass(frozen=True)
class FuzzHit:
    """First model of a search that is a counterexample."""

    index: int
    model: Model
    reports: Tuple[PropertyReport, ...]
    # For chain searches: an event whose unawareness set is nonempty, and that set.
    unaware: Optional[Tuple[Event, Event]] = None


def seeded_models(params: GeneratorParams, count: int) -> Iterator[Model]:
    """`count` models sharing `params`, each with its own seed drawn from params.seed."""
    seeds = SplitMix64(params.seed)
    for _ in range(count):
        yield generate_model(
            GeneratorParams(
                n_states=params.n_states,
                density=params.density,
                p_empty=params.p_empty,
                family=params.family,
                seed=seeds.next_u64(),
            )
        )


def _progress(index: int) -> None:
    if index and index % PROGRESS_EVERY == 0:
        logger.info("searched %d models", index)


def search_property(
    models: Iterable[Model],
    kind: Union[OperatorKind, str],
    property: Union[PropertyId, str],
    budget: Optional[Budget] = None,
) -> Optional[FuzzHit]:
    """First model on which `property` fails."""
    prop = PropertyId.parse(property)
    for index, model in enumerate(models):
        _progress(index)
        report = check_property(model, kind, prop, budget)
        if not report.holds:
            logger.info("counterexample to %s at model %d", prop.value, index)
            return FuzzHit(index, model, (report,))
    return None


def chain_assumptions(kind: Union[OperatorKind, str]) -> Tuple[PropertyId, ...]:
    """The three properties the impossibility chain takes for granted."""
    kind = OperatorKind.parse(kind)
    necessitation = PropertyId.R_NECESSITATION if kind is OperatorKind.REVISED else PropertyId.NECESSITATION
    return (necessitation, PropertyId.KU_INTROSPECTION, PropertyId.AU_INTROSPECTION_ALL)


def _nonempty_unawareness(model: Model, kind: OperatorKind) -> Optional[Tuple[Event, Event]]:
    view = OperatorView(model, kind)
    for event in enumerate_events(model.space):
        value = view.unaware(event.bits)
        if value:
            return event, Event(value, model.space.size)
    return None


def search_chain(models: Iterable[Model], kind: Union[OperatorKind, str]) -> Optional[FuzzHit]:
    """First model satisfying the chain's three assumptions while some U(E) is nonempty.

    Under the standard operators no such model exists.
    """
    budget = Budget(mode="exhaustive")
    for index, model in enumerate(models):
        _progress(index)
        reports = []
        for prop in chain_assumptions(kind):
            report = check_property(model, kind, prop, budget)
            if not report.holds:
                break
            reports.append(report)
        else:
            witness = _nonempty_unawareness(model, kind)
            if witness is not None:
                logger.info("chain counterexample at model %d", index)
                return FuzzHit(index, model, tuple(reports), witness)
    return None
