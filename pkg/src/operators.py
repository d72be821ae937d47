"""Knowledge and unawareness operators.

Two operator kinds share one correspondence:

- standard: K(E) = {w : P(w) is a subset of E}; an empty image knows everything.
- revised:  K'(E) = {w : P(w) is nonempty and a subset of E}.

Unawareness U(E) is the intersection of the iterates (not K)^i(E), i >= 1.
The iterates move inside the finite powerset, so the sequence enters a cycle;
iteration stops at the first repeated term and the result intersects every
term seen up to that point, which covers the whole cycle.

U is fixed to that intersection itself, the largest operator contained in it.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import settings
from .core_model import Event, Model, enumerate_events
from .errors import DimensionError, EnumerationRefused

logger = logging.getLogger(__name__)


class OperatorKind(str, Enum):
    STANDARD = "standard"
    REVISED = "revised"

    @classmethod
    def parse(cls, text: Union[str, "OperatorKind"]) -> "OperatorKind":
        """Kind from a member, its value, or the std/rev shorthand."""
        if isinstance(text, cls):
            return text
        aliases = {"std": cls.STANDARD, "standard": cls.STANDARD, "rev": cls.REVISED, "revised": cls.REVISED}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown operator kind {text!r} (expected std or rev)") from None


@dataclass(frozen=True)
class FixpointTrace:
    """Iterates of not-K behind one unawareness value.

    terms[i] is (not K)^(i+1)(E); the last term repeats terms[repeat_of] and
    sits at index cycle_start. partials[i] intersects terms[0..i].
    """

    terms: Tuple[Event, ...]
    partials: Tuple[Event, ...]
    cycle_start: int
    repeat_of: int
    result: Event


def _know_bits(images: Sequence[int], kind: OperatorKind, bits: int) -> int:
    known = 0
    revised = kind is OperatorKind.REVISED
    for position, image in enumerate(images):
        if image & ~bits == 0 and (image or not revised):
            known |= 1 << position
    return known


def _iterate(step: Callable[[int], int], start: int, full: int) -> Tuple[List[int], List[int], int]:
    """Apply `step` from `step(start)` until a term repeats.

    Returns (terms, partials, repeat_of), the repeated term appended last.
    """
    terms: List[int] = []
    partials: List[int] = []
    seen: Dict[int, int] = {}
    acc = full
    term = step(start)
    while term not in seen:
        seen[term] = len(terms)
        terms.append(term)
        acc &= term
        partials.append(acc)
        term = step(term)
    terms.append(term)
    partials.append(acc)
    return terms, partials, seen[term]


def _check_width(model: Model, event: Event) -> None:
    if event.width != model.space.size:
        raise DimensionError(model.space.size, event.width)


def know(model: Model, kind: Union[OperatorKind, str], event: Event) -> Event:
    """States where the agent knows `event`."""
    _check_width(model, event)
    return Event(_know_bits(model.images, OperatorKind.parse(kind), event.bits), event.width)


def not_know(model: Model, kind: Union[OperatorKind, str], event: Event) -> Event:
    """States where the agent does not know `event`."""
    return know(model, kind, event).complement()


def unaware(model: Model, kind: Union[OperatorKind, str], event: Event) -> Tuple[Event, FixpointTrace]:
    """States where the agent is unaware of `event`, with the iterates behind it."""
    _check_width(model, event)
    kind = OperatorKind.parse(kind)
    full = model.space.full_mask
    images = model.images

    def step(bits: int) -> int:
        return ~_know_bits(images, kind, bits) & full

    terms, partials, repeat_of = _iterate(step, event.bits, full)
    width = event.width
    logger.debug("unaware(%s): %d terms, cycle re-enters at term %d", kind.value, len(terms), repeat_of)
    result = Event(partials[-1], width)
    trace = FixpointTrace(
        terms=tuple(Event(bits, width) for bits in terms),
        partials=tuple(Event(bits, width) for bits in partials),
        cycle_start=len(terms) - 1,
        repeat_of=repeat_of,
        result=result,
    )
    return result, trace


def core_unawareness(model: Model) -> Event:
    """States whose possibility set is empty."""
    bits = 0
    for position, image in enumerate(model.images):
        if image == 0:
            bits |= 1 << position
    return Event(bits, model.space.size)


def core_unawareness_by_intersection(model: Model) -> Event:
    """Intersection of U'(E) over every event E; must agree with core_unawareness."""
    events = enumerate_events(model.space)
    view = OperatorView(model, OperatorKind.REVISED)
    acc = model.space.full_mask
    for event in events:
        acc &= view.unaware(event.bits)
        if not acc:
            break
    return Event(acc, model.space.size)


def resolvable_unawareness(model: Model, event: Event) -> Event:
    """U'(E) minus the core set: unawareness that introspection may still resolve."""
    result, _ = unaware(model, OperatorKind.REVISED, event)
    return result - core_unawareness(model)


@dataclass(frozen=True)
class KnowledgeTable:
    """K and K' for every event of a space, computed in one numpy broadcast.

    Row r of the containment matrix says which images fit inside event r.
    """

    standard: np.ndarray
    revised: np.ndarray

    @classmethod
    def build(cls, model: Model) -> "KnowledgeTable":
        size = model.space.size
        if size > settings.UNARY_CAP:
            raise EnumerationRefused(size, settings.UNARY_CAP)
        events = np.arange(1 << size, dtype=np.int64)
        images = np.asarray(model.images, dtype=np.int64)
        weights = np.left_shift(np.int64(1), np.arange(size, dtype=np.int64))
        outside = np.bitwise_and(np.invert(events), model.space.full_mask)
        contained = np.bitwise_and(images[np.newaxis, :], outside[:, np.newaxis]) == 0
        nonempty = images != 0
        standard = contained.astype(np.int64) @ weights
        revised = (contained & nonempty[np.newaxis, :]).astype(np.int64) @ weights
        return cls(standard=standard, revised=revised)

    def column(self, kind: OperatorKind) -> np.ndarray:
        return self.revised if kind is OperatorKind.REVISED else self.standard


class OperatorView:
    """Bit-level operators of one model and kind, memoised per event.

    Spaces within the unary cap read K from a KnowledgeTable; larger spaces
    evaluate K state by state on demand.
    """

    def __init__(self, model: Model, kind: Union[OperatorKind, str]):
        self.model = model
        self.kind = OperatorKind.parse(kind)
        self.full = model.space.full_mask
        self._table: Optional[List[int]] = None
        if model.space.size <= settings.UNARY_CAP:
            self._table = KnowledgeTable.build(model).column(kind).tolist()
        self._known: Dict[int, int] = {}
        self._unaware: Dict[int, int] = {}

    def know(self, bits: int) -> int:
        if self._table is not None:
            return self._table[bits]
        known = self._known.get(bits)
        if known is None:
            known = _know_bits(self.model.images, self.kind, bits)
            self._known[bits] = known
        return known

    def not_know(self, bits: int) -> int:
        return ~self.know(bits) & self.full

    def unaware(self, bits: int) -> int:
        result = self._unaware.get(bits)
        if result is None:
            _, partials, _ = _iterate(self.not_know, bits, self.full)
            result = partials[-1]
            self._unaware[bits] = result
        return result
