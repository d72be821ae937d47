"""State spaces, events as bit vectors, and possibility correspondences."""

import logging
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

from . import settings
from .errors import DimensionError, EnumerationRefused, ModelError

logger = logging.getLogger(__name__)

_LABEL = re.compile(r"^[A-Za-z0-9_]+$")


@dataclass(frozen=True)
class Event:
    """A subset of a state space; bit i set means state i belongs to the event."""

    bits: int
    width: int

    def __post_init__(self):
        if not 1 <= self.width <= settings.MAX_STATES:
            raise ModelError(f"event width must be in 1..{settings.MAX_STATES}, got {self.width}")
        if self.bits < 0 or self.bits >> self.width:
            raise ModelError(f"event bits {self.bits:#x} exceed width {self.width}")

    @property
    def full_mask(self) -> int:
        return (1 << self.width) - 1

    def _same_width(self, other: "Event") -> None:
        if other.width != self.width:
            raise DimensionError(self.width, other.width)

    def __or__(self, other: "Event") -> "Event":
        self._same_width(other)
        return Event(self.bits | other.bits, self.width)

    def __and__(self, other: "Event") -> "Event":
        self._same_width(other)
        return Event(self.bits & other.bits, self.width)

    def __sub__(self, other: "Event") -> "Event":
        self._same_width(other)
        return Event(self.bits & ~other.bits, self.width)

    def __invert__(self) -> "Event":
        return self.complement()

    def complement(self) -> "Event":
        """Complement relative to the state space, never beyond it."""
        return Event(~self.bits & self.full_mask, self.width)

    def issubset(self, other: "Event") -> bool:
        self._same_width(other)
        return self.bits & ~other.bits == 0

    def __le__(self, other: "Event") -> bool:
        return self.issubset(other)

    def __ge__(self, other: "Event") -> bool:
        return other.issubset(self)

    def __contains__(self, index: int) -> bool:
        return bool(self.bits >> index & 1)

    def __iter__(self) -> Iterator[int]:
        return (i for i in range(self.width) if self.bits >> i & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    @property
    def is_empty(self) -> bool:
        return self.bits == 0

    @property
    def is_full(self) -> bool:
        return self.bits == self.full_mask


@dataclass(frozen=True)
class StateSpace:
    """Ordered, finite, nonempty set of named states."""

    labels: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise ModelError("a state space needs at least one state")
        if len(labels) > settings.MAX_STATES:
            raise ModelError(f"too many states ({len(labels)} > {settings.MAX_STATES})")
        index: Dict[str, int] = {}
        for position, label in enumerate(labels):
            if not isinstance(label, str) or not _LABEL.match(label):
                raise ModelError(f"invalid state label {label!r}")
            if label in index:
                raise ModelError(f"duplicate state {label!r}")
            index[label] = position
        object.__setattr__(self, "_index", index)

    @classmethod
    def numbered(cls, size: int, prefix: str = "s") -> "StateSpace":
        return cls(tuple(f"{prefix}{i}" for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        """Bit position of `label`."""
        try:
            return self._index[label]
        except KeyError:
            raise ModelError(f"unknown state {label!r}") from None

    def event(self, labels: Iterable[str] = ()) -> Event:
        """Event holding exactly `labels`."""
        bits = 0
        for label in labels:
            bits |= 1 << self.index(label)
        return Event(bits, self.size)

    def from_bits(self, bits: int) -> Event:
        return Event(bits, self.size)

    def empty(self) -> Event:
        return Event(0, self.size)

    def full(self) -> Event:
        return Event(self.full_mask, self.size)

    def labels_of(self, event: Event) -> List[str]:
        """Member labels in declaration order."""
        if event.width != self.size:
            raise DimensionError(self.size, event.width)
        return [self.labels[i] for i in event]


@dataclass(frozen=True)
class Model:
    """A state space with a total possibility correspondence; empty images are legal."""

    space: StateSpace
    images: Tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(image) for image in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.space.size:
            raise ModelError(f"correspondence defines {len(images)} images for {self.space.size} states")
        for position, image in enumerate(images):
            if image < 0 or image & ~self.space.full_mask:
                raise ModelError(f"image of state {self.space.labels[position]!r} lies outside the state space")

    @classmethod
    def from_mapping(cls, space: StateSpace, mapping: Mapping[str, Iterable[str]]) -> "Model":
        missing = [label for label in space.labels if label not in mapping]
        if missing:
            raise ModelError(f"no image given for states {missing}")
        extra = [label for label in mapping if label not in space]
        if extra:
            raise ModelError(f"images given for unknown states {extra}")
        return cls(space, tuple(space.event(mapping[label]).bits for label in space.labels))

    def possibility(self, state: Union[int, str]) -> Event:
        """The image P(state)."""
        position = self.space.index(state) if isinstance(state, str) else state
        return Event(self.images[position], self.space.size)


@dataclass(frozen=True)
class CorrespondenceClass:
    reflexive: bool
    partitional: bool
    has_empty_image: bool


def classify_correspondence(model: Model) -> CorrespondenceClass:
    """Structural flags of a correspondence."""
    images = model.images
    reflexive = all(image >> i & 1 for i, image in enumerate(images))
    partitional = reflexive and all(
        images[j] == image for image in images for j in range(model.space.size) if image >> j & 1
    )
    has_empty_image = any(image == 0 for image in images)
    return CorrespondenceClass(reflexive=reflexive, partitional=partitional, has_empty_image=has_empty_image)


def enumerate_events(space: StateSpace, cap: int = settings.UNARY_CAP) -> Iterator[Event]:
    """Every event of `space` once, in ascending bit-vector order."""
    if space.size > cap:
        logger.info("event enumeration refused for %d states (cap %d)", space.size, cap)
        raise EnumerationRefused(space.size, cap)
    return (Event(bits, space.size) for bits in range(1 << space.size))
