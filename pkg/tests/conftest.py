"""Shared fixtures: the worked example models and a small event helper."""

from pathlib import Path

import pytest

from src.core_model import Event, Model, StateSpace

MODELS_DIR = Path(__file__).resolve().parent.parent / "models"


def ev(space: StateSpace, *labels: str) -> Event:
    """Event of `space` holding the given state labels."""
    return space.event(labels)


@pytest.fixture
def m1() -> Model:
    """Omega = {a,b,c}; P(a)={a}, P(b)={b}, P(c)=Omega."""
    space = StateSpace(("a", "b", "c"))
    return Model.from_mapping(space, {"a": ["a"], "b": ["b"], "c": ["a", "b", "c"]})


@pytest.fixture
def m2() -> Model:
    """Omega = {a,b,c,d}; P(a)={a}, P(b)={b}, P(c) empty, P(d)=Omega."""
    space = StateSpace(("a", "b", "c", "d"))
    return Model.from_mapping(space, {"a": ["a"], "b": ["b"], "c": [], "d": ["a", "b", "c", "d"]})


@pytest.fixture
def identity3() -> Model:
    space = StateSpace.numbered(3)
    return Model(space, (0b001, 0b010, 0b100))


@pytest.fixture
def all_empty() -> Model:
    space = StateSpace.numbered(3)
    return Model(space, (0, 0, 0))


@pytest.fixture
def models_dir() -> Path:
    return MODELS_DIR
