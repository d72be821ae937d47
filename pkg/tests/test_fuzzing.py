"""Tests for fuzzing module."""

import logging

import pytest

from src.core_model import StateSpace
from src.fuzzing import chain_assumptions, search_chain, search_property, seeded_models
from src.model_io import Family, GeneratorParams, enumerate_correspondences
from src.operators import OperatorKind
from src.properties import PropertyId

STD = OperatorKind.STANDARD
REV = OperatorKind.REVISED


def test_seeded_models_are_reproducible():
    params = GeneratorParams(n_states=4, p_empty=0.2, seed=11)
    first = list(seeded_models(params, 20))

    assert len(first) == 20
    assert first == list(seeded_models(params, 20))
    assert len(set(first)) > 1


def test_seeded_models_depend_on_seed():
    a = list(seeded_models(GeneratorParams(n_states=5, seed=1), 10))
    b = list(seeded_models(GeneratorParams(n_states=5, seed=2), 10))
    assert a != b


def test_search_property_finds_first_failure(identity3, m1):
    hit = search_property([identity3, m1, identity3], STD, "negative_introspection")

    assert hit is not None
    assert hit.index == 1
    assert hit.model == m1
    assert hit.reports[0].property is PropertyId.NEGATIVE_INTROSPECTION
    assert not hit.reports[0].holds


def test_search_property_none(identity3):
    assert search_property([identity3] * 3, STD, PropertyId.TRUTH) is None


def test_search_property_logs_progress(caplog, identity3, monkeypatch):
    monkeypatch.setattr("src.fuzzing.PROGRESS_EVERY", 2)
    monkeypatch.setattr(logging.getLogger("src"), "propagate", True)
    with caplog.at_level(logging.INFO, logger="src.fuzzing"):
        search_property([identity3] * 5, STD, PropertyId.TRUTH)
    assert "searched 2 models" in caplog.text


def test_chain_assumptions():
    assert chain_assumptions(STD)[0] is PropertyId.NECESSITATION
    assert chain_assumptions(REV)[0] is PropertyId.R_NECESSITATION
    assert PropertyId.AU_INTROSPECTION_ALL in chain_assumptions(STD)


def test_string_kinds_in_searches(m2, all_empty):
    assert chain_assumptions("rev") == chain_assumptions(REV)
    assert search_chain([m2, all_empty], "revised").index == 1
    hit = search_property([m2], "std", PropertyId.TRUTH)
    assert hit is not None
    assert hit.reports[0].kind is STD


def test_standard_chain_has_no_counterexample_at_two_states():
    assert search_chain(enumerate_correspondences(StateSpace.numbered(2)), STD) is None


def test_revised_chain_counterexample(m2, all_empty):
    """With every state in the core the three assumptions hold and U' is nonempty."""
    hit = search_chain([m2, all_empty], REV)

    assert hit is not None
    assert hit.index == 1
    assert len(hit.reports) == 3
    event, value = hit.unaware
    assert event.is_empty
    assert value.is_full


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_revised_chain_on_awareness_partitions(seed):
    params = GeneratorParams(n_states=5, p_empty=0.4, family=Family.AWARE_PARTITIONAL, seed=seed)
    hit = search_chain(seeded_models(params, 200), REV)
    assert hit is not None
    assert not hit.unaware[1].is_empty
