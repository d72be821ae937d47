"""Tests for splitmix module."""

import pytest

from src.splitmix import SplitMix64


def test_reference_stream():
    """Seed 0 reproduces the published reference outputs."""
    rng = SplitMix64(0)
    assert [rng.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_derived_draws_stay_in_range():
    rng = SplitMix64(12345)
    for _ in range(500):
        assert 0.0 <= rng.next_unit() < 1.0
        assert 0 <= rng.below(7) < 7
        assert 0 <= rng.bits(5) < 32


def test_chance_extremes():
    rng = SplitMix64(9)
    assert not any(rng.chance(0.0) for _ in range(100))
    assert all(rng.chance(1.0) for _ in range(100))


def test_below_rejects_empty_range():
    with pytest.raises(ValueError):
        SplitMix64(1).below(0)


def test_seed_is_masked_to_64_bits():
    assert SplitMix64(1 << 64).next_u64() == SplitMix64(0).next_u64()
