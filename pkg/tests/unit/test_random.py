import numpy as np

from app.helpers.random import SplitMix64


def test_reference_stream():
    generator = SplitMix64(0)

    assert generator.next_int() == 0xE220A8397B1DCDAF
    assert generator.next_int() == 0x6E789E6AA1B965F4
    assert generator.next_int() == 0x06C45D188009454F


def test_same_seed_same_stream():
    first, second = SplitMix64(42).uniform(100), SplitMix64(42).uniform(100)

    np.testing.assert_array_equal(first, second)


def test_distinct_seeds_differ():
    assert not np.array_equal(SplitMix64(1).uniform(8), SplitMix64(2).uniform(8))


def test_uniform_range():
    values = SplitMix64(7).uniform(10_000)

    assert values.shape == (10_000,)
    assert values.min() >= 0.0
    assert values.max() < 1.0
    assert abs(values.mean() - 0.5) < 0.02


def test_seed_is_reduced_modulo_two_to_the_64():
    assert SplitMix64(2**64 + 5).next_int() == SplitMix64(5).next_int()
