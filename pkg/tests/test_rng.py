from fractions import Fraction

import pytest

from tridend.rng import SplitMix64


def test_reference_stream():
    r = SplitMix64(0)
    assert [r.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]
    r = SplitMix64(1234567)
    assert [r.next_u64() for _ in range(2)] == [6457827717110365317, 3203168211198807973]


def test_ranges_and_determinism():
    r1, r2 = SplitMix64(42), SplitMix64(42)
    xs = [r1.randint(-3, 3) for _ in range(200)]
    assert xs == [r2.randint(-3, 3) for _ in range(200)]
    assert set(xs) == set(range(-3, 4))
    f = SplitMix64(1).fraction(5, 4)
    assert isinstance(f, Fraction) and abs(f) <= 5
    with pytest.raises(ValueError):
        SplitMix64(0).randbelow(0)


def test_spawn_independent_of_parent_use():
    a = SplitMix64(9).spawn()
    b = SplitMix64(9).spawn()
    assert a.next_u64() == b.next_u64()
