from itertools import combinations, product
from math import comb

import pytest
from hypothesis import given, strategies as st

from freelevy.checks import bell_numbers
from freelevy.errors import SizeLimitError
from freelevy.partitions import (
    Partition,
    enumerate_interval_partitions,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
    is_interval,
    is_noncrossing,
)


def brute_partitions(n):
    """Canonicalize every labelling of 1..n; independent of the RGS generator."""
    seen = set()
    for labels in product(range(n), repeat=n):
        blocks = {}
        for x, lab in enumerate(labels, start=1):
            blocks.setdefault(lab, []).append(x)
        seen.add(tuple(sorted(tuple(b) for b in blocks.values())))
    return seen


def crosses(p):
    for b1, b2 in combinations(p.blocks, 2):
        for a, c in combinations(b1, 2):
            if any(a < b < c for b in b2) and any(x < a or x > c for x in b2):
                return True
    return False


def test_small_examples():
    assert [p.blocks for p in enumerate_set_partitions(1)] == [((1,),)]
    assert len(enumerate_set_partitions(3)) == 5
    assert len(enumerate_set_partitions(4)) == 15
    assert len(enumerate_noncrossing_partitions(3)) == 5
    assert len(enumerate_noncrossing_partitions(4)) == 14
    assert len(enumerate_noncrossing_partitions(6)) == 132
    assert len(enumerate_interval_partitions(1)) == 1
    assert len(enumerate_interval_partitions(4)) == 8
    assert len(enumerate_interval_partitions(5)) == 16


@pytest.mark.parametrize("n", range(1, 7))
def test_set_partitions_match_brute_force(n):
    got = [p.blocks for p in enumerate_set_partitions(n)]
    assert len(got) == len(set(got))
    assert set(got) == brute_partitions(n)


def test_crossing_examples():
    assert not is_noncrossing(Partition(4, ((1, 3), (2, 4))))
    assert is_noncrossing(Partition(4, ((1, 4), (2, 3))))
    assert is_noncrossing(Partition(3, ((1, 2, 3),)))


@pytest.mark.parametrize("n", range(1, 9))
def test_is_noncrossing_matches_quadruple_definition(n):
    for p in enumerate_set_partitions(n):
        assert is_noncrossing(p) == (not crosses(p))


def test_counts_against_closed_forms():
    bells = bell_numbers(10)
    assert bells[:8] == [1, 1, 2, 5, 15, 52, 203, 877]
    for n in range(1, 11):
        assert len(enumerate_set_partitions(n)) == bells[n]
    for n in range(1, 13):
        assert len(enumerate_noncrossing_partitions(n)) == comb(2 * n, n) // (n + 1)
    for n in range(1, 17):
        assert len(enumerate_interval_partitions(n)) == 2 ** (n - 1)


@pytest.mark.parametrize("n", range(1, 11))
def test_noncrossing_is_filter_of_all(n):
    filtered = [p for p in enumerate_set_partitions(n) if is_noncrossing(p)]
    assert [p.blocks for p in filtered] == [p.blocks for p in enumerate_noncrossing_partitions(n)]


@pytest.mark.parametrize("n", range(1, 10))
def test_interval_partitions_are_noncrossing(n):
    parts = enumerate_interval_partitions(n)
    assert all(is_noncrossing(p) and is_interval(p) for p in parts)
    assert [p.blocks for p in parts] == [p.blocks for p in enumerate_set_partitions(n) if is_interval(p)]


def test_canonical_order_and_dump():
    parts = enumerate_set_partitions(4)
    rgs = [p.rgs() for p in parts]
    assert rgs == sorted(rgs)
    assert str(Partition(4, ((1, 3), (2, 4)))) == "0,1,0,1"
    assert Partition.from_rgs([0, 1, 0, 1]).blocks == ((1, 3), (2, 4))


def test_blocks_are_canonicalized_and_validated():
    assert Partition(3, ((3, 2), (1,))).blocks == ((1,), (2, 3))
    with pytest.raises(ValueError):
        Partition(3, ((1, 2),))
    with pytest.raises(ValueError):
        Partition(2, ((1, 2), (2,)))


def test_partition_is_immutable():
    p = Partition(2, ((1, 2),))
    with pytest.raises(AttributeError):
        p.n = 3


@pytest.mark.parametrize(
    "fn, cap",
    [(enumerate_set_partitions, 12), (enumerate_noncrossing_partitions, 14), (enumerate_interval_partitions, 16)],
)
def test_size_caps(fn, cap):
    with pytest.raises(SizeLimitError):
        fn(cap + 1)
    with pytest.raises(SizeLimitError):
        fn(0)


@given(st.lists(st.integers(0, 3), min_size=1, max_size=8))
def test_rgs_roundtrip(labels):
    # Turn an arbitrary labelling into a restricted-growth string first.
    seen = {}
    rgs = [seen.setdefault(x, len(seen)) for x in labels]
    assert Partition.from_rgs(rgs).rgs() == tuple(rgs)
