import math
import random

import pytest
from hypothesis import given, settings

from tracewords.errors import InvalidPairingError, ResourceLimitError
from tracewords.pairings import (
    DecoratedPairing,
    EdgeId,
    Layout,
    enumerate_pairings,
    partition_roots,
)
from tracewords.words import parse_word

from conftest import balanced_word_lists


def count(words):
    return sum(1 for _ in enumerate_pairings(words))


def double_factorial(n):
    return math.prod(range(n, 0, -2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_counts_match_wick_numbers(n):
    # complex Ginibre pairs only with its conjugate, GOE doubles each pair
    assert count([f"G1^{n} G1*^{n}"]) == math.factorial(n)
    assert count([f"H1^{2 * n}"]) == double_factorial(2 * n - 1)
    assert count([f"R1^{2 * n}"]) == double_factorial(2 * n - 1)
    assert count([f"S1^{2 * n}"]) == double_factorial(2 * n - 1) * 2 ** n


def test_unbalanced_has_no_pairings():
    assert count(["G1 G1"]) == 0
    assert count(["G1 G2*"]) == 0
    assert count(["H1 H1 H1"]) == 0


def test_deterministic_order():
    a = list(enumerate_pairings(["S1 S1 H1 H1"]))
    b = list(enumerate_pairings(["S1 S1 H1 H1"]))
    assert a == b
    assert len(set(a)) == len(a)


@settings(max_examples=60, deadline=None)
@given(balanced_word_lists(max_pairs=4))
def test_roots_partition_the_stream(words):
    full = list(enumerate_pairings(words))
    parts = [p for root in partition_roots(words) for p in enumerate_pairings(words, root)]
    assert sorted(map(repr, parts)) == sorted(map(repr, full))
    assert len(set(full)) == len(full)


@settings(max_examples=60, deadline=None)
@given(balanced_word_lists(max_pairs=4))
def test_json_roundtrip_and_resolve(words):
    layout = Layout(words)
    for phi in enumerate_pairings(words):
        again = DecoratedPairing.loads(phi.dumps())
        assert again == phi
        chosen = layout.resolve(again)
        assert layout.to_pairing(chosen) == phi


def test_resolve_rejects_bad_pairings():
    words = [parse_word("G1 G1* G2 G2*")]
    layout = Layout(words)
    e = lambda p: EdgeId(0, p)
    with pytest.raises(InvalidPairingError):
        layout.resolve(DecoratedPairing(((e(1), e(3)), (e(2), e(4))), (None, None)))
    with pytest.raises(InvalidPairingError):
        layout.resolve(DecoratedPairing(((e(1), e(2)),), (None,)))
    with pytest.raises(InvalidPairingError):
        layout.resolve(DecoratedPairing(((e(1), e(2)), (e(3), e(9))), (None, None)))
    with pytest.raises(InvalidPairingError):
        layout.resolve(DecoratedPairing(((e(1), e(2)), (e(2), e(3))), (None, None)))
    good = DecoratedPairing(((e(1), e(2)), (e(3), e(4))), (None, None))
    assert len(layout.resolve(good)) == 2


def test_goe_twist_is_required():
    layout = Layout([parse_word("S1 S1")])
    e = lambda p: EdgeId(0, p)
    with pytest.raises(InvalidPairingError):
        layout.resolve(DecoratedPairing(((e(1), e(2)),), (None,)))
    for t in (False, True):
        layout.resolve(DecoratedPairing(((e(1), e(2)),), (t,)))


def test_length_cap():
    with pytest.raises(ResourceLimitError):
        list(enumerate_pairings(["G1^13 G1*^13"]))
