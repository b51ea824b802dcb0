import numpy as np
import pytest

from freelevy import fock
from freelevy.errors import MissingLawError, ShapeError
from freelevy.mixedmoments import (
    MarginalLaw,
    free_mixed_moment,
    freeness_degeneracy_check,
    tensor_mixed_moment,
)


def four_point(a1, b1, a2, b2):
    return b1 * a2**2 + a1**2 * b2 - a1**2 * a2**2


def laws_from(a1, b1, a2, b2):
    return [MarginalLaw.from_sequence(1, [a1, b1]), MarginalLaw.from_sequence(2, [a2, b2])]


def test_four_point_formula(rng):
    for _ in range(20):
        a1, b1, a2, b2 = rng.uniform(-2, 2, 4)
        assert np.isclose(free_mixed_moment([1, 2, 1, 2], laws_from(a1, b1, a2, b2)), four_point(a1, b1, a2, b2), atol=1e-12)


def test_worked_value():
    assert free_mixed_moment([1, 2, 1, 2], laws_from(1, 2, 1, 2)) == 3


def test_two_point_factorizes_in_both_flavors():
    laws = laws_from(0.7, 1.0, -0.4, 2.0)
    assert np.isclose(free_mixed_moment([1, 2], laws), 0.7 * -0.4)
    assert np.isclose(tensor_mixed_moment([1, 2], laws), 0.7 * -0.4)


def test_tensor_examples():
    laws = laws_from(0.7, 1.5, -0.4, 2.0)
    assert np.isclose(tensor_mixed_moment([1, 2, 1, 2], laws), 1.5 * 2.0)
    assert tensor_mixed_moment([], laws) == 1.0
    assert free_mixed_moment([], laws) == 1.0


def test_tensor_keeps_within_family_order():
    law = MarginalLaw(1, {(0, 1): 5.0, (1, 0): -5.0})
    other = MarginalLaw.from_sequence(2, [2.0])
    assert tensor_mixed_moment([(1, 0), (2, 0), (1, 1)], [law, other]) == 10.0
    assert tensor_mixed_moment([(1, 1), (2, 0), (1, 0)], [law, other]) == -10.0


def test_errors():
    laws = laws_from(0, 1, 0, 1)
    with pytest.raises(MissingLawError):
        free_mixed_moment([1, 3], laws)
    with pytest.raises(MissingLawError):
        free_mixed_moment([1, 1, 1], laws)  # marginal known only to order 2
    with pytest.raises(ShapeError):
        tensor_mixed_moment([1] * 11, laws)


def _fock_families(rng, depth, gens_per_family=2):
    space, injs = fock.free_embedding([1, 1], depth)
    fams = {}
    for fam, inj in zip((1, 2), injs):
        gens = []
        for _ in range(gens_per_family):
            c, s, t = rng.uniform(-1, 1, 3)
            gens.append(inj.creation([s]) + inj.annihilation([s]) + inj.conservation([[t]]) + c)
        fams[fam] = gens
    return space, fams


def test_oracle_equivalence_with_fock(rng):
    depth = 6
    space, fams = _fock_families(rng, depth)
    laws = [MarginalLaw.from_operators(f, gens, depth) for f, gens in fams.items()]
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(0, depth + 1))
        word = [(int(rng.integers(1, 3)), int(rng.integers(0, 2))) for _ in range(n)]
        expected = fock.vacuum_expectation([fams[f][g] for f, g in word])
        worst = max(worst, abs(free_mixed_moment(word, laws) - expected))
    assert worst <= 1e-9


def test_low_order_consistency(rng):
    laws = [MarginalLaw.from_sequence(1, rng.uniform(-1, 1, 6)), MarginalLaw.from_sequence(2, rng.uniform(-1, 1, 6))]
    for word in ([1], [2], [1, 2], [2, 1], [1, 1], [1, 1, 1, 1, 1], [2, 2, 2]):
        assert np.isclose(free_mixed_moment(word, laws), tensor_mixed_moment(word, laws), atol=1e-14)


@pytest.mark.parametrize("fn", [free_mixed_moment, tensor_mixed_moment])
def test_multilinearity(fn, rng):
    m1, m2 = rng.uniform(-1, 1, 6), rng.uniform(-1, 1, 6)
    c = 1.7
    scaled = [c**n * x for n, x in enumerate(m1, start=1)]
    base = [MarginalLaw.from_sequence(1, m1), MarginalLaw.from_sequence(2, m2)]
    law_c = [MarginalLaw.from_sequence(1, scaled), MarginalLaw.from_sequence(2, m2)]
    for _ in range(20):
        word = [int(f) for f in rng.integers(1, 3, int(rng.integers(1, 7)))]
        n1 = word.count(1)
        assert np.isclose(fn(word, law_c), c**n1 * fn(word, base), atol=1e-10)


def test_centered_alternating_words_vanish(rng):
    # Centered laws: first moment zero.
    m1 = np.concatenate([[0.0], rng.uniform(0.5, 2, 5)])
    m2 = np.concatenate([[0.0], rng.uniform(0.5, 2, 5)])
    laws = [MarginalLaw.from_sequence(1, m1), MarginalLaw.from_sequence(2, m2)]
    for r in range(1, 7):
        word = [1 + (i % 2) for i in range(r)]
        assert abs(free_mixed_moment(word, laws)) <= 1e-12


def test_degeneracy_check():
    semi = MarginalLaw.from_sequence(1, [0, 1, 0, 2])
    semi2 = MarginalLaw.from_sequence(2, [0, 1, 0, 2])
    assert freeness_degeneracy_check(semi, semi2) == 1
    point = MarginalLaw.from_sequence(1, [2.0, 4.0])
    assert freeness_degeneracy_check(point, semi2) == 0
    assert freeness_degeneracy_check(MarginalLaw.from_sequence(1, [0, 0.3]), MarginalLaw.from_sequence(2, [0, 2.5])) == 0.75
    with pytest.raises(MissingLawError):
        freeness_degeneracy_check(MarginalLaw.from_sequence(1, [0.0]), semi2)


def test_degeneracy_against_fock_oracle():
    space, (i1, i2) = fock.free_embedding([1, 1], 4)
    S1 = i1.creation([1.0]) + i1.annihilation([1.0])
    S2 = i2.creation([1.0]) + i2.annihilation([1.0])
    # free semicircles do not commute: the two orderings differ
    assert fock.vacuum_expectation([S1, S2, S1, S2]) == 0
    assert fock.vacuum_expectation([S1, S1, S2, S2]) == 1
    laws = [MarginalLaw.from_operators(1, [S1], 2), MarginalLaw.from_operators(2, [S2], 2)]
    assert freeness_degeneracy_check(*laws) == 1
