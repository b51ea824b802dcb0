"""
Joint moments of several families of noncommuting variables, computed from
each family's marginal law alone, assuming the families are either tensor
independent or free.

A word is a sequence of letters ``(family, generator)``. A marginal law maps
words in one family's generators (tuples of generator labels) to moments.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .errors import MissingLawError, RecursionCapError, ShapeError

__all__ = [
    "DEFAULT_WORD_CAP",
    "MarginalLaw",
    "tensor_mixed_moment",
    "free_mixed_moment",
    "freeness_degeneracy_check",
    "normalize_word",
]

DEFAULT_WORD_CAP = 10

Letter = tuple[int, object]


def normalize_word(word) -> tuple[Letter, ...]:
    """Accept ``[(family, gen), ...]`` or bare family indices (generator 0)."""
    out = []
    for letter in word:
        if isinstance(letter, (tuple, list)):
            if len(letter) != 2:
                raise ShapeError(f"letters are (family, generator) pairs, got {letter!r}")
            fam, gen = letter
        else:
            fam, gen = letter, 0
        out.append((int(fam), gen))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class MarginalLaw:
    """
    Moments of one family's generators.

    Either a table ``{(g1, g2, ...): value}`` or a callable on such tuples.
    The empty word always has moment 1.
    """

    family: int
    table: Mapping = field(default_factory=dict)
    fn: Callable | None = None

    def __post_init__(self):
        table = {tuple(k): v for k, v in dict(self.table).items()}
        if () in table and not np.isclose(table[()], 1.0):
            raise ValueError(f"law of family {self.family}: empty word must have moment 1")
        table[()] = 1.0
        object.__setattr__(self, "table", table)

    def __call__(self, gens) -> complex:
        gens = tuple(gens)
        if gens in self.table:
            return self.table[gens]
        if self.fn is not None:
            return self.fn(gens)
        raise MissingLawError(f"family {self.family} has no moment for generator word {gens!r}")

    @classmethod
    def from_sequence(cls, family: int, moments) -> "MarginalLaw":
        """Single-generator law (generator ``0``) from ``m_1..m_N``."""
        vals = getattr(moments, "values", moments)
        return cls(family, {(0,) * n: v for n, v in enumerate(vals, start=1)})

    @classmethod
    def from_operators(cls, family: int, ops, max_length: int) -> "MarginalLaw":
        """Tabulate vacuum moments of all words of length ``<= max_length`` in ``ops``."""
        from .fock import vacuum_expectation

        ops = list(ops)
        table = {}
        for n in range(1, max_length + 1):
            for gens in product(range(len(ops)), repeat=n):
                table[gens] = vacuum_expectation([ops[g] for g in gens])
        return cls(family, table)

    def fingerprint(self) -> tuple:
        return (self.family, id(self))


def _law_map(laws) -> dict[int, MarginalLaw]:
    if isinstance(laws, Mapping):
        return dict(laws)
    return {law.family: law for law in laws}


def _check_word(word, laws, cap):
    if len(word) > cap:
        raise ShapeError(f"word of length {len(word)} exceeds the cap of {cap}")
    for fam, _ in word:
        if fam not in laws:
            raise MissingLawError(f"no marginal law for family {fam}")


def tensor_mixed_moment(word, laws, cap: int = DEFAULT_WORD_CAP):
    """
    Mixed moment of tensor independent families: letters of different
    families commute, so the word is stably sorted by family and the
    expectation factorizes over families.
    """
    word = normalize_word(word)
    laws = _law_map(laws)
    _check_word(word, laws, cap)
    value = 1.0
    for fam in sorted({f for f, _ in word}):
        value = value * laws[fam](tuple(g for f, g in word if f == fam))
    return value


def _blocks(word):
    """Group maximal runs of one family: ``[(family, (g1, g2, ...)), ...]``."""
    out = []
    for fam, gen in word:
        if out and out[-1][0] == fam:
            out[-1] = (fam, out[-1][1] + (gen,))
        else:
            out.append((fam, (gen,)))
    return tuple(out)


def free_mixed_moment(word, laws, cap: int = DEFAULT_WORD_CAP):
    """
    Mixed moment of free families by the centering recursion.

    For an alternating word ``W_1 ... W_r`` (neighbouring runs from
    different families) with ``c_j = phi(W_j)``, freeness gives
    ``phi((W_1 - c_1)...(W_r - c_r)) = 0``. Expanding the product writes
    ``phi(W_1...W_r)`` through moments of proper subwords, which are shorter
    and evaluated the same way.
    """
    word = normalize_word(word)
    laws = _law_map(laws)
    _check_word(word, laws, cap)
    depth_cap = len(word) + 2
    memo: dict = {}

    def phi(blocks, depth):
        if depth > depth_cap:
            raise RecursionCapError(f"centering recursion exceeded depth {depth_cap}")
        if not blocks:
            return 1.0
        if len(blocks) == 1:
            fam, gens = blocks[0]
            return laws[fam](gens)
        if blocks in memo:
            return memo[blocks]
        r = len(blocks)
        c = [laws[fam](gens) for fam, gens in blocks]
        total = 0.0
        # Proper subsets S of the runs, weighted by (-1)^{r-|S|} prod_{j not in S} c_j.
        for size in range(r):
            sign = (-1) ** (r - size)
            for keep in combinations(range(r), size):
                weight = sign
                for j in range(r):
                    if j not in keep:
                        weight = weight * c[j]
                if weight == 0:
                    continue
                sub = _blocks([(blocks[j][0], g) for j in keep for g in blocks[j][1]])
                total = total + weight * phi(sub, depth + 1)
        memo[blocks] = -total
        return -total

    return phi(_blocks(word), 0)


def freeness_degeneracy_check(law1: MarginalLaw, law2: MarginalLaw, generator=0):
    """
    ``Var_1 * Var_2``. Free variables that also commute must make this zero,
    so a nonzero value certifies that a free pair cannot commute.
    """
    try:
        var = [law((generator, generator)) - law((generator,)) ** 2 for law in (law1, law2)]
    except MissingLawError as exc:
        raise MissingLawError(f"degeneracy check needs moments up to order 2: {exc}") from None
    return var[0] * var[1]
