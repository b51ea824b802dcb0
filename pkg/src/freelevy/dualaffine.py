"""
Increments of Levy processes on the dual affine group.

Free case: an increment is a pair of Fock operators ``(a, B)`` composed by

    a_su = a_tu a_st,        B_su = a_tu B_st a_tu^* + B_tu,

with ``A = a a^*`` automatically positive. Tensor case: increments are
known only through the joint moments of ``(A, B)``, composed by
``A_su = A_tu A_st`` and ``B_su = A_tu B_st + B_tu``.

The free Azema martingale is discretized into ``N`` atoms of length
``t / N``, each with its own one-particle slot ``e_i``::

    a_i = Id + Lambda((gamma - 1) e_i e_i^*),   B_i = a+(sqrt(dt) e_i) + a-(sqrt(dt) e_i),

and the atoms are composed left to right. The within-atom cross terms
``Lambda B`` of the stochastic equation are of order ``dt^{3/2}`` and are
dropped. For ``gamma = 1`` this is exactly free Brownian motion.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import reduce
from itertools import product

import numpy as np

from . import fock
from .errors import IntervalError, MixedSpaceError, ShapeError
from .mixedmoments import MarginalLaw, tensor_mixed_moment
from .moments import MomentSequence

__all__ = [
    "AffineIncrementFree",
    "AffineIncrementTensor",
    "compose_free",
    "compose_all",
    "compose_tensor_moments",
    "azema_increments",
    "azema_free",
    "azema_convergence",
    "affine_word_moment",
    "PropertyReport",
    "increment_properties_check",
]

A, B = "A", "B"
_TIME_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class AffineIncrementFree:
    """``(a_st, B_st)`` over ``[s, t)``."""

    a: fock.FockOperator
    B: fock.FockOperator
    interval: tuple[float, float]

    def __post_init__(self):
        if self.a.space != self.B.space:
            raise MixedSpaceError("a and B must act on the same Fock space")
        s, t = map(float, self.interval)
        if t < s:
            raise IntervalError(f"interval [{s}, {t}) is reversed")
        object.__setattr__(self, "interval", (s, t))

    @property
    def space(self) -> fock.FockSpace:
        return self.a.space

    @property
    def A(self) -> fock.FockOperator:
        return self.a @ self.a.H

    @classmethod
    def identity(cls, space: fock.FockSpace, interval=(0.0, 0.0)) -> "AffineIncrementFree":
        return cls(fock.identity(space), fock.zero(space), interval)


def compose_free(inc_st: AffineIncrementFree, inc_tu: AffineIncrementFree) -> AffineIncrementFree:
    """Compose abutting increments ``[s, t)`` then ``[t, u)``."""
    if inc_st.space != inc_tu.space:
        raise MixedSpaceError("increments live on different Fock spaces")
    (s, t1), (t2, u) = inc_st.interval, inc_tu.interval
    if abs(t1 - t2) > _TIME_TOL * max(1.0, abs(t1)):
        raise IntervalError(f"[{s}, {t1}) and [{t2}, {u}) do not abut")
    a_tu = inc_tu.a
    return AffineIncrementFree(a_tu @ inc_st.a, a_tu @ inc_st.B @ a_tu.H + inc_tu.B, (s, u))


def compose_all(increments: Sequence[AffineIncrementFree]) -> AffineIncrementFree:
    """Left fold of :func:`compose_free` over time-ordered increments."""
    return reduce(compose_free, increments)


@dataclass(frozen=True, eq=False)
class AffineIncrementTensor:
    """Joint law of ``(A_st, B_st)`` over words in the letters ``"A"`` and ``"B"``."""

    law: MarginalLaw
    interval: tuple[float, float] = (0.0, 0.0)

    @classmethod
    def identity(cls, interval=(0.0, 0.0)) -> "AffineIncrementTensor":
        """``A = 1``, ``B = 0``."""
        return cls(MarginalLaw(0, fn=lambda w: 0.0 if B in w else 1.0), interval)

    @classmethod
    def from_free(cls, inc: AffineIncrementFree, max_length: int) -> "AffineIncrementTensor":
        """Tabulate the vacuum joint law of ``(A, B)`` from a Fock realization."""
        ops = {A: inc.A, B: inc.B}
        table = {}
        for n in range(1, max_length + 1):
            for w in product((A, B), repeat=n):
                table[w] = fock.vacuum_expectation([ops[x] for x in w])
        return cls(MarginalLaw(0, table), inc.interval)


def compose_tensor_moments(word, inc1: AffineIncrementTensor, inc2: AffineIncrementTensor, cap: int = 10):
    """
    Moment of a word in ``(A_su, B_su)`` where ``inc1`` covers ``[s, t)``
    and ``inc2`` covers ``[t, u)``.

    The composition law is substituted letter by letter and the expansion
    is evaluated with tensor independence of the two increments.
    """
    word = tuple(word)
    if len(word) > cap:
        raise ShapeError(f"word of length {len(word)} exceeds the cap of {cap}")
    # Family 1 is the earlier increment, family 2 the later one.
    subst = {
        A: [[(2, A), (1, A)]],
        B: [[(2, A), (1, B)], [(2, B)]],
    }
    laws = {1: _relabel(inc1.law, 1), 2: _relabel(inc2.law, 2)}
    total = 0.0
    for choice in product(*(subst[x] for x in word)):
        letters = [letter for piece in choice for letter in piece]
        total = total + tensor_mixed_moment(letters, laws, cap=2 * cap)
    return total


def _relabel(law: MarginalLaw, family: int) -> MarginalLaw:
    return MarginalLaw(family, law.table, law.fn)


def _azema_atom(space, slot, gamma, dt, interval):
    e = np.zeros(space.dim)
    e[slot] = 1.0
    X = np.zeros((space.dim, space.dim), dtype=complex if np.iscomplexobj(gamma) else float)
    X[slot, slot] = gamma - 1
    a = fock.identity(space) + fock.conservation(space, X)
    root = np.sqrt(dt)
    Bi = fock.creation(space, root * e) + fock.annihilation(space, root * e)
    return AffineIncrementFree(a, Bi, interval)


def _gamma_at(gamma, time):
    g = gamma(time) if callable(gamma) else gamma
    g = complex(g)
    return g.real if g.imag == 0 else g


def azema_increments(gamma, t: float, steps: int, depth: int, s: float = 0.0) -> list[AffineIncrementFree]:
    """
    Single-atom increments covering ``[s, s + t)``. ``gamma`` may be a
    number or a function of the atom's start time.
    """
    if steps < 1 or t <= 0:
        raise ShapeError("need steps >= 1 and t > 0")
    space = fock.FockSpace(steps, depth)
    dt = t / steps
    return [
        _azema_atom(space, i, _gamma_at(gamma, s + i * dt), dt, (s + i * dt, s + (i + 1) * dt))
        for i in range(steps)
    ]


def _moment_sequence(op: fock.FockOperator, max_order: int) -> MomentSequence:
    vals = np.array([fock.vacuum_expectation([op] * n) for n in range(1, max_order + 1)])
    if np.iscomplexobj(vals) and np.abs(vals.imag).max() <= 1e-12 * (1 + np.abs(vals).max()):
        vals = vals.real
    return MomentSequence(vals)


def azema_free(gamma, t: float, steps: int = 16, depth: int | None = None, max_order: int = 6) -> MomentSequence:
    """Vacuum moments ``m_1..m_maxOrder`` of ``B_{0,t}`` for the discretized free Azema martingale."""
    depth = max_order if depth is None else depth
    if max_order > depth:
        raise ShapeError(f"max_order {max_order} exceeds depth {depth}")
    inc = compose_all(azema_increments(gamma, t, steps, depth))
    return _moment_sequence(inc.B, max_order)


def azema_convergence(gamma, t: float, steps=(4, 8, 16, 32), max_order: int = 6, depth: int | None = None) -> dict:
    """
    Moments over a doubling sequence of atom counts, with the max-norm
    differences between successive runs and their ratios.
    """
    runs = [azema_free(gamma, t, n, depth, max_order) for n in steps]
    diffs = [float(np.abs(b.values - a.values).max()) for a, b in zip(runs, runs[1:])]
    ratios = [a / b if b > 0 else float("inf") for a, b in zip(diffs, diffs[1:])]
    return {"steps": list(steps), "moments": runs, "differences": diffs, "ratios": ratios}


def affine_word_moment(inc: AffineIncrementFree, word) -> complex | float:
    """Vacuum moment of a word in the letters ``"A"`` (``a a^*``) and ``"B"``."""
    ops = {A: inc.A, B: inc.B}
    return fock.vacuum_expectation([ops[x] for x in word])


@dataclass
class PropertyReport:
    """Pass/fail per property with the observed deviation."""

    results: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, deviation: float) -> None:
        self.results[name] = (bool(passed), float(deviation))

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.results.values())

    def lines(self) -> list[str]:
        return [f"{'PASS' if ok else 'FAIL'} {name} (deviation {dev:.3g})" for name, (ok, dev) in self.results.items()]


def _default_words(max_length: int):
    return [w for n in range(1, max_length + 1) for w in product((A, B), repeat=n)]


def increment_properties_check(
    family: Callable[[float, float], AffineIncrementFree],
    starts=(0.0, 1.0, 3.7),
    h: float = 1.0,
    shrinking=(1.0, 1e-1, 1e-2, 1e-3),
    max_length: int = 3,
    tol: float = 1e-10,
) -> PropertyReport:
    """
    Check stationarity and weak continuity of a family of increments.

    ``family(s, h)`` returns the increment over ``[s, s + h)``. Stationarity
    compares all ``(A, B)`` words of length ``<= max_length`` across
    ``starts``. Weak continuity requires the deviation of each word from its
    limit (1 for pure ``A`` words, 0 otherwise) to decrease along
    ``shrinking`` and to end below ``10 * shrinking[-1] ** 0.5``.
    """
    words = _default_words(max_length)
    report = PropertyReport()

    ref = None
    worst = 0.0
    for s in starts:
        vals = np.array([affine_word_moment(family(s, h), w) for w in words])
        if ref is None:
            ref = vals
        else:
            worst = max(worst, float(np.abs(vals - ref).max()))
    report.add("stationarity", worst <= tol * (1 + np.abs(ref).max()), worst)

    devs = []
    for hh in shrinking:
        inc = family(starts[0], hh)
        devs.append(
            max(abs(affine_word_moment(inc, w) - (0.0 if B in w else 1.0)) for w in words)
        )
    monotone = all(b <= a + tol for a, b in zip(devs, devs[1:]))
    report.add("weak_continuity", monotone and devs[-1] <= 10 * shrinking[-1] ** 0.5, devs[-1])
    return report
