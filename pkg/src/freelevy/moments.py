"""
Moment and cumulant sequences for the classical, free and boolean flavors.

A law is stored as its moments ``m_1..m_N`` (``m_0 = 1`` is implicit). The
three cumulant flavors are the coefficients ``k_n`` in

    m_n = sum over partitions pi of {1..n} of  prod_{B in pi} k_|B|

where pi ranges over all set partitions (classical), non-crossing partitions
(free) or interval partitions (boolean). Each flavor linearizes its own
additive convolution, which is how :func:`convolve` and
:func:`bercovici_pata` work.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np

from .errors import ShapeError, SizeLimitError
from .partitions import (
    INTERVAL_CAP,
    NONCROSSING_CAP,
    SET_PARTITION_CAP,
    enumerate_interval_partitions,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
)

__all__ = [
    "Flavor",
    "MomentSequence",
    "CumulantSequence",
    "moments_to_cumulants",
    "cumulants_to_moments",
    "partition_sum_moments",
    "convolve",
    "bercovici_pata",
    "is_homomorphism_check",
    "hankel_matrix",
    "ROUNDTRIP_TOL",
    "SUM_TOL",
]

ROUNDTRIP_TOL = 1e-10
SUM_TOL = 1e-9


class Flavor(str, Enum):
    CLASSICAL = "classical"
    FREE = "free"
    BOOLEAN = "boolean"

    @classmethod
    def parse(cls, value) -> "Flavor":
        if isinstance(value, Flavor):
            return value
        value = str(value).lower()
        if value == "tensor":
            return cls.CLASSICAL
        return cls(value)


_CAPS = {
    Flavor.CLASSICAL: SET_PARTITION_CAP,
    Flavor.FREE: NONCROSSING_CAP,
    Flavor.BOOLEAN: INTERVAL_CAP,
}


def _as_values(values) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ShapeError(f"expected a flat sequence, got shape {arr.shape}")
    if np.iscomplexobj(arr):
        arr = arr.astype(complex)
        if not np.any(arr.imag):
            arr = arr.real.copy()
    else:
        arr = arr.astype(float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MomentSequence:
    """
    Moments ``m_1..m_N`` of a law; ``m_0 = 1`` is implicit.

    Values may be complex for laws of non-symmetric operators.
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_values(self.values))

    @property
    def order(self) -> int:
        return len(self.values)

    def full(self) -> np.ndarray:
        """``(m_0, m_1, ..., m_N)``."""
        return np.concatenate([[1.0], self.values])

    def __getitem__(self, n: int):
        """``m_n`` with the usual 0-based indexing, so ``seq[0] == 1``."""
        return self.full()[n]

    def allclose(self, other, atol: float = SUM_TOL) -> bool:
        other = other.values if isinstance(other, MomentSequence) else np.asarray(other)
        return self.order == len(other) and bool(np.allclose(self.values, other, rtol=0, atol=atol))

    def is_realizable(self, tol: float = 1e-9) -> bool:
        """
        Whether every leading Hankel matrix ``[m_{i+j}]`` fits a real random
        variable, i.e. is positive semidefinite up to ``-tol * (1 + trace)``.
        """
        if np.iscomplexobj(self.values):
            return False
        for k in range(self.order // 2 + 1):
            H = hankel_matrix(self, k)
            if np.linalg.eigvalsh(H).min() < -tol * (1.0 + np.trace(H)):
                return False
        return True

    @classmethod
    def from_atoms(cls, atoms, weights=None, order: int = 8) -> "MomentSequence":
        """Moments of a finitely supported probability measure."""
        atoms = np.asarray(atoms, dtype=float)
        if weights is None:
            weights = np.full(len(atoms), 1.0 / len(atoms))
        weights = np.asarray(weights, dtype=float)
        return cls([float(np.dot(weights, atoms**n)) for n in range(1, order + 1)])

    def __repr__(self):
        return f"MomentSequence({self.values.tolist()})"


@dataclass(frozen=True, eq=False)
class CumulantSequence:
    """Cumulants ``k_1..k_N`` of a given flavor."""

    flavor: Flavor
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "flavor", Flavor.parse(self.flavor))
        object.__setattr__(self, "values", _as_values(self.values))

    @property
    def order(self) -> int:
        return len(self.values)

    def __add__(self, other: "CumulantSequence") -> "CumulantSequence":
        if other.flavor != self.flavor:
            raise ValueError(f"cannot add {self.flavor.value} and {other.flavor.value} cumulants")
        if other.order != self.order:
            raise ShapeError(f"orders differ: {self.order} vs {other.order}")
        return CumulantSequence(self.flavor, self.values + other.values)

    def __repr__(self):
        return f"CumulantSequence({self.flavor.value!r}, {self.values.tolist()})"


def hankel_matrix(m: MomentSequence, k: int) -> np.ndarray:
    """``H_k = [m_{i+j}]_{0 <= i, j <= k}``; needs ``2k <= N``."""
    full = m.full()
    if 2 * k > m.order:
        raise ShapeError(f"H_{k} needs moments up to {2 * k}, have {m.order}")
    idx = np.add.outer(np.arange(k + 1), np.arange(k + 1))
    return full[idx]


def _check_order(n: int, flavor: Flavor) -> None:
    if n < 1:
        raise ShapeError("sequences must have order N >= 1")
    if n > _CAPS[flavor]:
        raise SizeLimitError(f"order {n} exceeds the {flavor.value} cap of {_CAPS[flavor]}")


def _power_coeff(series: np.ndarray, s: int, deg: int) -> complex:
    """Coefficient of ``z^deg`` in ``series(z)^s``, truncated at ``deg``."""
    out = np.zeros(deg + 1, dtype=series.dtype)
    out[0] = 1
    base = series[: deg + 1]
    for _ in range(s):
        out = np.convolve(out, base)[: deg + 1]
    return out[deg]


def _moment_term(flavor: Flavor, full_m: np.ndarray, kappa: np.ndarray, n: int, s: int):
    """
    Contribution of ``k_s`` to ``m_n`` given moments below ``n``: the sum
    over partitions whose block containing 1 has size ``s``.
    """
    if flavor is Flavor.CLASSICAL:
        return comb(n - 1, s - 1) * kappa[s - 1] * full_m[n - s]
    if flavor is Flavor.BOOLEAN:
        return kappa[s - 1] * full_m[n - s]
    # Free: the first block cuts the rest into s gaps, each filled by an
    # arbitrary non-crossing piece, giving [z^{n-s}] M(z)^s.
    return kappa[s - 1] * _power_coeff(full_m, s, n - s)


def moments_to_cumulants(m: MomentSequence, flavor) -> CumulantSequence:
    """Solve the moment-cumulant relation for ``k_1..k_N`` one order at a time."""
    flavor = Flavor.parse(flavor)
    n_max = m.order
    _check_order(n_max, flavor)
    full = m.full()
    dtype = np.result_type(full.dtype, float)
    kappa = np.zeros(n_max, dtype=dtype)
    for n in range(1, n_max + 1):
        # The s = n term is exactly k_n (one block, remaining moments m_0 = 1).
        lower = sum((_moment_term(flavor, full, kappa, n, s) for s in range(1, n)), start=0.0)
        kappa[n - 1] = full[n] - lower
    return CumulantSequence(flavor, kappa)


def cumulants_to_moments(k: CumulantSequence) -> MomentSequence:
    """Inverse of :func:`moments_to_cumulants`."""
    flavor = k.flavor
    n_max = k.order
    _check_order(n_max, flavor)
    kappa = k.values
    full = np.zeros(n_max + 1, dtype=np.result_type(kappa.dtype, float))
    full[0] = 1.0
    for n in range(1, n_max + 1):
        full[n] = sum((_moment_term(flavor, full, kappa, n, s) for s in range(1, n + 1)), start=0.0)
    return MomentSequence(full[1:])


_ENUMERATORS = {
    Flavor.CLASSICAL: enumerate_set_partitions,
    Flavor.FREE: enumerate_noncrossing_partitions,
    Flavor.BOOLEAN: enumerate_interval_partitions,
}


def partition_sum_moments(k: CumulantSequence) -> MomentSequence:
    """
    Moments from cumulants by literally summing over the partition family.

    Slow, and kept as the reference the recursions are checked against.
    """
    enum = _ENUMERATORS[k.flavor]
    _check_order(k.order, k.flavor)
    out = []
    for n in range(1, k.order + 1):
        total = 0.0
        for p in enum(n):
            term = 1.0
            for size in p.block_sizes():
                term = term * k.values[size - 1]
            total = total + term
        out.append(total)
    return MomentSequence(out)


def convolve(m1: MomentSequence, m2: MomentSequence, flavor) -> MomentSequence:
    """
    Moments of ``X1 + X2`` for ``X1, X2`` independent in the given sense:
    ``classical``/``tensor``, ``free`` or ``boolean``.
    """
    flavor = Flavor.parse(flavor)
    if m1.order != m2.order:
        raise ShapeError(f"orders differ: {m1.order} vs {m2.order}")
    return cumulants_to_moments(moments_to_cumulants(m1, flavor) + moments_to_cumulants(m2, flavor))


def bercovici_pata(m: MomentSequence) -> MomentSequence:
    """
    Map a classically infinitely divisible law to its free counterpart by
    reading its classical cumulants as free cumulants.

    Infinite divisibility of the input is not checked.
    """
    kappa = moments_to_cumulants(m, Flavor.CLASSICAL)
    return cumulants_to_moments(CumulantSequence(Flavor.FREE, kappa.values))


def is_homomorphism_check(m1: MomentSequence, m2: MomentSequence, atol: float = SUM_TOL) -> bool:
    """Does the Bercovici-Pata map turn classical convolution into free convolution on this pair?"""
    if m1.order != m2.order:
        raise ShapeError(f"orders differ: {m1.order} vs {m2.order}")
    lhs = bercovici_pata(convolve(m1, m2, Flavor.CLASSICAL))
    rhs = convolve(bercovici_pata(m1), bercovici_pata(m2), Flavor.FREE)
    return lhs.allclose(rhs, atol=atol)
