"""
Truncated free Fock space over ``C^d`` with creation, annihilation and
conservation operators.

Basis vectors are words ``(i_1, ..., i_n)`` over the alphabet ``0..d-1`` with
``n <= depth``; the empty word is the vacuum. Vectors are kept graded: a dict
mapping tensor degree ``n`` to a flat array of length ``d**n`` whose index is
the word read as a base-``d`` number (first letter most significant). Only
degrees that are actually reached get stored, so vacuum expectations on
spaces whose full basis would be huge stay cheap. Sparse matrices over the
full ``length-then-lex`` basis are available through
:meth:`FockOperator.to_matrix` when the space is small enough.

Every operator changes the degree of a basis word by at most one per
creation/annihilation factor, so a vacuum expectation of ``r`` factors is
exact once ``depth >= r``; :func:`vacuum_expectation` refuses anything
deeper than that instead of silently truncating.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import reduce
from itertools import product as iproduct
from numbers import Number

import numpy as np
import scipy.sparse as sp

from .errors import DepthError, MixedSpaceError, ShapeError, SizeLimitError

__all__ = [
    "DEFAULT_MAX_BASIS",
    "max_basis",
    "FockSpace",
    "FockOperator",
    "Injection",
    "creation",
    "annihilation",
    "conservation",
    "scalar",
    "identity",
    "zero",
    "vacuum_expectation",
    "free_embedding",
]

DEFAULT_MAX_BASIS = 200_000


def max_basis() -> int:
    """Basis-size cap, overridable through ``NCP_MAX_BASIS``."""
    return int(os.environ.get("NCP_MAX_BASIS", DEFAULT_MAX_BASIS))


@dataclass(frozen=True)
class FockSpace:
    """
    Free Fock space over a ``dim``-dimensional one-particle space, truncated
    at tensor degree ``depth``.

    The size cap is checked against :attr:`working_dimension`, the number of
    amplitudes a vacuum expectation of ``depth`` factors can touch.
    """

    dim: int
    depth: int

    def __post_init__(self):
        if self.dim < 0 or self.depth < 0:
            raise ShapeError(f"dim and depth must be non-negative, got {self.dim}, {self.depth}")
        if self.working_dimension > max_basis():
            raise SizeLimitError(
                f"Fock space (d={self.dim}, depth={self.depth}) needs {self.working_dimension} "
                f"amplitudes, cap is {max_basis()}"
            )

    @property
    def dimension(self) -> int:
        """Total number of basis words ``sum_{n<=depth} d**n``."""
        return sum(self.dim**n for n in range(self.depth + 1))

    @property
    def working_dimension(self) -> int:
        return sum(self.dim**n for n in range(-(-self.depth // 2) + 1))

    def offsets(self) -> list[int]:
        out = [0]
        for n in range(self.depth + 1):
            out.append(out[-1] + self.dim**n)
        return out

    def words(self):
        """Basis words in index order."""
        for n in range(self.depth + 1):
            yield from iproduct(range(self.dim), repeat=n)

    def index(self, word) -> int:
        n = len(word)
        if n > self.depth or any(not 0 <= i < self.dim for i in word):
            raise ShapeError(f"{word!r} is not a basis word of {self}")
        r = 0
        for i in word:
            r = r * self.dim + i
        return self.offsets()[n] + r

    def vacuum(self) -> dict:
        return {0: np.ones(1)}

    def to_dense(self, vec: dict) -> np.ndarray:
        """Flatten a graded vector onto the full basis."""
        off = self.offsets()
        dtype = np.result_type(*[x.dtype for x in vec.values()], float)
        out = np.zeros(self.dimension, dtype=dtype)
        for n, x in vec.items():
            out[off[n] : off[n + 1]] = x
        return out

    def basis_vector(self, word) -> dict:
        n = len(word)
        x = np.zeros(self.dim**n)
        x[self.index(word) - self.offsets()[n]] = 1.0
        return {n: x}


def _add(x: dict, y: dict) -> dict:
    out = dict(x)
    for n, v in y.items():
        out[n] = out[n] + v if n in out else v
    return out


class FockOperator:
    """
    A linear operator on a truncated free Fock space.

    Operators compose with ``+``, ``-``, ``@`` and scalar ``*``; ``op.H`` is
    the adjoint. ``raise_`` and ``lower`` bound how far the operator can move
    a word up or down in degree.
    """

    space: FockSpace
    raise_: int
    lower: int

    def apply(self, vec: dict) -> dict:
        raise NotImplementedError

    def adjoint(self) -> "FockOperator":
        raise NotImplementedError

    def _matrix(self) -> sp.spmatrix:
        raise NotImplementedError

    @property
    def H(self) -> "FockOperator":
        return self.adjoint()

    def to_matrix(self) -> sp.csr_matrix:
        """Sparse matrix on the full ``length-then-lex`` basis."""
        if self.space.dimension > max_basis():
            raise SizeLimitError(
                f"materializing a {self.space.dimension}-dimensional matrix exceeds cap {max_basis()}"
            )
        return sp.csr_matrix(self._matrix())

    def toarray(self) -> np.ndarray:
        return self.to_matrix().toarray()

    def __call__(self, vec: dict) -> dict:
        return self.apply(vec)

    def _check(self, other: "FockOperator") -> None:
        if other.space != self.space:
            raise MixedSpaceError(f"operators live on {self.space} and {other.space}")

    def __add__(self, other):
        if isinstance(other, Number):
            other = scalar(self.space, other)
        if not isinstance(other, FockOperator):
            return NotImplemented
        self._check(other)
        return _Sum([self, other])

    def __radd__(self, other):
        if isinstance(other, Number) and other == 0:
            return self
        return self.__add__(other)

    def __neg__(self):
        return _Product([scalar(self.space, -1.0), self])

    def __sub__(self, other):
        if isinstance(other, Number):
            other = scalar(self.space, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if not isinstance(c, Number):
            return NotImplemented
        return _Product([scalar(self.space, c), self])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, FockOperator):
            return NotImplemented
        self._check(other)
        return _Product([self, other])

    def __pow__(self, k: int):
        if k == 0:
            return identity(self.space)
        return _Product([self] * k)


class _Creation(FockOperator):
    def __init__(self, space, u):
        self.space, self.u = space, u
        self.raise_, self.lower = 1, 0

    def apply(self, vec):
        return {n + 1: np.outer(self.u, x).ravel() for n, x in vec.items() if n < self.space.depth}

    def adjoint(self):
        return _Annihilation(self.space, self.u)

    def _matrix(self):
        d, off = self.space.dim, self.space.offsets()
        rows, cols, data = [], [], []
        for n in range(self.space.depth):
            r = np.arange(d**n)
            for i in np.flatnonzero(self.u):
                rows.append(off[n + 1] + i * d**n + r)
                cols.append(off[n] + r)
                data.append(np.full(d**n, self.u[i]))
        return _coo(self.space, rows, cols, data, self.u.dtype)


class _Annihilation(FockOperator):
    def __init__(self, space, v):
        self.space, self.v = space, v
        self.raise_, self.lower = 0, 1

    def apply(self, vec):
        d, w = self.space.dim, np.conj(self.v)
        return {n - 1: w @ x.reshape(d, -1) for n, x in vec.items() if n >= 1}

    def adjoint(self):
        return _Creation(self.space, self.v)

    def _matrix(self):
        d, off = self.space.dim, self.space.offsets()
        rows, cols, data = [], [], []
        for n in range(self.space.depth):
            r = np.arange(d**n)
            for i in np.flatnonzero(self.v):
                rows.append(off[n] + r)
                cols.append(off[n + 1] + i * d**n + r)
                data.append(np.full(d**n, np.conj(self.v[i])))
        return _coo(self.space, rows, cols, data, self.v.dtype)


class _Conservation(FockOperator):
    def __init__(self, space, X):
        self.space, self.X = space, X
        self.raise_, self.lower = 0, 0

    def apply(self, vec):
        d = self.space.dim
        return {n: (self.X @ x.reshape(d, -1)).ravel() for n, x in vec.items() if n >= 1}

    def adjoint(self):
        return _Conservation(self.space, self.X.conj().T)

    def _matrix(self):
        d, off = self.space.dim, self.space.offsets()
        rows, cols, data = [], [], []
        for n in range(1, self.space.depth + 1):
            r = np.arange(d ** (n - 1))
            for j, i in zip(*np.nonzero(self.X)):
                rows.append(off[n] + j * d ** (n - 1) + r)
                cols.append(off[n] + i * d ** (n - 1) + r)
                data.append(np.full(d ** (n - 1), self.X[j, i]))
        return _coo(self.space, rows, cols, data, self.X.dtype)


class _Scalar(FockOperator):
    def __init__(self, space, c):
        self.space, self.c = space, c
        self.raise_, self.lower = 0, 0

    def apply(self, vec):
        if self.c == 0:
            return {}
        return {n: self.c * x for n, x in vec.items()}

    def adjoint(self):
        return _Scalar(self.space, np.conj(self.c))

    def _matrix(self):
        if self.c == 0:
            return sp.csr_matrix((self.space.dimension,) * 2)
        return self.c * sp.identity(self.space.dimension, dtype=np.result_type(self.c, float), format="csr")


class _Sum(FockOperator):
    def __init__(self, terms):
        flat = []
        for t in terms:
            flat.extend(t.terms if isinstance(t, _Sum) else [t])
        self.terms = flat
        self.space = flat[0].space
        self.raise_ = max(t.raise_ for t in flat)
        self.lower = max(t.lower for t in flat)

    def apply(self, vec):
        return reduce(_add, (t.apply(vec) for t in self.terms), {})

    def adjoint(self):
        return _Sum([t.adjoint() for t in self.terms])

    def _matrix(self):
        return reduce(lambda a, b: a + b, (t._matrix() for t in self.terms))


class _Product(FockOperator):
    """``factors[0] @ factors[1] @ ...``; applied right to left."""

    def __init__(self, factors):
        flat = []
        for f in factors:
            flat.extend(f.factors if isinstance(f, _Product) else [f])
        self.factors = flat
        self.space = flat[0].space
        self.raise_ = sum(f.raise_ for f in flat)
        self.lower = sum(f.lower for f in flat)

    def apply(self, vec):
        for f in reversed(self.factors):
            vec = f.apply(vec)
            if not vec:
                break
        return vec

    def adjoint(self):
        return _Product([f.adjoint() for f in reversed(self.factors)])

    def _matrix(self):
        return reduce(lambda a, b: sp.csr_matrix(a) @ sp.csr_matrix(b), (f._matrix() for f in self.factors))


def _coo(space, rows, cols, data, dtype):
    M = space.dimension
    dtype = np.result_type(dtype, float)
    if not rows:
        return sp.csr_matrix((M, M), dtype=dtype)
    return sp.coo_matrix(
        (np.concatenate(data).astype(dtype), (np.concatenate(rows), np.concatenate(cols))), shape=(M, M)
    ).tocsr()


def _vector(space: FockSpace, u) -> np.ndarray:
    u = np.asarray(u)
    if u.shape != (space.dim,):
        raise ShapeError(f"expected a vector of length {space.dim}, got shape {u.shape}")
    return u.astype(complex) if np.iscomplexobj(u) else u.astype(float)


def creation(space: FockSpace, u) -> FockOperator:
    """``a+(u)``: prepend ``u`` to every word; words of maximal length map to 0."""
    return _Creation(space, _vector(space, u))


def annihilation(space: FockSpace, v) -> FockOperator:
    """``a-(v)``: strip the first letter with amplitude ``<v, letter>``; kills the vacuum."""
    return _Annihilation(space, _vector(space, v))


def conservation(space: FockSpace, X) -> FockOperator:
    """``Lambda(X)``: apply ``X`` to the first letter; kills the vacuum."""
    X = np.asarray(X)
    if X.shape != (space.dim, space.dim):
        raise ShapeError(f"expected a {space.dim}x{space.dim} matrix, got shape {X.shape}")
    return _Conservation(space, X.astype(complex) if np.iscomplexobj(X) else X.astype(float))


def scalar(space: FockSpace, c) -> FockOperator:
    return _Scalar(space, c)


def identity(space: FockSpace) -> FockOperator:
    return _Scalar(space, 1.0)


def zero(space: FockSpace) -> FockOperator:
    return _Scalar(space, 0.0)


def _propagate(ops, vec, bound_after):
    # Apply ops in order, dropping degrees that can no longer meet the other side.
    for k, op in enumerate(ops):
        vec = op.apply(vec)
        limit = bound_after[k]
        vec = {n: x for n, x in vec.items() if n <= limit}
        if not vec:
            break
    return vec


def vacuum_expectation(ops) -> complex | float:
    """
    ``<Omega, O_1 O_2 ... O_r Omega>``.

    The product is split in two: the left factors are applied as adjoints to
    the vacuum, the right factors directly, and the two vectors are paired.
    Degrees that cannot meet are pruned on the way, which is exact.
    """
    ops = list(ops)
    if not ops:
        return 1.0
    space = ops[0].space
    for op in ops[1:]:
        if op.space != space:
            raise MixedSpaceError(f"operators live on {space} and {op.space}")
    need = sum(op.raise_ for op in ops)
    if need > space.depth:
        raise DepthError(f"word needs depth {need}, space has depth {space.depth}")

    r = len(ops)
    lowers = [op.lower for op in ops]
    raises = [op.raise_ for op in ops]
    j = min(range(r + 1), key=lambda j: (max(sum(lowers[:j]), sum(raises[j:])), abs(2 * j - r)))
    left_max, right_max = sum(lowers[:j]), sum(raises[j:])

    # Right side: O_r first; after O_k the remaining right ops can still lower.
    right_ops = ops[j:][::-1]
    right_bounds = [left_max + sum(op.lower for op in right_ops[k + 1 :]) for k in range(len(right_ops))]
    right = _propagate(right_ops, space.vacuum(), right_bounds)

    left_ops = [op.adjoint() for op in ops[:j]]
    left_bounds = [right_max + sum(op.lower for op in left_ops[k + 1 :]) for k in range(len(left_ops))]
    left = _propagate(left_ops, space.vacuum(), left_bounds)

    total = sum((np.vdot(left[n], right[n]) for n in left.keys() & right.keys()), start=0.0)
    total = complex(total)
    return total.real if total.imag == 0 else total


@dataclass(frozen=True)
class Injection:
    """Embeds one factor ``C^{d_i}`` as an orthogonal block of ``C^{sum d}``."""

    space: FockSpace
    offset: int
    dim: int

    def vector(self, u) -> np.ndarray:
        u = np.asarray(u)
        if u.shape != (self.dim,):
            raise ShapeError(f"expected a vector of length {self.dim}, got shape {u.shape}")
        out = np.zeros(self.space.dim, dtype=np.result_type(u, float))
        out[self.offset : self.offset + self.dim] = u
        return out

    def matrix(self, X) -> np.ndarray:
        X = np.asarray(X)
        if X.shape != (self.dim, self.dim):
            raise ShapeError(f"expected a {self.dim}x{self.dim} matrix, got shape {X.shape}")
        out = np.zeros((self.space.dim, self.space.dim), dtype=np.result_type(X, float))
        sl = slice(self.offset, self.offset + self.dim)
        out[sl, sl] = X
        return out

    def creation(self, u) -> FockOperator:
        return creation(self.space, self.vector(u))

    def annihilation(self, v) -> FockOperator:
        return annihilation(self.space, self.vector(v))

    def conservation(self, X) -> FockOperator:
        return conservation(self.space, self.matrix(X))


def free_embedding(dims, depth: int) -> tuple[FockSpace, list[Injection]]:
    """
    One Fock space over ``C^{d_1} + ... + C^{d_r}`` with an injection per
    summand. Operators built from different summands are free in the vacuum.
    """
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise ShapeError(f"need at least one positive dimension, got {dims}")
    space = FockSpace(sum(dims), depth)
    offsets = np.concatenate([[0], np.cumsum(dims)[:-1]])
    return space, [Injection(space, int(o), d) for o, d in zip(offsets, dims)]
