"""
Additive free Levy processes given by a generator tuple ``(d, T, u, v, lam)``.

The increment over ``[s, t)`` is realized on the free Fock space as

    Lambda(T) + a+(sqrt(t-s) u) + a-(sqrt(t-s) v) + (t-s) lam

acting on the one-particle block of that interval. Its free cumulants are
``k_1 = (t-s) lam`` and ``k_n = (t-s) <v, T^{n-2} u>`` for ``n >= 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fock
from .errors import IntervalError, PreconditionError, ShapeError
from .moments import CumulantSequence, Flavor, MomentSequence

__all__ = [
    "GeneratorTuple",
    "IncrementSpec",
    "Kind",
    "SplitResult",
    "realize_process",
    "process_moments",
    "tuple_cumulants",
    "minimal_tuple",
    "solve_omega",
    "classify",
    "ito_levy_split",
    "compound_poisson_tuple",
    "SYMMETRY_TOL",
    "RANK_TOL",
]

SYMMETRY_TOL = 1e-12
RANK_TOL = 1e-10
PINV_RCOND = 1e-10


def _array(x, dtype=None):
    arr = np.asarray(x) if dtype is None else np.asarray(x, dtype=dtype)
    if np.iscomplexobj(arr) and not np.any(arr.imag):
        arr = arr.real
    return arr.astype(complex) if np.iscomplexobj(arr) else arr.astype(float)


@dataclass(frozen=True, eq=False)
class GeneratorTuple:
    """``(T, u, v, lam)`` on ``k = C^d``; ``v`` defaults to ``u``."""

    T: np.ndarray
    u: np.ndarray
    v: np.ndarray | None = None
    lam: complex = 0.0

    def __post_init__(self):
        u = _array(self.u).reshape(-1)
        v = u if self.v is None else _array(self.v).reshape(-1)
        T = _array(self.T)
        if T.size == 0:
            T = T.reshape(len(u), len(u))
        if T.shape != (len(u), len(u)) or v.shape != u.shape:
            raise ShapeError(f"inconsistent tuple shapes T{T.shape}, u{u.shape}, v{v.shape}")
        lam = complex(self.lam)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "lam", lam.real if lam.imag == 0 else lam)

    @property
    def d(self) -> int:
        return len(self.u)

    @property
    def symmetric(self) -> bool:
        tol = SYMMETRY_TOL
        return (
            np.allclose(self.T, self.T.conj().T, rtol=0, atol=tol)
            and np.allclose(self.u, self.v, rtol=0, atol=tol)
            and abs(np.imag(self.lam)) <= tol
        )

    @classmethod
    def from_dict(cls, doc: dict) -> "GeneratorTuple":
        d = int(doc["d"])
        T = np.asarray(doc["T"], dtype=float).reshape(d, d) if d else np.zeros((0, 0))
        u = np.asarray(doc["u"], dtype=float).reshape(d)
        v = np.asarray(doc.get("v", doc["u"]), dtype=float).reshape(d)
        return cls(T, u, v, float(doc.get("lambda", 0.0)))

    def to_dict(self) -> dict:
        def real(x):
            x = np.asarray(x)
            if np.iscomplexobj(x):
                raise ValueError("complex tuples have no JSON form")
            return x.tolist()

        return {"d": self.d, "T": real(self.T), "u": real(self.u), "v": real(self.v), "lambda": float(np.real(self.lam))}

    def __repr__(self):
        return f"GeneratorTuple(d={self.d}, T={self.T.tolist()}, u={self.u.tolist()}, v={self.v.tolist()}, lam={self.lam})"


@dataclass(frozen=True)
class IncrementSpec:
    """Disjoint intervals ``[s_i, t_i)`` sharing one generator tuple."""

    intervals: tuple
    tuple: GeneratorTuple

    def __post_init__(self):
        ivs = tuple((float(s), float(t)) for s, t in self.intervals)
        if not ivs:
            raise IntervalError("need at least one interval")
        for s, t in ivs:
            if not 0 <= s < t:
                raise IntervalError(f"interval [{s}, {t}) must satisfy 0 <= s < t")
        ordered = sorted(ivs)
        for (s1, t1), (s2, t2) in zip(ordered, ordered[1:]):
            if s2 < t1:
                raise IntervalError(f"intervals [{s1}, {t1}) and [{s2}, {t2}) overlap")
        object.__setattr__(self, "intervals", ivs)


def realize_process(spec: IncrementSpec, depth: int) -> list[fock.FockOperator]:
    """
    One Fock operator per interval; slot ``i`` of the one-particle space
    stands for the normalized indicator of interval ``i``.
    """
    tup = spec.tuple
    dims = [max(tup.d, 1)] * len(spec.intervals)
    space, injections = fock.free_embedding(dims, depth)
    ops = []
    for inj, (s, t) in zip(injections, spec.intervals):
        h = t - s
        op = fock.scalar(space, h * tup.lam)
        if tup.d:
            root = np.sqrt(h)
            op = inj.conservation(tup.T) + inj.creation(root * tup.u) + inj.annihilation(root * tup.v) + op
        ops.append(op)
    return ops


def process_moments(tup: GeneratorTuple, t: float, order: int, s: float = 0.0) -> MomentSequence:
    """Vacuum moments of the increment over ``[s, s + t)``, straight from the Fock realization."""
    (X,) = realize_process(IncrementSpec([(s, s + t)], tup), depth=order)
    return MomentSequence([fock.vacuum_expectation([X] * n) for n in range(1, order + 1)])


def tuple_cumulants(tup: GeneratorTuple, t: float, flavor, order: int) -> CumulantSequence:
    """
    ``k_1 = t lam``, ``k_n = t <v, T^{n-2} u>``.

    For the free flavor these are the cumulants of the Fock realization; the
    classical tag describes the tensor process with the same tuple.
    """
    if order < 1:
        raise ShapeError("order must be >= 1")
    vals = [t * tup.lam]
    w = tup.u.copy()
    for _ in range(2, order + 1):
        vals.append(t * np.vdot(tup.v, w) if tup.d else 0.0)
        w = tup.T @ w
    return CumulantSequence(flavor, np.array(vals))


def _orthonormal_basis(vectors, tol: float) -> np.ndarray:
    basis: list[np.ndarray] = []
    for x in vectors:
        y = x.astype(complex if np.iscomplexobj(x) else float)
        scale = max(np.linalg.norm(x), 1.0)
        for _ in range(2):  # re-orthogonalize once
            for q in basis:
                y = y - np.vdot(q, y) * q
        norm = np.linalg.norm(y)
        if norm > tol * scale:
            basis.append(y / norm)
    if not basis:
        return np.zeros((len(vectors[0]) if vectors else 0, 0))
    return np.column_stack(basis)


def minimal_tuple(tup: GeneratorTuple, tol: float = RANK_TOL) -> GeneratorTuple:
    """Compress the tuple onto ``span{T^k u, T^k v}``; all cumulants are preserved."""
    d = tup.d
    krylov = []
    for start in (tup.u, tup.v):
        w = start
        for _ in range(d):
            krylov.append(w)
            w = tup.T @ w
    Q = _orthonormal_basis(krylov, tol)
    Qh = Q.conj().T
    return GeneratorTuple(Qh @ tup.T @ Q, Qh @ tup.u, Qh @ tup.v, tup.lam)


class Kind(str, Enum):
    GAUSSIAN = "Gaussian"
    COMPOUND_POISSON = "CompoundPoisson"
    GENERAL = "General"


def _require_symmetric(tup: GeneratorTuple) -> None:
    if not tup.symmetric:
        raise PreconditionError("tuple must be symmetric: T = T*, u = v, lam real")


def solve_omega(tup: GeneratorTuple, rhs=None) -> np.ndarray:
    """Least-squares ``omega`` with ``T omega = rhs`` (default ``u``), via a cut-off pseudo-inverse."""
    rhs = tup.u if rhs is None else rhs
    if tup.d == 0:
        return np.zeros(0)
    return np.linalg.pinv(tup.T, rcond=PINV_RCOND) @ rhs


def classify(tup: GeneratorTuple) -> Kind:
    """
    Gaussian if the minimal tuple has ``T = 0``; compound Poisson if some
    ``omega`` gives ``u = T omega`` and ``lam = <omega, T omega>``.
    """
    _require_symmetric(tup)
    m = minimal_tuple(tup)
    if m.d == 0 or np.linalg.norm(m.T) <= RANK_TOL:
        return Kind.GAUSSIAN
    omega = solve_omega(tup)
    residual = np.linalg.norm(tup.T @ omega - tup.u)
    drift = np.vdot(omega, tup.T @ omega)
    if residual <= 1e-9 * (1 + np.linalg.norm(tup.u)) and abs(tup.lam - drift) <= 1e-9 * (1 + abs(tup.lam)):
        return Kind.COMPOUND_POISSON
    return Kind.GENERAL


@dataclass(frozen=True)
class SplitResult:
    gaussian: GeneratorTuple
    jump: GeneratorTuple
    omega: np.ndarray
    exact: bool = True


def ito_levy_split(tup: GeneratorTuple) -> SplitResult:
    """
    Split ``u = u0 + u1`` with ``u0`` in ``ker T`` and ``u1`` in ``im T``.
    The Gaussian part is ``(C, 0, |u0|, lam - <w, T w>)`` and the jump part
    ``(k, T, u1, <w, T w>)`` where ``T w = u1``.

    In finite dimension ``im T`` is closed, so ``exact`` is always true.
    """
    _require_symmetric(tup)
    if tup.d == 0:
        return SplitResult(GeneratorTuple([[0.0]], [0.0], None, tup.lam), tup, np.zeros(0))
    evals, evecs = np.linalg.eigh(tup.T)
    cutoff = PINV_RCOND * max(np.abs(evals).max(), 0.0)
    kernel = evecs[:, np.abs(evals) <= cutoff]
    u0 = kernel @ (kernel.conj().T @ tup.u)
    u1 = tup.u - u0
    omega = solve_omega(tup, u1)
    drift = np.vdot(omega, tup.T @ omega)
    drift = drift.real if abs(drift.imag) <= SYMMETRY_TOL else drift
    gaussian = GeneratorTuple([[0.0]], [np.linalg.norm(u0)], None, tup.lam - drift)
    jump = GeneratorTuple(tup.T, u1, u1, drift)
    return SplitResult(gaussian, jump, omega)


def compound_poisson_tuple(atoms, weights) -> GeneratorTuple:
    """
    Tuple of a compound Poisson process with finitely supported Levy measure
    ``sum_j weights[j] * delta_{atoms[j]}``.

    The one-particle space is ``L^2`` of the measure with orthonormal basis
    ``1_{x_j} / sqrt(w_j)``; ``T`` is multiplication by ``x``, ``u`` is the
    function ``x`` and ``lam`` is the first moment. Atoms at 0 carry no mass
    away from the origin and are dropped.
    """
    atoms = np.asarray(atoms, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if atoms.shape != weights.shape:
        raise ShapeError("atoms and weights must have the same length")
    if np.any(weights <= 0):
        raise ValueError("weights must be positive")
    keep = atoms != 0
    x, w = atoms[keep], weights[keep]
    return GeneratorTuple(np.diag(x), x * np.sqrt(w), None, float(np.dot(w, x)))
