"""Cross-module oracle battery used by ``freelevy check``."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from . import fock
from .dualaffine import azema_free
from .levy import GeneratorTuple, process_moments, tuple_cumulants
from .mixedmoments import MarginalLaw, free_mixed_moment
from .moments import cumulants_to_moments
from .partitions import (
    enumerate_interval_partitions,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
)

__all__ = ["CheckResult", "CHECKS", "check_suite", "bell_numbers", "catalan"]

TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: max deviation {self.max_deviation:.3g}"


def bell_numbers(n_max: int) -> list[int]:
    """``B_0..B_n_max`` from the Bell triangle."""
    bells, row = [1], [1]
    for _ in range(n_max):
        new = [row[-1]]
        for x in row:
            new.append(new[-1] + x)
        row = new
        bells.append(row[0])
    return bells


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def _partitions(rng, perturb):
    bells = bell_numbers(10)
    dev = 0
    for n in range(1, 11):
        dev = max(dev, abs(len(enumerate_set_partitions(n)) - bells[n]))
    for n in range(1, 13):
        dev = max(dev, abs(len(enumerate_noncrossing_partitions(n)) - catalan(n)))
    for n in range(1, 17):
        dev = max(dev, abs(len(enumerate_interval_partitions(n)) - 2 ** (n - 1)))
    return float(dev) + perturb


def random_symmetric_tuple(rng, d_max=3) -> GeneratorTuple:
    d = int(rng.integers(1, d_max + 1))
    A = rng.uniform(-1, 1, (d, d))
    return GeneratorTuple(np.triu(A) + np.triu(A, 1).T, rng.uniform(-1, 1, d), None, rng.uniform(-1, 1))


def _levy(rng, perturb, count=20, order=8):
    dev = 0.0
    for _ in range(count):
        tup = random_symmetric_tuple(rng)
        for t in (0.5, 1.0, 2.0):
            oracle = process_moments(tup, t, order).values
            closed = cumulants_to_moments(tuple_cumulants(tup, t, "free", order)).values + perturb
            dev = max(dev, float(np.abs(oracle - closed).max()))
    return dev


def _mixed(rng, perturb, count=100, max_length=6):
    space, (i1, i2) = fock.free_embedding([1, 1], max_length)
    ops = {}
    for fam, inj in ((1, i1), (2, i2)):
        c, s, g = rng.uniform(-1, 1, 3)
        ops[fam] = inj.creation([s]) + inj.annihilation([s]) + inj.conservation([[g]]) + c
    laws = [MarginalLaw.from_operators(fam, [op], max_length) for fam, op in ops.items()]
    dev = 0.0
    for _ in range(count):
        n = int(rng.integers(1, max_length + 1))
        word = [int(f) for f in rng.integers(1, 3, n)]
        expected = fock.vacuum_expectation([ops[f] for f in word])
        dev = max(dev, abs(free_mixed_moment(word, laws) + perturb - expected))
    return dev


def _azema(rng, perturb, t=1.5):
    target = np.array([0 if k % 2 else catalan(k // 2) * t ** (k // 2) for k in range(1, 9)], dtype=float)
    dev = 0.0
    for n in (1, 4, 8):
        dev = max(dev, float(np.abs(azema_free(1.0, t, n, 8, 8).values + perturb - target).max()))
    return dev


CHECKS = {
    "partitions": _partitions,
    "levy-vs-fock": _levy,
    "mixedmoments-vs-fock": _mixed,
    "azema-gamma1": _azema,
}


def check_suite(filter: str | None = None, perturb: float = 0.0, seed: int = 0) -> list[CheckResult]:
    """
    Run the oracle battery; ``filter`` selects checks by substring and
    ``perturb`` adds an offset to every computed value (negative control).
    """
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS.items():
        if filter and filter not in name:
            continue
        dev = fn(rng, perturb)
        out.append(CheckResult(name, dev < TOL, dev))
    return out
