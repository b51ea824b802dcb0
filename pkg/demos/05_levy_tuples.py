"""
Levy processes from generator tuples
====================================

A tuple (T, u, lambda) with T symmetric describes a free Levy process. It is
realized on the Fock space over L2(R+) tensored with a small space.
"""

import numpy as np

from freelevy.levy import (
    GeneratorTuple,
    classify,
    compound_poisson_tuple,
    ito_levy_split,
    minimal_tuple,
    process_moments,
    tuple_cumulants,
)
from freelevy.moments import cumulants_to_moments

# Compound Poisson with jumps of size 1 is the free Poisson process.

tup = compound_poisson_tuple([1.0], [1.0])
print("T, u, lambda:", tup.T, tup.u, tup.lam)
print("Fock moments:", process_moments(tup, 1.0, 4).values)
print("from cumulants:", cumulants_to_moments(tuple_cumulants(tup, 1.0, "free", 4)).values)
print("kind:", classify(tup))

# A random tuple mixes a Gaussian part with jumps. The Gaussian part lives
# on the kernel of T, so we zero out one eigenvalue to make it visible.

rng = np.random.default_rng(7)
H = rng.normal(size=(3, 3))
w, V = np.linalg.eigh(H + H.T)
w[0] = 0.0
T = V @ np.diag(w) @ V.T
tup = GeneratorTuple(T, rng.normal(size=3), None, 0.3)
split = ito_levy_split(tup)
print("kind:", classify(tup))
print("gaussian part:", split.gaussian.u, split.gaussian.lam)
print("additivity defect:", np.abs(
    tuple_cumulants(tup, 1.0, "free", 6).values
    - tuple_cumulants(split.gaussian, 1.0, "free", 6).values
    - tuple_cumulants(split.jump, 1.0, "free", 6).values
).max())

# Padding with a block u never sees does not change the process.

padded = GeneratorTuple(np.diag([2.0, 5.0]), [1.0, 0.0], None, 0.0)
print("minimal dimension:", minimal_tuple(padded).d)
