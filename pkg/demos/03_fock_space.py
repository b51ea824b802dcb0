"""
The full Fock space
===================

Creation, annihilation and conservation operators on tensor powers of a
small Hilbert space, with vacuum expectations as the state.
"""

import numpy as np

from freelevy import fock

# A one-particle space of dimension 2, truncated at eight particles.

space = fock.FockSpace(2, 8)
print("dimension:", space.dimension)

# The semicircular element a+(e) + a-(e) has Catalan even moments.

e = np.array([1.0, 0.0])
S = fock.creation(space, e) + fock.annihilation(space, e)
print("moments of S:", [fock.vacuum_expectation([S] * k).real for k in range(1, 9)])

# Adding a conservation term moves us to the free Poisson family.

P = S + fock.conservation(space, np.diag([1.0, 0.0])) + 1.0
print("moments of P:", [round(fock.vacuum_expectation([P] * k).real, 12) for k in range(1, 5)])

# Matrices are sparse and stored on the basis ordered by length, then
# lexicographically.

M = S.to_matrix()
print(type(M).__name__, M.shape, M.nnz)
print("S is hermitian:", abs(M - M.conj().T).max() == 0)

# Orthogonal subspaces of the one-particle space give freely independent
# subalgebras. The embedding helper builds them.

big, (left, right) = fock.free_embedding([1, 1], 6)
X = left.creation([1.0]) + left.annihilation([1.0])
Y = right.creation([1.0]) + right.annihilation([1.0])
print("phi(XYXY) =", fock.vacuum_expectation([X, Y, X, Y]).real)
print("phi(XXYY) =", fock.vacuum_expectation([X, X, Y, Y]).real)
