"""
Adding independent variables
============================

Cumulants linearise convolution. The same moment data gives different
sums depending on which notion of independence is used.
"""

import numpy as np

from freelevy.moments import MomentSequence, bercovici_pata, convolve

# A symmetric Bernoulli variable taking the values -1 and +1.

bernoulli = MomentSequence.from_atoms([-1.0, 1.0], [0.5, 0.5], 6)
print("Bernoulli:", bernoulli.values)

# Classically, the sum of two independent copies lives on {-2, 0, 2}.
# The free sum is the arcsine law on [-2, 2], and the Boolean sum keeps
# the atoms at -sqrt(2) and sqrt(2).

for flavor in ("classical", "free", "boolean"):
    print(flavor, convolve(bernoulli, bernoulli, flavor).values)

# The Bercovici-Pata map reads classical cumulants as free ones.
# Poisson(1) becomes the free Poisson law with Catalan moments.

poisson = MomentSequence([1, 2, 5, 15, 52])
print("free Poisson:", bercovici_pata(poisson).values)

# It is a homomorphism: mapping a classical sum gives the free sum of the
# images. Compound Poisson laws are infinitely divisible, so their images are
# again moment sequences of measures.

from freelevy.levy import compound_poisson_tuple, tuple_cumulants
from freelevy.moments import cumulants_to_moments


def compound_poisson(atoms, weights):
    tup = compound_poisson_tuple(atoms, weights)
    return cumulants_to_moments(tuple_cumulants(tup, 1.0, "classical", 6))


a = compound_poisson([1.0, 2.0], [0.7, 0.3])
b = compound_poisson([-1.0, 1.5], [0.4, 0.6])
lhs = bercovici_pata(convolve(a, b, "classical"))
rhs = convolve(bercovici_pata(a), bercovici_pata(b), "free")
print("homomorphism defect:", np.abs(lhs.values - rhs.values).max())
print("image realizable:", lhs.is_realizable())

# A Bernoulli variable is not infinitely divisible. Reading its classical
# cumulants as free ones gives a sequence whose Hankel matrix has a
# negative eigenvalue.

print("Bernoulli image realizable:", bercovici_pata(bernoulli).is_realizable())
