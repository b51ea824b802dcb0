"""
Mixed moments of independent families
=====================================

Given the laws of two families, the joint moments are fixed once we say
how they are independent.
"""

from freelevy.mixedmoments import MarginalLaw, free_mixed_moment, tensor_mixed_moment
from freelevy.moments import MomentSequence

# Two single variables with non-zero mean.

x = MarginalLaw.from_sequence(1, MomentSequence.from_atoms([0.0, 2.0], [0.5, 0.5], 8))
y = MarginalLaw.from_sequence(2, MomentSequence.from_atoms([1.0, 3.0], [0.25, 0.75], 8))

word = [1, 2, 1, 2]
print("tensor:", tensor_mixed_moment(word, [x, y]))
print("free:  ", free_mixed_moment(word, [x, y]))

# The free answer follows the four-point formula.

m1, m2 = x((0,)), y((0,))
v1, v2 = x((0, 0)), y((0, 0))
print("formula:", v1 * m2**2 + m1**2 * v2 - m1**2 * m2**2)

# Commuting variables can only be free if one of them is constant. The
# difference between the two orderings is Var(x) Var(y).

print("phi(xxyy) - phi(xyxy):", free_mixed_moment([1, 1, 2, 2], [x, y]) - free_mixed_moment(word, [x, y]))
