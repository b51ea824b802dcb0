"""
Partitions and cumulants
========================

Three ways to cut {1, ..., n} into blocks, and the three cumulant
transforms built on them.
"""

# Set partitions grow like the Bell numbers, non-crossing ones like the
# Catalan numbers, and interval partitions are just compositions of n.

from freelevy.partitions import (
    enumerate_interval_partitions,
    is_noncrossing,
    enumerate_noncrossing_partitions,
    enumerate_set_partitions,
)

for n in range(1, 8):
    print(
        n,
        len(enumerate_set_partitions(n)),
        len(enumerate_noncrossing_partitions(n)),
        len(enumerate_interval_partitions(n)),
    )

# The crossing partition {1,3},{2,4} is the first one missing from the
# non-crossing list.

crossing = [p for p in enumerate_set_partitions(4) if not is_noncrossing(p)]
print("crossing partitions of 4:", [p.blocks for p in crossing])

# Moments of the standard normal distribution. Its classical cumulants are
# (0, 1, 0, 0, ...), while the free and Boolean cumulants are not so sparse.

from freelevy.moments import MomentSequence, cumulants_to_moments, moments_to_cumulants

gaussian = MomentSequence([0, 1, 0, 3, 0, 15])
for flavor in ("classical", "free", "boolean"):
    kappa = moments_to_cumulants(gaussian, flavor)
    print(flavor, kappa.values)
    print("  round trip:", cumulants_to_moments(kappa).values)
