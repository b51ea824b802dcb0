"""
A free Azema martingale
=======================

Composing many small dual affine increments gives a process with a
continuous limit. The parameter gamma interpolates between free Brownian
motion (gamma = 1) and a pure jump behaviour (gamma = 0).
"""

import numpy as np

from freelevy.dualaffine import azema_convergence, azema_free

# gamma = 1 gives the semicircle law of variance t at every step count.

t = 2.0
for steps in (1, 4, 16):
    print(steps, np.round(azema_free(1.0, t, steps, 6, 6).values.real, 10))

# For other gamma the discretization error shrinks like 1/N.

report = azema_convergence(0.5, 1.0, (4, 8, 16, 32), max_order=6, depth=6)
print("differences:", report["differences"])
print("ratios:", report["ratios"])

# Only |gamma| enters the moments.

a = azema_free(0.5, 1.0, 16, 6, 6).values
b = azema_free(0.5j, 1.0, 16, 6, 6).values
print("phase defect:", np.abs(a - b).max())
