"""Physical constants in SI units, fixed so results do not move with CODATA revisions."""
import math

mu0 = 4e-7 * math.pi        # T m / A
muB = 9.2740100783e-24      # J / T
hbar = 1.054571817e-34      # J s
h = 2 * math.pi * hbar      # J s
kB = 1.380649e-23           # J / K
amu = 1.66053906660e-27     # kg
