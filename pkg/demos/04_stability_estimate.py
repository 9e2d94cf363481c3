"""The stability estimate along a trajectory.

A Gaussian centred two cells from the corner is carried out of the domain.
Each step must satisfy
    |u^{n+1}|^2 - |u^n|^2 + c * dissipation(u^n) <= 0
with c = 1/10. A pair outside the small-CFL hypothesis can still be run in
explore mode, where the estimate is reported but not claimed.
"""

import numpy as np

from lwquarter.core import CflPair, GridSpec, project_initial_2d
from lwquarter.energy import theorem1_check

n = 64
g = GridSpec(n, n, 1.0, 1.0, 1.0)
u0 = project_initial_2d(lambda x, y: np.exp(-((x - 2.5) ** 2 + (y - 2.5) ** 2) / 8.0), g)

rep = theorem1_check(u0, CflPair(-0.05, -0.05, bound_m=2.0, radius_eps=0.05), 200)
print(f"strict run: max lhs {rep.max_lhs:.3e}, tol {rep.tol:.1e}, passed {rep.passed}, "
      f"norm {rep.norms[0]:.4f} -> {rep.norms[-1]:.4f}")

rep = theorem1_check(u0, CflPair(-0.6, -0.3), 50, mode="explore")
print(f"explore run (not claimed): max lhs {rep.max_lhs:.3e}, monotone {rep.monotone}")
