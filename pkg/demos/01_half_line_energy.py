"""Why the boundary cell needs half weight.

On the half-line, Lax-Wendroff with extrapolation u_{-1} = 2 u_0 - u_1 has an
exact one-step energy balance. With the plain sum of squares the boundary
term is an indefinite quadratic form in (u_0, u_1); halving the weight of u_0
makes it negative definite, and the energy can no longer grow.
"""

import numpy as np

from lwquarter.core import Field1D
from lwquarter.scheme1d import (
    boundary_form_1d,
    energy_balance_residual_1d,
    energy_modified_1d,
    energy_standard_1d,
    run_1d,
)

alpha = -0.5
probe = Field1D.from_interior(np.zeros(4))
for modified in (False, True):
    _, m = boundary_form_1d(probe, alpha, modified)
    label = "half weight" if modified else "plain     "
    print(f"{label} boundary matrix eigenvalues: {np.linalg.eigvalsh(m)}")

# a steep ramp leaving u_0 = 0 exposes the positive direction of the plain form
ramp = Field1D.from_interior(np.r_[np.arange(11.0), np.arange(9.9, -0.05, -0.1), np.zeros(20)])
nxt = next(run_1d(ramp, alpha, 1))
print(f"plain energy      {energy_standard_1d(ramp):.6f} -> {energy_standard_1d(nxt):.6f}")
print(f"half-weight energy {energy_modified_1d(ramp):.6f} -> {energy_modified_1d(nxt):.6f}")

# the balance is exact: residuals are round-off
print("balance residuals:", energy_balance_residual_1d(ramp, alpha, False),
      energy_balance_residual_1d(ramp, alpha, True))
