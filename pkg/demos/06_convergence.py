"""Second-order accuracy with and without the outflow corner.

A smooth compact bump is advected towards the corner with a = b = -1 and
lambda = mu = 0.2. Errors against the exact cell averages halve twice per
refinement whether the bump stays inside or crosses the corner.
"""

from lwquarter.cli import BUMPS, convergence_study, cos_bump

for name, (cx, cy) in BUMPS.items():
    res = convergence_study(cos_bump(cx, cy, 0.25), levels=4)
    orders = ", ".join(f"{o:.3f}" for o in res.orders)
    print(f"{name:8s} errors {['%.3e' % e for e in res.errors]} orders {orders}")
