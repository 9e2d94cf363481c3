"""Ghost cells and one step of the 2D scheme.

The ghost ring is filled by second-order extrapolation along each edge and by
the corner rule u(-1,-1) = 4 u00 - 2 u10 - 2 u01 + u11. Affine data is
continued exactly. One step is u - w + v with the transport part v and the
second-order part w.
"""

import numpy as np

from lwquarter.core import CflPair, Field2D
from lwquarter.scheme2d import decompose, step_2d

j, k = np.meshgrid(np.arange(5.0), np.arange(5.0), indexing="ij")
u = Field2D.from_interior(1.0 + j + 2.0 * k)
print("ghost row j = -1:", u.data[0, 1:-1], "(affine continuation)")
print("corner ghost:", u.value(-1, -1))

cfl = CflPair(-0.2, -0.1)
dec = decompose(u, cfl)
print("v on affine data is constant:", np.unique(np.round(dec.v, 14)))
print("w on affine data vanishes:", np.max(np.abs(dec.w)))
print("one step raises the plane by -(alpha + 2 beta):", step_2d(u, cfl).value(2, 2) - u.value(2, 2))
