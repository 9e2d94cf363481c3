"""Term-by-term audit of the one-step energy balance.

For a random compactly supported field the increment of the weighted norm
splits into four scalar products. Two of them have exact closed forms in
boundary and corner sums, the last one has an upper bound. Regrouping gives
interior, edge and corner contributions whose sum bounds the increment.
"""

import numpy as np

from lwquarter.cli import random_field
from lwquarter.core import CflPair
from lwquarter.energy import breakdown, lemma1_verify, lemma2_verify, lemma3_verify

rng = np.random.default_rng(3)
u = random_field(rng, 24, 24)
cfl = CflPair(-0.3, -0.2)

first, second = lemma1_verify(u, cfl)
print(f"2<u;v>          {first.lhs: .12f} closed form {first.rhs: .12f}")
print(f"-2<v;w>         {second.lhs: .12f} closed form {second.rhs: .12f}")
sym = lemma2_verify(u, cfl)
print(f"|v|^2 - 2<u;w>  {sym.lhs: .12f} closed form {sym.rhs: .12f}")
w = lemma3_verify(u, cfl)
print(f"|w|^2           {w.lhs: .12f} bound       {w.bound: .12f}")

bd = breakdown(u, cfl)
print(f"increment {bd.increment:.6f} <= I + B1 + B2 + C = "
      f"{bd.interior_I:.6f} + {bd.boundary_B1:.6f} + {bd.boundary_B2:.6f} + {bd.corner_C:.6f}")
largest = sorted(bd.items["C"].items(), key=lambda kv: abs(kv[1]), reverse=True)[:3]
print("largest corner items:", largest)
