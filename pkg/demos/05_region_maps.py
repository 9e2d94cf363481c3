"""Where are the corner and boundary forms negative definite?

Each pixel of the (lambda|a|, mu|b|) square is classified as outside the
Cauchy CFL ball, inside but not dissipative, or inside and dissipative. The
full corner form fails near the origin; dropping two cross terms enlarges the
good region a lot; the whole-line boundary symbol is dissipative almost
everywhere inside the ball. Maps are written as PGM images.
"""

import os
import sys

from lwquarter.cli import write_pgm
from lwquarter.regions import sweep

out = sys.argv[1] if len(sys.argv) > 1 else "demo_output"
os.makedirs(out, exist_ok=True)
for which in ("corner", "reduced", "boundary"):
    m = sweep(256, which)
    outside, bad, good = m.counts()
    path = os.path.join(out, f"{which}.pgm")
    write_pgm(path, m)
    print(f"{which:9s} outside={outside} bad={bad} good={good}  class at (0.05, 0.05): {m.at(0.05, 0.05)}  -> {path}")
