"""Compare H^n(G, C*) at two working moduli 2^k for every catalog group."""

import sys

from pointed8.cohomology import torus_cohomology
from pointed8.groups import catalog

k = int(sys.argv[1]) if len(sys.argv) > 1 else 12
for G in catalog():
    for n in (1, 2, 3):
        a = torus_cohomology(G, n, k, stabilize=False).invariant_factors
        b = torus_cohomology(G, n, k + 2, stabilize=False).invariant_factors
        print(f"{G.name:6} H^{n}: {list(a)}  {'stable' if a == b else f'UNSTABLE vs {list(b)}'}")
