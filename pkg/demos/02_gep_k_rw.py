"""Generalized exclusion: k particles per site, l particles in total.

For uniform capacity k the gap is exactly k times the random-walk gap,
independent of l.  The table below sweeps l on a path and a triangle.
"""

from pathlib import Path

from cayleygap import GEPConfig, gep_graph, spectral_gap
from cayleygap.io import read_graph_file
from cayleygap.processes import random_walk

DATA = Path(__file__).parent / "data"

for name in ("path3", "k3"):
    X = read_graph_file(DATA / f"{name}.json")
    rw = spectral_gap(random_walk(X)).gap
    for k in (1, 2, 3):
        N = k * X.n
        row = []
        for l in range(1, N):
            g = gep_graph(GEPConfig.uniform(X, k, l))
            row.append(spectral_gap(g).gap / rw)
        print(f"{name} k={k}: gap/gap(RW) over l=1..{N - 1}:", " ".join(f"{r:.6f}" for r in row))

# non-uniform capacities: the gap no longer need be a multiple of gap(RW)
X = read_graph_file(DATA / "path3.json")
for k in [(1, 2, 1), (2, 1, 2), (3, 1, 1)]:
    gaps = [spectral_gap(gep_graph(GEPConfig(X, k, l))).gap for l in range(1, sum(k))]
    print(f"path3 k={k}:", " ".join(f"{g:.6f}" for g in gaps))
