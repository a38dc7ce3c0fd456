"""Block shuffle with heavy full-block moves: does M change the gap?

On the blown-up graph we add a shuffle of each whole block with weight M and
quotient down to the exclusion-type state spaces.  Nothing is asserted;
these are observations.
"""

from pathlib import Path

from cayleygap import probe_block_shuffle_conjecture
from cayleygap.io import read_graph_file

DATA = Path(__file__).parent / "data"

for name, k, l in [("two", (2, 2), 2), ("path3", (2, 1, 1), 2)]:
    X = read_graph_file(DATA / f"{name}.json")
    rep = probe_block_shuffle_conjecture(X, k, l, [0.5, 1, 10, 100])
    print(f"\n-- {name}, k={k}, l={l}")
    for q in rep.extra["quotients"]:
        print(f"  M={q['M']:>6g} {q['name']:>5}: gap {q['gap']:.8f} on {len(q['states'])} states")
    for c in rep.observations:
        print(f"  observed: {c.name} -> {c.passed}")
