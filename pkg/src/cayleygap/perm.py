"""Permutations, weighted groups over symmetric groups, and Cayley graphs.

Permutations are plain tuples in one-line notation over ``0..N-1``;
``compose(g, h)`` is ``g after h``.  The Cayley graph of a weighted group
has an edge ``x -> g x`` with rate ``C_G(g)``.

Whole-group computations go through :class:`SymmetricGroup`, which keeps
every element of ``S_N`` in lexicographic order as a numpy array and can
rank arbitrary batches of permutations.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceededError, InvalidInputError, NotIrreducibleError
from .graph import STATE_CAP, WeightedDigraph

Permutation = tuple

#: default cap on the size of a subgroup closure (10!)
CLOSURE_CAP = 3_628_800


def as_permutation(images: Iterable[int]) -> Permutation:
    p = tuple(int(i) for i in images)
    if sorted(p) != list(range(len(p))):
        raise InvalidInputError(f"{p} is not a permutation of 0..{len(p) - 1}")
    return p


def identity(n: int) -> Permutation:
    return tuple(range(n))


def transposition(n: int, i: int, j: int) -> Permutation:
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise InvalidInputError(f"bad transposition ({i} {j}) in degree {n}")
    p = list(range(n))
    p[i], p[j] = j, i
    return tuple(p)


def cycle(n: int, *points: int) -> Permutation:
    """The cycle ``points[0] -> points[1] -> ... -> points[0]``."""
    p = list(range(n))
    for a, b in zip(points, points[1:] + points[:1]):
        p[a] = b
    return as_permutation(p)


def compose(g: Permutation, h: Permutation) -> Permutation:
    """``(g o h)(i) = g(h(i))``."""
    if len(g) != len(h):
        raise InvalidInputError(f"degree mismatch: {len(g)} vs {len(h)}")
    return tuple(g[i] for i in h)


def inverse(g: Permutation) -> Permutation:
    inv = [0] * len(g)
    for i, gi in enumerate(g):
        inv[gi] = i
    return tuple(inv)


def conjugate(h: Permutation, g: Permutation) -> Permutation:
    """``h g h^-1``."""
    return compose(compose(h, g), inverse(h))


def support(g: Permutation) -> frozenset:
    """Points moved by ``g``."""
    return frozenset(i for i, gi in enumerate(g) if gi != i)


def is_identity(g: Permutation) -> bool:
    return all(i == gi for i, gi in enumerate(g))


class SymmetricGroup:
    """All of ``S_N`` as an ``(N!, N)`` array in lexicographic order.

    Use :func:`symmetric_group` to get a cached instance.
    """

    def __init__(self, n: int, cap: int = STATE_CAP):
        order = math.factorial(n)
        if order > cap:
            raise CapExceededError(f"{n}! = {order} elements exceed the cap {cap}")
        self.n = n
        self.order = order
        dtype = np.int8 if n <= 127 else np.int16
        self.elements = np.array(list(itertools.permutations(range(n))), dtype=dtype).reshape(order, n)
        self._weights = n ** np.arange(n - 1, -1, -1, dtype=np.int64)
        self._codes = self.elements.astype(np.int64) @ self._weights

    def rank(self, perms) -> np.ndarray:
        """Lexicographic index of each row of ``perms``."""
        perms = np.asarray(perms)
        codes = perms.astype(np.int64) @ self._weights
        return np.searchsorted(self._codes, codes)

    def index(self, g: Permutation) -> int:
        return int(self.rank(np.asarray(g)[None, :])[0])

    def element(self, i: int) -> Permutation:
        return tuple(int(a) for a in self.elements[i])

    def labels(self) -> tuple:
        return tuple(tuple(int(a) for a in row) for row in self.elements)

    def left_map(self, g: Permutation) -> np.ndarray:
        """Index of ``g o x`` for every ``x``."""
        return self.rank(np.asarray(g, dtype=self.elements.dtype)[self.elements])

    def right_map(self, g: Permutation) -> np.ndarray:
        """Index of ``x o g`` for every ``x``."""
        return self.rank(self.elements[:, np.asarray(g, dtype=np.intp)])

    def inverse_map(self) -> np.ndarray:
        return self.rank(np.argsort(self.elements, axis=1))


@functools.lru_cache(maxsize=8)
def symmetric_group(n: int, cap: int = STATE_CAP) -> SymmetricGroup:
    return SymmetricGroup(n, cap)


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup of ``S_N`` given by generators, with all elements listed.

    ``elements`` is sorted lexicographically and starts with the identity.
    """

    degree: int
    generators: tuple
    elements: tuple
    _members: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_members", frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return tuple(g) in self._members

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def issubset(self, other: "SubgroupSpec") -> bool:
        return self.degree == other.degree and self._members <= other._members

    def conjugate(self, h: Permutation) -> "SubgroupSpec":
        """``h H h^-1``."""
        gens = tuple(conjugate(h, g) for g in self.generators)
        elems = tuple(sorted(conjugate(h, g) for g in self.elements))
        return SubgroupSpec(self.degree, gens, elems)


def subgroup_closure(degree: int, generators: Iterable[Permutation] = (), cap: int = CLOSURE_CAP) -> SubgroupSpec:
    """Subgroup generated by ``generators``, by breadth-first closure."""
    gens = []
    for g in generators:
        g = as_permutation(g)
        if len(g) != degree:
            raise InvalidInputError(f"generator {g} does not have degree {degree}")
        if not is_identity(g) and g not in gens:
            gens.append(g)
    e = identity(degree)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > cap:
            raise CapExceededError(f"subgroup closure exceeds the cap {cap}")
        frontier = nxt
    return SubgroupSpec(degree, tuple(gens), tuple(sorted(seen)))


def trivial_subgroup(degree: int) -> SubgroupSpec:
    return subgroup_closure(degree)


def full_symmetric_subgroup(degree: int, points: Sequence[int] | None = None) -> SubgroupSpec:
    """All permutations of ``points`` (default: every point), fixing the rest."""
    points = list(range(degree)) if points is None else sorted(points)
    gens = [transposition(degree, a, b) for a, b in zip(points, points[1:])]
    return subgroup_closure(degree, gens)


def subgroup_from_elements(degree: int, elements: Iterable[Permutation]) -> SubgroupSpec:
    """Wrap an element set known to be a subgroup; generators are all elements."""
    elems = sorted({as_permutation(g) for g in elements})
    if not elems or elems[0] != identity(degree):
        raise InvalidInputError("element set must contain the identity")
    gens = tuple(g for g in elems if not is_identity(g))
    return SubgroupSpec(degree, gens, tuple(elems))


def generated_order(degree: int, generators: Iterable[Permutation], cap: int = CLOSURE_CAP) -> int:
    """Order of ``<generators>``, adding generators one at a time.

    Redundant generators (already in the running closure) are skipped, so a
    long list of elements costs only a few closures.
    """
    current = trivial_subgroup(degree)
    gens: list = []
    for g in generators:
        g = tuple(g)
        if g in current:
            continue
        gens.append(g)
        current = subgroup_closure(degree, gens, cap)
        if current.order == math.factorial(degree):
            break
    return current.order


@dataclass(frozen=True)
class WeightedGroup:
    """``S_N`` with a weight on its elements; the identity has weight 0.

    ``weights`` maps permutations (the support) to positive reals.
    """

    degree: int
    weights: Mapping

    def __post_init__(self):
        clean = {}
        for g, w in dict(self.weights).items():
            g = as_permutation(g)
            w = float(w)
            if len(g) != self.degree:
                raise InvalidInputError(f"{g} does not have degree {self.degree}")
            if not np.isfinite(w) or w < 0:
                raise InvalidInputError(f"weight {w} of {g} must be finite and >= 0")
            if w == 0:
                continue
            if is_identity(g):
                raise InvalidInputError("the identity must have weight 0")
            clean[g] = w
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    def weight(self, g: Permutation) -> float:
        return self.weights.get(tuple(g), 0.0)

    @property
    def support(self) -> tuple:
        return tuple(self.weights)

    @property
    def total_weight(self) -> float:
        return float(sum(self.weights.values()))


def group_is_irreducible(G: WeightedGroup) -> bool:
    """The support generates all of ``S_N``."""
    if not G.weights:
        return False
    return generated_order(G.degree, G.support) == math.factorial(G.degree)


def group_is_reversible(G: WeightedGroup) -> bool:
    """``C_G(g) = C_G(g^-1)`` on the support (irreducible groups only)."""
    if not group_is_irreducible(G):
        raise NotIrreducibleError("reversibility test needs an irreducible weighted group")
    return all(np.isclose(w, G.weight(inverse(g)), rtol=1e-9, atol=1e-12) for g, w in G.weights.items())


def weighted_group_morphism_ok(G1: WeightedGroup, G2: WeightedGroup, phi) -> bool:
    """Weight condition ``C2(g) = sum of C1 over phi^-1(g)`` for every ``g`` in ``S_N2``.

    ``phi`` is a callable on permutations of degree ``G1.degree``.
    """
    pushed: dict = {}
    for g in itertools.permutations(range(G1.degree)):
        img = tuple(phi(g))
        pushed[img] = pushed.get(img, 0.0) + G1.weight(g)
    for g in itertools.permutations(range(G2.degree)):
        if not np.isclose(pushed.get(g, 0.0), G2.weight(g), rtol=1e-9, atol=1e-12):
            return False
    return True


def cayley_graph(G: WeightedGroup, cap: int = STATE_CAP) -> WeightedDigraph:
    """States are all of ``S_N`` (lexicographic); rate ``x -> g x`` is ``C_G(g)``."""
    sg = symmetric_group(G.degree, cap)
    rates = np.zeros((sg.order, sg.order))
    rows = np.arange(sg.order)
    for g, w in G.weights.items():
        rates[rows, sg.left_map(g)] += w
    return WeightedDigraph(sg.labels(), rates)
