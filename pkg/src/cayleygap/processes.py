"""Concrete processes on a symmetric base graph ``X = (V, r)``.

Random walk, interchange process (IP), generalized exclusion process (GEP),
the extended graph used to write the GEP as a quotient of an IP, and the
block shuffle.

Conventions
-----------
Vertices are indexed ``0..n-1`` in the order of ``BaseGraph.vertices``; the
bijection between particle positions and vertices is this order.  An IP
state in the group picture is a permutation ``x`` sending each particle
label to the index of the vertex it occupies, so left multiplication by a
transposition swaps the contents of two vertices and right multiplication
relabels particles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

import numpy as np

from .cosets import QuotientResult, is_regular_pair, quotient_graph
from .errors import CapExceededError, InvalidInputError, NotIrreducibleError
from .graph import ATOL, RTOL, STATE_CAP, WeightedDigraph, build_graph, check_morphism, is_irreducible
from .perm import (
    Permutation,
    SubgroupSpec,
    WeightedGroup,
    full_symmetric_subgroup,
    inverse,
    subgroup_closure,
    symmetric_group,
    transposition,
)


@dataclass(frozen=True, eq=False)
class BaseGraph:
    """Symmetric weighted complete graph: vertex labels and rates ``r``."""

    vertices: tuple
    r: np.ndarray

    def __post_init__(self):
        vertices = tuple(self.vertices)
        r = np.array(self.r, dtype=float)
        n = len(vertices)
        if n < 2:
            raise InvalidInputError("a base graph needs at least 2 vertices")
        if len(set(vertices)) != n:
            raise InvalidInputError("vertex labels must be unique")
        if r.shape != (n, n):
            raise InvalidInputError(f"rate matrix must be {n}x{n}")
        if not np.all(np.isfinite(r)) or np.any(r < 0):
            raise InvalidInputError("rates must be finite and nonnegative")
        if np.any(np.diag(r) != 0):
            raise InvalidInputError("base graph has a self-loop")
        if not np.array_equal(r, r.T):
            raise InvalidInputError("base graph rates must be symmetric")
        r.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "r", r)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: Hashable) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise InvalidInputError(f"unknown vertex {v!r}") from None

    def is_connected(self) -> bool:
        return is_irreducible(WeightedDigraph(self.vertices, self.r))

    @classmethod
    def from_edges(cls, vertices: Sequence[Hashable], edges: Sequence[tuple]) -> "BaseGraph":
        """Build from ``(u, w, rate)`` triples, mirrored symmetrically."""
        vertices = tuple(vertices)
        idx = {v: i for i, v in enumerate(vertices)}
        if len(idx) != len(vertices):
            raise InvalidInputError("vertex labels must be unique")
        r = np.zeros((len(vertices), len(vertices)))
        seen = set()
        for u, w, rate in edges:
            if u not in idx or w not in idx:
                raise InvalidInputError(f"edge ({u!r}, {w!r}) uses an unknown vertex")
            if u == w:
                raise InvalidInputError(f"self-loop at {u!r}")
            key = frozenset((u, w))
            if key in seen:
                raise InvalidInputError(f"edge {{{u!r}, {w!r}}} given twice")
            seen.add(key)
            r[idx[u], idx[w]] = r[idx[w], idx[u]] = float(rate)
        return cls(vertices, r)

    def edges(self) -> list[tuple]:
        return [(self.vertices[i], self.vertices[j], float(self.r[i, j]))
                for i in range(self.n) for j in range(i + 1, self.n) if self.r[i, j] > 0]


def complete_graph(n: int, rate: float = 1.0) -> BaseGraph:
    r = np.full((n, n), float(rate))
    np.fill_diagonal(r, 0.0)
    return BaseGraph(tuple(f"v{i}" for i in range(n)), r)


def path_graph(n: int, rate: float = 1.0) -> BaseGraph:
    r = np.zeros((n, n))
    for i in range(n - 1):
        r[i, i + 1] = r[i + 1, i] = rate
    return BaseGraph(tuple(f"v{i}" for i in range(n)), r)


def star_graph(leaf_rates: Sequence[float]) -> BaseGraph:
    """Center ``c`` joined to one leaf per rate."""
    n = len(leaf_rates) + 1
    r = np.zeros((n, n))
    for i, rate in enumerate(leaf_rates, start=1):
        r[0, i] = r[i, 0] = rate
    return BaseGraph(("c",) + tuple(f"l{i}" for i in range(1, n)), r)


def random_base_graph(n: int, rng: np.random.Generator, values=None) -> BaseGraph:
    """Complete graph with rates drawn from ``values`` (default 0.5, 1.0, ..., 4.0)."""
    values = np.arange(1, 9) / 2 if values is None else np.asarray(values, dtype=float)
    r = np.zeros((n, n))
    iu = np.triu_indices(n, 1)
    r[iu] = rng.choice(values, size=len(iu[0]))
    return BaseGraph(tuple(f"v{i}" for i in range(n)), r + r.T)


# ---------------------------------------------------------------- random walk

def random_walk(X: BaseGraph, scale: float = 1.0) -> WeightedDigraph:
    """Single particle jumping ``u -> w`` at rate ``scale * r(u, w)``."""
    if scale <= 0:
        raise InvalidInputError("scale must be positive")
    if not X.is_connected():
        raise NotIrreducibleError("random walk on a disconnected graph")
    return WeightedDigraph(X.vertices, scale * X.r)


# -------------------------------------------------------- interchange process

def interchange_group(X: BaseGraph) -> WeightedGroup:
    """Weight ``r(v_i, v_j)`` on each transposition ``(i j)``, zero elsewhere."""
    n = X.n
    weights = {transposition(n, i, j): X.r[i, j]
               for i in range(n) for j in range(i + 1, n) if X.r[i, j] > 0}
    return WeightedGroup(n, weights)


def interchange_graph(X: BaseGraph, cap: int = STATE_CAP) -> WeightedDigraph:
    """The IP built directly: states are assignments ``eta[v] = label``.

    A swap of the labels at ``u`` and ``w`` happens at rate ``r(u, w)``.
    """
    n = X.n
    if math.factorial(n) > cap:
        raise CapExceededError(f"{n}! IP states exceed the cap {cap}")
    states = list(itertools.permutations(range(n)))
    index = {s: i for i, s in enumerate(states)}
    rates = np.zeros((len(states), len(states)))
    for eta in states:
        i = index[eta]
        for u in range(n):
            for w in range(u + 1, n):
                if X.r[u, w] > 0:
                    s = list(eta)
                    s[u], s[w] = s[w], s[u]
                    rates[i, index[tuple(s)]] += X.r[u, w]
    return WeightedDigraph(tuple(states), rates)


def ip_state_to_group(eta: Sequence[int]) -> Permutation:
    """Assignment ``vertex -> label`` to group element ``label -> vertex``."""
    return inverse(tuple(eta))


# ------------------------------------------------------------------------ GEP

@dataclass(frozen=True, eq=False)
class GEPConfig:
    """Base graph, maximal occupancies ``k`` (one per vertex) and particle count ``l``."""

    base: BaseGraph
    k: tuple
    l: int

    def __post_init__(self):
        k = tuple(int(a) for a in self.k)
        if len(k) != self.base.n:
            raise InvalidInputError(f"need {self.base.n} occupancies, got {len(k)}")
        if any(a < 1 for a in k):
            raise InvalidInputError("maximal occupancies must be >= 1")
        N = sum(k)
        if not 1 <= int(self.l) < N:
            raise InvalidInputError(f"particle count l={self.l} must satisfy 1 <= l < {N}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "l", int(self.l))

    @property
    def N(self) -> int:
        return sum(self.k)

    @classmethod
    def uniform(cls, base: BaseGraph, k: int, l: int) -> "GEPConfig":
        return cls(base, (k,) * base.n, l)

    def is_uniform(self) -> bool:
        return len(set(self.k)) == 1


def gep_states(k: Sequence[int], l: int) -> list[tuple]:
    """All occupancy vectors with ``0 <= pi[v] <= k[v]`` summing to ``l``, lexicographic."""
    out = []

    def rec(prefix, v, left):
        if v == len(k):
            if left == 0:
                out.append(tuple(prefix))
            return
        rest = sum(k[v + 1:])
        for c in range(max(0, left - rest), min(k[v], left) + 1):
            prefix.append(c)
            rec(prefix, v + 1, left - c)
            prefix.pop()

    rec([], 0, l)
    return out


def normal_rate(cfg: GEPConfig) -> Callable:
    k = cfg.k
    return lambda pi, u, w: pi[u] * (k[w] - pi[w])


def gep_graph(cfg: GEPConfig, mu: Callable | None = None, cap: int = STATE_CAP) -> WeightedDigraph:
    """GEP with rate ``mu(pi, u, w) * r(u, w)`` for the move ``u -> w``.

    ``mu`` defaults to the normal rate ``pi(u) (k_w - pi(w))``.  Moves that
    reach the same state add up.
    """
    states = gep_states(cfg.k, cfg.l)
    if len(states) > cap:
        raise CapExceededError(f"{len(states)} GEP states exceed the cap {cap}")
    if len(states) < 2:
        raise InvalidInputError("GEP has a single state")
    mu = normal_rate(cfg) if mu is None else mu
    index = {s: i for i, s in enumerate(states)}
    r = cfg.base.r
    n = cfg.base.n
    rates = np.zeros((len(states), len(states)))
    for pi in states:
        i = index[pi]
        for u in range(n):
            if pi[u] == 0:
                continue
            for w in range(n):
                if w == u or pi[w] >= cfg.k[w] or r[u, w] == 0:
                    continue
                target = list(pi)
                target[u] -= 1
                target[w] += 1
                rates[i, index[tuple(target)]] += mu(pi, u, w) * r[u, w]
    return WeightedDigraph(tuple(states), rates)


# -------------------------------------------------------------- extended graph

@dataclass(frozen=True, eq=False)
class ExtendedGraph:
    """Each vertex ``v`` blown up into ``k_v`` copies ``(v, m)``.

    ``phi_V[a]`` is the base-vertex index of extended vertex ``a``; extended
    vertices are enumerated block by block, which fixes the bijection with
    the particle positions ``0..N-1``.
    """

    graph: BaseGraph
    phi_V: tuple
    k: tuple

    @property
    def N(self) -> int:
        return self.graph.n

    def block(self, v: int) -> tuple:
        return tuple(a for a, b in enumerate(self.phi_V) if b == v)

    def blocks(self) -> list[tuple]:
        return [self.block(v) for v in range(len(self.k))]


def extended_graph(X: BaseGraph, k: Sequence[int]) -> ExtendedGraph:
    """Between blocks the rate is ``r(u, w)``; inside block ``u`` it is ``sum_v r(u, v)``."""
    k = tuple(int(a) for a in k)
    if len(k) != X.n or any(a < 1 for a in k):
        raise InvalidInputError("need one occupancy >= 1 per vertex")
    phi = tuple(v for v in range(X.n) for _ in range(k[v]))
    labels = tuple((X.vertices[v], m) for v in range(X.n) for m in range(k[v]))
    out = X.r.sum(axis=1)
    p = np.array(phi)
    rt = np.where(p[:, None] == p[None, :], out[p][:, None], X.r[np.ix_(p, p)])
    np.fill_diagonal(rt, 0.0)
    return ExtendedGraph(BaseGraph(labels, rt), phi, k)


def gep_quotient_subgroups(eg: ExtendedGraph, l: int) -> tuple[SubgroupSpec, SubgroupSpec]:
    """``(prod_v H^v, H_l H_{l,N})``.

    The left factor permutes positions inside each block; the right factor
    permutes the labels ``0..l-1`` among themselves and ``l..N-1`` among
    themselves.
    """
    N = eg.N
    if not 1 <= l < N:
        raise InvalidInputError(f"particle count l={l} must satisfy 1 <= l < {N}")
    return block_subgroup(eg), young_subgroup(N, l)


def block_subgroup(eg: ExtendedGraph) -> SubgroupSpec:
    """``prod_v H^v``: permutations of each block of extended vertices."""
    N = eg.N
    gens = [transposition(N, a, b) for blk in eg.blocks() for a, b in zip(blk, blk[1:])]
    return subgroup_closure(N, gens)


def young_subgroup(N: int, l: int) -> SubgroupSpec:
    """``H_l H_{l,N}``: permutations of ``{0..l-1}`` times permutations of ``{l..N-1}``."""
    gens = [transposition(N, a, a + 1) for a in range(l - 1)]
    gens += [transposition(N, a, a + 1) for a in range(l, N - 1)]
    return subgroup_closure(N, gens)


def prefix_subgroup(N: int, m: int) -> SubgroupSpec:
    """``H_m``: permutations of ``{0..m-1}``; ``H_{N-1}`` is the stabiliser of ``N-1``."""
    return full_symmetric_subgroup(N, range(m))


def suffix_subgroup(N: int, m: int) -> SubgroupSpec:
    """``H_{m,N}``: permutations of ``{m..N-1}``."""
    return full_symmetric_subgroup(N, range(m, N))


def gep_map(eg: ExtendedGraph, l: int, x: Permutation) -> tuple:
    """Occupancy of each base vertex for the IP state ``x``: labels below ``l`` are particles."""
    counts = [0] * len(eg.k)
    for label in range(l):
        counts[eg.phi_V[x[label]]] += 1
    return tuple(counts)


def gep_quotient(cfg: GEPConfig) -> tuple[ExtendedGraph, WeightedGroup, QuotientResult]:
    """``prod_v H^v \\ IP(X~) / H_l H_{l,N}`` for the configuration."""
    eg = extended_graph(cfg.base, cfg.k)
    G = interchange_group(eg.graph)
    H, Hp = gep_quotient_subgroups(eg, cfg.l)
    return eg, G, quotient_graph(G, H, Hp)


def gep_quotient_iso_check(cfg: GEPConfig) -> bool:
    """Whether the occupancy map is a rate-preserving bijection from the quotient to the GEP."""
    eg, G, q = gep_quotient(cfg)
    direct = gep_graph(cfg)
    idx = np.array([direct.index(gep_map(eg, cfg.l, rep)) for rep in q.partition.reps])
    if q.graph.n != direct.n or len(np.unique(idx)) != direct.n:
        return False
    return check_morphism(q.graph, direct, idx)


def krw_map(eg: ExtendedGraph, x: Permutation) -> int:
    """Base vertex holding the last label."""
    return eg.phi_V[x[-1]]


def krw_quotient_iso_check(X: BaseGraph, k: int) -> bool:
    """``prod_v H^v \\ IP(X~) / H_{N-1}`` against the random walk with rates ``k r``."""
    eg = extended_graph(X, (k,) * X.n)
    G = interchange_group(eg.graph)
    q = quotient_graph(G, block_subgroup(eg), prefix_subgroup(eg.N, eg.N - 1))
    rw = random_walk(X, k)
    idx = np.array([krw_map(eg, rep) for rep in q.partition.reps])
    if q.graph.n != rw.n or len(np.unique(idx)) != rw.n:
        return False
    return check_morphism(q.graph, rw, idx)


# -------------------------------------------------------------- block shuffle

@dataclass(frozen=True)
class BlockShuffleSpec:
    """Weights ``alpha`` on vertex subsets (as frozensets of vertex indices)."""

    n: int
    alpha: Mapping

    def __post_init__(self):
        clean = {}
        for A, w in dict(self.alpha).items():
            A = frozenset(int(a) for a in A)
            if len(A) < 2 or not all(0 <= a < self.n for a in A):
                raise InvalidInputError(f"block {sorted(A)} must hold >= 2 valid vertices")
            w = float(w)
            if not np.isfinite(w) or w < 0:
                raise InvalidInputError("block weights must be finite and >= 0")
            if w > 0:
                clean[A] = w
        object.__setattr__(self, "alpha", clean)

    def containing_weight(self, moved: frozenset) -> float:
        return float(sum(w for A, w in self.alpha.items() if moved <= A))


def block_shuffle_group(spec: BlockShuffleSpec) -> WeightedGroup:
    """``C_G(g)`` is the total weight of blocks containing every point ``g`` moves."""
    n = spec.n
    weights = {}
    for g in itertools.permutations(range(n)):
        moved = frozenset(i for i in range(n) if g[i] != i)
        if moved:
            w = spec.containing_weight(moved)
            if w > 0:
                weights[g] = w
    return WeightedGroup(n, weights)


def block_shuffle_graph(spec: BlockShuffleSpec, cap: int = STATE_CAP) -> WeightedDigraph:
    """Block shuffle built directly on assignments ``eta[v] = label``."""
    n = spec.n
    if math.factorial(n) > cap:
        raise CapExceededError(f"{n}! states exceed the cap {cap}")
    states = list(itertools.permutations(range(n)))
    rates = np.zeros((len(states), len(states)))
    for i, eta in enumerate(states):
        for j, eta2 in enumerate(states):
            if i != j:
                moved = frozenset(v for v in range(n) if eta[v] != eta2[v])
                rates[i, j] = spec.containing_weight(moved)
    return WeightedDigraph(tuple(states), rates)


def block_shuffle_from_pairs(X: BaseGraph) -> BlockShuffleSpec:
    return BlockShuffleSpec(X.n, {frozenset((i, j)): X.r[i, j]
                                  for i in range(X.n) for j in range(i + 1, X.n) if X.r[i, j] > 0})


def extended_block_alpha(X: BaseGraph, k: Sequence[int], M: float) -> BlockShuffleSpec:
    """Block weights on the extended graph for the generalised GEP construction.

    A block ``S_j`` together with one vertex of another block ``S_i`` gets
    ``r(v_i, v_j)``; a whole block ``S_i`` (when it has >= 2 vertices) gets ``M``.
    """
    if M <= 0:
        raise InvalidInputError("M must be positive")
    eg = extended_graph(X, k)
    blocks = eg.blocks()
    alpha: dict = {}
    for j, Sj in enumerate(blocks):
        for i, Si in enumerate(blocks):
            if i == j or X.r[i, j] == 0:
                continue
            for a in Si:
                alpha[frozenset(Sj) | {a}] = X.r[i, j]
    for Si in blocks:
        if len(Si) >= 2:
            alpha[frozenset(Si)] = M
    return BlockShuffleSpec(eg.N, alpha)


def graphs_isomorphic_under(g1: WeightedDigraph, g2: WeightedDigraph, mapping: Sequence[int]) -> bool:
    """``mapping`` (indices of g2 per state of g1) is a bijection preserving every rate."""
    idx = np.asarray(mapping, dtype=np.intp)
    if g1.n != g2.n or len(np.unique(idx)) != g1.n:
        return False
    return bool(np.allclose(g1.rates, g2.rates[np.ix_(idx, idx)], rtol=RTOL, atol=ATOL))
