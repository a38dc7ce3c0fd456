"""Double cosets ``H x H'`` and quotients of Cayley graphs.

For a weighted group ``G`` and subgroups ``H, H'`` of ``S_N``, the quotient
graph has the double cosets as states and rates

    Cbar([x], [y]) = sum over y' in [y] of C_G(y' x^-1).

This is only well defined when the pair is *regular*; all checks in this
module are exhaustive brute force over group elements.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InvalidInputError, NotRegularError
from .graph import ATOL, RTOL, STATE_CAP, WeightedDigraph, check_morphism
from .perm import (
    Permutation,
    SubgroupSpec,
    WeightedGroup,
    compose,
    generated_order,
    inverse,
    symmetric_group,
)


@functools.lru_cache(maxsize=4096)
def _left_map(n: int, g: Permutation) -> np.ndarray:
    return symmetric_group(n).left_map(g)


@functools.lru_cache(maxsize=4096)
def _right_map(n: int, g: Permutation) -> np.ndarray:
    return symmetric_group(n).right_map(g)


@dataclass(frozen=True, eq=False)
class DoubleCosetPartition:
    """Partition of ``S_N`` into the double cosets ``H x H'``.

    ``labels[i]`` is the class of the ``i``-th element of ``S_N`` in
    lexicographic order.  Classes are numbered by their representative,
    the lexicographically smallest member.
    """

    degree: int
    left: SubgroupSpec
    right: SubgroupSpec
    labels: np.ndarray
    rep_indices: np.ndarray

    @property
    def n_classes(self) -> int:
        return len(self.rep_indices)

    @property
    def reps(self) -> tuple:
        sg = symmetric_group(self.degree)
        return tuple(sg.element(i) for i in self.rep_indices)

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    @property
    def classes(self) -> list:
        sg = symmetric_group(self.degree)
        return [[sg.element(i) for i in np.flatnonzero(self.labels == c)] for c in range(self.n_classes)]

    def index_of(self, g: Permutation) -> int:
        return int(self.labels[symmetric_group(self.degree).index(g)])


@dataclass(frozen=True, eq=False)
class QuotientResult:
    """Quotient graph together with the projection from the Cayley graph.

    ``projection[i]`` is the quotient state of the ``i``-th permutation.
    """

    partition: DoubleCosetPartition
    graph: WeightedDigraph
    projection: np.ndarray


def _check_degrees(n: int, *subgroups: SubgroupSpec):
    for H in subgroups:
        if H.degree != n:
            raise InvalidInputError(f"subgroup of degree {H.degree} used with degree {n}")


def double_coset_partition(degree: int, H: SubgroupSpec, Hp: SubgroupSpec) -> DoubleCosetPartition:
    """Orbits of ``x -> h x h'`` found as connected components."""
    _check_degrees(degree, H, Hp)
    sg = symmetric_group(degree)
    rows, cols = [], []
    base = np.arange(sg.order)
    for h in H.generators:
        rows.append(base)
        cols.append(_left_map(degree, h))
    for h in Hp.generators:
        rows.append(base)
        cols.append(_right_map(degree, h))
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        adj = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(sg.order, sg.order))
        _, comp = connected_components(adj, directed=True, connection="weak")
    else:
        comp = base
    # number classes by their smallest member
    first = np.full(comp.max() + 1, sg.order)
    np.minimum.at(first, comp, base)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return DoubleCosetPartition(degree, H, Hp, relabel[comp], first[order])


def class_rate_matrix(G: WeightedGroup, partition: DoubleCosetPartition) -> np.ndarray:
    """``A[x, c] = sum over y in class c of C_G(y x^-1)`` for every ``x``."""
    n = G.degree
    sg = symmetric_group(n)
    A = np.zeros((sg.order, partition.n_classes))
    rows = np.arange(sg.order)
    for g, w in G.weights.items():
        np.add.at(A, (rows, partition.labels[_left_map(n, g)]), w)
    return A


def _rows_agree(a: np.ndarray, b: np.ndarray, mask: np.ndarray) -> bool:
    return bool(np.all(np.isclose(a, b, rtol=RTOL, atol=ATOL) | ~mask))


def _off_own_class(labels: np.ndarray, n_classes: int) -> np.ndarray:
    mask = np.ones((len(labels), n_classes), dtype=bool)
    mask[np.arange(len(labels)), labels] = False
    return mask


def regularity_violations(G: WeightedGroup, H: SubgroupSpec, Hp: SubgroupSpec,
                          partition: DoubleCosetPartition | None = None) -> int:
    """Number of ``(x, [y], h)`` triples breaking the regularity identity."""
    if partition is None:
        partition = double_coset_partition(G.degree, H, Hp)
    A = class_rate_matrix(G, partition)
    mask = _off_own_class(partition.labels, partition.n_classes)
    bad = 0
    for h in H.elements:
        # C_G(y' x^-1 h^-1) is the rate out of h x
        moved = A[_left_map(G.degree, h)]
        bad += int(np.count_nonzero(~np.isclose(A, moved, rtol=RTOL, atol=ATOL) & mask))
    return bad


def is_regular_pair(G: WeightedGroup, H: SubgroupSpec, Hp: SubgroupSpec) -> bool:
    _check_degrees(G.degree, H, Hp)
    return regularity_violations(G, H, Hp) == 0


def quotient_graph(G: WeightedGroup, H: SubgroupSpec, Hp: SubgroupSpec, *,
                   check_regular: bool = True) -> QuotientResult:
    """``H \\ Cayley(G) / H'`` with rates read off the class representatives.

    Raises :class:`NotRegularError` for a non-regular pair unless
    ``check_regular`` is false, in which case the representative rates are
    returned as they are.
    """
    _check_degrees(G.degree, H, Hp)
    partition = double_coset_partition(G.degree, H, Hp)
    if check_regular and regularity_violations(G, H, Hp, partition):
        raise NotRegularError("subgroup pair is not regular; the quotient is not well defined")
    if partition.n_classes < 2:
        raise InvalidInputError("quotient collapses to a single state")
    A = class_rate_matrix(G, partition)
    rates = A[partition.rep_indices].copy()
    np.fill_diagonal(rates, 0.0)
    graph = WeightedDigraph(partition.reps, rates)
    return QuotientResult(partition, graph, partition.labels.copy())


def representative_spread(G: WeightedGroup, partition: DoubleCosetPartition) -> float:
    """Largest deviation of any member's off-class rate row from its representative's."""
    A = class_rate_matrix(G, partition)
    mask = _off_own_class(partition.labels, partition.n_classes)
    ref = A[partition.rep_indices[partition.labels]]
    return float(np.max(np.abs(A - ref) * mask))


def _require_regular(G, H, Hp, what):
    if not is_regular_pair(G, H, Hp):
        raise NotRegularError(f"{what} is not a regular pair")


def nested_quotient_morphism(G: WeightedGroup, H1: SubgroupSpec, H2: SubgroupSpec,
                             H1p: SubgroupSpec, H2p: SubgroupSpec):
    """Natural map ``H1\\P/H1' -> H2\\P/H2'`` and whether it is a morphism.

    Returns ``(mapping, ok, q1, q2)`` where ``mapping`` sends each class
    representative of the finer quotient to the one of the coarser.
    """
    if not (H1.issubset(H2) and H1p.issubset(H2p)):
        raise InvalidInputError("nested quotient needs H1 <= H2 and H1' <= H2'")
    _require_regular(G, H1, H1p, "(H1, H1')")
    _require_regular(G, H2, H2p, "(H2, H2')")
    q1 = quotient_graph(G, H1, H1p, check_regular=False)
    q2 = quotient_graph(G, H2, H2p, check_regular=False)
    idx = q2.projection[q1.partition.rep_indices]
    mapping = {q1.graph.labels[i]: q2.graph.labels[j] for i, j in enumerate(idx)}
    return mapping, check_morphism(q1.graph, q2.graph, idx), q1, q2


def conjugate_quotient_isomorphic(G: WeightedGroup, H1: SubgroupSpec, H2: SubgroupSpec,
                                  h0: Permutation) -> bool:
    """Whether ``[x] -> [x h0^-1]'`` is a rate-preserving bijection onto ``H1\\P/h0 H2 h0^-1``."""
    _require_regular(G, H1, H2, "(H1, H2)")
    H2c = H2.conjugate(h0)
    q = quotient_graph(G, H1, H2, check_regular=False)
    # regularity of the conjugated pair is a consequence, but check it anyway
    qc = quotient_graph(G, H1, H2c, check_regular=True)
    if q.graph.n != qc.graph.n:
        return False
    h0inv = inverse(h0)
    idx = np.array([qc.partition.index_of(compose(x, h0inv)) for x in q.partition.reps])
    if len(np.unique(idx)) != q.graph.n:
        return False
    back = np.empty_like(idx)
    back[idx] = np.arange(len(idx))
    return check_morphism(q.graph, qc.graph, idx) and check_morphism(qc.graph, q.graph, back)


@dataclass(frozen=True)
class LeftActionCheck:
    """Outcome of the hypotheses for the left-action gap equality.

    The ``*_violations`` counts record how many quantified cases failed.
    """

    cond_equivariant: bool
    cond_large_enough: bool
    no_full_class: bool
    equivariant_violations: int = 0
    large_enough_violations: int = 0
    min_escape_rate: float = 0.0

    @property
    def all_hold(self) -> bool:
        return self.cond_equivariant and self.cond_large_enough and self.no_full_class


def check_left_action_hypotheses(G: WeightedGroup, H1: SubgroupSpec, H2: SubgroupSpec,
                                 Hp: SubgroupSpec) -> LeftActionCheck:
    """Evaluate both conditions of the left-action proposition as stated.

    With ``[x]_i = H_i x H'``:

    1. for all ``x, y`` and ``h2`` in ``H2`` with ``y, h2 y`` outside
       ``[x]_1``: the rate from ``x`` into ``[y]_1`` equals the rate into
       ``[h2 y]_1``;
    2. for all ``x`` and ``h2`` with ``h2 x`` outside ``[x]_1``:
       ``#(H1 \\ [x]_2) * rate(x -> [h2 x]_1) >= min_z rate(z -> outside [z]_2)``;

    plus the standing assumption that no ``H2 x H'`` is the whole group.
    """
    n = G.degree
    _check_degrees(n, H1, H2, Hp)
    if not H1.issubset(H2):
        raise InvalidInputError("left-action check needs H1 <= H2")
    _require_regular(G, H1, Hp, "(H1, H')")
    _require_regular(G, H2, Hp, "(H2, H')")
    p1 = double_coset_partition(n, H1, Hp)
    p2 = double_coset_partition(n, H2, Hp)
    order = math.factorial(n)
    no_full = bool(np.all(p2.sizes < order))

    A1 = class_rate_matrix(G, p1)
    A2 = class_rate_matrix(G, p2)
    rows = np.arange(order)
    escape = G.total_weight - A2[rows, p2.labels]
    min_escape = float(escape.min())

    # number of [.]_1 classes inside each [.]_2 class
    pairs = np.unique(np.stack([p2.labels, p1.labels]), axis=1)
    n_sub = np.bincount(pairs[0], minlength=p2.n_classes)[p2.labels]

    own1 = p1.labels
    viol1 = viol2 = 0
    for h in H2.elements:
        lmap = _left_map(n, h)
        # [h y]_1 need not be a function of [y]_1, so pair up classes over all y
        pairs1 = np.unique(np.stack([p1.labels, p1.labels[lmap]]), axis=1)
        c, ch = pairs1
        mask = (c[None, :] != own1[:, None]) & (ch[None, :] != own1[:, None])
        viol1 += int(np.count_nonzero(~np.isclose(A1[:, c], A1[:, ch], rtol=RTOL, atol=ATOL) & mask))

        target = p1.labels[lmap]
        active = target != own1
        lhs = n_sub * A1[rows, target]
        viol2 += int(np.count_nonzero(active & (lhs < min_escape - ATOL - RTOL * abs(min_escape))))
    return LeftActionCheck(viol1 == 0, viol2 == 0, no_full, viol1, viol2, min_escape)


@dataclass(frozen=True)
class RightActionCheck:
    cond_intersection: bool
    cond_generate: bool
    family_size: int
    empty_family_convention: bool = False

    @property
    def all_hold(self) -> bool:
        return self.cond_intersection and self.cond_generate


def conjugate_family(Hp: SubgroupSpec, Ha: SubgroupSpec) -> list[frozenset]:
    """Distinct conjugates ``h H' h^-1`` for ``h`` in ``H_a``, as element sets."""
    family: list[frozenset] = []
    for h in Ha.elements:
        conj = Hp.conjugate(h)
        members = frozenset(conj.elements)
        if members not in family:
            family.append(members)
    return family


def check_right_action_hypotheses(degree: int, H: SubgroupSpec, Hp: SubgroupSpec,
                                  Ha: SubgroupSpec, cap: int | None = None) -> RightActionCheck:
    """Evaluate both conditions of the right-action proposition.

    1. the intersection ``H_b`` of the family ``{h H' h^-1 : h in H_a}`` lies
       in ``H_a``;
    2. every member of the family together with the intersection of the
       other members generates ``S_N``.  When the family has a single
       member the empty intersection is taken to be the whole group.

    ``H`` (the left subgroup) does not enter either condition.
    """
    _check_degrees(degree, H, Hp, Ha)
    family = conjugate_family(Hp, Ha)
    Hb = frozenset.intersection(*family)
    ha = frozenset(Ha.elements)
    cond1 = Hb <= ha
    full = math.factorial(degree)
    kwargs = {} if cap is None else {"cap": cap}
    cond2 = True
    empty = len(family) == 1
    for i, alpha in enumerate(family):
        others = [f for j, f in enumerate(family) if j != i]
        if not others:
            continue  # <H_alpha, G> = G
        inter = frozenset.intersection(*others)
        gens = sorted(alpha) + sorted(inter)
        if generated_order(degree, gens, **kwargs) != full:
            cond2 = False
            break
    return RightActionCheck(cond1, cond2, len(family), empty)


def quotient_cap_ok(degree: int, cap: int = STATE_CAP) -> bool:
    return math.factorial(degree) <= cap
