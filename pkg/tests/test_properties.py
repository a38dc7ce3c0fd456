"""Property tests: invariants that must hold on every generated instance."""

import itertools
import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cayleygap.cosets import (
    check_right_action_hypotheses,
    double_coset_partition,
    is_regular_pair,
    quotient_graph,
    representative_spread,
)
from cayleygap.graph import (
    WeightedDigraph,
    apply_generator,
    check_morphism,
    detailed_balance_residual,
    is_irreducible,
    is_surjective,
    rayleigh_quotient,
    reversible_measure,
    spectral_gap,
    spectrum_contained,
)
from cayleygap.perm import (
    WeightedGroup,
    cayley_graph,
    compose,
    inverse,
    subgroup_closure,
    symmetric_group,
    trivial_subgroup,
)
from cayleygap.processes import (
    BaseGraph,
    GEPConfig,
    block_subgroup,
    extended_graph,
    gep_graph,
    interchange_group,
    prefix_subgroup,
    random_walk,
    young_subgroup,
)

import oracles

RATES = st.sampled_from([0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0])
SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def reversible_graphs(draw, max_n=6):
    """Irreducible reversible chains: symmetric conductances times a positive measure."""
    n = draw(st.integers(2, max_n))
    c = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            c[i, j] = c[j, i] = draw(st.sampled_from([0.0, 0.5, 1.0, 2.0, 3.0]))
    # a path keeps it connected
    for i in range(n - 1):
        if c[i, i + 1] == 0:
            c[i, i + 1] = c[i + 1, i] = 1.0
    mu = np.array(draw(st.lists(st.sampled_from([1.0, 2.0, 3.0, 5.0]), min_size=n, max_size=n)))
    return WeightedDigraph(tuple(range(n)), c / mu[:, None])


@st.composite
def base_graphs(draw, min_n=2, max_n=5):
    n = draw(st.integers(min_n, max_n))
    r = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            r[i, j] = r[j, i] = draw(st.one_of(st.just(0.0), RATES))
    for i in range(n - 1):
        if r[i, i + 1] == 0:
            r[i, i + 1] = r[i + 1, i] = 1.0
    return BaseGraph(tuple(f"v{i}" for i in range(n)), r)


def subgroups(n):
    perms = list(itertools.permutations(range(n)))
    return st.lists(st.sampled_from(perms), max_size=2).map(lambda gens: subgroup_closure(n, gens))


# -- graph_core

@SETTINGS
@given(reversible_graphs(), st.floats(-10, 10))
def test_generator_annihilates_constants(g, c):
    assert np.allclose(apply_generator(g, np.full(g.n, c)), 0, atol=1e-12)


@SETTINGS
@given(reversible_graphs())
def test_detailed_balance_residual(g):
    mu = reversible_measure(g)
    assert mu is not None
    assert abs(mu.sum() - 1) < 1e-12
    assert detailed_balance_residual(g, mu) < 1e-10


@SETTINGS
@given(reversible_graphs(), st.integers(0, 2**32 - 1))
def test_rayleigh_at_least_gap(g, seed):
    rep = spectral_gap(g)
    mu = rep.measure
    rng = np.random.default_rng(seed)
    F = rng.standard_normal((1000, g.n))
    F -= (F @ mu)[:, None]
    for f in F:
        assert rayleigh_quotient(g, f, mu) >= rep.gap - 1e-9


@SETTINGS
@given(reversible_graphs())
def test_spectrum_matches_general_solver(g):
    np.testing.assert_allclose(spectral_gap(g).spectrum, oracles.spectrum_of_rates(g.rates), atol=1e-8)


@SETTINGS
@given(reversible_graphs())
def test_spectrum_nonnegative_with_simple_zero(g):
    s = spectral_gap(g).spectrum
    assert abs(s[0]) < 1e-8
    assert s[1] > 1e-8


# -- perm_group

@SETTINGS
@given(st.integers(1, 6).flatmap(lambda n: st.tuples(*[st.permutations(range(n))] * 3)))
def test_group_axioms(gs):
    a, b, c = (tuple(x) for x in gs)
    n = len(a)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, inverse(a)) == tuple(range(n)) == compose(inverse(a), a)


@SETTINGS
@given(base_graphs(max_n=5))
def test_cayley_of_ip_is_irreducible_with_uniform_measure(X):
    g = cayley_graph(interchange_group(X))
    assert is_irreducible(g)
    assert g.is_symmetric()
    np.testing.assert_allclose(reversible_measure(g), 1 / math.factorial(X.n))


# -- coset_quotient

@SETTINGS
@given(st.integers(1, 5).flatmap(lambda n: st.tuples(st.just(n), subgroups(n), subgroups(n))))
def test_double_cosets_partition(args):
    n, H, Hp = args
    p = double_coset_partition(n, H, Hp)
    assert p.sizes.sum() == math.factorial(n)
    seen = set()
    for rep, cls in zip(p.reps, p.classes):
        cls = set(cls)
        assert not cls & seen
        seen |= cls
        assert rep == min(cls)
        for h in H.elements:
            for hp in Hp.elements:
                assert compose(compose(h, rep), hp) in cls
    assert len(seen) == math.factorial(n)


@SETTINGS
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(base_graphs(min_n=n, max_n=n), subgroups(n),
                                                     subgroups(n))))
def test_quotients_of_regular_pairs(args):
    X, H, Hp = args
    n = X.n
    G = interchange_group(X)
    p = double_coset_partition(n, H, Hp)
    if p.n_classes < 2:
        return
    regular = is_regular_pair(G, H, Hp)
    assert regular == oracles.is_regular(n, G.weight, H.elements, Hp.elements)
    if not regular:
        return
    assert representative_spread(G, p) < 1e-10
    q = quotient_graph(G, H, Hp)
    ip = cayley_graph(G)
    assert check_morphism(ip, q.graph, q.projection)
    assert is_surjective(ip, q.graph, q.projection)
    assert is_irreducible(q.graph)
    assert reversible_measure(q.graph) is not None
    r_ip, r_q = spectral_gap(ip), spectral_gap(q.graph)
    assert spectrum_contained(r_q, r_ip, 1e-7)
    assert r_ip.gap <= r_q.gap + 1e-8


@SETTINGS
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(st.just(n), subgroups(n), subgroups(n))))
def test_right_action_matches_sets(args):
    n, Hp, Ha = args
    res = check_right_action_hypotheses(n, trivial_subgroup(n), Hp, Ha)
    family = {frozenset(compose(compose(h, g), inverse(h)) for g in Hp.elements) for h in Ha.elements}
    Hb = frozenset.intersection(*family)
    assert res.family_size == len(family)
    assert res.cond_intersection == (Hb <= set(Ha.elements))


# -- processes

@SETTINGS
@given(base_graphs(max_n=4), st.integers(1, 3), st.data())
def test_gep_gap_is_k_times_rw(X, k, data):
    N = k * X.n
    l = data.draw(st.integers(1, N - 1))
    gep = spectral_gap(gep_graph(GEPConfig.uniform(X, k, l))).gap
    rw = spectral_gap(random_walk(X)).gap
    assert abs(gep - k * rw) < 1e-8


@SETTINGS
@given(base_graphs(max_n=3), st.data())
def test_extended_pairs_regular(X, data):
    k = tuple(data.draw(st.integers(1, 2)) for _ in range(X.n))
    eg = extended_graph(X, k)
    if eg.N > 5:
        return
    l = data.draw(st.integers(1, eg.N - 1))
    G = interchange_group(eg.graph)
    Hv = block_subgroup(eg)
    for Hp in (prefix_subgroup(eg.N, l), young_subgroup(eg.N, l), prefix_subgroup(eg.N, eg.N - 1)):
        assert is_regular_pair(G, Hv, Hp)


def test_symmetric_group_table_consistent():
    for n in range(1, 6):
        sg = symmetric_group(n)
        assert len(set(sg.labels())) == math.factorial(n)
        inv = sg.inverse_map()
        assert (inv[inv] == np.arange(sg.order)).all()
