import itertools
import math

import numpy as np
import pytest

from cayleygap.errors import CapExceededError, InvalidInputError, NotIrreducibleError
from cayleygap.graph import check_morphism, is_irreducible, reversible_measure, spectral_gap
from cayleygap.perm import (
    WeightedGroup,
    as_permutation,
    cayley_graph,
    compose,
    conjugate,
    cycle,
    generated_order,
    group_is_irreducible,
    group_is_reversible,
    identity,
    inverse,
    subgroup_closure,
    support,
    symmetric_group,
    transposition,
    weighted_group_morphism_ok,
)

import oracles


def t(n, i, j):
    return transposition(n, i, j)


# -- products and inverses

@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_compose_matches_oracle_exhaustively(n):
    P = list(itertools.permutations(range(n)))
    for g in P:
        for h in P:
            assert compose(g, h) == oracles.perm_product(g, h)


def test_compose_examples():
    assert compose(identity(3), (1, 2, 0)) == (1, 2, 0)
    assert compose(t(2, 0, 1), t(2, 0, 1)) == identity(2)
    # (0 1) after (1 2): 0->0->1, 1->2->2, 2->1->0
    assert compose(t(3, 0, 1), t(3, 1, 2)) == (1, 2, 0) == oracles.perm_product((1, 0, 2), (0, 2, 1))
    assert compose(t(3, 0, 1), t(3, 1, 2)) == cycle(3, 0, 1, 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_inverse_exhaustive(n):
    for g in itertools.permutations(range(n)):
        assert inverse(g) == oracles.perm_inverse(g)
        assert compose(g, inverse(g)) == identity(n)


def test_inverse_examples():
    assert inverse(identity(4)) == identity(4)
    assert inverse(t(4, 1, 3)) == t(4, 1, 3)
    c = cycle(3, 0, 1, 2)
    assert inverse(c) == cycle(3, 0, 2, 1)


def test_conjugate_and_support():
    h = t(3, 0, 2)
    g = t(3, 0, 1)
    assert conjugate(h, g) == t(3, 1, 2)
    assert support(g) == frozenset({0, 1})


@pytest.mark.parametrize("bad", [(0, 0), (1, 2), (0, 2, 2)])
def test_as_permutation_rejects(bad):
    with pytest.raises(InvalidInputError):
        as_permutation(bad)


def test_compose_degree_mismatch():
    with pytest.raises(InvalidInputError):
        compose((0, 1), (0, 1, 2))


# -- symmetric group table

def test_symmetric_group_lex_and_rank():
    sg = symmetric_group(4)
    assert sg.labels() == tuple(itertools.permutations(range(4)))
    for i, g in enumerate(sg.labels()):
        assert sg.index(g) == i
    g = (2, 0, 3, 1)
    lm = sg.left_map(g)
    rm = sg.right_map(g)
    for i, x in enumerate(sg.labels()):
        assert sg.element(lm[i]) == compose(g, x)
        assert sg.element(rm[i]) == compose(x, g)
        assert sg.element(sg.inverse_map()[i]) == inverse(x)


# -- closure

def test_closure_examples():
    assert subgroup_closure(4).elements == (identity(4),)
    adj = [t(4, i, i + 1) for i in range(3)]
    S4 = subgroup_closure(4, adj)
    assert S4.order == 24 == len(oracles.group_generated(4, adj))
    assert subgroup_closure(4, [t(4, 0, 2)]).order == 2


@pytest.mark.parametrize("gens", [
    [(1, 2, 0, 3)],
    [(1, 0, 2, 3), (0, 1, 3, 2)],
    [(1, 2, 3, 0)],
    [(1, 0, 2, 3), (1, 2, 3, 0)],
    [(0, 2, 1, 3), (2, 1, 0, 3)],
])
def test_closure_matches_oracle(gens):
    H = subgroup_closure(4, gens)
    assert set(H.elements) == oracles.group_generated(4, gens)
    assert generated_order(4, gens) == H.order


def test_closure_cap():
    with pytest.raises(CapExceededError):
        subgroup_closure(4, [t(4, i, i + 1) for i in range(3)], cap=10)


# -- weighted groups

def test_irreducible_examples():
    all_t = {t(3, 0, 1): 1, t(3, 1, 2): 1, t(3, 0, 2): 1}
    assert group_is_irreducible(WeightedGroup(3, all_t))
    assert not group_is_irreducible(WeightedGroup(3, {t(3, 0, 1): 1}))
    assert not group_is_irreducible(WeightedGroup(3, {}))
    assert len(oracles.group_generated(3, list(all_t))) == 6


def test_reversible_examples():
    assert group_is_reversible(WeightedGroup(3, {t(3, 0, 1): 1, t(3, 1, 2): 3}))
    c, ci = cycle(3, 0, 1, 2), cycle(3, 0, 2, 1)
    assert group_is_reversible(WeightedGroup(3, {c: 2, ci: 2, t(3, 0, 1): 1}))
    assert not group_is_reversible(WeightedGroup(3, {c: 2, ci: 1, t(3, 0, 1): 1}))
    with pytest.raises(NotIrreducibleError):
        group_is_reversible(WeightedGroup(3, {t(3, 0, 1): 1}))


def test_weighted_group_rejects_identity_weight():
    with pytest.raises(InvalidInputError):
        WeightedGroup(2, {(0, 1): 1.0})
    with pytest.raises(InvalidInputError):
        WeightedGroup(2, {(1, 0): -1.0})


def test_zero_weights_dropped():
    G = WeightedGroup(3, {t(3, 0, 1): 0.0, t(3, 1, 2): 1.0})
    assert G.support == (t(3, 1, 2),)


# -- Cayley graph

def test_cayley_two_elements():
    for c in (0.5, 1.0, 3.0):
        g = cayley_graph(WeightedGroup(2, {(1, 0): c}))
        np.testing.assert_allclose(g.rates, [[0, c], [c, 0]])
        assert spectral_gap(g).gap == pytest.approx(2 * c)


def test_cayley_s3_transpositions_matches_oracle():
    G = WeightedGroup(3, {t(3, 0, 1): 1, t(3, 1, 2): 1, t(3, 0, 2): 1})
    g = cayley_graph(G)
    P, C = oracles.cayley_rates(3, oracles.transposition_weight(np.ones((3, 3))))
    assert g.labels == tuple(P)
    np.testing.assert_allclose(g.rates, C)
    assert ((g.rates > 0).sum(axis=1) == 3).all()
    assert (g.rates.sum(axis=1) == 3).all()


def test_cayley_general_weights_match_oracle():
    rng = np.random.default_rng(3)
    P = list(itertools.permutations(range(4)))[1:]
    weights = {tuple(g): float(rng.integers(1, 5)) for g in rng.permutation(np.array(P))[:6].tolist()}
    G = WeightedGroup(4, weights)
    _, C = oracles.cayley_rates(4, lambda g: weights.get(g, 0.0))
    np.testing.assert_allclose(cayley_graph(G).rates, C)


def test_reversible_group_gives_symmetric_graph():
    c, ci = cycle(4, 0, 1, 2), cycle(4, 0, 2, 1)
    G = WeightedGroup(4, {c: 2, ci: 2, t(4, 2, 3): 1, t(4, 0, 3): 0.5})
    assert group_is_reversible(G)
    assert cayley_graph(G).is_symmetric()


def test_cayley_functor_on_a_morphism():
    # the sign map S_3 -> S_2 is a homomorphism; pushing weights along it gives a morphism
    def sign(g):
        inv = sum(1 for i in range(3) for j in range(i + 1, 3) if g[i] > g[j])
        return (1, 0) if inv % 2 else (0, 1)

    G1 = WeightedGroup(3, {t(3, 0, 1): 1, t(3, 1, 2): 2, t(3, 0, 2): 0.5})
    G2 = WeightedGroup(2, {(1, 0): 3.5})
    assert weighted_group_morphism_ok(G1, G2, sign)
    assert not weighted_group_morphism_ok(G1, WeightedGroup(2, {(1, 0): 2.0}), sign)
    # weight pushed onto the identity breaks the displayed condition
    G1e = WeightedGroup(3, {t(3, 0, 1): 1, cycle(3, 0, 1, 2): 0.5})
    assert not weighted_group_morphism_ok(G1e, WeightedGroup(2, {(1, 0): 1.0}), sign)

    g1, g2 = cayley_graph(G1), cayley_graph(G2)
    phi = [g2.index(sign(x)) for x in g1.labels]
    assert check_morphism(g1, g2, phi)


def test_factorial_sizes():
    for n in range(1, 6):
        assert symmetric_group(n).order == math.factorial(n)


def test_cayley_of_reversible_group_has_uniform_measure():
    G = WeightedGroup(4, {t(4, 0, 1): 1, t(4, 1, 2): 2, t(4, 2, 3): 0.5})
    g = cayley_graph(G)
    assert is_irreducible(g)
    np.testing.assert_allclose(reversible_measure(g), np.full(24, 1 / 24))


def test_compose_associative_exhaustive():
    P = list(itertools.permutations(range(3)))
    for a in P:
        for b in P:
            for c in P:
                assert compose(compose(a, b), c) == compose(a, compose(b, c))
    P4 = list(itertools.permutations(range(4)))
    for a in P4[::3]:
        for b in P4:
            for c in P4[::5]:
                assert compose(compose(a, b), c) == compose(a, compose(b, c))
