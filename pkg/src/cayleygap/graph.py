"""Weighted complete directed graphs and their Laplacian-type generators.

A graph is a finite, ordered list of states together with a nonnegative
rate matrix ``C`` with zero diagonal.  The generator acts on real functions
of the states as

    (L f)(x) = sum_y C(x, y) (f(y) - f(x)).

Everything here is dense; the instances of interest have at most a few
thousand states.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import (
    CapExceededError,
    InvalidInputError,
    NotIrreducibleError,
    NotReversibleError,
    NumericalError,
)

#: default cap on the number of states handed to the eigensolver
STATE_CAP = 10_000

RTOL = 1e-9
ATOL = 1e-12
ZERO_EIG_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class WeightedDigraph:
    """Finite state set with a nonnegative rate matrix.

    Parameters
    ----------
    labels : tuple
        State labels, unique and hashable. Their order fixes the order of
        every vector and matrix associated with the graph.
    rates : ndarray (n, n)
        ``rates[i, j]`` is the jump rate from ``labels[i]`` to ``labels[j]``.
    """

    labels: tuple
    rates: np.ndarray
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        labels = tuple(self.labels)
        rates = np.array(self.rates, dtype=float)
        n = len(labels)
        if n < 2:
            raise InvalidInputError("a graph needs at least 2 states")
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != n:
            raise InvalidInputError("state labels must be unique")
        if rates.shape != (n, n):
            raise InvalidInputError(f"rate matrix must be {n}x{n}, got {rates.shape}")
        if not np.all(np.isfinite(rates)):
            raise InvalidInputError("rates must be finite")
        if np.any(rates < 0):
            raise InvalidInputError("rates must be nonnegative")
        if np.any(np.diag(rates) != 0):
            raise InvalidInputError("diagonal rates must be zero")
        rates.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "rates", rates)
        object.__setattr__(self, "_index", index)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InvalidInputError(f"unknown state {label!r}") from None

    def rate(self, x: Hashable, y: Hashable) -> float:
        return float(self.rates[self.index(x), self.index(y)])

    def generator_matrix(self) -> np.ndarray:
        """Matrix of L, i.e. ``C - diag(row sums)``."""
        return self.rates - np.diag(self.rates.sum(axis=1))

    def is_symmetric(self) -> bool:
        return bool(np.allclose(self.rates, self.rates.T, rtol=RTOL, atol=ATOL))


@dataclass(frozen=True)
class SpectralReport:
    """Sorted spectrum of ``-L`` with its stationary measure.

    ``vectors`` holds eigenfunctions (columns, same order as ``spectrum``)
    when they were requested, normalised to unit ``mu``-norm.
    """

    spectrum: np.ndarray
    gap: float
    measure: np.ndarray
    vectors: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.spectrum)


def build_graph(labels: Sequence[Hashable], entries: Iterable[tuple]) -> WeightedDigraph:
    """Graph from a label list and sparse ``(x, y, rate)`` entries.

    Unmentioned pairs get rate zero.
    """
    labels = tuple(labels)
    if len(labels) < 2:
        raise InvalidInputError("a graph needs at least 2 states")
    index = {lab: i for i, lab in enumerate(labels)}
    if len(index) != len(labels):
        raise InvalidInputError("duplicate state label")
    rates = np.zeros((len(labels), len(labels)))
    seen = set()
    for x, y, r in entries:
        if x not in index or y not in index:
            raise InvalidInputError(f"entry ({x!r}, {y!r}) refers to an unknown state")
        if x == y:
            raise InvalidInputError(f"self-loop entry at {x!r}")
        if (x, y) in seen:
            raise InvalidInputError(f"pair ({x!r}, {y!r}) given twice")
        r = float(r)
        if not np.isfinite(r) or r < 0:
            raise InvalidInputError(f"rate {r} for ({x!r}, {y!r}) must be finite and >= 0")
        seen.add((x, y))
        rates[index[x], index[y]] = r
    return WeightedDigraph(labels, rates)


def _as_vector(g: WeightedDigraph, f, name="f") -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (g.n,):
        raise InvalidInputError(f"{name} has shape {f.shape}, expected ({g.n},)")
    return f


def apply_generator(g: WeightedDigraph, f) -> np.ndarray:
    """Evaluate ``L f`` for a function given as a vector over ``g.labels``."""
    f = _as_vector(g, f)
    return g.rates @ f - g.rates.sum(axis=1) * f


def is_irreducible(g: WeightedDigraph) -> bool:
    """Strong connectivity of the positive-rate digraph."""
    ncomp, _ = connected_components(g.rates > 0, directed=True, connection="strong")
    return ncomp == 1


def reversible_measure(g: WeightedDigraph) -> np.ndarray | None:
    """Normalised detailed-balance measure, or ``None`` if there is none.

    The measure satisfies ``mu(x) C(x, y) = mu(y) C(y, x)``.  It is built
    along a BFS spanning tree of the positive-rate graph; every remaining
    pair is then checked, which amounts to Kolmogorov's cycle criterion.
    """
    if not is_irreducible(g):
        raise NotIrreducibleError("reversible_measure needs an irreducible graph")
    C = g.rates
    if np.any((C > 0) != (C.T > 0)):
        return None
    n = g.n
    # log-potentials keep long BFS chains from under/overflowing
    logmu = np.full(n, np.nan)
    logmu[0] = 0.0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in np.flatnonzero(C[x] > 0):
            if np.isnan(logmu[y]):
                logmu[y] = logmu[x] + np.log(C[x, y]) - np.log(C[y, x])
                queue.append(y)
    mu = np.exp(logmu - logmu.max())
    mu /= mu.sum()
    flux = mu[:, None] * C
    if not np.allclose(flux, flux.T, rtol=RTOL, atol=ATOL * float(flux.max())):
        return None
    return mu


def detailed_balance_residual(g: WeightedDigraph, mu) -> float:
    """Largest ``|mu(x) C(x,y) - mu(y) C(y,x)|`` relative to ``max(1, flux)``."""
    mu = _as_vector(g, mu, "mu")
    flux = mu[:, None] * g.rates
    return float(np.max(np.abs(flux - flux.T) / np.maximum(1.0, flux.T)))


def spectral_gap(g: WeightedDigraph, *, vectors: bool = False, cap: int = STATE_CAP) -> SpectralReport:
    """Full spectrum of ``-L`` for an irreducible reversible graph.

    ``-L`` is conjugated by ``diag(sqrt(mu))`` into a symmetric matrix and
    handed to a symmetric eigensolver.
    """
    if g.n > cap:
        raise CapExceededError(f"{g.n} states exceed the eigendecomposition cap {cap}")
    if not is_irreducible(g):
        raise NotIrreducibleError("spectral gap needs an irreducible graph")
    mu = reversible_measure(g)
    if mu is None:
        raise NotReversibleError("spectral gap needs a reversible graph")
    A = -g.generator_matrix()
    s = np.sqrt(mu)
    S = s[:, None] * A / s[None, :]
    S = 0.5 * (S + S.T)
    if vectors:
        evals, evecs = np.linalg.eigh(S)
        # back to eigenfunctions of -L, unit norm in L^2(mu)
        evecs = evecs / s[:, None]
    else:
        evals = np.linalg.eigvalsh(S)
        evecs = None
    if abs(evals[0]) > ZERO_EIG_TOL:
        raise NumericalError(f"lowest eigenvalue {evals[0]:.3e} is not zero")
    evals = evals.copy()
    evals[0] = 0.0
    return SpectralReport(spectrum=evals, gap=float(evals[1]), measure=mu, vectors=evecs)


def inner(f, g, mu) -> float:
    """``<f, g>_mu``."""
    return float(np.sum(np.asarray(mu) * np.asarray(f) * np.asarray(g)))


def rayleigh_quotient(g: WeightedDigraph, f, mu, *, tol: float = 1e-9) -> float:
    """``-<f, L f>_mu / <f, f>_mu`` for ``f`` orthogonal to constants."""
    f = _as_vector(g, f)
    mu = _as_vector(g, mu, "mu")
    norm2 = inner(f, f, mu)
    if norm2 <= 0:
        raise InvalidInputError("f must be nonzero")
    if abs(inner(f, np.ones_like(f), mu)) > tol * np.sqrt(norm2):
        raise InvalidInputError("f must have zero mean under mu")
    return -inner(f, apply_generator(g, f), mu) / norm2


def _phi_indices(g1: WeightedDigraph, g2: WeightedDigraph, phi) -> np.ndarray:
    if isinstance(phi, Mapping):
        return np.array([g2.index(phi[x]) for x in g1.labels], dtype=np.intp)
    phi = np.asarray(phi)
    if phi.shape == (g1.n,) and np.issubdtype(phi.dtype, np.integer):
        if phi.min() < 0 or phi.max() >= g2.n:
            raise InvalidInputError("state map points outside the target graph")
        return phi.astype(np.intp)
    raise InvalidInputError("phi must be a mapping of labels or an index array")


def check_morphism(g1: WeightedDigraph, g2: WeightedDigraph, phi) -> bool:
    """Whether ``phi`` intertwines the two generators.

    Equivalent to ``C2(phi(x), y) = sum over y' in phi^-1(y) of C1(x, y')``
    for all ``x`` and all ``y != phi(x)``.  ``phi`` is either a mapping from
    labels of ``g1`` to labels of ``g2`` or an integer index array.
    """
    idx = _phi_indices(g1, g2, phi)
    lumped = np.zeros((g1.n, g2.n))
    # column-lumping: lumped[x, j] = sum of C1[x, y'] over phi(y') = j
    np.add.at(lumped.T, idx, g1.rates.T)
    target = g2.rates[idx]
    mask = np.ones_like(target, dtype=bool)
    mask[np.arange(g1.n), idx] = False
    return bool(np.allclose(lumped[mask], target[mask], rtol=RTOL, atol=ATOL))


def is_surjective(g1: WeightedDigraph, g2: WeightedDigraph, phi) -> bool:
    idx = _phi_indices(g1, g2, phi)
    return len(np.unique(idx)) == g2.n


def spectrum_contained(inner_report, outer_report, tol: float = 1e-8) -> bool:
    """Whether one eigenvalue multiset embeds into another, up to ``tol``.

    Greedy matching on the two sorted lists.  Accepts reports or plain
    arrays.
    """
    a = np.sort(np.asarray(getattr(inner_report, "spectrum", inner_report), dtype=float))
    b = np.sort(np.asarray(getattr(outer_report, "spectrum", outer_report), dtype=float))
    j = 0
    for lam in a:
        while j < len(b) and b[j] < lam - tol:
            j += 1
        if j == len(b) or abs(b[j] - lam) > tol:
            return False
        j += 1
    return True


def relabel(g: WeightedDigraph, order: Sequence[int]) -> WeightedDigraph:
    """Same graph with states reordered so that new state i is old ``order[i]``."""
    order = np.asarray(order, dtype=np.intp)
    return WeightedDigraph(tuple(g.labels[i] for i in order), g.rates[np.ix_(order, order)])
