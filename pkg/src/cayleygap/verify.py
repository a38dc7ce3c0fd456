"""End-to-end numerical verification on concrete instances.

Each ``verify_*`` function builds the processes involved, runs the
structural checks (morphisms, regularity, proposition hypotheses) and
compares spectral gaps, returning a :class:`VerificationReport`.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .cosets import (
    check_left_action_hypotheses,
    check_right_action_hypotheses,
    is_regular_pair,
    nested_quotient_morphism,
    quotient_graph,
)
from .errors import CapExceededError, InvalidInputError
from .graph import STATE_CAP, SpectralReport, WeightedDigraph, check_morphism, spectral_gap, spectrum_contained
from .perm import SubgroupSpec, cayley_graph, trivial_subgroup
from .processes import (
    BaseGraph,
    GEPConfig,
    block_shuffle_group,
    block_subgroup,
    extended_block_alpha,
    extended_graph,
    gep_graph,
    gep_map,
    gep_quotient_iso_check,
    gep_states,
    interchange_group,
    krw_map,
    krw_quotient_iso_check,
    prefix_subgroup,
    random_base_graph,
    random_walk,
    young_subgroup,
)

DEFAULT_TOL = 1e-8
CONTAIN_TOL = 1e-7
#: largest extended-graph order for which full-group spectra are computed
MAX_GROUP_DEGREE = 7


@dataclass(frozen=True)
class Check:
    name: str
    lhs: float | bool
    rhs: float | bool
    tol: float
    passed: bool


def value_check(name: str, lhs: float, rhs: float, tol: float) -> Check:
    return Check(name, float(lhs), float(rhs), tol, bool(abs(lhs - rhs) < tol))


def le_check(name: str, lhs: float, rhs: float, tol: float) -> Check:
    """``lhs <= rhs + tol``."""
    return Check(name, float(lhs), float(rhs), tol, bool(lhs <= rhs + tol))


def flag_check(name: str, value: bool) -> Check:
    return Check(name, bool(value), True, 0.0, bool(value))


@dataclass
class VerificationReport:
    instance: str
    process: str
    state_count: int
    gap: float
    spectrum: np.ndarray
    checks: list[Check] = field(default_factory=list)
    seed: int | None = None
    elapsed_ms: float = 0.0
    label: str | None = None
    observations: list[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def overall_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def describe(X: BaseGraph) -> str:
    edges = ", ".join(f"{u}-{w}:{r:g}" for u, w, r in X.edges())
    return f"X(n={X.n}; {edges})"


def _gap(g: WeightedDigraph) -> SpectralReport:
    return spectral_gap(g)


# ------------------------------------------------------------------- Aldous

def verify_aldous(X: BaseGraph, H: SubgroupSpec | None = None, tol: float = DEFAULT_TOL,
                  seed: int | None = None) -> VerificationReport:
    """IP gap against the gap of its quotient by ``H`` (default ``H_{n-1}``).

    With the default subgroup the quotient is the random walk, so this is
    the equality of the IP and RW gaps.
    """
    t0 = time.perf_counter()
    n = X.n
    if math.factorial(n) > STATE_CAP:
        raise CapExceededError(f"{n}! IP states exceed the cap")
    Hn1 = prefix_subgroup(n, n - 1)
    default = H is None
    if default:
        H = Hn1
    elif not H.issubset(Hn1):
        raise InvalidInputError("H must be contained in H_{n-1}")
    G = interchange_group(X)
    ip = cayley_graph(G)
    q = quotient_graph(G, trivial_subgroup(n), H)
    rep_ip = _gap(ip)
    rep_q = _gap(q.graph)
    checks = [
        flag_check("projection is a morphism", check_morphism(ip, q.graph, q.projection)),
        value_check("gap(IP) = gap(IP/H)", rep_ip.gap, rep_q.gap, tol),
        flag_check("spectrum(IP/H) in spectrum(IP)", spectrum_contained(rep_q, rep_ip, CONTAIN_TOL)),
    ]
    if default:
        rw = random_walk(X)
        idx = np.array([rep[-1] for rep in q.partition.reps])
        checks.append(flag_check("IP/H_{n-1} isomorphic to RW",
                                 q.graph.n == rw.n and check_morphism(q.graph, rw, idx)))
        checks.append(value_check("gap(IP) = gap(RW)", rep_ip.gap, _gap(rw).gap, tol))
    return VerificationReport(
        instance=describe(X), process="ip", state_count=ip.n, gap=rep_ip.gap,
        spectrum=rep_ip.spectrum, checks=checks, seed=seed,
        elapsed_ms=1000 * (time.perf_counter() - t0))


# ------------------------------------------------------------- GEP = k * RW

def verify_gep_equals_k_rw(cfg: GEPConfig, *, sweep: bool = False, tol: float = DEFAULT_TOL,
                           seed: int | None = None) -> VerificationReport:
    """GEP gap against ``k`` times the RW gap, for uniform occupancy ``k``.

    With ``sweep`` every admissible particle count ``1..N-1`` is checked
    and the spread of the GEP gaps over ``l`` must be below ``tol``.
    """
    t0 = time.perf_counter()
    if not cfg.is_uniform():
        raise InvalidInputError("k * gap(RW) needs a uniform maximal occupancy")
    k = cfg.k[0]
    X = cfg.base
    rw_gap = _gap(random_walk(X)).gap
    ls = range(1, cfg.N) if sweep else [cfg.l]
    checks = []
    gaps = []
    main = None
    for l in ls:
        rep = _gap(gep_graph(GEPConfig(X, cfg.k, l)))
        gaps.append(rep.gap)
        if l == cfg.l:
            main = rep, len(gep_states(cfg.k, l))
        checks.append(value_check(f"gap(GEP, l={l}) = k*gap(RW)", rep.gap, k * rw_gap, tol))
    if sweep:
        checks.append(le_check("gap spread over l", max(gaps) - min(gaps), 0.0, tol))
    rep, count = main
    return VerificationReport(
        instance=f"{describe(X)}; k={k}; l={'all' if sweep else cfg.l}",
        process="gep", state_count=count, gap=rep.gap, spectrum=rep.spectrum,
        checks=checks, seed=seed, elapsed_ms=1000 * (time.perf_counter() - t0),
        extra={"rw_gap": rw_gap, "gaps_by_l": {int(l): g for l, g in zip(ls, gaps)}})


# ------------------------------------------------------ commutative diagram

def verify_commutative_diagram(cfg: GEPConfig, tol: float = DEFAULT_TOL,
                               seed: int | None = None) -> VerificationReport:
    """Walk the full chain of quotients linking the IP on ``X~`` to the GEP.

    Quotients of ``IP~ = Cayley(G)``, with ``Hv = prod_v H^v``:

    * ``P1 = IP~ / H_l``
    * ``P2 = Hv \\ IP~ / H_l``
    * ``Pbar = Hv \\ IP~ / H_{N-1}``
    * ``Pgep = Hv \\ IP~ / H_l H_{l,N}``
    * ``Pald = IP~ / H_{N-1}``
    """
    t0 = time.perf_counter()
    N = cfg.N
    if N > MAX_GROUP_DEGREE:
        raise CapExceededError(f"extended graph has N={N} > {MAX_GROUP_DEGREE} vertices")
    l = cfg.l
    eg = extended_graph(cfg.base, cfg.k)
    G = interchange_group(eg.graph)
    ip = cayley_graph(G)
    E = trivial_subgroup(N)
    Hv = block_subgroup(eg)
    Hl = prefix_subgroup(N, l)
    HN1 = prefix_subgroup(N, N - 1)
    Ha = young_subgroup(N, l)

    checks: list[Check] = []
    pairs = {
        "({1}, H_l)": (E, Hl),
        "({1}, H_{N-1})": (E, HN1),
        "(Hv, H_l)": (Hv, Hl),
        "(Hv, H_{N-1})": (Hv, HN1),
        "(Hv, H_l H_{l,N})": (Hv, Ha),
    }
    for name, (A, B) in pairs.items():
        checks.append(flag_check(f"regular {name}", is_regular_pair(G, A, B)))

    q1 = quotient_graph(G, E, Hl)
    q2 = quotient_graph(G, Hv, Hl)
    qbar = quotient_graph(G, Hv, HN1)
    qgep = quotient_graph(G, Hv, Ha)
    qald = quotient_graph(G, E, HN1)
    graphs = {"IP~": ip, "P1": q1.graph, "P2": q2.graph, "Pbar": qbar.graph,
              "Pgep": qgep.graph, "IP~/H_{N-1}": qald.graph}
    reports = {name: _gap(g) for name, g in graphs.items()}

    arrows = [
        ("IP~ -> P1", E, E, E, Hl),
        ("P1 -> P2", E, Hv, Hl, Hl),
        ("P2 -> Pgep", Hv, Hv, Hl, Ha),
        ("P2 -> Pbar", Hv, Hv, Hl, HN1),
        ("P1 -> IP~/H_{N-1}", E, E, Hl, HN1),
        ("IP~/H_{N-1} -> Pbar", E, Hv, HN1, HN1),
    ]
    for name, A1, A2, B1, B2 in arrows:
        src, dst = (part.strip() for part in name.split("->"))
        if A1 is E and B1 is E:
            ok = check_morphism(ip, graphs[dst], quotient_graph(G, A2, B2).projection)
        else:
            _, ok, _, _ = nested_quotient_morphism(G, A1, A2, B1, B2)
        checks.append(flag_check(f"morphism {name}", ok))
        checks.append(flag_check(f"spectrum({dst}) in spectrum({src})",
                                 spectrum_contained(reports[dst], reports[src], CONTAIN_TOL)))
        checks.append(le_check(f"gap({src}) <= gap({dst})", reports[src].gap, reports[dst].gap, tol))

    left = check_left_action_hypotheses(G, E, Hv, Hl)
    checks.append(flag_check("left action (1) equivariance", left.cond_equivariant))
    checks.append(flag_check("left action (2) large enough", left.cond_large_enough))
    checks.append(flag_check("left action: no class is the whole group", left.no_full_class))
    right = check_right_action_hypotheses(N, Hv, HN1, Ha)
    checks.append(flag_check("right action (1) intersection", right.cond_intersection))
    checks.append(flag_check("right action (2) generation", right.cond_generate))

    g_ip = reports["IP~"].gap
    for name in ("P1", "P2", "Pbar", "Pgep"):
        checks.append(value_check(f"gap({name}) = gap(IP~)", reports[name].gap, g_ip, tol))
    checks.append(value_check("gap(IP~/H_{N-1}) = gap(IP~)", reports["IP~/H_{N-1}"].gap, g_ip, tol))

    direct = gep_graph(cfg)
    rep_direct = _gap(direct)
    checks.append(flag_check("Pgep isomorphic to GEP", gep_quotient_iso_check(cfg)))
    checks.append(value_check("gap(Pgep) = gap(Pbar)", reports["Pgep"].gap, reports["Pbar"].gap, tol))
    checks.append(value_check("gap(GEP) = gap(Pbar)", rep_direct.gap, reports["Pbar"].gap, tol))
    if cfg.is_uniform():
        checks.append(flag_check("Pbar isomorphic to kRW", krw_quotient_iso_check(cfg.base, cfg.k[0])))

    return VerificationReport(
        instance=f"{describe(cfg.base)}; k={list(cfg.k)}; l={l}",
        process="gep", state_count=direct.n, gap=rep_direct.gap, spectrum=rep_direct.spectrum,
        checks=checks, seed=seed, elapsed_ms=1000 * (time.perf_counter() - t0),
        extra={"gaps": {name: r.gap for name, r in reports.items()},
               "state_counts": {name: g.n for name, g in graphs.items()},
               "left_action": {"equivariant_violations": left.equivariant_violations,
                               "large_enough_violations": left.large_enough_violations,
                               "min_escape_rate": left.min_escape_rate},
               "right_action": {"family_size": right.family_size,
                                "empty_family_convention": right.empty_family_convention}})


# --------------------------------------------------- block shuffle probe

def _graph_dict(g: WeightedDigraph, labels) -> dict:
    return {"states": [list(s) if isinstance(s, tuple) else s for s in labels],
            "rates": g.rates.tolist()}


def probe_block_shuffle_conjecture(X: BaseGraph, k: Sequence[int], l: int,
                                   M_values: Iterable[float] = (1.0, 10.0),
                                   tol: float = DEFAULT_TOL, seed: int | None = None) -> VerificationReport:
    """Observe the open block-shuffle generalisation on one instance.

    For each ``M`` the block shuffle on the extended graph is quotiented to
    ``Pgep = Hv \\ P / H_l H_{l,N}`` and ``Pbar = Hv \\ P / H_{N-1}``.  Gap
    agreement and independence of ``M`` are recorded as observations only;
    nothing here is asserted.
    """
    t0 = time.perf_counter()
    cfg = GEPConfig(X, tuple(k), l)
    N = cfg.N
    if N > MAX_GROUP_DEGREE:
        raise CapExceededError(f"extended graph has N={N} > {MAX_GROUP_DEGREE} vertices")
    eg = extended_graph(X, cfg.k)
    Hv = block_subgroup(eg)
    HN1 = prefix_subgroup(N, N - 1)
    Ha = young_subgroup(N, l)
    E = trivial_subgroup(N)
    M_values = [float(m) for m in M_values]
    if not M_values:
        raise InvalidInputError("need at least one value of M")

    observations: list[Check] = []
    quotients = []
    runs = []
    for M in M_values:
        G = block_shuffle_group(extended_block_alpha(X, cfg.k, M))
        full = cayley_graph(G)
        reg_gep = is_regular_pair(G, Hv, Ha)
        reg_bar = is_regular_pair(G, Hv, HN1)
        qgep = quotient_graph(G, Hv, Ha, check_regular=False)
        qbar = quotient_graph(G, Hv, HN1, check_regular=False)
        qald = quotient_graph(G, E, HN1)
        gaps = {"BS~": _gap(full).gap, "BS~/H_{N-1}": _gap(qald.graph).gap}
        for name, q, reg in (("Pgep", qgep, reg_gep), ("Pbar", qbar, reg_bar)):
            try:
                gaps[name] = _gap(q.graph).gap
            except Exception as exc:  # noqa: BLE001 - recorded, not raised
                gaps[name] = float("nan")
                observations.append(Check(f"M={M:g}: spectrum of {name} unavailable ({type(exc).__name__})",
                                          False, True, 0.0, False))
        observations += [
            flag_check(f"M={M:g}: (Hv, H_l H_l,N) regular", reg_gep),
            flag_check(f"M={M:g}: (Hv, H_N-1) regular", reg_bar),
            value_check(f"M={M:g}: gap(Pgep) = gap(Pbar)", gaps["Pgep"], gaps["Pbar"], tol),
            value_check(f"M={M:g}: gap(BS~/H_N-1) = gap(BS~)", gaps["BS~/H_{N-1}"], gaps["BS~"], tol),
        ]
        gep_labels = [gep_map(eg, l, rep) for rep in qgep.partition.reps]
        bar_labels = [X.vertices[krw_map(eg, rep)] for rep in qbar.partition.reps]
        quotients.append({"M": M, "name": "Pgep", "regular": reg_gep, "gap": gaps["Pgep"],
                          **_graph_dict(qgep.graph, gep_labels)})
        quotients.append({"M": M, "name": "Pbar", "regular": reg_bar, "gap": gaps["Pbar"],
                          **_graph_dict(qbar.graph, bar_labels)})
        runs.append((M, qgep.graph.rates, qbar.graph.rates, gaps))

    base = runs[0]
    for M, rg, rb, _ in runs[1:]:
        observations.append(flag_check(f"Pgep at M={M:g} equals Pgep at M={base[0]:g}",
                                       rg.shape == base[1].shape and np.allclose(rg, base[1])))
        observations.append(flag_check(f"Pbar at M={M:g} equals Pbar at M={base[0]:g}",
                                       rb.shape == base[2].shape and np.allclose(rb, base[2])))
    return VerificationReport(
        instance=f"{describe(X)}; k={list(cfg.k)}; l={l}; M={M_values}",
        process="bs", state_count=math.factorial(N), gap=base[3]["BS~"],
        spectrum=np.array([base[3]["BS~"]]), checks=[], seed=seed,
        elapsed_ms=1000 * (time.perf_counter() - t0), label="PROBE",
        observations=observations, extra={"quotients": quotients})


# --------------------------------------------------------------- sweeps

def run_parallel(fn: Callable, items: Sequence, jobs: int = 1) -> list:
    """``[fn(item) for item in items]``, optionally across processes; order is preserved."""
    if jobs <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def random_graphs(count: int, n_values: Sequence[int], seed: int) -> list[BaseGraph]:
    """``count`` complete graphs with rates in {0.5, 1, ..., 4}, sizes cycling through ``n_values``."""
    rng = np.random.default_rng(seed)
    return [random_base_graph(n_values[i % len(n_values)], rng) for i in range(count)]


def aldous_sweep(count: int = 20, n_values=(3, 4, 5), seed: int = 0,
                 tol: float = DEFAULT_TOL, jobs: int = 1) -> list[VerificationReport]:
    graphs = random_graphs(count, list(n_values), seed)
    reports = run_parallel(verify_aldous, graphs, jobs)
    for rep in reports:
        rep.seed = seed
    return reports


def _gep_sweep_item(args):
    X, k, tol = args
    return verify_gep_equals_k_rw(GEPConfig.uniform(X, k, 1), sweep=True, tol=tol)


def gep_sweep(n_values=(2, 3, 4), k_values=(1, 2, 3), rate_sets: int = 10, seed: int = 0,
              tol: float = DEFAULT_TOL, jobs: int = 1) -> list[VerificationReport]:
    rng = np.random.default_rng(seed)
    items = [(random_base_graph(n, rng), k, tol)
             for n in n_values for k in k_values for _ in range(rate_sets)]
    reports = run_parallel(_gep_sweep_item, items, jobs)
    for rep in reports:
        rep.seed = seed
    return reports
