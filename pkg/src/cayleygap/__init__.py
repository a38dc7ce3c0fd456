"""Spectral gaps of interacting particle systems via quotients of Cayley graphs.

The core objects are weighted complete directed graphs (:mod:`.graph`),
weighted groups over symmetric groups (:mod:`.perm`) and their double-coset
quotients (:mod:`.cosets`).  :mod:`.processes` builds the random walk,
interchange process, generalized exclusion process and block shuffle;
:mod:`.verify` checks the gap identities linking them.
"""

from .cosets import (
    DoubleCosetPartition,
    QuotientResult,
    check_left_action_hypotheses,
    check_right_action_hypotheses,
    conjugate_quotient_isomorphic,
    double_coset_partition,
    is_regular_pair,
    nested_quotient_morphism,
    quotient_graph,
)
from .errors import (
    CapExceededError,
    CayleyGapError,
    InvalidInputError,
    NotIrreducibleError,
    NotRegularError,
    NotReversibleError,
    NumericalError,
)
from .graph import (
    SpectralReport,
    WeightedDigraph,
    apply_generator,
    build_graph,
    check_morphism,
    is_irreducible,
    rayleigh_quotient,
    reversible_measure,
    spectral_gap,
    spectrum_contained,
)
from .perm import (
    SubgroupSpec,
    WeightedGroup,
    cayley_graph,
    compose,
    group_is_irreducible,
    group_is_reversible,
    inverse,
    subgroup_closure,
    transposition,
)
from .processes import (
    BaseGraph,
    BlockShuffleSpec,
    ExtendedGraph,
    GEPConfig,
    block_shuffle_group,
    extended_graph,
    gep_graph,
    gep_quotient_iso_check,
    gep_quotient_subgroups,
    interchange_group,
    random_walk,
)
from .verify import (
    VerificationReport,
    probe_block_shuffle_conjecture,
    verify_aldous,
    verify_commutative_diagram,
    verify_gep_equals_k_rw,
)

__version__ = "0.1.0"
