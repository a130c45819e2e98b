"""On-line chain partitioning of finite posets.

Core pieces: dense-matrix posets with Dilworth machinery and the
maximum-antichain lattice; First-Fit and Grundy colorings with exact
worst-case oracles; regular instances and their verifiers; the on-line
width-reduction pipeline; and the explicit adversarial constructions.
"""

from .chains import (
    CapExceededError,
    ChainPartition,
    NotAntichainError,
    NotComparableError,
    NotMaximumAntichainError,
    antichain_join,
    antichain_meet,
    dilworth_partition,
    is_dilworth_edge,
    max_antichain,
    maximum_antichains,
    sqsubseteq,
    width,
)
from .generators import (
    BadKError,
    SizeCapError,
    ff_upper_bound,
    gen_core,
    gen_ladder,
    gen_Qk,
    gen_regular_with_ladder,
    gen_Rn,
    reduction_chain_bound,
    rn_vertex,
)
from .harness import (
    ExperimentConfig,
    ResultRow,
    emit,
    random_online_instance,
    random_poset,
    run_suite,
)
from .ladder import LadderEmbedding, find_max_ladder
from .online import (
    FirstFitColorer,
    GrundyColoring,
    GrundyVerdict,
    InvalidGrundyError,
    InvalidMoveError,
    OnlineColorer,
    OnlineInstance,
    TooLargeError,
    WidthExceededError,
    best_grundy_coloring,
    chi_ff_by_presentations,
    chi_ff_exact,
    first_fit,
    grundy_to_presentation,
    run_online,
    verify_grundy,
)
from .poset import (
    CycleError,
    Poset,
    PosetError,
    SelfLoopError,
    build_poset,
    lex_product,
    poset_from_json,
    poset_to_json,
)
from .reduction import CompositeColorer, ReductionInvariantError, composite_color
from .regular import (
    BipartiteCore,
    RegularInstance,
    SizeMismatchError,
    Verdict,
    Violation,
    derive_ps,
    is_core,
    ladder_bound_check,
    verify_p6_p7,
    verify_regular,
)

__version__ = "0.1.0"
