"""Finite loops, Latin square plexes, full-product sets, and HP-style checks."""

from ._kernels import BACKEND as KERNEL_BACKEND
from .catalog import (
    SweepRecord,
    analyze_loop,
    builtin,
    canonical_form,
    canonical_id,
    enumerate_loops,
    parse_table,
    run_sweep,
    serialize_table,
)
from .conditions import (
    ClaimResult,
    HPReport,
    check_A,
    check_B_fast,
    check_B_oracle,
    check_C,
    enumerate_normal_subloops,
    find_B_violation,
    hp_report,
    sylow2_status,
    verify_theorems,
)
from .core import (
    CosetPartition,
    ElementSet,
    Letter,
    LoopTable,
    Perm,
    TranslationWord,
    associator_subloop,
    derived_subloop,
    evaluate_word,
    induced_map,
    inner_generators,
    is_isomorphic,
    is_normal,
    is_subloop,
    normal_closure,
    quotient,
    subloop_closure,
)
from .plexes import (
    CellSelection,
    RegularCycle,
    RegularityProfile,
    count_selections,
    cycle_decompose_regular,
    find_selection,
    is_regular,
    matches_kind,
    regular_set_from_unit_product,
    translate_partition,
    transversal_from_full_product,
)
from .products import (
    CosetProfile,
    Expression,
    Leaf,
    Multiset,
    Node,
    POmega,
    ProductSet,
    coset_profile,
    evaluate,
    expression_leaves,
    format_expression,
    full_product_mask,
    p_omega,
    product_set,
    product_set_of_multiset,
    witness,
)

__version__ = "0.1.0"
