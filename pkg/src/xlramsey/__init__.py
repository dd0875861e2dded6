"""Desk-scale workbench for Ramsey theory on exactly large sets."""

from .largesets import (
    ExactlyLargeSet,
    FinSet,
    count_exactly_large,
    enumerate_exactly_large,
    is_exactly_large,
    min_decompose,
)
from .machines import (
    EMPTY,
    CutoffJumpOracle,
    DomainStageOracle,
    ExplicitOracle,
    FuncOracle,
    Instr,
    JoinOracle,
    JumpStageSpec,
    LazyJumpOracle,
    OracleSet,
    Program,
    RunOutcome,
    decode_program,
    encode_program,
    g_limit,
    halt_threshold,
    jump_codes_below,
    jump_halt0,
    jump_pairs_approx,
    load_program_universe,
    mone_reduction,
    pair,
    run_bounded,
    staged_jump,
    unpair,
)
from .colorings import (
    Embedding,
    ExactColoring,
    FiniteColoring,
    KmRtReduction,
    OracleColoringFamily,
    RegressiveColoring,
    c2_coloring,
    cn_coloring,
    cn_from,
    comega_coloring,
    dh_coloring,
    diagonal_coloring,
    disagreement_base_family,
    embed_finite,
    jump_tower,
    km_dh_coloring,
    km_to_rt,
    program_family,
    rt_via_km,
    tower_step,
    tower_step_family,
)
from .decoders import (
    DecodeVerdict,
    DhReconstruction,
    LevelReconstruction,
    adequate_tuple,
    default_truth_cutoff,
    dh_reconstruct,
    halt0_tower_member,
    m2_decode,
    m_decode,
    mn_decode,
    mn_raw,
    momega_decode,
)
from .ramsey import (
    DEFAULT_BUDGET,
    ChildSet,
    PathResult,
    SearchBudget,
    SearchResult,
    VerifyReport,
    Witness,
    brute_homogeneous,
    er_children,
    exact_homog_search,
    f_a_extract,
    iterate_rtomega,
    leftmost_path,
    load_witness,
    min_homog_search,
    save_witness,
    verify_exact_homogeneous,
    verify_min_homogeneous,
)

__version__ = "0.1.0"
