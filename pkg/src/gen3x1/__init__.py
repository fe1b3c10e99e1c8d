"""Trajectories, cycles, and cycle-existence bounds for generalized 3x+1 mappings.

The library covers exact trajectory iteration over branch-defined mappings
(x -> (m_i x - r_i)/d on residue i), combinatorics of the symbol sequences,
the PP*PG record-product walk with its condition bound C, brute-force window
oracles, and cycle search with least-term certificates.
"""
from .combinatorics import R_MODES, RepartitionValue, eta, log_factorial, repartition
from .cycles import (
    ConditionCertificate,
    CycleError,
    CycleRecord,
    CycleSearchResult,
    SearchBudget,
    canonicalize,
    certify,
    find_cycles,
)
from .mappings import (
    ORIGINAL_COLLATZ,
    PRESETS,
    THREE_X_PLUS_ONE,
    AffineForm,
    BranchRule,
    MappingError,
    MappingSpec,
    SymbolSequence,
    Trajectory,
    affine_form,
    apply_map,
    carnielli_l,
    carnielli_t,
    is_permutation,
    iterate,
    mapping_from_dict,
    mapping_from_json,
    mapping_to_dict,
    residue_for_symbol,
    symbol_for_residue,
    symbol_sequence,
)
from .nodes import (
    COLLATZ_FACTORS,
    THREE_X1_FACTORS,
    ConditionBound,
    FactorSystem,
    GapAnalysis,
    NodeRecord,
    NodesRun,
    PrecisionCapError,
    PrecisionConfig,
    TransitionClass,
    UnsupportedMappingError,
    classify_transition,
    condition_C,
    delta_from_exponents,
    delta_lambda_series,
    factor_system_for,
    gap_analysis,
    ln_lambda,
    rs_exponent,
    run_nodes,
)
from .reports import (
    FORMATS,
    NODE_CSV_COLUMNS,
    format_fixed,
    format_sig,
    node_records_from_json,
    render_cycles,
    render_distribution,
    render_gap,
    render_nodes,
    render_periodicity,
    render_trajectories,
    to_exact_decimal,
)
from .verify import (
    DistributionReport,
    PeriodicityReport,
    enumerate_class,
    verify_distribution,
    verify_periodicity,
)

__version__ = "0.1.0"

__all__ = [
    "AffineForm",
    "BranchRule",
    "COLLATZ_FACTORS",
    "ConditionBound",
    "ConditionCertificate",
    "CycleError",
    "CycleRecord",
    "CycleSearchResult",
    "DistributionReport",
    "FORMATS",
    "FactorSystem",
    "GapAnalysis",
    "MappingError",
    "MappingSpec",
    "NODE_CSV_COLUMNS",
    "NodeRecord",
    "NodesRun",
    "ORIGINAL_COLLATZ",
    "PRESETS",
    "PeriodicityReport",
    "PrecisionCapError",
    "PrecisionConfig",
    "R_MODES",
    "RepartitionValue",
    "SearchBudget",
    "SymbolSequence",
    "THREE_X1_FACTORS",
    "THREE_X_PLUS_ONE",
    "Trajectory",
    "TransitionClass",
    "UnsupportedMappingError",
    "affine_form",
    "apply_map",
    "canonicalize",
    "carnielli_l",
    "carnielli_t",
    "certify",
    "classify_transition",
    "condition_C",
    "delta_from_exponents",
    "delta_lambda_series",
    "enumerate_class",
    "eta",
    "factor_system_for",
    "find_cycles",
    "format_fixed",
    "format_sig",
    "gap_analysis",
    "is_permutation",
    "iterate",
    "ln_lambda",
    "log_factorial",
    "mapping_from_dict",
    "mapping_from_json",
    "mapping_to_dict",
    "node_records_from_json",
    "render_cycles",
    "render_distribution",
    "render_gap",
    "render_nodes",
    "render_periodicity",
    "render_trajectories",
    "repartition",
    "residue_for_symbol",
    "rs_exponent",
    "run_nodes",
    "symbol_for_residue",
    "symbol_sequence",
    "to_exact_decimal",
    "verify_distribution",
    "verify_periodicity",
]
