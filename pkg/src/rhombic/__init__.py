"""Rhombic staircase tableaux, the two-species ASEP and Koornwinder moments."""
from .algebra import (
    ONE, VARIABLES, ZERO, Monomial, Polynomial, RationalMatrix, determinant,
    eval_substitute, exact_linear_solve, format_rational, kernel, parse_rational, poly_ops,
)
from .asep import (
    ChainSpec, DistributionVector, ReducibleChainError, build_chain, lam, mc_simulate,
    stationary_exact, tableaux_distribution, tableaux_stationary, verify_ansatz,
    verify_stationarity_symbolic,
)
from .moments import (
    MomentSpec, PoleError, SingularDenominatorError, cal_z, cross_check, moment_det,
    moment_tableaux,
)
from .tableaux import (
    Label, Tableau, TilingSpec, build_tiling, count_tableaux, enumerate_tableaux,
    partition_function, q1_census, type_generating_function,
)
from .transfer import (
    EntryKey, IdentityReport, WordSpec, bracket, entry, fugacity_bracket_sum,
    verify_all, verify_identity, w_row,
)

__all__ = [
    "ONE", "VARIABLES", "ZERO", "Monomial", "Polynomial", "RationalMatrix", "determinant",
    "eval_substitute", "exact_linear_solve", "format_rational", "kernel", "parse_rational",
    "poly_ops",
    "ChainSpec", "DistributionVector", "ReducibleChainError", "build_chain", "lam",
    "mc_simulate", "stationary_exact", "tableaux_distribution", "tableaux_stationary",
    "verify_ansatz", "verify_stationarity_symbolic",
    "MomentSpec", "PoleError", "SingularDenominatorError", "cal_z", "cross_check",
    "moment_det", "moment_tableaux",
    "Label", "Tableau", "TilingSpec", "build_tiling", "count_tableaux", "enumerate_tableaux",
    "partition_function", "q1_census", "type_generating_function",
    "EntryKey", "IdentityReport", "WordSpec", "bracket", "entry", "fugacity_bracket_sum",
    "verify_all", "verify_identity", "w_row",
]
