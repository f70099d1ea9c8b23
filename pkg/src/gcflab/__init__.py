"""Exact-arithmetic tools for generalized continued fractions driven by substitutions."""

from .exact import INF, IDENTITY, J, L, R, Mat2, lr_product, mat_det, mat_mul, mobius_apply
from .gcf import (
    ConvergentPair,
    DiagnosticsRow,
    Enclosure,
    GCFInput,
    InvariantViolation,
    convergents,
    diagnostics,
    enclosure,
    evaluate,
    quadratic_approximant,
    rho,
    series_partial,
)
from .raney import balanced_class, derive_table, emit, enumerate_states, feed, run
from .rcf import confirmed_quotients, cross_check, encode, interval_quotients, lr_to_quotients, normalize
from .substitution import (
    PERIOD_DOUBLING,
    THUE_MORSE,
    Substitution,
    fixed_point_prefix,
    fold,
    folding_limit_prefix,
    fractional_power,
    incidence_matrix,
    is_primitive,
    letter_frequencies,
    stammer_bound,
    stammer_scan,
)

__version__ = "0.1.0"
