"""Bound states of an anti-symmetric square well/barrier between rigid walls.

Units are 2m = hbar = 1.  The solver combines three exact quantization
conditions (generic, zero-energy, barrier-top), audits spectra against the
oscillation theorem, and cross-validates everything with an independent
finite-difference oracle.
"""

from .characteristic import (
    char_generic,
    coefficients_for,
    det_match,
    f_zero_energy,
    g_barrier_top,
)
from .model import (
    CoefficientSet,
    Eigenstate,
    EnergyBranch,
    PiecewiseWavefunction,
    PotentialGeometry,
    SpectrumResult,
    StateKind,
    WaveParams,
    evaluate_wavefunction,
    potential_at,
    wavenumbers,
)
from .oracle import (
    OracleMismatchError,
    OracleReport,
    TridiagonalOperator,
    build_operator,
    cross_validate,
    lowest_eigenvalues,
    sturm_count_below,
)
from .rootfind import Bracket, RootResult, bracket_scan, refine, roots_in_range
from .spectrum import (
    DiagnosticsReport,
    DoublySpecialRoot,
    SpecialCondition,
    SpecialRoot,
    SpectrumAuditError,
    SpectrumRequest,
    count_nodes,
    doubly_special_v0,
    normalize,
    overlap,
    solve_spectrum,
    special_v0_catalog,
    uncertainty_product,
)

__version__ = "0.1.0"

__all__ = [
    "PotentialGeometry", "EnergyBranch", "WaveParams", "PiecewiseWavefunction",
    "StateKind", "CoefficientSet", "Eigenstate", "SpectrumResult",
    "potential_at", "wavenumbers", "evaluate_wavefunction",
    "f_zero_energy", "g_barrier_top", "char_generic", "det_match", "coefficients_for",
    "Bracket", "RootResult", "bracket_scan", "refine", "roots_in_range",
    "SpectrumRequest", "SpecialCondition", "SpecialRoot", "DoublySpecialRoot",
    "DiagnosticsReport", "SpectrumAuditError",
    "solve_spectrum", "special_v0_catalog", "doubly_special_v0",
    "normalize", "count_nodes", "overlap", "uncertainty_product",
    "TridiagonalOperator", "OracleReport", "OracleMismatchError",
    "build_operator", "lowest_eigenvalues", "sturm_count_below", "cross_validate",
    "__version__",
]
