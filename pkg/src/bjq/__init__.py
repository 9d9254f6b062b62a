"""bjq: exact Born-Jordan / Weyl / tau-ordered quantization of polynomial
observables, with independent brute-force oracles and Wigner-type
phase-space numerics."""

from .exactalg import (
    DimensionMismatch,
    HCoeff,
    NormalOp,
    PhasePoly,
    TauOp,
    commutator,
    normal_reorder,
)
from .obslang import (
    ObsParseError,
    ObsSemanticError,
    parse_classical,
    parse_operator,
    print_canonical,
)
from .oracles import (
    MatrixRep,
    matrix_eval,
    tau_interpolation_oracle,
    weyl_symmetrization_oracle,
)
from .phasespace import (
    Axis,
    GridError,
    PhaseGrid,
    WaveGrid,
    ambiguity,
    bj_wigner,
    expect,
    marginals,
    oscillator_state,
    product_state,
    symplectic_ft,
    theta,
    wigner,
)
from .quantizers import (
    QuantRule,
    SymbolRoundTripError,
    bj_weyl_symbol,
    builtin,
    dequantize_weyl,
    op_bj,
    op_tau,
    op_weyl,
    rule_diff,
)

__version__ = "0.1.0"

__all__ = [
    "DimensionMismatch",
    "HCoeff",
    "NormalOp",
    "PhasePoly",
    "TauOp",
    "commutator",
    "normal_reorder",
    "QuantRule",
    "SymbolRoundTripError",
    "bj_weyl_symbol",
    "builtin",
    "dequantize_weyl",
    "op_bj",
    "op_tau",
    "op_weyl",
    "rule_diff",
    "MatrixRep",
    "matrix_eval",
    "tau_interpolation_oracle",
    "weyl_symmetrization_oracle",
    "ObsParseError",
    "ObsSemanticError",
    "parse_classical",
    "parse_operator",
    "print_canonical",
    "Axis",
    "GridError",
    "PhaseGrid",
    "WaveGrid",
    "ambiguity",
    "bj_wigner",
    "expect",
    "marginals",
    "oscillator_state",
    "product_state",
    "symplectic_ft",
    "theta",
    "wigner",
    "__version__",
]
