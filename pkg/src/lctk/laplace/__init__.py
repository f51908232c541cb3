from .expr import (
    Add,
    Const,
    Cos,
    Deriv,
    Exp,
    ExpMul,
    Integ,
    ModCos,
    ModSin,
    Power,
    Scale,
    ShiftRight,
    Sin,
    TimeExpr,
    TimeScale,
    diff,
    evaluate,
    format_sexpr,
    initial_values,
    parse_sexpr,
)
from .numeric import (
    ExpOrderWitness,
    adaptive_simpson,
    exp_order_witness,
    laplace_exists_check,
    laplace_numeric,
)
from .symbolic import ACTUAL_INIT, ZERO_INIT, LaplaceResult, laplace_symbolic

__all__ = [
    "ACTUAL_INIT",
    "Add",
    "Const",
    "Cos",
    "Deriv",
    "Exp",
    "ExpMul",
    "ExpOrderWitness",
    "Integ",
    "LaplaceResult",
    "ModCos",
    "ModSin",
    "Power",
    "Scale",
    "ShiftRight",
    "Sin",
    "TimeExpr",
    "TimeScale",
    "ZERO_INIT",
    "adaptive_simpson",
    "diff",
    "evaluate",
    "exp_order_witness",
    "format_sexpr",
    "initial_values",
    "laplace_exists_check",
    "laplace_numeric",
    "laplace_symbolic",
    "parse_sexpr",
]
