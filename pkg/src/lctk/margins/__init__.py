from .bode import (
    DEFAULT_PPD,
    DEFAULT_RANGE,
    FreqPoint,
    MarginReport,
    Sweep,
    bode_sweep,
    default_ppd,
    find_crossovers,
    frequency_grid,
    gain_margin_db,
    margin_report,
    phase_margin,
)
from .routh import RouthResult, Stability, routh_stability

__all__ = [
    "DEFAULT_PPD",
    "DEFAULT_RANGE",
    "FreqPoint",
    "MarginReport",
    "RouthResult",
    "Stability",
    "Sweep",
    "bode_sweep",
    "default_ppd",
    "find_crossovers",
    "frequency_grid",
    "gain_margin_db",
    "margin_report",
    "phase_margin",
    "routh_stability",
]
