"""Series solutions of the 1D wave equation on moving domains."""

from ._abelwave import (
    AbelMethod,
    AbelSolution,
    BoundaryCurve,
    CharMaps,
    ConfigError,
    ConvergenceError,
    DomainError,
    Error,
    Family,
    HypothesisError,
    InitialData,
    UnsupportedError,
    WaveField,
    energy,
    energy_rate,
    gram_analysis,
    interior_time,
    make_field,
    observe_interior,
    observe_left,
    observe_moving,
    observe_right,
    observe_simultaneous,
    optimal_times,
    orbit,
    solve_abel,
)

__all__ = [name for name in dir() if not name.startswith("_")]
