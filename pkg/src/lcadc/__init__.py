"""Behavioral simulator and analysis toolkit for a power-gated
level-crossing ADC."""

from .analysis import (
    BoundaryCurve,
    OffTimeStats,
    SweepResult,
    SweepRow,
    boundary_curve,
    knee_frequency,
    max_frequency,
    monte_carlo_off_time,
    off_fraction_analytic,
    optimal_clock,
    sweep,
)
from .engine import (
    AdcConfig,
    AdcState,
    ConfigError,
    CrossingEvent,
    Mode,
    Trace,
    ack_time,
    initial_state,
    reconstruct,
    simulate,
    tracking_error,
)
from .power import (
    EVENT_ENERGY_BREAKEVEN_201K,
    ModelDomainError,
    PowerParams,
    PowerReport,
    analytic_power,
    breakeven_clock,
    crossing_rate_sine,
    mean_off_time,
    measure,
)
from .runconfig import ConfigFileError, RunConfig, load_run_config, parse_number
from .signals import (
    Constant,
    Direction,
    OutOfSpanError,
    Ramp,
    Sampled,
    SignalSpec,
    Sine,
    SumOfSines,
    WindowStartError,
    evaluate,
    max_slope,
    next_window_entry,
    next_window_exit,
)

__version__ = "0.1.0"

__all__ = [
    "AdcConfig",
    "AdcState",
    "BoundaryCurve",
    "Constant",
    "ConfigError",
    "ConfigFileError",
    "CrossingEvent",
    "Direction",
    "EVENT_ENERGY_BREAKEVEN_201K",
    "Mode",
    "ModelDomainError",
    "OffTimeStats",
    "OutOfSpanError",
    "PowerParams",
    "PowerReport",
    "Ramp",
    "RunConfig",
    "Sampled",
    "SignalSpec",
    "Sine",
    "SumOfSines",
    "SweepResult",
    "SweepRow",
    "Trace",
    "WindowStartError",
    "ack_time",
    "analytic_power",
    "boundary_curve",
    "breakeven_clock",
    "crossing_rate_sine",
    "evaluate",
    "initial_state",
    "knee_frequency",
    "load_run_config",
    "max_frequency",
    "max_slope",
    "mean_off_time",
    "measure",
    "monte_carlo_off_time",
    "next_window_entry",
    "next_window_exit",
    "off_fraction_analytic",
    "optimal_clock",
    "parse_number",
    "reconstruct",
    "simulate",
    "sweep",
    "tracking_error",
]
