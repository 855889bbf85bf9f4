"""Analog input waveforms: exact evaluation, slope bounds, and crossing search.

Waveforms are small frozen dataclasses.  The crossing search brackets on a
fixed time grid whose pitch is derived from the waveform's slope bound (so no
excursion wider than a fraction of the window can slip between grid points)
and then bisects down to the time tolerance.  Piecewise-linear variants are
solved in closed form instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

TIME_ABS_TOL = 1e-12  # absolute time resolution, seconds
TIME_REL_TOL = 1e-9   # relative time resolution

# Fraction of the window width the signal may travel per scan step.  Keeping
# this well below 1 guarantees a genuine traversal cannot be stepped over.
_PITCH_WINDOW_FRACTION = 0.25
_PERIOD_DIVISIONS = 64


class Direction(Enum):
    """Which window boundary a crossing traverses."""

    UP = "up"
    DOWN = "down"


class OutOfSpanError(ValueError):
    """Query outside the time span covered by a sampled waveform."""


class WindowStartError(ValueError):
    """Crossing search started with the signal already outside the window."""


@dataclass(frozen=True)
class Sine:
    """offset + amplitude * sin(2*pi*frequency*t + phase).

    ``amplitude`` is the peak deviation from ``offset`` (not peak-to-peak).
    """

    amplitude: float
    frequency: float
    phase: float = 0.0
    offset: float = 0.0

    def __post_init__(self) -> None:
        if self.amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        if self.frequency <= 0:
            raise ValueError("frequency must be > 0")


@dataclass(frozen=True)
class Constant:
    value: float


@dataclass(frozen=True)
class Ramp:
    """start + slope * t."""

    start: float
    slope: float


@dataclass(frozen=True)
class SumOfSines:
    """Sum of (amplitude, frequency, phase) tones above a shared offset."""

    tones: tuple[tuple[float, float, float], ...]
    offset: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "tones", tuple((float(a), float(f), float(p)) for a, f, p in self.tones)
        )
        if not self.tones:
            raise ValueError("at least one tone is required")
        for a, f, _ in self.tones:
            if a < 0:
                raise ValueError("tone amplitude must be >= 0")
            if f <= 0:
                raise ValueError("tone frequency must be > 0")


@dataclass(frozen=True)
class Sampled:
    """Uniformly sampled values with linear interpolation between samples."""

    sample_period: float
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if self.sample_period <= 0:
            raise ValueError("sample_period must be > 0")
        if len(self.values) < 2:
            raise ValueError("at least two samples are required")

    @property
    def span(self) -> float:
        """End of the time span covered by the samples (start is t=0)."""
        return self.sample_period * (len(self.values) - 1)


SignalSpec = Sine | Constant | Ramp | SumOfSines | Sampled


def evaluate(spec: SignalSpec, t: float) -> float:
    """Waveform value at time ``t`` (seconds), in volts.

    Sampled waveforms only cover [0, span]; queries outside raise
    OutOfSpanError.
    """
    if isinstance(spec, Sine):
        return spec.offset + spec.amplitude * math.sin(
            2.0 * math.pi * spec.frequency * t + spec.phase
        )
    if isinstance(spec, Constant):
        return spec.value
    if isinstance(spec, Ramp):
        return spec.start + spec.slope * t
    if isinstance(spec, SumOfSines):
        acc = spec.offset
        for a, f, p in spec.tones:
            acc += a * math.sin(2.0 * math.pi * f * t + p)
        return acc
    if isinstance(spec, Sampled):
        span = spec.span
        if t < -TIME_ABS_TOL or t > span + TIME_ABS_TOL:
            raise OutOfSpanError(f"t={t} outside sampled span [0, {span}]")
        x = min(max(t, 0.0), span) / spec.sample_period
        i = min(int(x), len(spec.values) - 2)
        frac = x - i
        return spec.values[i] + (spec.values[i + 1] - spec.values[i]) * frac
    raise TypeError(f"unknown signal spec {type(spec).__name__}")


def max_slope(spec: SignalSpec) -> float:
    """Upper bound on |d(signal)/dt| in volts/second.

    Tight for single sines (2*pi*f*A), ramps and sampled data; the sum bound
    for SumOfSines is conservative.
    """
    if isinstance(spec, Sine):
        return 2.0 * math.pi * spec.frequency * spec.amplitude
    if isinstance(spec, Constant):
        return 0.0
    if isinstance(spec, Ramp):
        return abs(spec.slope)
    if isinstance(spec, SumOfSines):
        return sum(2.0 * math.pi * f * a for a, f, _ in spec.tones)
    if isinstance(spec, Sampled):
        dv = max(
            abs(b - a) for a, b in zip(spec.values[:-1], spec.values[1:])
        )
        return dv / spec.sample_period
    raise TypeError(f"unknown signal spec {type(spec).__name__}")


def _time_tol(t: float) -> float:
    return max(TIME_ABS_TOL, TIME_REL_TOL * abs(t))


def _shortest_period(spec: SignalSpec) -> float | None:
    if isinstance(spec, Sine):
        return 1.0 / spec.frequency
    if isinstance(spec, SumOfSines):
        return 1.0 / max(f for _, f, _ in spec.tones)
    return None


def _scan_pitch(spec: SignalSpec, width: float) -> float:
    pitch = math.inf
    period = _shortest_period(spec)
    if period is not None:
        pitch = period / _PERIOD_DIVISIONS
    slope = max_slope(spec)
    if slope > 0.0:
        pitch = min(pitch, _PITCH_WINDOW_FRACTION * width / slope)
    return pitch


def _bisect_beyond(
    spec: SignalSpec, a: float, b: float, boundary: float, above: bool
) -> float:
    """Shrink (a, b] where v(b) is strictly beyond ``boundary`` and v(a) is
    not; return the beyond endpoint."""
    while b - a > _time_tol(b):
        m = 0.5 * (a + b)
        v = evaluate(spec, m)
        if (v > boundary) if above else (v < boundary):
            b = m
        else:
            a = m
    return b


def next_window_exit(
    spec: SignalSpec, t_from: float, lo: float, hi: float, horizon: float
) -> tuple[float, Direction] | None:
    """Earliest t in (t_from, horizon] where the signal traverses ``hi``
    (Direction.UP) or ``lo`` (Direction.DOWN), or None if it stays inside.

    The signal must start inside the window (boundary contact allowed);
    starting strictly outside raises WindowStartError, which is distinct from
    the no-exit result.  Grazing a boundary without traversal does not count
    as an exit.  The returned time lies just past the true crossing, within
    max(1e-12 s, 1e-9 relative), so the signal evaluates strictly beyond the
    boundary there.
    """
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    if not horizon > t_from:
        raise ValueError("horizon must lie after t_from")
    v0 = evaluate(spec, t_from)
    if v0 > hi or v0 < lo:
        raise WindowStartError(
            f"signal is at {v0} V, outside [{lo}, {hi}] V, at t={t_from}"
        )
    if isinstance(spec, Constant):
        return None
    if isinstance(spec, Ramp):
        return _ramp_exit(spec, t_from, v0, lo, hi, horizon)
    if isinstance(spec, Sampled):
        return _sampled_exit(spec, t_from, v0, lo, hi, horizon)

    pitch = _scan_pitch(spec, hi - lo)
    if not math.isfinite(pitch):
        return None
    t_prev = t_from
    k = 1
    while True:
        t_k = t_from + k * pitch
        if t_k >= horizon:
            t_k = horizon
        v = evaluate(spec, t_k)
        if v > hi:
            return _bisect_beyond(spec, t_prev, t_k, hi, True), Direction.UP
        if v < lo:
            return _bisect_beyond(spec, t_prev, t_k, lo, False), Direction.DOWN
        if t_k >= horizon:
            return None
        t_prev = t_k
        k += 1


def _ramp_exit(
    spec: Ramp, t_from: float, v0: float, lo: float, hi: float, horizon: float
) -> tuple[float, Direction] | None:
    if spec.slope == 0.0:
        return None
    if spec.slope > 0.0:
        target, direction = hi, Direction.UP
    else:
        target, direction = lo, Direction.DOWN
    t_hit = t_from + (target - v0) / spec.slope
    if t_hit <= t_from:
        # started on the boundary moving outward
        t_hit = t_from + _time_tol(t_from)
    if t_hit > horizon:
        return None
    return t_hit, direction


def _sampled_exit(
    spec: Sampled, t_from: float, v0: float, lo: float, hi: float, horizon: float
) -> tuple[float, Direction] | None:
    if horizon > spec.span + TIME_ABS_TOL:
        raise OutOfSpanError(
            f"horizon {horizon} beyond sampled span [0, {spec.span}]"
        )
    dt = spec.sample_period
    n_seg = len(spec.values) - 1
    j = min(int(t_from / dt), n_seg - 1)
    t_a, v_a = t_from, v0
    while j < n_seg:
        t_b = min((j + 1) * dt, horizon)
        if t_b <= t_a:
            j += 1
            continue
        v_b = evaluate(spec, t_b)
        crossed: tuple[float, Direction] | None = None
        if v_b > hi:
            seg_slope = (v_b - v_a) / (t_b - t_a)
            crossed = (t_a + (hi - v_a) / seg_slope, Direction.UP)
        elif v_b < lo:
            seg_slope = (v_b - v_a) / (t_b - t_a)
            crossed = (t_a + (lo - v_a) / seg_slope, Direction.DOWN)
        if crossed is not None:
            t_hit, direction = crossed
            if t_hit <= t_from:
                t_hit = t_from + _time_tol(t_from)
            if t_hit > horizon:
                return None
            return t_hit, direction
        if t_b >= horizon:
            return None
        t_a, v_a = t_b, v_b
        j += 1
    return None


def next_window_entry(
    spec: SignalSpec, t_from: float, lo: float, hi: float, horizon: float
) -> float | None:
    """Earliest t in (t_from, horizon] where the signal is strictly inside
    (lo, hi), or None.

    Counterpart of next_window_exit used to recover from range saturation:
    the signal starts on or beyond one boundary and the returned time lies
    just past its traversal back inside.  A signal already strictly inside
    is returned immediately as ``t_from``.
    """
    if not lo < hi:
        raise ValueError("window must satisfy lo < hi")
    if not horizon > t_from:
        raise ValueError("horizon must lie after t_from")
    v0 = evaluate(spec, t_from)
    if lo < v0 < hi:
        return t_from
    from_above = v0 >= hi

    if isinstance(spec, Constant):
        return None
    if isinstance(spec, Ramp):
        if spec.slope == 0.0:
            return None
        moving_in = (spec.slope < 0.0) if from_above else (spec.slope > 0.0)
        if not moving_in:
            return None
        boundary = hi if from_above else lo
        t_hit = t_from + (boundary - v0) / spec.slope
        t_in = max(t_hit, t_from) + _time_tol(max(t_hit, t_from))
        if t_in > horizon:
            return None
        return t_in

    pitch = _scan_pitch(spec, hi - lo)
    if not math.isfinite(pitch):
        return None
    if isinstance(spec, Sampled) and horizon > spec.span + TIME_ABS_TOL:
        raise OutOfSpanError(
            f"horizon {horizon} beyond sampled span [0, {spec.span}]"
        )
    boundary = hi if from_above else lo
    t_prev = t_from
    k = 1
    while True:
        t_k = t_from + k * pitch
        if t_k >= horizon:
            t_k = horizon
        v = evaluate(spec, t_k)
        if lo < v < hi:
            # bisect the boundary traversal; the inside endpoint is returned
            a, b = t_prev, t_k
            while b - a > _time_tol(b):
                m = 0.5 * (a + b)
                vm = evaluate(spec, m)
                if (vm < boundary) if from_above else (vm > boundary):
                    b = m
                else:
                    a = m
            return b
        if t_k >= horizon:
            return None
        t_prev = t_k
        k += 1
