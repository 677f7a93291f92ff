"""Experiment definitions: wind profiles, operating modes, references.

Wind profiles are small frozen values evaluated on demand; the
turbulent variant draws from a seeded mean-reverting walk so identical
seeds replay identical series bit for bit.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import ConfigurationError, DomainError
from .turbine import TurbineParams, aerodynamic_torque

# turbulence is sampled-and-held on this grid, independent of sim dt
TURBULENCE_SAMPLE_DT = 0.05  # s


@dataclass(frozen=True)
class ConstantWind:
    v0: float  # m/s

    def __post_init__(self) -> None:
        if self.v0 < 0.0:
            raise ConfigurationError(f"wind speed must be non-negative, got {self.v0}")


@dataclass(frozen=True)
class StepWind:
    v0: float  # m/s
    v1: float  # m/s
    t_step: float  # s, boundary inclusive: wind_at(t_step) = v1

    def __post_init__(self) -> None:
        if self.v0 < 0.0 or self.v1 < 0.0:
            raise ConfigurationError("wind speeds must be non-negative")
        if self.t_step < 0.0:
            raise ConfigurationError(f"t_step must be non-negative, got {self.t_step}")


@dataclass(frozen=True)
class RampWind:
    v0: float  # m/s
    v1: float  # m/s
    t0: float  # s
    t1: float  # s

    def __post_init__(self) -> None:
        if self.v0 < 0.0 or self.v1 < 0.0:
            raise ConfigurationError("wind speeds must be non-negative")
        if not 0.0 <= self.t0 < self.t1:
            raise ConfigurationError(f"need 0 <= t0 < t1, got ({self.t0}, {self.t1})")


@dataclass(frozen=True)
class GustWind:
    v_base: float  # m/s
    amplitude: float  # m/s, peak height above base (negative = lull)
    t_start: float  # s
    duration: float  # s

    def __post_init__(self) -> None:
        if self.v_base < 0.0:
            raise ConfigurationError(f"v_base must be non-negative, got {self.v_base}")
        if self.t_start < 0.0:
            raise ConfigurationError(f"t_start must be non-negative, got {self.t_start}")
        if self.duration <= 0.0:
            raise ConfigurationError(f"duration must be positive, got {self.duration}")


@dataclass(frozen=True)
class TurbulentWind:
    v_base: float  # m/s
    intensity: float  # dimensionless, stddev as fraction of v_base
    seed: int
    rate: float = 0.5  # 1/s, mean-reversion rate

    def __post_init__(self) -> None:
        if self.v_base < 0.0:
            raise ConfigurationError(f"v_base must be non-negative, got {self.v_base}")
        if self.intensity < 0.0:
            raise ConfigurationError(f"intensity must be non-negative, got {self.intensity}")
        if self.rate <= 0.0:
            raise ConfigurationError(f"rate must be positive, got {self.rate}")


WindProfile = Union[ConstantWind, StepWind, RampWind, GustWind, TurbulentWind]

# per-profile sample cache: the walk extends on demand and never
# regenerates, so every prefix is reproducible
_turbulence_cache: dict[TurbulentWind, tuple[random.Random, list[float]]] = {}


def _turbulence_sample(profile: TurbulentWind, idx: int) -> float:
    entry = _turbulence_cache.get(profile)
    if entry is None:
        entry = (random.Random(profile.seed), [])
        _turbulence_cache[profile] = entry
    rng, samples = entry
    sigma = profile.intensity * profile.v_base * math.sqrt(2.0 * profile.rate)
    h = TURBULENCE_SAMPLE_DT
    while len(samples) <= idx:
        x = samples[-1] - profile.v_base if samples else 0.0
        x += profile.rate * (-x) * h + sigma * math.sqrt(h) * rng.gauss(0.0, 1.0)
        v = profile.v_base + x
        samples.append(v if v > 0.0 else 0.0)
    return samples[idx]


def wind_at(t: float, profile: WindProfile) -> float:
    """Wind speed at time ``t``, deterministic for every variant."""
    if t < 0.0:
        raise DomainError(f"time must be non-negative, got {t}")
    if isinstance(profile, ConstantWind):
        return profile.v0
    if isinstance(profile, StepWind):
        return profile.v1 if t >= profile.t_step else profile.v0
    if isinstance(profile, RampWind):
        if t <= profile.t0:
            return profile.v0
        if t >= profile.t1:
            return profile.v1
        frac = (t - profile.t0) / (profile.t1 - profile.t0)
        return profile.v0 + (profile.v1 - profile.v0) * frac
    if isinstance(profile, GustWind):
        if t < profile.t_start or t > profile.t_start + profile.duration:
            return profile.v_base
        phase = 2.0 * math.pi * (t - profile.t_start) / profile.duration
        v = profile.v_base + profile.amplitude * (1.0 - math.cos(phase)) / 2.0
        return v if v > 0.0 else 0.0
    if isinstance(profile, TurbulentWind):
        return _turbulence_sample(profile, int(math.floor(t / TURBULENCE_SAMPLE_DT)))
    raise ConfigurationError(f"unknown wind profile {profile!r}")


class Mode(Enum):
    """The three operating modes of the bench."""

    TURBINE_EMULATION = "emulation"
    TORQUE_CONTROL = "torque"
    SPEED_CONTROL = "speed"


@dataclass(frozen=True)
class Scenario:
    """One experiment: wind, mode, setpoint and duration."""

    profile: WindProfile
    mode: Mode = Mode.TURBINE_EMULATION
    setpoint: float | None = None  # N·m (torque mode) or rad/s (speed mode)
    duration: float = 60.0  # s
    dt: float | None = None  # s, None = simulation default

    def __post_init__(self) -> None:
        if self.duration <= 0.0:
            raise ConfigurationError(f"duration must be positive, got {self.duration}")
        if self.dt is not None and self.dt <= 0.0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.mode is Mode.TURBINE_EMULATION and self.setpoint is not None:
            raise ConfigurationError("emulation mode takes no setpoint")
        if self.mode is not Mode.TURBINE_EMULATION and self.setpoint is None:
            raise ConfigurationError(f"{self.mode.value} mode needs a setpoint")


@dataclass(frozen=True)
class ControlParams:
    """Reference-stage tuning: PI gains, saturation, startup torque."""

    kp: float = 5.0  # N·m·s/rad
    ki: float = 10.0  # N·m/rad
    torque_limit: float = 400.0  # N·m
    breakaway_torque: float | None = 5.0  # N·m below omega_min; None = clamp formula

    def __post_init__(self) -> None:
        if self.kp <= 0.0 or self.ki < 0.0:
            raise ConfigurationError("need kp > 0 and ki >= 0")
        if self.torque_limit <= 0.0:
            raise ConfigurationError(f"torque_limit must be positive, got {self.torque_limit}")
        if self.breakaway_torque is not None and self.breakaway_torque <= 0.0:
            raise ConfigurationError(
                f"breakaway_torque must be positive or None, got {self.breakaway_torque}"
            )


@dataclass
class PIState:
    """Integrator of the speed-mode PI controller."""

    integral: float = 0.0

    def reset(self) -> None:
        self.integral = 0.0


def _saturate(u: float, limit: float) -> float:
    if u > limit:
        return limit
    if u < -limit:
        return -limit
    return u


def torque_reference(
    mode: Mode,
    measured_omega: float,
    v: float,
    setpoint: float | None,
    turbine: TurbineParams,
    control: ControlParams,
    pi: PIState,
    dt: float,
) -> float:
    """Torque demand for the drive under the selected operating mode.

    Emulation delegates to the aerodynamic torque law; below the
    omega_min floor it applies the configured breakaway torque (or
    evaluates the law at the floor when none is configured), and zero
    wind demands zero torque so rest stays an equilibrium.  Torque mode
    passes the setpoint through saturated.  Speed mode runs a discrete
    PI with back-calculation anti-windup.
    """
    if measured_omega < 0.0:
        raise DomainError(f"measured omega must be non-negative, got {measured_omega}")
    if mode is Mode.TURBINE_EMULATION:
        if v <= 0.0:
            return 0.0
        if measured_omega < turbine.omega_min:
            if control.breakaway_torque is not None:
                return control.breakaway_torque
            return aerodynamic_torque(v, turbine.omega_min, turbine)
        return aerodynamic_torque(v, measured_omega, turbine)
    if setpoint is None:
        raise ConfigurationError(f"{mode.value} mode needs a setpoint")
    if mode is Mode.TORQUE_CONTROL:
        return _saturate(setpoint, control.torque_limit)
    # speed control
    if dt <= 0.0:
        raise DomainError(f"dt must be positive, got {dt}")
    error = setpoint - measured_omega
    u_raw = control.kp * error + control.ki * pi.integral
    u = _saturate(u_raw, control.torque_limit)
    pi.integral += dt * error + dt * (u - u_raw) / control.kp
    return u
