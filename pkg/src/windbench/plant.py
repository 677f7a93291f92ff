"""Electromechanical hardware chain of the bench.

Torque-controlled drive with command delay and first-order lag, the
generator as a power-efficiency map, and the grid-side converter:
DC bus, 16-level command quantizer, and the protection comparators.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace
from enum import Enum

from .errors import ConfigurationError, DomainError, StepSizeError


class Violation(Enum):
    """Protection violations, in their deterministic report order."""

    OVER_SPEED = "over_speed"
    OVER_TORQUE = "over_torque"
    OVER_POWER = "over_power"


@dataclass(frozen=True)
class ProtectionLimits:
    """Bounds watched by the software protection block."""

    omega_max: float = 25.0  # rad/s, turbine side
    torque_max: float = 350.0  # N·m, applied drive torque magnitude
    power_max: float = 6000.0  # W, exported electrical power

    def __post_init__(self) -> None:
        if self.omega_max <= 0.0 or self.torque_max <= 0.0 or self.power_max <= 0.0:
            raise ConfigurationError("protection limits must be positive")


@dataclass(frozen=True)
class GeneratorModel:
    """Generator as a conversion-efficiency map, not a machine model."""

    eta_conv: float = 0.8  # dimensionless, in (0, 1]
    rated_power: float = 8000.0  # W
    rated_speed: float = 157.0  # rad/s, generator side

    def __post_init__(self) -> None:
        if not 0.0 < self.eta_conv <= 1.0:
            raise ConfigurationError(f"eta_conv must be in (0, 1], got {self.eta_conv}")
        if self.rated_power <= 0.0 or self.rated_speed <= 0.0:
            raise ConfigurationError("generator ratings must be positive")


@dataclass(frozen=True)
class ConverterParams:
    """DC-bus voltage map and the overvoltage comparator threshold."""

    u_noload: float = 540.0  # V, bus voltage at zero export
    volts_per_watt: float = 0.05  # V/W, bus rise with exported power
    u_max: float = 700.0  # V, trip threshold

    def __post_init__(self) -> None:
        if self.u_noload <= 0.0 or self.u_max <= 0.0:
            raise ConfigurationError("converter voltages must be positive")
        if self.volts_per_watt < 0.0:
            raise ConfigurationError(
                f"volts_per_watt must be non-negative, got {self.volts_per_watt}"
            )


@dataclass(frozen=True)
class ConverterState:
    """Snapshot of the grid-side converter."""

    u_star: float = 0.0  # V
    level_code: int = 0  # 4-bit command, 0..15
    connected: bool = True
    trip_latched: bool = False

    def __post_init__(self) -> None:
        if not 0 <= self.level_code <= 15:
            raise DomainError(f"level_code must be in [0, 15], got {self.level_code}")
        if self.trip_latched and self.connected:
            raise DomainError("a latched trip cannot remain connected")


class DrivePlant:
    """Torque-controlled drive: command delay plus first-order lag.

    The applied torque is internal state owned by the simulation loop;
    the delay line stores past references and is sized from the step
    width on first use.
    """

    def __init__(
        self,
        torque_time_constant: float = 0.02,  # s
        command_delay: float = 0.005,  # s
        torque_limit: float = 400.0,  # N·m
    ) -> None:
        if torque_time_constant <= 0.0:
            raise ConfigurationError(
                f"torque_time_constant must be positive, got {torque_time_constant}"
            )
        if command_delay < 0.0:
            raise ConfigurationError(
                f"command_delay must be non-negative, got {command_delay}"
            )
        if torque_limit <= 0.0:
            raise ConfigurationError(f"torque_limit must be positive, got {torque_limit}")
        self.torque_time_constant = torque_time_constant
        self.command_delay = command_delay
        self.torque_limit = torque_limit
        self.applied_torque = 0.0
        self._ring: deque[float] | None = None
        self._ring_dt = 0.0

    def reset(self) -> None:
        """Return to rest: zero applied torque, empty delay line."""
        self.applied_torque = 0.0
        self._ring = None
        self._ring_dt = 0.0

    def delay_steps(self, dt: float) -> int:
        return int(round(self.command_delay / dt))

    def _delayed_reference(self, t_ref: float, dt: float) -> float:
        if self._ring is None or self._ring_dt != dt:
            n = self.delay_steps(dt)
            # the line starts full of zeros: no command issued yet
            self._ring = deque([0.0] * n, maxlen=n) if n > 0 else deque(maxlen=0)
            self._ring_dt = dt
        if self._ring.maxlen == 0:
            return t_ref
        delayed = self._ring[0]
        self._ring.append(t_ref)
        return delayed


def saturate_torque(torque: float, limit: float) -> float:
    """Clamp a torque to the symmetric actuator limit."""
    if torque > limit:
        return limit
    if torque < -limit:
        return -limit
    return torque


def drive_torque_response(t_ref: float, plant: DrivePlant, dt: float) -> float:
    """Advance the drive one step toward the delayed, saturated reference.

    T <- T + dt/tau_d * (sat(t_ref(t - delay)) - T).  Returns the new
    applied torque.  The config loader rejects dt above tau_d, where
    this explicit update would overshoot.
    """
    if dt <= 0.0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    target = saturate_torque(plant._delayed_reference(t_ref, dt), plant.torque_limit)
    plant.applied_torque += dt / plant.torque_time_constant * (
        target - plant.applied_torque
    )
    return plant.applied_torque


def generator_electrical_power(p_mech: float, model: GeneratorModel) -> float:
    """Electrical output: efficiency times mechanical input, capped at rating."""
    if p_mech < 0.0:
        raise DomainError(f"mechanical power must be non-negative, got {p_mech}")
    return min(model.eta_conv * p_mech, model.rated_power)


def converter_level_command(p_target: float, rated_power: float) -> int:
    """4-bit level code quantizing p_target/rated into 16 uniform levels.

    Rounding is half-up so rated/2 lands on code 8.
    """
    if rated_power <= 0.0:
        raise DomainError(f"rated_power must be positive, got {rated_power}")
    ratio = p_target / rated_power
    if ratio < 0.0:
        ratio = 0.0
    elif ratio > 1.0:
        ratio = 1.0
    return int(math.floor(15.0 * ratio + 0.5))


def dc_bus_voltage(p_exported: float, params: ConverterParams) -> float:
    """DC-bus voltage: no-load level plus a rise proportional to export."""
    return params.u_noload + params.volts_per_watt * p_exported


def overvoltage_guard(state: ConverterState, u_max: float) -> ConverterState:
    """Latch a trip when the bus voltage exceeds the comparator threshold.

    A latched state never clears here; reconnection needs an explicit
    operator reset.
    """
    if u_max <= 0.0:
        raise DomainError(f"u_max must be positive, got {u_max}")
    if state.trip_latched or state.u_star > u_max:
        return replace(state, connected=False, trip_latched=True)
    return state


def protection_check(sample, limits: ProtectionLimits) -> list[Violation]:
    """Violations of the configured bounds, in (speed, torque, power) order.

    ``sample`` is any object carrying omega, t_applied and p_exported
    fields (a TelemetrySample in the running bench).
    """
    violations = []
    if sample.omega > limits.omega_max:
        violations.append(Violation.OVER_SPEED)
    if abs(sample.t_applied) > limits.torque_max:
        violations.append(Violation.OVER_TORQUE)
    if sample.p_exported > limits.power_max:
        violations.append(Violation.OVER_POWER)
    return violations
