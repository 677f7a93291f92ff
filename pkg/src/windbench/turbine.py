"""Static aerodynamic model of the fixed-pitch turbine.

Power-coefficient curve, tip-speed ratio, and the power/torque surfaces
derived from them.  Everything here is a pure function of immutable
parameters and safe to call from any thread.  Units are strictly SI;
rpm appears only as a presentation field on :class:`OperatingPoint`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, LowSpeedError

# Cp-curve coefficients of the emulated rotor.  The 3.5-power term acts
# with negative sign: the curve rises from zero, peaks near lambda = 3
# and falls through zero around lambda = 4.4.
CP_A_DEFAULT = 0.00888
CP_B_DEFAULT = 0.03944
CP_C_DEFAULT = 0.00452

# Rotor geometry and air density of the bench turbine.  Back-derived so
# the model reproduces the bundled reference operating table; see
# mppt.identify_params for the inverse problem that recovers them.
ROTOR_RADIUS_DEFAULT = 2.5  # m
AIR_DENSITY_DEFAULT = 1.225  # kg/m^3

RADS_TO_RPM = 60.0 / (2.0 * math.pi)


@dataclass(frozen=True)
class TurbineParams:
    """Rotor geometry, air density and Cp-curve coefficients."""

    rotor_radius: float = ROTOR_RADIUS_DEFAULT  # m
    air_density: float = AIR_DENSITY_DEFAULT  # kg/m^3
    cp_a: float = CP_A_DEFAULT
    cp_b: float = CP_B_DEFAULT
    cp_c: float = CP_C_DEFAULT
    lambda_cutoff: float = 6.0  # Cp clamped to 0 at and beyond this TSR
    omega_min: float = 0.1  # rad/s floor for torque evaluation

    def __post_init__(self) -> None:
        if self.rotor_radius <= 0.0:
            raise DomainError(f"rotor_radius must be positive, got {self.rotor_radius}")
        if self.air_density <= 0.0:
            raise DomainError(f"air_density must be positive, got {self.air_density}")
        if self.lambda_cutoff <= 0.0:
            raise DomainError(f"lambda_cutoff must be positive, got {self.lambda_cutoff}")
        if self.omega_min <= 0.0:
            raise DomainError(f"omega_min must be positive, got {self.omega_min}")
        if self.cp_a <= 0.0 or self.cp_b <= 0.0 or self.cp_c <= 0.0:
            # the 3.5-power coefficient is stored positive and subtracted
            raise DomainError("Cp coefficients must all be positive")

    @property
    def swept_area(self) -> float:
        """Area swept by the blades, pi*R^2.  Derived, never stored."""
        return math.pi * self.rotor_radius**2


@dataclass(frozen=True)
class OperatingPoint:
    """One point of the turbine operating surface."""

    wind_speed: float  # m/s
    rotor_speed: float  # rad/s
    tsr: float
    power: float  # W
    torque: float  # N·m

    @property
    def rotor_rpm(self) -> float:
        """Rotor speed in rev/min."""
        return self.rotor_speed * RADS_TO_RPM


def power_coefficient(lam: float, params: TurbineParams) -> float:
    """Power coefficient at tip-speed ratio ``lam``.

    The cubic-and-a-half polynomial is clamped to zero at ``lam = 0``,
    wherever it goes negative, and at or beyond ``params.lambda_cutoff``.
    """
    if lam < 0.0:
        raise DomainError(f"tip-speed ratio must be non-negative, got {lam}")
    if lam == 0.0 or lam >= params.lambda_cutoff:
        return 0.0
    cp = params.cp_a * lam + params.cp_b * lam**2 - params.cp_c * lam**3.5
    return cp if cp > 0.0 else 0.0


def cp_derivative(lam: float, params: TurbineParams) -> float:
    """Analytic dCp/dlambda of the unclamped polynomial (lam > 0)."""
    if lam <= 0.0:
        raise DomainError(f"derivative needs lam > 0, got {lam}")
    return params.cp_a + 2.0 * params.cp_b * lam - 3.5 * params.cp_c * lam**2.5


def tip_speed_ratio(omega: float, v: float, params: TurbineParams) -> float:
    """Blade-tip speed over wind speed, omega*R/v."""
    if v <= 0.0:
        raise DomainError(f"wind speed must be positive, got {v}")
    if omega < 0.0:
        raise DomainError(f"rotor speed must be non-negative, got {omega}")
    return omega * params.rotor_radius / v


def aerodynamic_power(v: float, omega: float, params: TurbineParams) -> float:
    """Captured power 0.5*pi*R^2*rho*Cp(lambda)*v^3; zero for v = 0."""
    if v < 0.0:
        raise DomainError(f"wind speed must be non-negative, got {v}")
    if omega < 0.0:
        raise DomainError(f"rotor speed must be non-negative, got {omega}")
    if v == 0.0:
        return 0.0
    lam = tip_speed_ratio(omega, v, params)
    cp = power_coefficient(lam, params)
    return 0.5 * params.swept_area * params.air_density * cp * v**3


def aerodynamic_torque(v: float, omega: float, params: TurbineParams) -> float:
    """Rotor torque P/omega at the same operating point.

    Below ``params.omega_min`` the quotient is ill-conditioned; callers
    must use the scenario engine's startup ramp instead.
    """
    if omega < params.omega_min:
        raise LowSpeedError(
            f"rotor speed {omega} below evaluation floor {params.omega_min}"
        )
    return aerodynamic_power(v, omega, params) / omega


def operating_point(v: float, omega: float, params: TurbineParams) -> OperatingPoint:
    """Full operating-surface row at (v, omega).

    Torque is reported as 0 below the ``omega_min`` floor, where the
    P/omega quotient is not evaluated.
    """
    lam = tip_speed_ratio(omega, v, params)
    power = aerodynamic_power(v, omega, params)
    torque = power / omega if omega >= params.omega_min else 0.0
    return OperatingPoint(wind_speed=v, rotor_speed=omega, tsr=lam, power=power, torque=torque)


def power_curve(
    v: float, omega_grid: list[float], params: TurbineParams
) -> list[OperatingPoint]:
    """Operating points along a rotor-speed grid at fixed wind speed.

    The grid must be strictly increasing and non-negative.  This is the
    data behind the bench's power-characteristic plots and the
    ``curve`` CLI subcommand.
    """
    if len(omega_grid) == 0:
        raise DomainError("rotor-speed grid is empty")
    if v <= 0.0:
        raise DomainError(f"wind speed must be positive, got {v}")
    prev = -math.inf
    for w in omega_grid:
        if w < 0.0:
            raise DomainError(f"rotor-speed grid must be non-negative, got {w}")
        if w <= prev:
            raise DomainError("rotor-speed grid must be strictly increasing")
        prev = w
    return [operating_point(v, w, params) for w in omega_grid]
