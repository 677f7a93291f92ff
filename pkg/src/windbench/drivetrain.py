"""Mechanical dynamics of the bench drivetrain.

Gearbox reflection, aggregate inertia, fixed-step integration of the
single-mass rotational ODE, and estimation of the correction inertia
that compensates the torque-loop delay.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

from .errors import ConfigurationError, DomainError, EstimationError, StepSizeError

# A torque is either a constant held across the step (zero-order hold,
# the runtime case) or a function of rotor speed evaluated per
# integrator stage (state-dependent loads such as linear drag).
TorqueInput = Union[float, Callable[[float], float]]


@dataclass(frozen=True)
class DrivetrainParams:
    """Gear ratio, efficiency and the four-term inertia budget."""

    gear_ratio: float = 10.0  # dimensionless, 1 = direct drive
    gearbox_efficiency: float = 1.0  # in (0, 1]
    j_motor: float = 0.05  # kg·m²
    j_gearbox: float = 0.01  # kg·m²
    j_generator: float = 0.03  # kg·m²
    j_correction: float = 0.0  # kg·m², may be negative
    max_dt: float = 0.1  # s, integrator step ceiling

    def __post_init__(self) -> None:
        if self.gear_ratio <= 0.0:
            raise ConfigurationError(f"gear_ratio must be positive, got {self.gear_ratio}")
        if not 0.0 < self.gearbox_efficiency <= 1.0:
            raise ConfigurationError(
                f"gearbox_efficiency must be in (0, 1], got {self.gearbox_efficiency}"
            )
        if self.max_dt <= 0.0:
            raise ConfigurationError(f"max_dt must be positive, got {self.max_dt}")
        total_inertia(self)  # rejects a non-positive sum


@dataclass(frozen=True)
class ShaftState:
    """Turbine-side shaft speed at a point in time."""

    omega: float  # rad/s, >= 0
    t: float  # s

    def __post_init__(self) -> None:
        if self.omega < 0.0:
            raise DomainError(f"shaft speed must be non-negative, got {self.omega}")


def total_inertia(params: DrivetrainParams) -> float:
    """Four-term inertia sum; the correction term may be negative."""
    j = params.j_motor + params.j_gearbox + params.j_generator + params.j_correction
    if j <= 0.0:
        raise ConfigurationError(f"total inertia must be positive, got {j}")
    return j


def reflect_to_generator(
    omega: float, torque: float, params: DrivetrainParams
) -> tuple[float, float]:
    """Turbine-side (omega, T) seen from the generator shaft.

    omega_g = omega*i and T_g = eta_gb*T/i, so power is conserved
    exactly for a lossless box and scaled by eta_gb otherwise.
    """
    return omega * params.gear_ratio, params.gearbox_efficiency * torque / params.gear_ratio


def _torque_at(torque: TorqueInput, omega: float) -> float:
    return torque(omega) if callable(torque) else torque


def step_dynamics(
    state: ShaftState,
    t_aero: TorqueInput,
    t_load: TorqueInput,
    params: DrivetrainParams,
    dt: float,
) -> ShaftState:
    """One fixed step of J*domega/dt = T_aero - T_load.

    Classical 4th-order integration; constant torques reproduce the
    trivial Euler update exactly.  Stage speeds are left unclamped so
    smooth state-dependent loads keep full order; only the final speed
    is clamped at zero (the bench never motors the shaft backwards,
    and order drops to >= 1 at the clamp).
    """
    if dt <= 0.0:
        raise StepSizeError(f"dt must be positive, got {dt}")
    if dt > params.max_dt:
        raise StepSizeError(f"dt = {dt} exceeds max_dt = {params.max_dt}")
    j = total_inertia(params)

    def f(omega: float) -> float:
        return (_torque_at(t_aero, omega) - _torque_at(t_load, omega)) / j

    w = state.omega
    k1 = f(w)
    k2 = f(w + 0.5 * dt * k1)
    k3 = f(w + 0.5 * dt * k2)
    k4 = f(w + dt * k3)
    w_next = w + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if w_next < 0.0:
        w_next = 0.0
    return ShaftState(omega=w_next, t=state.t + dt)


def estimate_correction_inertia(
    loop_delay: float,
    params: DrivetrainParams,
    probe_torque: float,
    jc_span: float = 0.5,
    jc_step: float = 1e-4,
    horizon: float = 2.0,
    dt: float = 1e-3,
) -> float:
    """Correction inertia that best hides the torque-loop delay.

    Simulates a step of ``probe_torque`` through the emulation loop,
    where the applied torque lags the reference by ``loop_delay``, and
    sweeps candidate J_c over [-jc_span*J, +jc_span*J] at ``jc_step``
    minimizing the squared speed-trajectory error against the ideal
    undelayed plant of inertia J - J_c.  Raises
    :class:`EstimationError` when the sweep minimizes at a range
    boundary, meaning no compensating inertia lies inside the range.

    The candidate trajectories come from one simulation: a linear plant
    under a fixed torque sequence has speed inversely proportional to
    inertia, so the undelayed J-inertia run scaled by J/(J - J_c) is
    exactly the (J - J_c)-inertia run.
    """
    if loop_delay < 0.0:
        raise DomainError(f"loop_delay must be non-negative, got {loop_delay}")
    if probe_torque <= 0.0:
        raise DomainError(f"probe_torque must be positive, got {probe_torque}")
    if jc_span <= 0.0 or jc_span >= 1.0:
        raise DomainError(f"jc_span must be in (0, 1), got {jc_span}")
    if jc_step <= 0.0 or horizon <= 0.0 or dt <= 0.0:
        raise DomainError("jc_step, horizon and dt must be positive")

    j = total_inertia(params)
    n_steps = int(round(horizon / dt))
    delay_steps = int(round(loop_delay / dt))

    # Undelayed reference run and delayed loop run, both at inertia J.
    ideal = ShaftState(omega=0.0, t=0.0)
    delayed = ShaftState(omega=0.0, t=0.0)
    sum_aa = 0.0  # sum of ideal omega squared
    sum_ab = 0.0  # cross term against the delayed trajectory
    for k in range(n_steps):
        applied = probe_torque if k >= delay_steps else 0.0
        ideal = step_dynamics(ideal, probe_torque, 0.0, params, dt)
        delayed = step_dynamics(delayed, applied, 0.0, params, dt)
        sum_aa += ideal.omega * ideal.omega
        sum_ab += ideal.omega * delayed.omega

    # E(J_c) = sum((s*ideal_k - delayed_k)^2) with s = J/(J - J_c);
    # only the s-dependent part s^2*sum_aa - 2*s*sum_ab orders the sweep.
    half = jc_span * j
    n_cells = int(round(2.0 * half / jc_step))
    best_idx = 0
    best_obj = float("inf")
    for i in range(n_cells + 1):
        jc = -half + i * jc_step
        scale = j / (j - jc)
        obj = scale * scale * sum_aa - 2.0 * scale * sum_ab
        if obj < best_obj:
            best_obj = obj
            best_idx = i
    if best_idx == 0 or best_idx == n_cells:
        raise EstimationError(
            f"no correction inertia inside [{-half}, {half}] compensates the delay"
        )
    return -half + best_idx * jc_step
