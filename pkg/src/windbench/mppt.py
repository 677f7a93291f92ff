"""Maximum-power-point computation for the emulated rotor.

Locates the peak of the Cp curve, evaluates the optimal operating
locus over wind speed, and solves the inverse problem of recovering
rotor geometry from logged maximum-power samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError, IdentificationError, ModelError
from .turbine import (
    OperatingPoint,
    TurbineParams,
    aerodynamic_power,
    power_coefficient,
)

# golden-section interior ratio
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_SCAN_POINTS = 200


@dataclass(frozen=True)
class MppResult:
    """Optimal TSR, peak Cp, and the MPP locus over wind speeds."""

    lambda_star: float
    cp_star: float
    points: list[OperatingPoint]


@dataclass(frozen=True)
class IdentifiedParams:
    """Rotor geometry recovered from maximum-power samples."""

    rotor_radius: float  # m
    cp_star: float
    lambda_star: float
    tsr_residual: float  # relative misfit of the mean-TSR equation
    cp_residual: float  # relative misfit of the peak-Cp equation


@lru_cache(maxsize=64)
def optimal_tsr(params: TurbineParams, tol: float = 1e-6) -> tuple[float, float]:
    """(lambda*, Cp*) maximizing Cp on (0, lambda_cutoff).

    A coarse scan brackets the peak first: the clamped curve is flat at
    zero beyond its cutoff, so golden-section needs an interior bracket
    to see a strictly unimodal objective.  Raises :class:`ModelError`
    when the scan peaks at a grid edge, which signals a coefficient set
    with no interior maximum.
    """
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    step = params.lambda_cutoff / _SCAN_POINTS
    grid = [step * i for i in range(1, _SCAN_POINTS)]
    values = [power_coefficient(x, params) for x in grid]
    best = max(range(len(grid)), key=values.__getitem__)
    if best == 0 or best == len(grid) - 1:
        raise ModelError("Cp curve has no interior maximum on (0, lambda_cutoff)")
    a, b = grid[best - 1], grid[best + 1]
    # standard golden-section shrink on [a, b]
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = power_coefficient(c, params)
    fd = power_coefficient(d, params)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = power_coefficient(c, params)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = power_coefficient(d, params)
    lam_star = 0.5 * (a + b)
    return lam_star, power_coefficient(lam_star, params)


def optimal_load_constant(params: TurbineParams) -> float:
    """Quadratic-load constant k with T_load = k*omega^2 at the MPP.

    k = 0.5*rho*pi*R^5*Cp*/lambda*^3.  Loading the shaft with this
    torque makes the peak of every power curve the equilibrium point,
    which is the bench's MPPT strategy.
    """
    lam_star, cp_star = optimal_tsr(params)
    return (
        0.5
        * params.air_density
        * math.pi
        * params.rotor_radius**5
        * cp_star
        / lam_star**3
    )


def optimal_operating_point(v: float, params: TurbineParams) -> OperatingPoint:
    """Maximum-power operating point at wind speed ``v``."""
    if v <= 0.0:
        raise DomainError(f"wind speed must be positive, got {v}")
    lam_star, _ = optimal_tsr(params)
    omega = lam_star * v / params.rotor_radius
    power = aerodynamic_power(v, omega, params)
    return OperatingPoint(
        wind_speed=v,
        rotor_speed=omega,
        tsr=lam_star,
        power=power,
        torque=power / omega,
    )


def mpp_locus(v_list: list[float], params: TurbineParams) -> MppResult:
    """MPP points for each wind speed, with the shared (lambda*, Cp*)."""
    lam_star, cp_star = optimal_tsr(params)
    points = [optimal_operating_point(v, params) for v in v_list]
    return MppResult(lambda_star=lam_star, cp_star=cp_star, points=points)


@dataclass(frozen=True)
class MppTableRow:
    """One comparison-report row of the maximum-power table."""

    wind_speed: float  # m/s
    p_wt: float  # W, optimal captured power
    omega: float  # rad/s
    rpm: float
    p_est: float  # W, estimated electrical output eta_conv*P_wt
    p_gen_ref: float | None  # W, measured reference value, if supplied

    @property
    def exceeds_estimate(self) -> bool:
        """True when the reference measurement beats the estimate.

        The bundled measurements do this from 8 m/s up; the bench
        surfaces the discrepancy rather than modeling it.
        """
        return self.p_gen_ref is not None and self.p_gen_ref > self.p_est


def mpp_table(
    v_list: list[float],
    params: TurbineParams,
    eta_conv: float,
    p_gen_reference: dict[float, float] | None = None,
) -> list[MppTableRow]:
    """Maximum-power table over wind speeds.

    ``p_gen_reference`` maps wind speed to a measured generated power;
    matching rows carry it verbatim for side-by-side comparison.  The
    model never tries to reproduce it.
    """
    if eta_conv <= 0.0 or eta_conv > 1.0:
        raise DomainError(f"eta_conv must be in (0, 1], got {eta_conv}")
    rows = []
    for v in v_list:
        point = optimal_operating_point(v, params)
        ref = None if p_gen_reference is None else p_gen_reference.get(v)
        rows.append(
            MppTableRow(
                wind_speed=v,
                p_wt=point.power,
                omega=point.rotor_speed,
                rpm=point.rotor_rpm,
                p_est=eta_conv * point.power,
                p_gen_ref=ref,
            )
        )
    return rows


def identify_params(
    samples: list[tuple[float, float, float]],
    rho: float,
    params: TurbineParams,
    threshold: float = 0.01,
    radius_step: float = 1e-4,
) -> IdentifiedParams:
    """Recover rotor radius from (v, P*, omega*) maximum-power samples.

    Two facts hold on the MPP locus: mean(omega/v) = lambda*/R and
    mean(2P/(rho*pi*v^3)) = Cp**R^2.  A scalar scan over R in (0.1, 10)
    minimizes the joint squared relative misfit of both.  Raises
    :class:`IdentificationError` when the best fit leaves either
    residual above ``threshold``: the samples did not come from MPP
    operation of this rotor family.
    """
    if len(samples) < 2:
        raise IdentificationError("need at least 2 samples to identify from")
    for v, power, omega in samples:
        if v <= 0.0 or power <= 0.0 or omega <= 0.0:
            raise IdentificationError(
                f"samples must be positive triples, got ({v}, {power}, {omega})"
            )
    if rho <= 0.0:
        raise DomainError(f"air density must be positive, got {rho}")
    lam_star, cp_star = optimal_tsr(params)
    n = len(samples)
    mean_ratio = sum(omega / v for v, _, omega in samples) / n
    mean_k = sum(2.0 * power / (rho * math.pi * v**3) for v, power, _ in samples) / n

    best_r = 0.0
    best_obj = math.inf
    steps = int(round((10.0 - 0.1) / radius_step))
    for i in range(1, steps):
        r = 0.1 + i * radius_step
        e1 = (r * mean_ratio - lam_star) / lam_star
        e2 = (mean_k / (r * r) - cp_star) / cp_star
        obj = e1 * e1 + e2 * e2
        if obj < best_obj:
            best_obj = obj
            best_r = r

    e1 = abs(best_r * mean_ratio - lam_star) / lam_star
    e2 = abs(mean_k / (best_r * best_r) - cp_star) / cp_star
    if e1 > threshold or e2 > threshold:
        raise IdentificationError(
            f"no radius fits: residuals ({e1:.4f}, {e2:.4f}) exceed {threshold}"
        )
    return IdentifiedParams(
        rotor_radius=best_r,
        cp_star=mean_k / (best_r * best_r),
        lambda_star=best_r * mean_ratio,
        tsr_residual=e1,
        cp_residual=e2,
    )
