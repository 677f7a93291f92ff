"""Bundled measurements from the reference rig.

Nine operating rows recorded on the physical stand, 4 to 12 m/s. The
measured generated power P_gen includes hardware effects the bench
does not model (it exceeds the 0.8-efficiency estimate from 8 m/s up);
it ships as comparison data only.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ReferenceRow:
    """One measured row: speeds, optimal power, estimate, measurement."""

    wind_speed: float  # m/s
    p_wt: float  # W, optimal turbine power
    omega: float  # rad/s
    rpm: float  # rev/min
    p_est: float  # W, estimated generated power (0.8 * p_wt)
    p_gen: float  # W, measured generated power


REFERENCE_ROWS: tuple[ReferenceRow, ...] = (
    ReferenceRow(4.0, 131.02, 4.79, 45.76, 104.81, 69.56),
    ReferenceRow(5.0, 255.90, 5.98, 57.13, 204.72, 135.86),
    ReferenceRow(6.0, 442.19, 7.18, 68.60, 353.75, 290.87),
    ReferenceRow(7.0, 702.19, 8.37, 79.97, 561.75, 523.52),
    ReferenceRow(8.0, 1048.16, 9.57, 91.43, 838.52, 839.50),
    ReferenceRow(9.0, 1492.40, 10.77, 102.90, 1193.92, 1260.82),
    ReferenceRow(10.0, 2047.19, 11.96, 114.27, 1637.75, 1682.85),
    ReferenceRow(11.0, 2724.82, 13.16, 125.73, 2179.85, 2239.88),
    ReferenceRow(12.0, 3537.55, 14.36, 137.20, 2830.04, 2907.97),
)

REFERENCE_WIND_SPEEDS: tuple[float, ...] = tuple(r.wind_speed for r in REFERENCE_ROWS)


def p_gen_by_wind_speed() -> dict[float, float]:
    """Measured P_gen keyed by wind speed, for comparison reports."""
    return {row.wind_speed: row.p_gen for row in REFERENCE_ROWS}


def reference_row(wind_speed: float) -> ReferenceRow | None:
    """The measured row at ``wind_speed``, if one was recorded."""
    for row in REFERENCE_ROWS:
        if row.wind_speed == wind_speed:
            return row
    return None
