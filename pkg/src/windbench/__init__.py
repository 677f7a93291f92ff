"""windbench: a software laboratory bench for a wind energy system.

Emulates the full conversion chain of a small fixed-pitch turbine:
aerodynamic model, maximum-power tracking, drivetrain dynamics, a
torque-controlled drive, generator and grid-side converter with
protections, plus a scenario engine, a fixed-step simulation runtime
and a live operator service.
"""

from .config import BenchConfig, default_config, load_config
from .drivetrain import (
    DrivetrainParams,
    ShaftState,
    estimate_correction_inertia,
    reflect_to_generator,
    step_dynamics,
    total_inertia,
)
from .errors import (
    BenchError,
    ConfigurationError,
    DomainError,
    EstimationError,
    IdentificationError,
    LowSpeedError,
    ModelError,
    ProtocolError,
    SimulationError,
    StepSizeError,
)
from .mppt import (
    IdentifiedParams,
    MppResult,
    identify_params,
    mpp_locus,
    mpp_table,
    optimal_load_constant,
    optimal_operating_point,
    optimal_tsr,
)
from .plant import (
    ConverterParams,
    ConverterState,
    DrivePlant,
    GeneratorModel,
    ProtectionLimits,
    Violation,
    converter_level_command,
    dc_bus_voltage,
    drive_torque_response,
    generator_electrical_power,
    overvoltage_guard,
    protection_check,
)
from .runtime import (
    RunResult,
    RunSummary,
    SimState,
    TelemetrySample,
    report_table,
    run_scenario,
)
from .scenario import (
    ConstantWind,
    ControlParams,
    GustWind,
    Mode,
    PIState,
    RampWind,
    Scenario,
    StepWind,
    TurbulentWind,
    torque_reference,
    wind_at,
)
from .turbine import (
    OperatingPoint,
    TurbineParams,
    aerodynamic_power,
    aerodynamic_torque,
    power_coefficient,
    power_curve,
    tip_speed_ratio,
)

__version__ = "0.1.0"

__all__ = [
    "BenchConfig",
    "BenchError",
    "ConfigurationError",
    "ConstantWind",
    "ControlParams",
    "ConverterParams",
    "ConverterState",
    "DomainError",
    "DrivePlant",
    "DrivetrainParams",
    "EstimationError",
    "GeneratorModel",
    "GustWind",
    "IdentificationError",
    "IdentifiedParams",
    "LowSpeedError",
    "Mode",
    "ModelError",
    "MppResult",
    "OperatingPoint",
    "PIState",
    "ProtectionLimits",
    "ProtocolError",
    "RampWind",
    "RunResult",
    "RunSummary",
    "Scenario",
    "ShaftState",
    "SimState",
    "SimulationError",
    "StepSizeError",
    "StepWind",
    "TelemetrySample",
    "TurbineParams",
    "TurbulentWind",
    "Violation",
    "aerodynamic_power",
    "aerodynamic_torque",
    "converter_level_command",
    "dc_bus_voltage",
    "default_config",
    "drive_torque_response",
    "estimate_correction_inertia",
    "generator_electrical_power",
    "identify_params",
    "load_config",
    "mpp_locus",
    "mpp_table",
    "optimal_load_constant",
    "optimal_operating_point",
    "optimal_tsr",
    "overvoltage_guard",
    "power_coefficient",
    "power_curve",
    "protection_check",
    "reflect_to_generator",
    "report_table",
    "run_scenario",
    "step_dynamics",
    "tip_speed_ratio",
    "torque_reference",
    "total_inertia",
    "wind_at",
]
