"""Bench configuration: dataclass defaults, optional YAML overlay.

One structured file configures the whole bench.  Sections mirror the
model layers (turbine, drivetrain, plant, protections, control,
simulation) plus named scenario blocks.  Unknown keys are rejected so
typos fail loudly instead of silently keeping a default.
"""

from __future__ import annotations

import dataclasses
import types
import typing
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .drivetrain import DrivetrainParams
from .errors import ConfigurationError
from .plant import ConverterParams, DrivePlant, GeneratorModel, ProtectionLimits
from .scenario import (
    ConstantWind,
    ControlParams,
    GustWind,
    Mode,
    RampWind,
    Scenario,
    StepWind,
    TurbulentWind,
    WindProfile,
)
from .turbine import TurbineParams


@dataclass(frozen=True)
class DriveConfig:
    """Constructor numbers for the torque drive (state lives per run)."""

    torque_time_constant: float = 0.02  # s
    command_delay: float = 0.005  # s
    torque_limit: float = 400.0  # N·m

    def build(self) -> DrivePlant:
        return DrivePlant(
            torque_time_constant=self.torque_time_constant,
            command_delay=self.command_delay,
            torque_limit=self.torque_limit,
        )


@dataclass(frozen=True)
class SimulationParams:
    """Loop step width, stream decimation, and initial shaft state."""

    dt: float = 1e-3  # s
    decimation: int = 20  # stream every Nth step (50 Hz at 1 ms)
    initial_omega: float = 0.0  # rad/s

    def __post_init__(self) -> None:
        if self.dt <= 0.0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if not isinstance(self.decimation, int) or self.decimation < 1:
            raise ConfigurationError(
                f"decimation must be a positive integer, got {self.decimation}"
            )
        if self.initial_omega < 0.0:
            raise ConfigurationError(
                f"initial_omega must be non-negative, got {self.initial_omega}"
            )


def _default_scenarios() -> dict[str, Scenario]:
    return {
        "const4": Scenario(profile=ConstantWind(4.0), duration=60.0),
        "const8": Scenario(profile=ConstantWind(8.0), duration=60.0),
        "const12": Scenario(profile=ConstantWind(12.0), duration=60.0),
        "step_4_12": Scenario(profile=StepWind(4.0, 12.0, 30.0), duration=60.0),
        "gust8": Scenario(profile=GustWind(8.0, 4.0, 10.0, 6.0), duration=30.0),
        "turb8": Scenario(profile=TurbulentWind(8.0, 0.1, seed=42), duration=60.0),
        "overvoltage": Scenario(profile=StepWind(8.0, 12.8, 5.0), duration=30.0),
        "torque_hold": Scenario(
            profile=ConstantWind(8.0),
            mode=Mode.TORQUE_CONTROL,
            setpoint=100.0,
            duration=20.0,
        ),
        "speed_hold": Scenario(
            profile=ConstantWind(8.0),
            mode=Mode.SPEED_CONTROL,
            setpoint=9.57,
            duration=20.0,
        ),
    }


@dataclass(frozen=True)
class BenchConfig:
    """Everything the bench needs to run, fully defaulted."""

    turbine: TurbineParams = field(default_factory=TurbineParams)
    drivetrain: DrivetrainParams = field(default_factory=DrivetrainParams)
    drive: DriveConfig = field(default_factory=DriveConfig)
    generator: GeneratorModel = field(default_factory=GeneratorModel)
    converter: ConverterParams = field(default_factory=ConverterParams)
    protections: ProtectionLimits = field(default_factory=ProtectionLimits)
    control: ControlParams = field(default_factory=ControlParams)
    simulation: SimulationParams = field(default_factory=SimulationParams)
    scenarios: dict[str, Scenario] = field(default_factory=_default_scenarios)

    def __post_init__(self) -> None:
        # the explicit drive lag update needs dt <= tau_d to stay
        # monotone, and the integrator has its own ceiling
        if self.simulation.dt > self.drive.torque_time_constant:
            raise ConfigurationError(
                f"simulation dt {self.simulation.dt} exceeds the drive time "
                f"constant {self.drive.torque_time_constant}"
            )
        if self.simulation.dt > self.drivetrain.max_dt:
            raise ConfigurationError(
                f"simulation dt {self.simulation.dt} exceeds drivetrain "
                f"max_dt {self.drivetrain.max_dt}"
            )
        if self.control.torque_limit != self.drive.torque_limit:
            raise ConfigurationError(
                "control torque_limit must equal the drive torque_limit"
            )

    def scenario(self, name: str) -> Scenario:
        try:
            return self.scenarios[name]
        except KeyError:
            known = ", ".join(sorted(self.scenarios)) or "none"
            raise ConfigurationError(
                f"unknown scenario {name!r} (configured: {known})"
            ) from None


def default_config() -> BenchConfig:
    return BenchConfig()


_PROFILE_TYPES: dict[str, type] = {
    "constant": ConstantWind,
    "step": StepWind,
    "ramp": RampWind,
    "gust": GustWind,
    "turbulent": TurbulentWind,
}


def _coerce(value, annotation, path: str):
    origin = typing.get_origin(annotation)
    if origin is typing.Union or origin is types.UnionType:
        args = [a for a in typing.get_args(annotation) if a is not type(None)]
        if value is None:
            if len(args) < len(typing.get_args(annotation)):
                return None
            raise ConfigurationError(f"{path}: null not allowed")
        annotation = args[0]
    if annotation is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"{path}: expected a number, got {value!r}")
        return float(value)
    if annotation is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"{path}: expected an integer, got {value!r}")
        return value
    if annotation is bool:
        if not isinstance(value, bool):
            raise ConfigurationError(f"{path}: expected a boolean, got {value!r}")
        return value
    if annotation is str:
        if not isinstance(value, str):
            raise ConfigurationError(f"{path}: expected a string, got {value!r}")
        return value
    raise ConfigurationError(f"{path}: unsupported value {value!r}")


def _build_section(cls, data, path: str, skip: tuple[str, ...] = ()):
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: expected a mapping, got {data!r}")
    hints = typing.get_type_hints(cls)
    allowed = {f.name for f in dataclasses.fields(cls) if f.name not in skip}
    kwargs = {}
    for key, value in data.items():
        if key not in allowed:
            raise ConfigurationError(f"unknown key {path}.{key}")
        kwargs[key] = _coerce(value, hints[key], f"{path}.{key}")
    try:
        return cls(**kwargs)
    except TypeError as exc:
        # a required field was left out
        raise ConfigurationError(f"{path}: {exc}") from None


def _build_profile(data, path: str) -> WindProfile:
    if not isinstance(data, dict) or "type" not in data:
        raise ConfigurationError(f"{path}: expected a mapping with a 'type' key")
    kind = data["type"]
    cls = _PROFILE_TYPES.get(kind)
    if cls is None:
        known = ", ".join(sorted(_PROFILE_TYPES))
        raise ConfigurationError(f"{path}.type: unknown profile {kind!r} (one of {known})")
    rest = {k: v for k, v in data.items() if k != "type"}
    return _build_section(cls, rest, path)


def _build_scenario(data, path: str) -> Scenario:
    if not isinstance(data, dict):
        raise ConfigurationError(f"{path}: expected a mapping, got {data!r}")
    known = {"profile", "mode", "setpoint", "duration", "dt"}
    for key in data:
        if key not in known:
            raise ConfigurationError(f"unknown key {path}.{key}")
    if "profile" not in data:
        raise ConfigurationError(f"{path}: a scenario needs a profile")
    profile = _build_profile(data["profile"], f"{path}.profile")
    kwargs: dict = {"profile": profile}
    if "mode" in data:
        raw = data["mode"]
        try:
            kwargs["mode"] = Mode(raw)
        except ValueError:
            modes = ", ".join(m.value for m in Mode)
            raise ConfigurationError(
                f"{path}.mode: unknown mode {raw!r} (one of {modes})"
            ) from None
    if "setpoint" in data and data["setpoint"] is not None:
        kwargs["setpoint"] = _coerce(data["setpoint"], float, f"{path}.setpoint")
    if "duration" in data:
        kwargs["duration"] = _coerce(data["duration"], float, f"{path}.duration")
    if "dt" in data and data["dt"] is not None:
        kwargs["dt"] = _coerce(data["dt"], float, f"{path}.dt")
    return Scenario(**kwargs)


def parse_config(data: dict | None) -> BenchConfig:
    """Build a BenchConfig from a parsed mapping (YAML layout)."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigurationError(f"config root must be a mapping, got {data!r}")
    known = {
        "turbine",
        "drivetrain",
        "plant",
        "protections",
        "control",
        "simulation",
        "scenarios",
    }
    for key in data:
        if key not in known:
            raise ConfigurationError(f"unknown key {key}")

    plant = data.get("plant") or {}
    if not isinstance(plant, dict):
        raise ConfigurationError(f"plant: expected a mapping, got {plant!r}")
    for key in plant:
        if key not in {"drive", "generator", "converter"}:
            raise ConfigurationError(f"unknown key plant.{key}")

    drive = _build_section(DriveConfig, plant.get("drive"), "plant.drive")
    control = _build_section(
        ControlParams, data.get("control"), "control", skip=("torque_limit",)
    )
    # the reference stage saturates at the same hardware limit
    control = dataclasses.replace(control, torque_limit=drive.torque_limit)

    scenarios = _default_scenarios()
    raw_scenarios = data.get("scenarios")
    if raw_scenarios is not None:
        if not isinstance(raw_scenarios, dict):
            raise ConfigurationError("scenarios: expected a mapping of named blocks")
        for name, block in raw_scenarios.items():
            scenarios[str(name)] = _build_scenario(block, f"scenarios.{name}")

    return BenchConfig(
        turbine=_build_section(TurbineParams, data.get("turbine"), "turbine"),
        drivetrain=_build_section(DrivetrainParams, data.get("drivetrain"), "drivetrain"),
        drive=drive,
        generator=_build_section(GeneratorModel, plant.get("generator"), "plant.generator"),
        converter=_build_section(ConverterParams, plant.get("converter"), "plant.converter"),
        protections=_build_section(ProtectionLimits, data.get("protections"), "protections"),
        control=control,
        simulation=_build_section(SimulationParams, data.get("simulation"), "simulation"),
        scenarios=scenarios,
    )


def load_config(path: str | Path | None) -> BenchConfig:
    """Load the bench config; None gives pure defaults."""
    if path is None:
        return default_config()
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: {exc}") from exc
    return parse_config(data)
